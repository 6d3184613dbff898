#include "persona_audit/kernels.hpp"

#include <cmath>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace persona_audit::kernels {

double cosine_distance(std::span<const double> u, std::span<const double> v) {
    if (u.size() != v.size()) {
        throw std::invalid_argument("cosine_distance: dimension mismatch");
    }
    double dot = 0.0, nu = 0.0, nv = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        dot += u[i] * v[i];
        nu += u[i] * u[i];
        nv += v[i] * v[i];
    }
    if (nu == 0.0 || nv == 0.0) {
        throw std::invalid_argument("cosine_distance: zero-norm vector");
    }
    return 1.0 - dot / (std::sqrt(nu) * std::sqrt(nv));
}

std::vector<double> cosine_distance_batch_serial(std::span<const std::vector<double>> a,
                                                 std::span<const std::vector<double>> b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("cosine_distance_batch: size mismatch");
    }
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        out[i] = cosine_distance(a[i], b[i]);
    }
    return out;
}

std::vector<double> cosine_distance_batch(std::span<const std::vector<double>> a,
                                          std::span<const std::vector<double>> b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("cosine_distance_batch: size mismatch");
    }
    std::vector<double> out(a.size());
    std::exception_ptr error;
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (long long i = 0; i < static_cast<long long>(a.size()); ++i) {
        try {
            out[static_cast<std::size_t>(i)] =
                cosine_distance(a[static_cast<std::size_t>(i)], b[static_cast<std::size_t>(i)]);
        } catch (...) {
#ifdef _OPENMP
#pragma omp critical(pa_cosine_batch_error)
#endif
            if (!error) error = std::current_exception();
        }
    }
    if (error) std::rethrow_exception(error);
    return out;
}

}  // namespace persona_audit::kernels
