// Times the OpenMP cosine-distance kernel against the serial reference on
// synthetic embedding batches and checks they agree bit for bit.

#include <chrono>
#include <cstdio>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "persona_audit/kernels.hpp"
#include "persona_audit/util.hpp"

using persona_audit::SplitMix64;
namespace kernels = persona_audit::kernels;

namespace {

std::vector<std::vector<double>> random_batch(SplitMix64& rng, std::size_t n, std::size_t dim) {
    std::vector<std::vector<double>> out(n, std::vector<double>(dim));
    for (auto& v : out) {
        for (double& x : v) x = rng.next_double() * 2.0 - 1.0;
    }
    return out;
}

template <typename Fn>
double time_ms(Fn&& fn, int repeats) {
    const auto start = std::chrono::steady_clock::now();
    for (int i = 0; i < repeats; ++i) fn();
    const auto stop = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(stop - start).count() / repeats;
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::printf("OpenMP enabled, max threads: %d\n", omp_get_max_threads());
#else
    std::printf("OpenMP disabled; both variants run serially\n");
#endif
    std::printf("%10s %8s %12s %12s %9s %8s\n", "pairs", "dim", "serial(ms)", "openmp(ms)", "speedup",
                "match");

    SplitMix64 rng(42);
    const std::size_t dim = 768;
    for (std::size_t n : {1000UL, 10000UL, 50000UL}) {
        const auto a = random_batch(rng, n, dim);
        const auto b = random_batch(rng, n, dim);
        const int repeats = n <= 10000 ? 5 : 2;

        std::vector<double> serial_out, parallel_out;
        const double serial_ms = time_ms([&] { serial_out = kernels::cosine_distance_batch_serial(a, b); },
                                         repeats);
        const double parallel_ms =
            time_ms([&] { parallel_out = kernels::cosine_distance_batch(a, b); }, repeats);

        bool match = serial_out.size() == parallel_out.size();
        for (std::size_t i = 0; match && i < serial_out.size(); ++i) {
            match = serial_out[i] == parallel_out[i];
        }
        std::printf("%10zu %8zu %12.3f %12.3f %8.2fx %8s\n", n, dim, serial_ms, parallel_ms,
                    parallel_ms > 0 ? serial_ms / parallel_ms : 0.0, match ? "yes" : "NO");
        if (!match) return 1;
    }
    return 0;
}
