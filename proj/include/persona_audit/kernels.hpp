#pragma once

#include <span>
#include <vector>

namespace persona_audit::kernels {

/// 1 - (u.v)/(|u||v|). Result lies in [0, 2] up to rounding.
/// Throws std::invalid_argument on dimension mismatch or a zero-norm input.
double cosine_distance(std::span<const double> u, std::span<const double> v);

/// Element-wise cosine distance over aligned pairs: out[i] = d(a[i], b[i]).
/// The OpenMP variant parallelizes across pairs; per-pair arithmetic is
/// identical to the serial reference, so results match bit for bit.
std::vector<double> cosine_distance_batch(std::span<const std::vector<double>> a,
                                          std::span<const std::vector<double>> b);
std::vector<double> cosine_distance_batch_serial(std::span<const std::vector<double>> a,
                                                 std::span<const std::vector<double>> b);

}  // namespace persona_audit::kernels
