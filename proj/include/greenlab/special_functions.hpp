#pragma once

#include <complex>
#include <cstdint>
#include <functional>

namespace greenlab {

/// Hurwitz zeta ζ(a, x) for a in (-1, 2) \ {1} and x in (0, 1], by Euler-Maclaurin
/// summation. Accurate to ~1e-15 relative on that range.
double hurwitz_zeta(double a, double x);

/// Polylogarithm on the unit circle, Li_sigma(e^{2πi x}) for x in (0, 1) and
/// sigma < 1, sigma != 0, via the Jonquière/Hurwitz formula.
std::complex<double> periodic_zeta(double sigma, double x);

/// Σ_{k≥1} k^{-sigma} cos(k t)  (t any real, not a multiple of 2π)
double cosine_zeta_sum(double sigma, double t);

/// Σ_{k≥1} k^{-sigma} sin(k t)
double sine_zeta_sum(double sigma, double t);

/// ∫_0^{r0} t^{s-1} (1+t)^{-N/2} dt for 0 < s < N/2. Small-r0 binomial series,
/// complementary series for large r0 (via t -> 1/t), adaptive quadrature between.
double radial_kernel_integral(double r0, int N, double s);

/// Complete value ∫_0^∞ t^{s-1} (1+t)^{-N/2} dt = B(s, N/2 - s).
double radial_kernel_integral_full(int N, double s);

/// Adaptive Simpson on [a, b] to absolute tolerance tol.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol, int max_depth = 40);

/// Deterministic Halton low-discrepancy sequence value (index >= 0, prime base).
double halton(std::uint64_t index, unsigned base);

/// FNV-1a 64-bit hash of a byte range.
std::uint64_t fnv1a64(const void* data, std::size_t n, std::uint64_t seed = 1469598103934665603ull);

} // namespace greenlab
