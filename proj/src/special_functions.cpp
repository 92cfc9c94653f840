#include "greenlab/special_functions.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>

namespace greenlab {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

// B_2, B_4, ..., B_16
constexpr double kBernoulli[8] = {
    1.0 / 6.0,    -1.0 / 30.0,     1.0 / 42.0, -1.0 / 30.0,
    5.0 / 66.0, -691.0 / 2730.0, 7.0 / 6.0,  -3617.0 / 510.0};
} // namespace

double hurwitz_zeta(double a, double x) {
    if (!(x > 0.0 && x <= 1.0)) throw std::invalid_argument("hurwitz_zeta: x must be in (0,1]");
    if (a == 1.0) throw std::invalid_argument("hurwitz_zeta: pole at a = 1");
    const int M = 18;
    double sum = 0.0;
    for (int k = 0; k < M; ++k) sum += std::pow(x + k, -a);
    const double xm = x + M;
    sum += std::pow(xm, 1.0 - a) / (a - 1.0);
    sum += 0.5 * std::pow(xm, -a);
    // Euler-Maclaurin tail: sum_j B_2j/(2j)! * (a)_{2j-1} * xm^{-a-2j+1}
    double poch = a;              // (a)_1
    double fact = 2.0;            // (2j)! running
    double xp = std::pow(xm, -a - 1.0);
    const double xm2 = 1.0 / (xm * xm);
    for (int j = 1; j <= 8; ++j) {
        sum += kBernoulli[j - 1] / fact * poch * xp;
        // advance to j+1: multiply pochhammer by (a+2j-1)(a+2j), factorial by (2j+1)(2j+2)
        poch *= (a + 2.0 * j - 1.0) * (a + 2.0 * j);
        fact *= (2.0 * j + 1.0) * (2.0 * j + 2.0);
        xp *= xm2;
    }
    return sum;
}

std::complex<double> periodic_zeta(double sigma, double x) {
    if (!(x > 0.0 && x < 1.0)) throw std::invalid_argument("periodic_zeta: x must be in (0,1)");
    if (!(sigma < 1.0) || sigma == 0.0)
        throw std::invalid_argument("periodic_zeta: need sigma < 1, sigma != 0");
    const double am = 1.0 - sigma;
    const double pref = std::tgamma(am) * std::pow(kTwoPi, -am);
    const std::complex<double> rot(std::cos(kPi * am / 2.0), std::sin(kPi * am / 2.0));
    const double za = hurwitz_zeta(am, x);
    const double zb = hurwitz_zeta(am, 1.0 - x);
    return pref * (rot * za + std::conj(rot) * zb);
}

double cosine_zeta_sum(double sigma, double t) {
    double x = std::fmod(t / kTwoPi, 1.0);
    if (x < 0.0) x += 1.0;
    if (x == 0.0) throw std::invalid_argument("cosine_zeta_sum: t is a multiple of 2*pi");
    // real part uses zeta(1-s,x)+zeta(1-s,1-x); symmetrize so C(x) == C(1-x) bitwise
    const double am = 1.0 - sigma;
    const double pref = std::tgamma(am) * std::pow(kTwoPi, -am);
    const double c = std::cos(kPi * am / 2.0);
    const double lo = std::min(x, 1.0 - x), hi = std::max(x, 1.0 - x);
    return pref * c * (hurwitz_zeta(am, lo) + hurwitz_zeta(am, hi));
}

double sine_zeta_sum(double sigma, double t) {
    double x = std::fmod(t / kTwoPi, 1.0);
    if (x < 0.0) x += 1.0;
    if (x == 0.0) return 0.0;
    const double am = 1.0 - sigma;
    const double pref = std::tgamma(am) * std::pow(kTwoPi, -am);
    const double s = std::sin(kPi * am / 2.0);
    return pref * s * (hurwitz_zeta(am, x) - hurwitz_zeta(am, 1.0 - x));
}

namespace {

// series for int_0^r t^{s-1}(1+t)^{-N/2} dt, valid (fast) for r <= 1/2:
// sum_k binom(-N/2, k) r^{s+k}/(s+k)
double radial_series(double r, double halfN, double s) {
    double coeff = 1.0;
    double rp = std::pow(r, s);
    double sum = 0.0;
    for (int k = 0; k < 200; ++k) {
        const double term = coeff * rp / (s + k);
        sum += term;
        if (std::abs(term) < 1e-17 * std::abs(sum) && k > 4) break;
        coeff *= -(halfN + k) / (k + 1.0);
        rp *= r;
    }
    return sum;
}

double simpson_rec(const std::function<double(double)>& f, double a, double b, double fa,
                   double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

} // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol, int max_depth) {
    if (a == b) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_rec(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

double radial_kernel_integral_full(int N, double s) {
    const double halfN = 0.5 * N;
    if (!(s > 0.0 && s < halfN)) throw std::invalid_argument("radial_kernel_integral: need 0 < s < N/2");
    return std::exp(std::lgamma(s) + std::lgamma(halfN - s) - std::lgamma(halfN));
}

double radial_kernel_integral(double r0, int N, double s) {
    const double halfN = 0.5 * N;
    if (!(s > 0.0 && s < halfN)) throw std::invalid_argument("radial_kernel_integral: need 0 < s < N/2");
    if (r0 <= 0.0) return 0.0;
    if (r0 <= 0.5) return radial_series(r0, halfN, s);
    if (r0 >= 2.0) {
        // tail via t -> 1/t is the same family with exponent N/2 - s
        return radial_kernel_integral_full(N, s) - radial_series(1.0 / r0, halfN, halfN - s);
    }
    auto f = [=](double t) { return std::pow(t, s - 1.0) * std::pow(1.0 + t, -halfN); };
    return radial_series(0.5, halfN, s) + adaptive_simpson(f, 0.5, r0, 1e-15);
}

double halton(std::uint64_t index, unsigned base) {
    double f = 1.0, r = 0.0;
    std::uint64_t i = index + 1; // skip the 0 element
    while (i > 0) {
        f /= base;
        r += f * static_cast<double>(i % base);
        i /= base;
    }
    return r;
}

std::uint64_t fnv1a64(const void* data, std::size_t n, std::uint64_t seed) {
    const auto* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = seed;
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 1099511628211ull;
    }
    return h;
}

} // namespace greenlab
