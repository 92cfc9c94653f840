#include "greenlab/kernels.hpp"

#include "greenlab/special_functions.hpp"

#include <cmath>

namespace greenlab {

namespace {
constexpr double kPi = 3.14159265358979323846;

void check_inside(const DomainSpec& spec, const Eigen::VectorXd& p, const char* what) {
    if (p.size() != spec.dim) throw KernelError(std::string(what) + ": dimension mismatch");
    if (!(p.norm() < spec.radius)) throw KernelError(std::string(what) + ": point outside the domain");
}

double rfl_kappa(int N, double s) {
    return std::tgamma(0.5 * N) / (std::pow(4.0, s) * std::pow(kPi, 0.5 * N) * std::tgamma(s) * std::tgamma(s));
}

double free_space_coeff(int N, double s) {
    // Gamma(N/2 - s) / (4^s pi^{N/2} Gamma(s)); the |x-y|^{2s-N} coefficient of the
    // free kernel, which both RFL and SFL match at the diagonal.
    return std::tgamma(0.5 * N - s) / (std::pow(4.0, s) * std::pow(kPi, 0.5 * N) * std::tgamma(s));
}

} // namespace

const char* kernel_variant_name(KernelVariant v) {
    switch (v) {
        case KernelVariant::RflBall: return "rfl";
        case KernelVariant::SflInterval: return "sfl";
        case KernelVariant::CflSurrogate: return "cfl";
        case KernelVariant::Envelope: return "envelope";
    }
    return "?";
}

KernelBackend make_rfl_ball(const DomainSpec& spec) {
    spec.validate();
    if (std::abs(spec.gamma - spec.s) > 1e-12)
        throw KernelError("rfl: requires gamma = s");
    KernelBackend b;
    b.variant = KernelVariant::RflBall;
    b.spec = spec;
    b.kappa = rfl_kappa(spec.dim, spec.s);
    b.head_coeff = free_space_coeff(spec.dim, spec.s);
    b.radial_full = radial_kernel_integral_full(spec.dim, spec.s);
    return b;
}

KernelBackend make_sfl_interval(const DomainSpec& spec, int spectral_order) {
    spec.validate();
    if (spec.dim != 1) throw KernelError("sfl: interval backend requires N = 1");
    if (std::abs(spec.gamma - 1.0) > 1e-12) throw KernelError("sfl: requires gamma = 1");
    if (!(spec.s < 0.5)) throw KernelError("sfl: N > 2s forces s < 1/2 on the interval");
    KernelBackend b;
    b.variant = KernelVariant::SflInterval;
    b.spec = spec;
    b.spectral_order = spectral_order;
    b.head_coeff = free_space_coeff(spec.dim, spec.s);
    return b;
}

KernelBackend make_cfl_surrogate(const DomainSpec& spec, double c0) {
    spec.validate();
    if (!(spec.s > 0.5)) throw KernelError("cfl: requires s > 1/2");
    if (std::abs(spec.gamma - (2.0 * spec.s - 1.0)) > 1e-12)
        throw KernelError("cfl: requires gamma = 2s - 1");
    if (!(c0 > 0.0)) throw KernelError("cfl: c0 must be positive");
    KernelBackend b;
    b.variant = KernelVariant::CflSurrogate;
    b.spec = spec;
    b.c0 = c0;
    b.head_coeff = c0;
    return b;
}

KernelBackend make_envelope(const DomainSpec& spec, double c0) {
    spec.validate();
    if (!(c0 > 0.0)) throw KernelError("envelope: c0 must be positive");
    KernelBackend b;
    b.variant = KernelVariant::Envelope;
    b.spec = spec;
    b.c0 = c0;
    b.head_coeff = c0;
    return b;
}

double envelope_shape(const DomainSpec& spec, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    const double d = (x - y).norm();
    if (d == 0.0) throw KernelError("envelope_shape: diagonal");
    const double dx = spec.radius - x.norm();
    const double dy = spec.radius - y.norm();
    const double cx = std::min(dx / d, 1.0);
    const double cy = std::min(dy / d, 1.0);
    return std::pow(d, 2.0 * spec.s - spec.dim) * std::pow(cx, spec.gamma) * std::pow(cy, spec.gamma);
}

EnvelopeBounds envelope_bounds(const DomainSpec& spec, const Eigen::VectorXd& x,
                               const Eigen::VectorXd& y, double c_low, double c_high) {
    const double d = (x - y).norm();
    if (d == 0.0) throw KernelError("envelope_bounds: diagonal");
    const double dx = spec.radius - x.norm();
    const double dy = spec.radius - y.norm();
    const double g = spec.gamma;
    EnvelopeBounds out;
    out.shape = envelope_shape(spec, x, y);
    out.lower = c_low * out.shape;
    out.upper = c_high * out.shape;
    const double base = std::pow(d, 2.0 * spec.s - spec.dim);
    out.majorant[0] = base;
    out.majorant[1] = base * std::pow(dy / dx, g);
    out.majorant[2] = base * std::pow(dy / d, g);
    out.majorant[3] = base * std::pow(dy * dx / (d * d), g);
    return out;
}

namespace {

double green_rfl(const KernelBackend& b, const Eigen::VectorXd& x, const Eigen::VectorXd& y, double d) {
    const double R = b.spec.radius;
    const double r0 = (R * R - x.squaredNorm()) * (R * R - y.squaredNorm()) / (R * R * d * d);
    return b.kappa * std::pow(d, 2.0 * b.spec.s - b.spec.dim) *
           radial_kernel_integral(r0, b.spec.dim, b.spec.s);
}

double green_sfl(const KernelBackend& b, double x, double y) {
    const double R = b.spec.radius;
    const double L = 2.0 * R;
    const double sigma = 2.0 * b.spec.s;
    const double a = kPi * (x + R) / L;
    const double bb = kPi * (y + R) / L;
    const double scale = std::pow(kPi / L, -sigma) / L;
    return scale * (cosine_zeta_sum(sigma, a - bb) - cosine_zeta_sum(sigma, a + bb));
}

} // namespace

namespace {
// lexicographic canonical order so G(x,y) and G(y,x) run the identical arithmetic
bool canonical_before(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        if (a[i] < b[i]) return true;
        if (a[i] > b[i]) return false;
    }
    return false;
}
} // namespace

double green_eval(const KernelBackend& backend, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    check_inside(backend.spec, x, "green_eval");
    check_inside(backend.spec, y, "green_eval");
    if (canonical_before(y, x)) return green_eval(backend, y, x);
    const double d = (x - y).norm();
    if (d == 0.0) throw KernelError("green_eval: diagonal singularity (x == y)");
    switch (backend.variant) {
        case KernelVariant::RflBall:
            return green_rfl(backend, x, y, d);
        case KernelVariant::SflInterval:
            return green_sfl(backend, x[0], y[0]);
        case KernelVariant::CflSurrogate:
        case KernelVariant::Envelope:
            return backend.c0 * envelope_shape(backend.spec, x, y);
    }
    throw KernelError("green_eval: unknown variant");
}

double martin_eval(const KernelBackend& backend, const Eigen::VectorXd& x, const Eigen::VectorXd& z) {
    check_inside(backend.spec, x, "martin_eval");
    if (z.size() != backend.spec.dim) throw KernelError("martin_eval: dimension mismatch");
    const double R = backend.spec.radius;
    if (std::abs(z.norm() - R) > 1e-12 * R)
        throw KernelError("martin_eval: z is not a boundary point (|z| != R)");
    const double s = backend.spec.s;
    const double g = backend.spec.gamma;
    const int N = backend.spec.dim;
    const double dxz = (x - z).norm();
    switch (backend.variant) {
        case KernelVariant::RflBall:
            return std::pow(2.0, s) * backend.kappa / s *
                   std::pow(R * R - x.squaredNorm(), s) * std::pow(R, -s) * std::pow(dxz, -N);
        case KernelVariant::SflInterval: {
            // term-wise limit of the spectral sum; resummed through the sine series
            const double L = 2.0 * R;
            const double xr = (z[0] > 0.0) ? x[0] : -x[0]; // reflect so the pole is at +R
            const double a = kPi * (xr + R) / L;
            return -std::pow(kPi / L, 1.0 - 2.0 * s) / R * sine_zeta_sum(2.0 * s - 1.0, a + kPi);
        }
        case KernelVariant::CflSurrogate:
        case KernelVariant::Envelope: {
            const double dx = R - x.norm();
            return backend.c0 * std::pow(dx, g) * std::pow(dxz, 2.0 * s - N - 2.0 * g);
        }
    }
    throw KernelError("martin_eval: unknown variant");
}

double martin_limit_probe(const KernelBackend& backend, const Eigen::VectorXd& x,
                          const Eigen::VectorXd& z, double t0, int levels) {
    const double R = backend.spec.radius;
    std::vector<double> v(levels);
    for (int k = 0; k < levels; ++k) {
        const double t = t0 * std::pow(0.5, k);
        const Eigen::VectorXd y = z * (1.0 - t);
        const double dy = R - y.norm();
        v[k] = green_eval(backend, x, y) / std::pow(dy, backend.spec.gamma);
    }
    std::vector<double> r1(levels - 1), r2(levels - 2);
    for (int k = 0; k + 1 < levels; ++k) r1[k] = 2.0 * v[k + 1] - v[k];
    for (int k = 0; k + 2 < levels; ++k) r2[k] = (4.0 * r1[k + 1] - r1[k]) / 3.0;
    return r2.back();
}

RegularizedSplit::RegularizedSplit(const DomainSpec& spec, double eps_, double beta_) {
    const double floor_beta = spec.dim - 2.0 * spec.s + 2.0 * spec.gamma;
    if (!(beta_ > floor_beta))
        throw KernelError("RegularizedSplit: beta must exceed N - 2s + 2 gamma");
    if (!(eps_ > 0.0)) throw KernelError("RegularizedSplit: eps must be positive");
    eps = eps_;
    beta = beta_;
}

RegularizedSplit RegularizedSplit::with_default_beta(const DomainSpec& spec, double eps_) {
    return RegularizedSplit(spec, eps_, spec.dim - 2.0 * spec.s + 2.0 * spec.gamma + 1.0);
}

double RegularizedSplit::cutoff(double t) const {
    if (t >= eps) return 1.0;
    return std::pow(t / eps, beta);
}

KernelSplitValue kernel_split(const KernelBackend& backend, const RegularizedSplit& split,
                              const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    const double g = green_eval(backend, x, y);
    const double k = split.cutoff((x - y).norm());
    KernelSplitValue out;
    out.regular = g * k;
    out.nearfield = g - out.regular;
    return out;
}

double sfl_eigenvalue(const DomainSpec& spec, int k) {
    const double L = 2.0 * spec.radius;
    const double w = k * kPi / L;
    return w * w;
}

double sfl_eigenfunction(const DomainSpec& spec, int k, double x) {
    const double R = spec.radius;
    return std::sin(k * kPi * (x + R) / (2.0 * R)) / std::sqrt(R);
}

double sfl_truncated_sum(const KernelBackend& backend, double x, double y, int terms) {
    double sum = 0.0;
    for (int k = 1; k <= terms; ++k) {
        sum += std::pow(sfl_eigenvalue(backend.spec, k), -backend.spec.s) *
               sfl_eigenfunction(backend.spec, k, x) * sfl_eigenfunction(backend.spec, k, y);
    }
    return sum;
}

} // namespace greenlab
