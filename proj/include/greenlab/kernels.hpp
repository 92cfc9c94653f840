#pragma once

#include "greenlab/domain.hpp"

#include <Eigen/Core>
#include <array>
#include <stdexcept>

namespace greenlab {

struct KernelError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class KernelVariant { RflBall, SflInterval, CflSurrogate, Envelope };

const char* kernel_variant_name(KernelVariant v);

/// A Green-kernel backend on the ball. RflBall and SflInterval are genuine
/// Green functions (closed form / spectral resummation); CflSurrogate and
/// Envelope realize the two-sided estimate shape with equality (constant c0).
struct KernelBackend {
    KernelVariant variant = KernelVariant::Envelope;
    DomainSpec spec;
    double c0 = 1.0;       // surrogate constant (CflSurrogate, Envelope)
    int spectral_order = 0; // diagnostic truncated-sum order for SflInterval (0 = unused)

    // cached constants
    double kappa = 0.0;       // RFL normalization Gamma(N/2) / (4^s pi^{N/2} Gamma(s)^2)
    double head_coeff = 0.0;  // coefficient of |x-y|^{2s-N} at the diagonal
    double radial_full = 0.0; // B(s, N/2 - s)
};

KernelBackend make_rfl_ball(const DomainSpec& spec);
KernelBackend make_sfl_interval(const DomainSpec& spec, int spectral_order = 0);
KernelBackend make_cfl_surrogate(const DomainSpec& spec, double c0 = 1.0);
KernelBackend make_envelope(const DomainSpec& spec, double c0 = 1.0);

/// The two-sided estimate shape E(x,y) = |x-y|^{2s-N} (d(x)/|x-y| ^ 1)^g (d(y)/|x-y| ^ 1)^g.
double envelope_shape(const DomainSpec& spec, const Eigen::VectorXd& x, const Eigen::VectorXd& y);

struct EnvelopeBounds {
    double shape = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    std::array<double, 4> majorant{}; // the four one-sided upper forms
};

/// lower = c_low E, upper = c_high E, plus the four pointwise majorants.
EnvelopeBounds envelope_bounds(const DomainSpec& spec, const Eigen::VectorXd& x,
                               const Eigen::VectorXd& y, double c_low = 1.0, double c_high = 1.0);

/// G(x, y). Throws on x == y (diagonal singularity) and on points outside the ball.
double green_eval(const KernelBackend& backend, const Eigen::VectorXd& x, const Eigen::VectorXd& y);

/// Martin kernel M(x, z) = lim_{y->z} G(x,y)/d(y)^gamma for |z| = R.
double martin_eval(const KernelBackend& backend, const Eigen::VectorXd& x, const Eigen::VectorXd& z);

/// Numerical Martin limit: Richardson-extrapolated G(x, y_k)/d(y_k)^gamma along
/// the inward normal y_k = z (1 - t0 2^{-k}). Two extrapolation sweeps.
double martin_limit_probe(const KernelBackend& backend, const Eigen::VectorXd& x,
                          const Eigen::VectorXd& z, double t0 = 0.05, int levels = 6);

/// Regularized-split parameters: K_eps_beta(t) = 1 ^ (t/eps)^beta with beta > N - 2s + 2 gamma.
struct RegularizedSplit {
    double eps = 0.0;
    double beta = 0.0;

    RegularizedSplit() = default;
    RegularizedSplit(const DomainSpec& spec, double eps_, double beta_);
    static RegularizedSplit with_default_beta(const DomainSpec& spec, double eps_);
    double cutoff(double t) const; // K^eps_beta(t)
};

struct KernelSplitValue {
    double regular = 0.0;  // G^eps = G K
    double nearfield = 0.0; // H^eps = G - G^eps
};

/// (G^eps, H^eps) at (x, y). G^eps = G when |x-y| >= eps; H^eps >= 0.
KernelSplitValue kernel_split(const KernelBackend& backend, const RegularizedSplit& split,
                              const Eigen::VectorXd& x, const Eigen::VectorXd& y);

/// Diagnostic truncated spectral sum for SflInterval (first K terms); used by the
/// eigenbasis oracle tests, not by green_eval.
double sfl_truncated_sum(const KernelBackend& backend, double x, double y, int terms);

/// Dirichlet eigenpair on (-R, R): lambda_k = (k pi / 2R)^2, normalized sine mode.
double sfl_eigenvalue(const DomainSpec& spec, int k);
double sfl_eigenfunction(const DomainSpec& spec, int k, double x);

} // namespace greenlab
