#pragma once

#include "greenlab/greenop.hpp"
#include "greenlab/nonlinearity.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace greenlab {

struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct GoodMeasureError : SolverError {
    using SolverError::SolverError;
};

/// V- = -G[mu-], V+ = G[mu+]: the sub/supersolution bracket of the fixed-point
/// construction. g(V-), g(V+) must be finite on every node.
struct TruncationEnvelope {
    GridFunction lower; // V- <= 0
    GridFunction upper; // V+ >= 0
};

TruncationEnvelope make_envelope(const DiscreteGreenOperator& op, const RadonMeasure& mu);
TruncationEnvelope make_envelope_from_forcing(const GridFunction& forcing);

/// h(v): g clamped through the envelope: g(V+) above it, g(v) inside, g(V-) below.
GridFunction truncate_h(const Nonlinearity& g, const GridFunction& v, const TruncationEnvelope& env);

struct SolveConfig {
    double tol = 1e-10;       // on the L1(delta^gamma) residual
    int max_iter = 500;
    double damping = 0.5;     // theta in (0,1]; halved automatically on residual increase
    std::optional<Eigen::VectorXd> initial;
};

struct SolveReport {
    int iterations = 0;
    bool converged = false;
    std::vector<double> residual_history;
    double final_residual = 0.0;
    double damping_used = 0.0;
    double sandwich_violation_max = 0.0;
    double truncation_mismatch = 0.0; // max |h(u) - g(u)| after convergence
    double wall_ms = 0.0;
};

struct Solution {
    GridFunction u;
    SolveReport report;
};

/// Damped Picard iteration u <- (1-t) u + t (G[mu] - G[h(u)]) for u + G[g(u)] = G[mu].
/// Refuses (GoodMeasureError) when the truncation envelope is not numerically finite.
Solution picard_solve(const DiscreteGreenOperator& op, const Nonlinearity& g,
                      const RadonMeasure& mu, const SolveConfig& cfg = {});

/// Same iteration for u + G[g(u)] = F with a grid forcing term F (used by the
/// Martin-forced limit equation).
Solution picard_solve_forced(const DiscreteGreenOperator& op, const Nonlinearity& g,
                             const GridFunction& forcing, const SolveConfig& cfg = {});

struct BracketSolution {
    GridFunction lower;
    GridFunction upper;
    double gap = 0.0; // || upper - lower ||_{L1(delta^gamma)}
    SolveReport report;
};

/// Two-sided bracketing: the damped cross-pair iteration with running envelope
/// clamps. Iterates from V- are nondecreasing, from V+ nonincreasing, and every
/// fixed point in [V-, V+] stays bracketed; a cross-over of the brackets beyond
/// 1e-10 means kernel positivity is broken and raises SolverError.
BracketSolution monotone_solve(const DiscreteGreenOperator& op, const Nonlinearity& g,
                               const RadonMeasure& mu, const SolveConfig& cfg = {});

/// max over the family of |int u xi + int g(u) G[xi] - int G[xi] dmu| / scale
double weak_dual_residual(const DiscreteGreenOperator& op, const GridFunction& u,
                          const Nonlinearity& g, const RadonMeasure& mu,
                          const std::vector<TestFunction>& family);

struct KatoReport {
    // slack = rhs - lhs for each inequality; nonnegative (up to quadrature tol) = pass
    double slack_abs = 0.0;    // int |u| xi <= int sgn(u) f G[xi]           (f-only form)
    double slack_plus = 0.0;   // int u+ xi  <= int sgn+(u) f G[xi]          (f-only form)
    double slack_plus_measure = 0.0; // ... + int G[xi] dmu+
    double slack_abs_measure = 0.0;  // ... + int G[xi] dmu+
    bool f_only_applicable = true;   // false when mu != 0 (the f-only forms are not claims then)
    double scale = 1.0;
    double gxi_min = 0.0;
};

/// Evaluates all four Kato inequalities for u = G[f] + G[mu]; sgn(0) = 0.
/// xi must satisfy G[xi] >= 0 nodewise (checked; violation -> GreenOpError).
KatoReport kato_check(const DiscreteGreenOperator& op, const GridFunction& f,
                      const RadonMeasure& mu, const TestFunction& xi);

/// A convex C^{1,1} probe p with p(0) = p'(0) = 0 and |p'| <= 1.
struct ConvexProbe {
    std::function<double(double)> p;
    std::function<double(double)> dp;
    std::string name;
};

/// The quadratic-core smoothing of |t|: p_k(t) = |t| - 1/(2k) outside [-1/k, 1/k],
/// k t^2 / 2 inside.
ConvexProbe abs_smoothing_probe(double k);

/// Checks p(0)=p'(0)=0, |p'|<=1, p' nondecreasing on a sample; throws on failure.
void audit_convex_probe(const ConvexProbe& probe, double span = 8.0, int samples = 4097);

/// slack = int f p'(u) G[xi] - int p(u) xi  for u = G[f]; nonnegative = pass.
double convex_kato_check(const DiscreteGreenOperator& op, const GridFunction& f,
                         const ConvexProbe& probe, const TestFunction& xi);

struct ComparisonResult {
    bool ordered = true;
    double max_violation = 0.0; // max(u1 - u2)
    Solution first, second;
};

/// Solves with mu1 and mu2 (mu1 <= mu2 must be verifiable atomwise/nodewise,
/// else SolverError) and checks u1 <= u2 + 1e-8 nodewise.
ComparisonResult comparison_test(const DiscreteGreenOperator& op, const Nonlinearity& g,
                                 const RadonMeasure& mu1, const RadonMeasure& mu2,
                                 const SolveConfig& cfg = {});

} // namespace greenlab
