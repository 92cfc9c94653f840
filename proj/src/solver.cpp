#include "greenlab/solver.hpp"

#include <chrono>
#include <cmath>

namespace greenlab {

namespace {

Eigen::VectorXd apply_g(const Nonlinearity& g, const Eigen::VectorXd& v) {
    Eigen::VectorXd out(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) out[i] = g(v[i]);
    return out;
}

void check_envelope_finite(const Nonlinearity& g, const TruncationEnvelope& env) {
    for (int i = 0; i < env.upper.size(); ++i) {
        if (!std::isfinite(g(env.upper.values[i])) || !std::isfinite(g(env.lower.values[i])))
            throw GoodMeasureError(
                "truncation envelope violates the integrability condition: g(envelope) is not finite");
    }
}

double weighted_l1(const GridFunction& v, double gamma) { return lq_norm(v, 1.0, gamma); }

} // namespace

TruncationEnvelope make_envelope(const DiscreteGreenOperator& op, const RadonMeasure& mu) {
    auto [vminus, vplus] = envelope_potentials(op, mu);
    return TruncationEnvelope{std::move(vminus), std::move(vplus)};
}

TruncationEnvelope make_envelope_from_forcing(const GridFunction& forcing) {
    GridFunction lo = forcing, hi = forcing;
    lo.values = (-((-forcing.values).cwiseMax(0.0)));
    hi.values = forcing.values.cwiseMax(0.0);
    lo.label = "-F-";
    hi.label = "F+";
    return TruncationEnvelope{std::move(lo), std::move(hi)};
}

GridFunction truncate_h(const Nonlinearity& g, const GridFunction& v, const TruncationEnvelope& env) {
    Eigen::VectorXd out(v.size());
    for (int i = 0; i < v.size(); ++i) {
        const double lo = env.lower.values[i], hi = env.upper.values[i];
        if (v.values[i] > hi) out[i] = g(hi);
        else if (v.values[i] < lo) out[i] = g(lo);
        else out[i] = g(v.values[i]);
    }
    return GridFunction(v.mesh, std::move(out), "h(" + v.label + ")");
}

namespace {

Solution solve_core(const DiscreteGreenOperator& op, const Nonlinearity& g,
                    const GridFunction& forcing, const TruncationEnvelope& env,
                    const SolveConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    g.audit();
    check_envelope_finite(g, env);
    const double gamma = op.gamma();
    GridFunction u(op.mesh,
                   cfg.initial ? *cfg.initial : Eigen::VectorXd::Zero(op.size()), "u");
    if (cfg.initial && cfg.initial->size() != op.size())
        throw SolverError("picard_solve: initial iterate size mismatch");
    double theta = cfg.damping;
    if (!(theta > 0.0 && theta <= 1.0)) throw SolverError("picard_solve: damping must be in (0,1]");

    auto residual_of = [&](const GridFunction& v) {
        GridFunction r(op.mesh, v.values + op.table * apply_g(g, v.values) - forcing.values, "res");
        return weighted_l1(r, gamma);
    };

    Solution sol{std::move(u), {}};
    double res = residual_of(sol.u);
    sol.report.residual_history.push_back(res);
    int it = 0;
    for (; it < cfg.max_iter && res > cfg.tol; ++it) {
        const GridFunction hval = truncate_h(g, sol.u, env);
        Eigen::VectorXd next =
            (1.0 - theta) * sol.u.values + theta * (forcing.values - op.table * hval.values);
        GridFunction unext(op.mesh, std::move(next), "u");
        const double rnext = residual_of(unext);
        if (rnext > res && theta > 1.0 / 64.0) {
            theta *= 0.5; // retry the step with stronger damping
            continue;
        }
        sol.u = std::move(unext);
        res = rnext;
        sol.report.residual_history.push_back(res);
    }
    sol.report.iterations = it;
    sol.report.converged = res <= cfg.tol;
    sol.report.final_residual = res;
    sol.report.damping_used = theta;
    double viol = 0.0, mismatch = 0.0;
    const GridFunction hfinal = truncate_h(g, sol.u, env);
    for (int i = 0; i < op.size(); ++i) {
        viol = std::max(viol, sol.u.values[i] - env.upper.values[i]);
        viol = std::max(viol, env.lower.values[i] - sol.u.values[i]);
        mismatch = std::max(mismatch, std::abs(hfinal.values[i] - g(sol.u.values[i])));
    }
    sol.report.sandwich_violation_max = std::max(0.0, viol);
    sol.report.truncation_mismatch = mismatch;
    sol.report.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return sol;
}

} // namespace

Solution picard_solve(const DiscreteGreenOperator& op, const Nonlinearity& g,
                      const RadonMeasure& mu, const SolveConfig& cfg) {
    const TruncationEnvelope env = make_envelope(op, mu);
    const GridFunction forcing = apply_measure(op, mu);
    return solve_core(op, g, forcing, env, cfg);
}

Solution picard_solve_forced(const DiscreteGreenOperator& op, const Nonlinearity& g,
                             const GridFunction& forcing, const SolveConfig& cfg) {
    forcing.check_finite();
    return solve_core(op, g, forcing, make_envelope_from_forcing(forcing), cfg);
}

BracketSolution monotone_solve(const DiscreteGreenOperator& op, const Nonlinearity& g,
                               const RadonMeasure& mu, const SolveConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    g.audit();
    const TruncationEnvelope env = make_envelope(op, mu);
    check_envelope_finite(g, env);
    const GridFunction forcing = apply_measure(op, mu);
    const double gamma = op.gamma();
    const double theta = cfg.damping;

    GridFunction lo = env.lower, hi = env.upper;
    auto step = [&](const GridFunction& v) {
        return Eigen::VectorXd(forcing.values - op.table * truncate_h(g, v, env).values);
    };
    BracketSolution out{lo, hi, 0.0, {}};
    double gap = weighted_l1(GridFunction(op.mesh, hi.values - lo.values, "gap"), gamma);
    out.report.residual_history.push_back(gap);
    int it = 0;
    for (; it < cfg.max_iter && gap > cfg.tol; ++it) {
        const Eigen::VectorXd t_hi = step(hi); // antitone map: T(hi) bounds from below
        const Eigen::VectorXd t_lo = step(lo);
        // antitonicity cross-check; a failure here means positivity is broken
        if ((t_hi - t_lo).maxCoeff() > 1e-10)
            throw SolverError("monotone_solve: antitonicity violated (kernel positivity broken)");
        const Eigen::VectorXd cand_lo = (1.0 - theta) * lo.values + theta * t_hi;
        const Eigen::VectorXd cand_hi = (1.0 - theta) * hi.values + theta * t_lo;
        lo.values = lo.values.cwiseMax(cand_lo); // running envelopes keep the iterates monotone
        hi.values = hi.values.cwiseMin(cand_hi);
        if ((lo.values - hi.values).maxCoeff() > 1e-10)
            throw SolverError("monotone_solve: brackets crossed (kernel positivity broken)");
        gap = weighted_l1(GridFunction(op.mesh, hi.values - lo.values, "gap"), gamma);
        out.report.residual_history.push_back(gap);
    }
    out.lower = std::move(lo);
    out.upper = std::move(hi);
    out.gap = gap;
    out.report.iterations = it;
    out.report.converged = gap <= cfg.tol;
    out.report.final_residual = gap;
    out.report.damping_used = theta;
    out.report.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

double weak_dual_residual(const DiscreteGreenOperator& op, const GridFunction& u,
                          const Nonlinearity& g, const RadonMeasure& mu,
                          const std::vector<TestFunction>& family) {
    const GridFunction gu(op.mesh, apply_g(g, u.values), "g(u)");
    double worst = 0.0;
    for (const auto& tf : family) {
        const double t1 = mesh_inner(u, tf.xi);
        const double t2 = mesh_inner(gu, apply_density(op, tf.xi));
        const double t3 = pair_measure_with_potential(op, mu, tf.xi);
        const double scale = std::max({1.0, std::abs(t1), std::abs(t2), std::abs(t3)});
        worst = std::max(worst, std::abs(t1 + t2 - t3) / scale);
    }
    return worst;
}

namespace {
inline double sgn0(double t) { return t > 0.0 ? 1.0 : (t < 0.0 ? -1.0 : 0.0); }
inline double sgn0_plus(double t) { return t > 0.0 ? 1.0 : 0.0; }
} // namespace

KatoReport kato_check(const DiscreteGreenOperator& op, const GridFunction& f,
                      const RadonMeasure& mu, const TestFunction& xi) {
    f.check_finite();
    const GridFunction gxi = apply_density(op, xi.xi);
    const double gximax = gxi.values.cwiseAbs().maxCoeff();
    KatoReport rep;
    rep.gxi_min = gxi.values.minCoeff();
    if (rep.gxi_min < -1e-13 * std::max(1.0, gximax))
        throw GreenOpError("kato_check: invalid test function (G[xi] changes sign)");

    GridFunction u = apply_measure(op, mu);
    u.values += op.table * f.values;
    u.label = "G[f]+G[mu]";

    const Mesh& mesh = *op.mesh;
    double abs_lhs = 0.0, plus_lhs = 0.0, rhs_sgn = 0.0, rhs_sgnplus = 0.0;
    for (int i = 0; i < mesh.size(); ++i) {
        const double w = mesh.weights[i];
        abs_lhs += std::abs(u.values[i]) * xi.xi.values[i] * w;
        plus_lhs += std::max(u.values[i], 0.0) * xi.xi.values[i] * w;
        rhs_sgn += sgn0(u.values[i]) * f.values[i] * gxi.values[i] * w;
        rhs_sgnplus += sgn0_plus(u.values[i]) * f.values[i] * gxi.values[i] * w;
    }
    const auto [mu_pos, mu_neg] = split_signs(mu);
    (void)mu_neg;
    const double mu_plus_term = pair_measure_with_potential(op, mu_pos, xi.xi);

    rep.f_only_applicable = mu.is_zero();
    rep.slack_abs = rhs_sgn - abs_lhs;
    rep.slack_plus = rhs_sgnplus - plus_lhs;
    rep.slack_plus_measure = rhs_sgnplus + mu_plus_term - plus_lhs;
    rep.slack_abs_measure = rhs_sgn + mu_plus_term - abs_lhs;
    rep.scale = std::max({1.0, abs_lhs, std::abs(rhs_sgn), mu_plus_term});
    return rep;
}

ConvexProbe abs_smoothing_probe(double k) {
    if (!(k > 0.0)) throw SolverError("abs_smoothing_probe: k must be positive");
    ConvexProbe pr;
    pr.name = "p_k(k=" + std::to_string(k) + ")";
    pr.p = [k](double t) {
        return std::abs(t) >= 1.0 / k ? std::abs(t) - 0.5 / k : 0.5 * k * t * t;
    };
    pr.dp = [k](double t) { return std::abs(t) >= 1.0 / k ? sgn0(t) : k * t; };
    return pr;
}

void audit_convex_probe(const ConvexProbe& probe, double span, int samples) {
    if (std::abs(probe.p(0.0)) > 1e-14 || std::abs(probe.dp(0.0)) > 1e-14)
        throw SolverError("convex probe audit: p(0) or p'(0) nonzero");
    double prev = probe.dp(-span);
    for (int i = 0; i < samples; ++i) {
        const double t = -span + 2.0 * span * i / (samples - 1);
        const double d = probe.dp(t);
        if (std::abs(d) > 1.0 + 1e-12) throw SolverError("convex probe audit: |p'| exceeds 1");
        if (d < prev - 1e-12) throw SolverError("convex probe audit: p' not nondecreasing");
        prev = d;
    }
}

double convex_kato_check(const DiscreteGreenOperator& op, const GridFunction& f,
                         const ConvexProbe& probe, const TestFunction& xi) {
    audit_convex_probe(probe);
    const GridFunction gxi = apply_density(op, xi.xi);
    if (gxi.values.minCoeff() < -1e-13 * std::max(1.0, gxi.values.cwiseAbs().maxCoeff()))
        throw GreenOpError("convex_kato_check: invalid test function (G[xi] changes sign)");
    const GridFunction u = apply_density(op, f);
    const Mesh& mesh = *op.mesh;
    double lhs = 0.0, rhs = 0.0;
    for (int i = 0; i < mesh.size(); ++i) {
        lhs += probe.p(u.values[i]) * xi.xi.values[i] * mesh.weights[i];
        rhs += f.values[i] * probe.dp(u.values[i]) * gxi.values[i] * mesh.weights[i];
    }
    return rhs - lhs;
}

ComparisonResult comparison_test(const DiscreteGreenOperator& op, const Nonlinearity& g,
                                 const RadonMeasure& mu1, const RadonMeasure& mu2,
                                 const SolveConfig& cfg) {
    // verify mu1 <= mu2: every mu1 atom is matched at the same location with weight <=,
    // extra mu2 atoms are nonnegative, densities compare nodewise
    for (const auto& a1 : mu1.atoms) {
        bool matched = false;
        for (const auto& a2 : mu2.atoms) {
            if ((a1.location - a2.location).norm() < 1e-14) {
                if (a2.weight + 1e-15 < a1.weight)
                    throw SolverError("comparison_test: atom ordering violated");
                matched = true;
                break;
            }
        }
        if (!matched && a1.weight > 0.0)
            throw SolverError("comparison_test: ordering not verifiable (unmatched positive atom)");
    }
    for (const auto& a2 : mu2.atoms) {
        bool matched = false;
        for (const auto& a1 : mu1.atoms)
            if ((a1.location - a2.location).norm() < 1e-14) matched = true;
        if (!matched && a2.weight < 0.0)
            throw SolverError("comparison_test: ordering not verifiable (unmatched negative atom)");
    }
    const Eigen::VectorXd d1 = mu1.density ? mu1.density->values
                                           : Eigen::VectorXd::Zero(op.size());
    const Eigen::VectorXd d2 = mu2.density ? mu2.density->values
                                           : Eigen::VectorXd::Zero(op.size());
    if ((d1 - d2).maxCoeff() > 1e-15)
        throw SolverError("comparison_test: density ordering violated");

    ComparisonResult res;
    res.first = picard_solve(op, g, mu1, cfg);
    res.second = picard_solve(op, g, mu2, cfg);
    res.max_violation = (res.first.u.values - res.second.u.values).maxCoeff();
    res.ordered = res.max_violation <= 1e-8;
    return res;
}

} // namespace greenlab
