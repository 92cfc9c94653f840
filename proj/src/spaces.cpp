#include "greenlab/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace greenlab {

GridFunction::GridFunction(MeshPtr m, Eigen::VectorXd v, std::string lbl)
    : mesh(std::move(m)), values(std::move(v)), label(std::move(lbl)) {
    if (!mesh) throw SpaceError("GridFunction: null mesh");
    if (values.size() != mesh->size()) throw SpaceError("GridFunction: value count != node count");
}

void GridFunction::check_finite() const {
    if (!values.allFinite()) throw SpaceError("GridFunction '" + label + "': non-finite values");
}

GridFunction make_grid_function(const MeshPtr& mesh,
                                const std::function<double(const Eigen::VectorXd&)>& f,
                                std::string label) {
    Eigen::VectorXd v(mesh->size());
    for (int i = 0; i < mesh->size(); ++i) v[i] = f(mesh->node(i));
    return GridFunction(mesh, std::move(v), std::move(label));
}

double weighted_integral(const GridFunction& u, double alpha) {
    const Mesh& m = *u.mesh;
    double sum = 0.0;
    for (int i = 0; i < m.size(); ++i)
        sum += u.values[i] * std::pow(m.delta[i], alpha) * m.weights[i];
    return sum;
}

double lq_norm(const GridFunction& u, double q, double alpha) {
    if (!(q >= 1.0)) throw SpaceError("lq_norm: q must be >= 1");
    const Mesh& m = *u.mesh;
    double sum = 0.0;
    for (int i = 0; i < m.size(); ++i)
        sum += std::pow(std::abs(u.values[i]), q) * std::pow(m.delta[i], alpha) * m.weights[i];
    return std::pow(sum, 1.0 / q);
}

namespace {

// node indices ordered by |u| descending, plus delta^alpha w per node
struct RankedMass {
    std::vector<int> order;
    Eigen::VectorXd mass; // delta^alpha * w
    Eigen::VectorXd absu;
};

RankedMass rank_by_magnitude(const GridFunction& u, double alpha) {
    const Mesh& m = *u.mesh;
    RankedMass r;
    r.order.resize(m.size());
    std::iota(r.order.begin(), r.order.end(), 0);
    r.mass.resize(m.size());
    r.absu = u.values.cwiseAbs();
    for (int i = 0; i < m.size(); ++i) r.mass[i] = std::pow(m.delta[i], alpha) * m.weights[i];
    std::sort(r.order.begin(), r.order.end(),
              [&](int a, int b) { return r.absu[a] > r.absu[b]; });
    return r;
}

} // namespace

double marcinkiewicz_quasinorm(const GridFunction& u, double q, double alpha) {
    if (!(q >= 1.0)) throw SpaceError("marcinkiewicz_quasinorm: q must be >= 1");
    u.check_finite();
    const RankedMass r = rank_by_magnitude(u, alpha);
    double best = 0.0, cum = 0.0;
    const int n = static_cast<int>(r.order.size());
    for (int k = 0; k < n; ++k) {
        cum += r.mass[r.order[k]];
        const double v = r.absu[r.order[k]];
        if (v <= 0.0) break;
        // sup over lambda just below v of lambda * mass{|u| >= v}^{1/q}
        if (k + 1 < n && r.absu[r.order[k + 1]] == v) continue;
        best = std::max(best, v * std::pow(cum, 1.0 / q));
    }
    return best;
}

double marcinkiewicz_norm(const GridFunction& u, double q, double alpha,
                          int random_sets, std::uint64_t seed) {
    if (!(q > 1.0)) throw SpaceError("marcinkiewicz_norm: q must be > 1");
    u.check_finite();
    const RankedMass r = rank_by_magnitude(u, alpha);
    const int n = static_cast<int>(r.order.size());
    const double expo = 1.0 - 1.0 / q;
    double best = 0.0;
    double num = 0.0, den = 0.0;
    for (int k = 0; k < n; ++k) {
        const int i = r.order[k];
        num += r.absu[i] * r.mass[i];
        den += r.mass[i];
        if (k + 1 < n && r.absu[r.order[k + 1]] == r.absu[i]) continue;
        if (den > 0.0) best = std::max(best, num / std::pow(den, expo));
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    for (int t = 0; t < random_sets; ++t) {
        const double keep = 0.05 + 0.9 * coin(rng);
        double rn = 0.0, rd = 0.0;
        for (int i = 0; i < n; ++i) {
            if (coin(rng) < keep) {
                rn += r.absu[i] * r.mass[i];
                rd += r.mass[i];
            }
        }
        if (rd > 0.0) best = std::max(best, rn / std::pow(rd, expo));
    }
    return best;
}

double critical_exponent(double N, double s, double beta, double alpha) {
    if (!(beta >= 0.0)) throw SpaceError("critical_exponent: beta must be >= 0");
    if (!(alpha >= beta - 2.0 * s)) throw SpaceError("critical_exponent: need alpha >= beta - 2s");
    const double den = N + beta - 2.0 * s;
    if (!(den > 0.0)) throw SpaceError("critical_exponent: nonpositive denominator N + beta - 2s");
    return (N + alpha) / den;
}

AdmissibleRange admissible_range(double N, double s, double gp) {
    if (!(gp >= 0.0 && gp <= 1.0)) throw SpaceError("admissible_range: gamma' must be in [0,1]");
    AdmissibleRange r;
    r.lo = std::max({-gp - 1.0, gp - 2.0 * s, -gp * N / (N - 2.0 * s + gp)});
    r.hi = gp * N / (N - 2.0 * s);
    return r;
}

SubcriticalReport subcritical_check(const Nonlinearity& g, double pstar) {
    if (!(pstar > 1.0)) throw SpaceError("subcritical_check: p* must exceed 1");
    g.audit();
    SubcriticalReport rep;
    if (g.is_power()) {
        rep.closed_form = true;
        const double p = g.power_exponent();
        if (p < pstar) {
            rep.verdict = SubcriticalVerdict::Subcritical;
            // int_1^inf 2 t^{p - 1 - p*} dt = 2/(p* - p)
            rep.integral_estimate = 2.0 / (pstar - p);
        } else {
            rep.verdict = SubcriticalVerdict::CriticalOrSuper;
            rep.integral_estimate = std::numeric_limits<double>::infinity();
        }
        return rep;
    }
    // dyadic blocks [2^k, 2^{k+1}], 16-point Gauss-Legendre each
    static const double gl_x[8] = {0.0950125098376374, 0.2816035507792589, 0.4580167776572274,
                                   0.6178762444026438, 0.7554044083550030, 0.8656312023878318,
                                   0.9445750230732326, 0.9894009349916499};
    static const double gl_w[8] = {0.1894506104550685, 0.1826034150449236, 0.1691565193950025,
                                   0.1495959888165767, 0.1246289712555339, 0.0951585116824928,
                                   0.0622535239386479, 0.0271524594117541};
    auto integrand = [&](double t) { return (g(t) - g(-t)) * std::pow(t, -1.0 - pstar); };
    double total = 0.0;
    double prev_block = -1.0;
    double ratio = 1.0;
    for (int k = 0; k < 40; ++k) {
        const double a = std::pow(2.0, k), b = 2.0 * a;
        const double mid = 0.5 * (a + b), hw = 0.5 * (b - a);
        double block = 0.0;
        for (int j = 0; j < 8; ++j)
            block += hw * gl_w[j] * (integrand(mid - hw * gl_x[j]) + integrand(mid + hw * gl_x[j]));
        total += block;
        if (prev_block > 0.0 && block > 0.0) ratio = block / prev_block;
        prev_block = block;
    }
    rep.integral_estimate = total;
    if (ratio < 0.999) {
        // geometric tail bound
        rep.integral_estimate += prev_block * ratio / (1.0 - ratio);
        rep.verdict = SubcriticalVerdict::Subcritical;
    } else {
        rep.verdict = SubcriticalVerdict::CriticalOrSuper;
    }
    return rep;
}

} // namespace greenlab
