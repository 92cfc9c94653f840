#pragma once

#include "greenlab/domain.hpp"
#include "greenlab/nonlinearity.hpp"

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>

namespace greenlab {

using MeshPtr = std::shared_ptr<const Mesh>;

struct SpaceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Node values on a mesh; the carrier of u, f, g(u), xi.
struct GridFunction {
    MeshPtr mesh;
    Eigen::VectorXd values;
    std::string label;

    GridFunction() = default;
    GridFunction(MeshPtr m, Eigen::VectorXd v, std::string lbl = "");
    int size() const { return static_cast<int>(values.size()); }
    void check_finite() const;
};

GridFunction make_grid_function(const MeshPtr& mesh,
                                const std::function<double(const Eigen::VectorXd&)>& f,
                                std::string label = "");

/// ( sum_i |u_i|^q delta_i^alpha w_i )^{1/q}
double lq_norm(const GridFunction& u, double q, double alpha);

/// weighted quadrature of f delta^alpha over the mesh
double weighted_integral(const GridFunction& u, double alpha);

/// Marcinkiewicz quasinorm: sup_l l (int_{|u|>l} delta^alpha dx)^{1/q};
/// the sup is attained as l increases to a node value, i.e. over superlevel
/// sets {|u| >= v} of the distinct node values v.
double marcinkiewicz_quasinorm(const GridFunction& u, double q, double alpha);

/// Marcinkiewicz norm: sup_A int_A |u| delta^alpha / (int_A delta^alpha)^{1-1/q}
/// over all superlevel sets of |u| plus `random_sets` seeded random node subsets.
/// Requires q > 1. Superlevel sets realize the exact discrete sup; the random
/// subsets audit the sandwich.
double marcinkiewicz_norm(const GridFunction& u, double q, double alpha,
                          int random_sets = 0, std::uint64_t seed = 1);

/// p*_{beta,alpha} = (N + alpha)/(N + beta - 2s); rejects a nonpositive denominator.
double critical_exponent(double N, double s, double beta, double alpha);

/// alpha range of the compactness theorem for a given gamma' in [0, 1]:
/// ( max(-g'-1, g'-2s, -g'N/(N-2s+g')), g'N/(N-2s) ). May be empty.
struct AdmissibleRange {
    double lo = 0.0;
    double hi = 0.0;
    bool empty() const { return !(lo < hi); }
};
AdmissibleRange admissible_range(double N, double s, double gamma_prime);

enum class SubcriticalVerdict { Subcritical, CriticalOrSuper };

struct SubcriticalReport {
    SubcriticalVerdict verdict = SubcriticalVerdict::CriticalOrSuper;
    double integral_estimate = 0.0; // int_1^inf [g(t)-g(-t)] t^{-1-p*} dt (or partial)
    bool closed_form = false;       // power nonlinearity short-circuit
};

/// The subcritical integral condition int_1^inf [g(t)-g(-t)] t^{-1-pstar} dt < inf.
/// Power g short-circuits (finite iff p < p*); otherwise dyadic blocks up to 2^40
/// with geometric tail extrapolation.
SubcriticalReport subcritical_check(const Nonlinearity& g, double pstar);

} // namespace greenlab
