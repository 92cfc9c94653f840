#pragma once

#include "greenlab/kernels.hpp"
#include "greenlab/measures.hpp"
#include "greenlab/spaces.hpp"

#include <Eigen/Core>
#include <string>
#include <vector>

namespace greenlab {

struct GreenOpError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// xi = delta^gamma * w with bounded w; the weak-dual test-function class.
struct TestFunction {
    GridFunction xi;
    GridFunction bound_factor; // w
};

TestFunction make_test_function(const MeshPtr& mesh, const GridFunction& w);
TestFunction make_test_function(const MeshPtr& mesh,
                                const std::function<double(const Eigen::VectorXd&)>& w,
                                std::string label = "");

struct AssemblyReport {
    std::string correction = "singular-head + midpoint remainder";
    double split_eps = 0.0;
    double split_beta = 0.0;
    double min_diagonal = 0.0;
    int clamped_diagonals = 0;
};

/// Dense quadrature realization of the Green operator: A[i][j] ~ int_{cell j} G(x_i, y) dy,
/// i.e. G(x_i, x_j) w_j off the diagonal and an analytic singular-head + midpoint-remainder
/// value on it. Immutable after assembly.
struct DiscreteGreenOperator {
    MeshPtr mesh;
    KernelBackend backend;
    Eigen::MatrixXd table;
    RegularizedSplit split;
    AssemblyReport report;

    int size() const { return static_cast<int>(table.rows()); }
    double gamma() const { return backend.spec.gamma; }
};

DiscreteGreenOperator assemble(const KernelBackend& backend, const MeshPtr& mesh,
                               const RegularizedSplit& split, int workers = 1);
DiscreteGreenOperator assemble(const KernelBackend& backend, const MeshPtr& mesh, int workers = 1);

/// (A f)_i; linear in f.
GridFunction apply_density(const DiscreteGreenOperator& op, const GridFunction& f);

/// Atoms evaluated exactly against the kernel (never projected); the density part
/// goes through the table. Atoms must be at least one cell radius off every node.
GridFunction apply_measure(const DiscreteGreenOperator& op, const RadonMeasure& mu);

/// Truncation envelope potentials in one pass: (-G[mu-], G[mu+]).
std::pair<GridFunction, GridFunction> envelope_potentials(const DiscreteGreenOperator& op,
                                                          const RadonMeasure& mu);

/// plain mesh pairing int u v dx = sum u_i v_i w_i
double mesh_inner(const GridFunction& u, const GridFunction& v);

/// G[f](p) at an off-mesh point by kernel re-evaluation; cells near p get the
/// analytic |x-y|^{2s-N} head plus midpoint remainder, the rest plain midpoint.
double green_potential_at(const DiscreteGreenOperator& op, const Eigen::VectorXd& p,
                          const GridFunction& f, bool corrected = true);

/// int G[xi] dmu with G[xi] at atoms by exact (plain) kernel re-evaluation; this is
/// the route the solver's weak-dual residual uses.
double pair_measure_with_potential(const DiscreteGreenOperator& op, const RadonMeasure& mu,
                                   const GridFunction& xi);

/// linear interpolation (N=1) / inverse-squared-distance over 4 nearest nodes (N=2)
double interpolate_at(const Mesh& mesh, const Eigen::VectorXd& values, const Eigen::VectorXd& p);

struct DualityGap {
    double lhs = 0.0;   // corrected-quadrature route: int G[mu] xi dx
    double rhs = 0.0;   // assembled-operator route: int G[xi] dmu, atoms by interpolation
    double gap = 0.0;
    double scale = 1.0;
};

/// Integration-by-parts check on two genuinely different discrete routes.
/// Requires mu to carry at least one atom (the density parts of both routes
/// coincide identically by weighted symmetry).
DualityGap duality_gap(const DiscreteGreenOperator& op, const RadonMeasure& mu,
                       const GridFunction& xi);

struct SupBoundReport {
    double ratio = 0.0;     // ||G f||_inf / ||f||_{L^r(delta^gamma)}
    double sup_norm = 0.0;
    double lr_norm = 0.0;
    double threshold = 0.0; // (N+gamma)/(2s)
    bool below_threshold = false;
    std::vector<std::pair<double, double>> modulus; // (distance, max |u_i - u_j|)
};

SupBoundReport sup_bound_check(const DiscreteGreenOperator& op, const GridFunction& f, double r);

struct TranslationReport {
    double value = 0.0; // sup over the family of || G[mu](.+h) - G[mu] ||_{L1(K)}
    double j1 = 0.0;    // near-field part at the base points
    double j2 = 0.0;    // near-field part at the shifted points
    double j3 = 0.0;    // regularized-kernel difference
    double eps = 0.0;
    double eps_pow_2s = 0.0;
    int window_size = 0;
};

/// Riesz-Frechet-Kolmogorov translation test on an interior window {delta >= margin}.
/// Shifted values are kernel re-evaluations, never grid interpolations. The family
/// must be normalized to unit weighted mass. Split diagnostics are filled when
/// `with_split_diagnostics` is set.
TranslationReport translation_equicontinuity(const DiscreteGreenOperator& op,
                                             const std::vector<RadonMeasure>& family,
                                             const Eigen::VectorXd& h, double margin,
                                             bool with_split_diagnostics = false);

/// Leading singular values of the delta^alpha-weighted operator (dense SVD; n <= 4000).
Eigen::VectorXd singular_value_decay(const DiscreteGreenOperator& op, double alpha);

/// Snap a requested location to the nearest cell corner (1-D cell edge / 2-D polar
/// cell corner): the deterministic placement that keeps atoms one cell radius off
/// every node.
Eigen::VectorXd snap_to_cell_corner(const Mesh& mesh, const Eigen::VectorXd& request);

void save_operator(const DiscreteGreenOperator& op, const std::string& path);
DiscreteGreenOperator load_operator(const std::string& path, const MeshPtr& mesh,
                                    const KernelBackend& backend);

} // namespace greenlab
