#pragma once

#include "greenlab/solver.hpp"

#include <string>
#include <vector>

namespace greenlab {

struct ExperimentError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Shared plan for the limit-theorem reproductions. The approach sequence is
/// geometric along the inward normal: z_n = (1 - 2^{-n-1}) z.
struct ExperimentPlan {
    KernelBackend backend;
    double p = 1.3;
    Eigen::VectorXd z;             // boundary point, |z| = R
    int levels = 6;                // number of interior singularities z_1..z_levels
    int resolution = 512;
    double grading = 4.0;
    std::vector<double> ray_distances = {0.2, 0.05, 0.0125, 3.125e-3, 7.8125e-4,
                                         1.953125e-4, 4.8828125e-5};
    SolveConfig solve;

    Eigen::VectorXd approach_point(int n) const; // z_n
    void validate() const;
};

struct BoundaryRunResult {
    std::vector<double> approach_delta;   // delta(z_n)
    std::vector<double> convergence_l1;   // || u_n - u ||_{L1(delta^gamma)}
    std::vector<double> ray_distance;
    std::vector<double> ratio_u_over_m;   // u(x_d) / M(x_d, z)
    GridFunction limit_solution;
    double limit_residual = 0.0;          // weak-dual residual of the limit solution
    double uniqueness_gap = 0.0;          // two-start Picard disagreement
    bool convergence_decreasing = false;
    bool ratio_monotone = false;
    double ratio_terminal = 0.0;
};

/// Theorem "boundary isolated singularity": solves u_n + G[u_n^p] = G[mu_n] with
/// mu_n = delta(z_n)^{-gamma} Dirac(z_n), solves the limit equation
/// u + G[u^p] = M(., z) directly, and profiles u/M along the inward ray.
/// Refuses p >= p* (criticality diagnostic).
BoundaryRunResult boundary_singularity_run(const ExperimentPlan& plan);

struct MartinDecayResult {
    std::vector<double> ray_distance;
    std::vector<double> ratio;       // G[M(.,z)^p](x_d) / M(x_d, z)
    bool decreasing = false;
    double terminal = 0.0;
};

/// Proposition G[M^p]/M -> 0 at the boundary point, along the inward ray.
MartinDecayResult martin_source_decay(const ExperimentPlan& plan);

struct StabilityResult {
    std::vector<double> scales;
    std::vector<double> errors;          // || G[mollified] - G[dirac] ||_{L1(delta^gamma)}
    int strictly_decreasing_prefix = 0;  // how many leading steps decrease strictly
    double quadrature_floor = 0.0;
};

/// Weak-convergence stability: mollified Diracs at z0, halving scales.
StabilityResult stability_run(const KernelBackend& backend, const MeshPtr& mesh,
                              const Eigen::VectorXd& z0, const std::vector<double>& scales);

struct SweepCell {
    double p = 0.0;
    int resolution = 0;
    double atom_delta = 0.0;
    double mass = 0.0; // int g(G[mu+]) delta^gamma dx
};

struct SweepResult {
    std::vector<SweepCell> cells;
    // per-p: last/first mass ratio over the ladder and its classification
    struct Verdict {
        double p = 0.0;
        double growth = 0.0;
        std::string classification; // "bounded", "divergent", "indeterminate"
    };
    std::vector<Verdict> verdicts;
};

/// Envelope-mass criticality sweep with the Dirac marching construction
/// mu_l = delta(z_l)^{-gamma} Dirac(z_l): the atom approaches the boundary with the
/// mesh ladder (snapped to cell corners), so the mass diverges iff p > p*.
SweepResult criticality_sweep(const DomainSpec& spec,
                              const std::function<KernelBackend(const DomainSpec&)>& make_backend,
                              const std::vector<double>& p_values,
                              const std::vector<int>& resolutions,
                              const std::vector<double>& atom_distances, double grading = 5.0);

} // namespace greenlab
