#include "greenlab/experiments.hpp"

#include <cmath>

namespace greenlab {

Eigen::VectorXd ExperimentPlan::approach_point(int n) const {
    return z * (1.0 - std::pow(2.0, -(n + 1.0)));
}

void ExperimentPlan::validate() const {
    backend.spec.validate();
    if (!(p > 1.0)) throw ExperimentError("plan: p must exceed 1");
    if (z.size() != backend.spec.dim || std::abs(z.norm() - backend.spec.radius) > 1e-12)
        throw ExperimentError("plan: z must be a boundary point");
    if (levels < 1) throw ExperimentError("plan: need at least one approach level");
    for (std::size_t i = 1; i < ray_distances.size(); ++i)
        if (!(ray_distances[i] < ray_distances[i - 1]))
            throw ExperimentError("plan: ray distances must decrease");
}

namespace {

double pstar_of(const DomainSpec& spec) {
    return critical_exponent(spec.dim, spec.s, spec.gamma, spec.gamma);
}

void require_subcritical(const DomainSpec& spec, double p) {
    const double ps = pstar_of(spec);
    if (!(p < ps))
        throw ExperimentError("criticality diagnostic: p = " + std::to_string(p) +
                              " is not below p* = " + std::to_string(ps));
}

GridFunction power_of(const GridFunction& u, double p) {
    Eigen::VectorXd v(u.size());
    for (int i = 0; i < u.size(); ++i)
        v[i] = u.values[i] <= 0.0 ? 0.0 : std::pow(u.values[i], p);
    return GridFunction(u.mesh, std::move(v), u.label + "^p");
}

} // namespace

BoundaryRunResult boundary_singularity_run(const ExperimentPlan& plan) {
    plan.validate();
    require_subcritical(plan.backend.spec, plan.p);
    const DomainSpec& spec = plan.backend.spec;
    const double gamma = spec.gamma;
    auto mesh = std::make_shared<const Mesh>(build_mesh(spec, plan.resolution, plan.grading));
    const DiscreteGreenOperator op = assemble(plan.backend, mesh);
    const Nonlinearity g = Nonlinearity::power(plan.p);

    BoundaryRunResult out;

    // limit equation u + G[u^p] = M(., z), solved directly with the Martin profile
    const GridFunction mprofile = make_grid_function(
        mesh, [&](const Eigen::VectorXd& x) { return martin_eval(plan.backend, x, plan.z); },
        "M(.,z)");
    Solution limit = picard_solve_forced(op, g, mprofile, plan.solve);
    if (!limit.report.converged)
        throw ExperimentError("boundary run: limit equation did not converge");
    out.limit_solution = limit.u;
    // re-certify against the affine formulation
    {
        GridFunction res(mesh, limit.u.values + op.table * power_of(limit.u, plan.p).values -
                                   mprofile.values,
                         "affine-residual");
        out.limit_residual = lq_norm(res, 1.0, gamma);
    }
    // uniqueness proxy: a second start from the supersolution
    {
        SolveConfig alt = plan.solve;
        alt.initial = mprofile.values;
        Solution second = picard_solve_forced(op, g, mprofile, alt);
        GridFunction diff(mesh, second.u.values - limit.u.values, "diff");
        out.uniqueness_gap = lq_norm(diff, 1.0, gamma);
    }

    // marching interior singularities
    for (int n = 1; n <= plan.levels; ++n) {
        const Eigen::VectorXd zn = snap_to_cell_corner(*mesh, plan.approach_point(n));
        const double dz = distance_to_boundary(spec, zn);
        RadonMeasure mu = RadonMeasure::dirac(zn, std::pow(dz, -gamma));
        Solution sn = picard_solve(op, g, mu, plan.solve);
        if (!sn.report.converged)
            throw ExperimentError("boundary run: interior solve did not converge at level " +
                                  std::to_string(n));
        GridFunction diff(mesh, sn.u.values - limit.u.values, "u_n-u");
        out.approach_delta.push_back(dz);
        out.convergence_l1.push_back(lq_norm(diff, 1.0, gamma));
    }
    out.convergence_decreasing = true;
    for (std::size_t i = 1; i < out.convergence_l1.size(); ++i)
        if (!(out.convergence_l1[i] < out.convergence_l1[i - 1])) out.convergence_decreasing = false;

    // ratio profile along the inward ray, via off-mesh kernel re-evaluation
    const GridFunction up = power_of(limit.u, plan.p);
    for (double d : plan.ray_distances) {
        const Eigen::VectorXd xd = plan.z * (1.0 - d / spec.radius);
        const double m = martin_eval(plan.backend, xd, plan.z);
        const double u_at = m - green_potential_at(op, xd, up, true);
        out.ray_distance.push_back(d);
        out.ratio_u_over_m.push_back(u_at / m);
    }
    out.ratio_monotone = true;
    for (std::size_t i = 1; i < out.ratio_u_over_m.size(); ++i)
        if (!(out.ratio_u_over_m[i] > out.ratio_u_over_m[i - 1])) out.ratio_monotone = false;
    out.ratio_terminal = out.ratio_u_over_m.empty() ? 0.0 : out.ratio_u_over_m.back();
    return out;
}

MartinDecayResult martin_source_decay(const ExperimentPlan& plan) {
    plan.validate();
    require_subcritical(plan.backend.spec, plan.p);
    const DomainSpec& spec = plan.backend.spec;
    auto mesh = std::make_shared<const Mesh>(build_mesh(spec, plan.resolution, plan.grading));
    const DiscreteGreenOperator op = assemble(plan.backend, mesh);
    const GridFunction mp = power_of(
        make_grid_function(mesh,
                           [&](const Eigen::VectorXd& x) {
                               return martin_eval(plan.backend, x, plan.z);
                           },
                           "M"),
        plan.p);
    MartinDecayResult out;
    for (double d : plan.ray_distances) {
        const Eigen::VectorXd xd = plan.z * (1.0 - d / spec.radius);
        const double m = martin_eval(plan.backend, xd, plan.z);
        out.ray_distance.push_back(d);
        out.ratio.push_back(green_potential_at(op, xd, mp, true) / m);
    }
    out.decreasing = true;
    for (std::size_t i = 1; i < out.ratio.size(); ++i)
        if (!(out.ratio[i] < out.ratio[i - 1])) out.decreasing = false;
    out.terminal = out.ratio.empty() ? 0.0 : out.ratio.back();
    return out;
}

StabilityResult stability_run(const KernelBackend& backend, const MeshPtr& mesh,
                              const Eigen::VectorXd& z0, const std::vector<double>& scales) {
    for (std::size_t i = 1; i < scales.size(); ++i)
        if (!(scales[i] < scales[i - 1]))
            throw ExperimentError("stability_run: scales must decrease");
    const DiscreteGreenOperator op = assemble(backend, mesh);
    const Eigen::VectorXd atom = snap_to_cell_corner(*mesh, z0);
    const RadonMeasure dirac = RadonMeasure::dirac(atom, 1.0);
    const GridFunction exact = apply_measure(op, dirac);
    StabilityResult out;
    for (double sc : scales) {
        const RadonMeasure smooth = mollify(dirac, sc, mesh);
        const GridFunction approx = apply_measure(op, smooth);
        GridFunction diff(mesh, approx.values - exact.values, "stab-diff");
        out.scales.push_back(sc);
        out.errors.push_back(lq_norm(diff, 1.0, backend.spec.gamma));
    }
    out.strictly_decreasing_prefix = 1;
    for (std::size_t i = 1; i < out.errors.size(); ++i) {
        if (out.errors[i] < out.errors[i - 1]) out.strictly_decreasing_prefix = static_cast<int>(i) + 1;
        else break;
    }
    out.quadrature_floor = out.errors.empty() ? 0.0 : out.errors.back();
    return out;
}

SweepResult criticality_sweep(const DomainSpec& spec,
                              const std::function<KernelBackend(const DomainSpec&)>& make_backend,
                              const std::vector<double>& p_values,
                              const std::vector<int>& resolutions,
                              const std::vector<double>& atom_distances, double grading) {
    if (resolutions.size() != atom_distances.size())
        throw ExperimentError("criticality_sweep: ladder and marching distances must align");
    SweepResult out;
    const double R = spec.radius;
    Eigen::VectorXd bdry = Eigen::VectorXd::Zero(spec.dim);
    bdry[0] = R;
    std::vector<std::pair<MeshPtr, Eigen::VectorXd>> levels;
    for (std::size_t l = 0; l < resolutions.size(); ++l) {
        auto mesh = std::make_shared<const Mesh>(build_mesh(spec, resolutions[l], grading));
        const Eigen::VectorXd z = snap_to_cell_corner(*mesh, bdry * (1.0 - atom_distances[l] / R));
        levels.push_back({mesh, z});
    }
    const KernelBackend backend = make_backend(spec);
    for (double p : p_values) {
        const Nonlinearity g = Nonlinearity::power(p);
        std::vector<double> masses;
        for (std::size_t l = 0; l < levels.size(); ++l) {
            const auto& [mesh, z] = levels[l];
            const double dz = distance_to_boundary(spec, z);
            double mass = 0.0;
            for (int i = 0; i < mesh->size(); ++i) {
                const double pot =
                    std::pow(dz, -spec.gamma) * green_eval(backend, mesh->node(i), z);
                mass += g(pot) * std::pow(mesh->delta[i], spec.gamma) * mesh->weights[i];
            }
            out.cells.push_back({p, resolutions[l], dz, mass});
            masses.push_back(mass);
        }
        SweepResult::Verdict v;
        v.p = p;
        v.growth = masses.back() / masses.front();
        if (v.growth < 3.0) v.classification = "bounded";
        else if (v.growth > 10.0) v.classification = "divergent";
        else v.classification = "indeterminate";
        out.verdicts.push_back(v);
    }
    return out;
}

} // namespace greenlab
