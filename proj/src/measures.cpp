#include "greenlab/measures.hpp"

#include <cmath>

namespace greenlab {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

RadonMeasure RadonMeasure::dirac(Eigen::VectorXd location, double weight) {
    RadonMeasure mu;
    mu.atoms.push_back(Atom{std::move(location), weight});
    return mu;
}

RadonMeasure RadonMeasure::from_density(GridFunction f) {
    RadonMeasure mu;
    mu.density = std::move(f);
    return mu;
}

void RadonMeasure::validate(const DomainSpec& spec) const {
    for (const auto& a : atoms) {
        if (a.location.size() != spec.dim) throw MeasureError("atom dimension mismatch");
        if (!(a.location.norm() < spec.radius)) throw MeasureError("atom not strictly inside the domain");
    }
    if (density) density->check_finite();
}

bool RadonMeasure::nonnegative() const {
    for (const auto& a : atoms)
        if (a.weight < 0.0) return false;
    if (density && density->values.minCoeff() < 0.0) return false;
    return true;
}

double weighted_total_variation(const RadonMeasure& mu, const DomainSpec& spec, double alpha,
                                const MeshPtr& mesh_for_density) {
    if (!(alpha >= 0.0)) throw MeasureError("weighted_total_variation: alpha must be >= 0");
    double total = 0.0;
    for (const auto& a : mu.atoms)
        total += std::abs(a.weight) * std::pow(distance_to_boundary(spec, a.location), alpha);
    if (mu.density) {
        (void)mesh_for_density; // density carries its own mesh
        GridFunction absd = *mu.density;
        absd.values = absd.values.cwiseAbs();
        total += weighted_integral(absd, alpha);
    }
    return total;
}

std::pair<RadonMeasure, RadonMeasure> split_signs(const RadonMeasure& mu) {
    RadonMeasure pos, neg;
    for (const auto& a : mu.atoms) {
        if (a.weight > 0.0) pos.atoms.push_back(a);
        else if (a.weight < 0.0) neg.atoms.push_back(Atom{a.location, -a.weight});
    }
    if (mu.density) {
        GridFunction p = *mu.density, n = *mu.density;
        p.values = p.values.cwiseMax(0.0);
        n.values = (-n.values).cwiseMax(0.0);
        p.label = mu.density->label + "+";
        n.label = mu.density->label + "-";
        pos.density = std::move(p);
        neg.density = std::move(n);
    }
    return {std::move(pos), std::move(neg)};
}

double bump_profile(int dim, double h, double r) {
    if (r >= h) return 0.0;
    const double u = r / h;
    const double core = std::pow(1.0 - u * u, 3);
    // normalization: int (1-u^2)^3 over the unit ball = 32/35 (N=1), pi/4 (N=2)
    const double unit_mass = (dim == 1) ? 32.0 / 35.0 : kPi / 4.0;
    return core / (unit_mass * std::pow(h, dim));
}

RadonMeasure mollify(const RadonMeasure& mu, double scale, const MeshPtr& mesh) {
    if (!(scale > 0.0)) throw MeasureError("mollify: scale must be positive");
    const DomainSpec& spec = mesh->spec;
    mu.validate(spec);
    Eigen::VectorXd dens = Eigen::VectorXd::Zero(mesh->size());
    if (mu.density) dens = mu.density->values;
    for (const auto& a : mu.atoms) {
        if (distance_to_boundary(spec, a.location) <= scale)
            throw MeasureError("mollify: bump support would leave the domain (scale too large)");
        Eigen::VectorXd bump(mesh->size());
        for (int i = 0; i < mesh->size(); ++i)
            bump[i] = bump_profile(spec.dim, scale, (mesh->node(i) - a.location).norm());
        const double discrete_mass = bump.dot(mesh->weights);
        if (!(discrete_mass > 0.0))
            throw MeasureError("mollify: bump unresolved by the mesh (scale below cell size)");
        // renormalize on the mesh so the unweighted mass matches the atom exactly
        dens += (a.weight / discrete_mass) * bump;
    }
    RadonMeasure out;
    out.density = GridFunction(mesh, std::move(dens), "mollified");
    return out;
}

} // namespace greenlab
