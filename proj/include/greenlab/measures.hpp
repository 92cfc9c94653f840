#pragma once

#include "greenlab/spaces.hpp"

#include <Eigen/Core>
#include <optional>
#include <vector>

namespace greenlab {

struct MeasureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Atom {
    Eigen::VectorXd location; // strictly inside the domain
    double weight = 0.0;      // signed
};

/// Radon measure = symbolic atoms + optional mesh density. Atoms are never
/// smeared onto the mesh, so G[delta_x0] is an exact kernel column.
struct RadonMeasure {
    std::vector<Atom> atoms;
    std::optional<GridFunction> density;

    static RadonMeasure dirac(Eigen::VectorXd location, double weight = 1.0);
    static RadonMeasure from_density(GridFunction f);
    static RadonMeasure zero() { return RadonMeasure{}; }

    bool has_density() const { return density.has_value(); }
    bool is_zero() const { return atoms.empty() && !density; }
    void validate(const DomainSpec& spec) const; // atoms strictly inside
    bool nonnegative() const;
};

/// sum_atoms |w| delta(x)^alpha + mesh quadrature of |density| delta^alpha
double weighted_total_variation(const RadonMeasure& mu, const DomainSpec& spec, double alpha,
                                const MeshPtr& mesh_for_density = nullptr);

/// (mu+, mu-): nonnegative parts; atom-level split plus pointwise density split.
std::pair<RadonMeasure, RadonMeasure> split_signs(const RadonMeasure& mu);

/// Replace every atom by a normalized C^2 polynomial bump of the given scale,
/// evaluated on the mesh and discretely renormalized to the exact atom weight.
/// Throws if a bump support would leave the domain.
RadonMeasure mollify(const RadonMeasure& mu, double scale, const MeshPtr& mesh);

/// The value of the C^2 bump profile: c (1 - (r/h)^2)^3 for r < h, mass 1 in R^N.
double bump_profile(int dim, double scale, double r);

} // namespace greenlab
