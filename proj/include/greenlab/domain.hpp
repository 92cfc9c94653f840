#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace greenlab {

struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Unit-ball domain B_R in R^N with the parameters (N, R, s, gamma) of the
/// kernel estimates. Only N = 1 (interval) and N = 2 (disk) are meshed.
struct DomainSpec {
    int dim = 1;
    double radius = 1.0;
    double s = 0.5;      // operator order, in (0,1)
    double gamma = 0.5;  // boundary exponent, in (0,1]

    void validate() const;
};

/// dist(x, boundary) = R - |x|. Negative result means x is outside the ball.
double distance_to_boundary(const DomainSpec& spec, const Eigen::VectorXd& x);

/// Midpoint-quadrature mesh of the ball: cell centroids, exact cell measures,
/// boundary distances. Immutable after construction.
struct Mesh {
    DomainSpec spec;
    Eigen::MatrixXd nodes;       // n x dim, cell centroids
    Eigen::VectorXd weights;     // cell measures, sum = |Omega|
    Eigen::VectorXd delta;       // R - |node|
    Eigen::VectorXd diameter;    // true cell diameter
    Eigen::VectorXd normal_extent; // cell extent in the boundary-normal direction
    std::vector<char> boundary_layer; // delta < layer threshold
    double layer_threshold = 0.0;
    double grading = 1.0;
    int resolution = 0;

    // interval only: cell edges (n+1, ascending); disk: radial ring edges
    Eigen::VectorXd edges;
    // disk only: per-ring angular counts and ring index of each node
    std::vector<int> ring_sizes;
    std::vector<int> node_ring;

    int size() const { return static_cast<int>(nodes.rows()); }
    Eigen::VectorXd node(int i) const { return nodes.row(i).transpose(); }
    /// radius of the measure-equivalent ball of cell i
    double cell_radius(int i) const;
    std::uint64_t hash() const;
    std::string to_json() const; // { "nodes": [...], "weights": [...], "delta": [...] }
};

/// Build the graded midpoint mesh. Spacing near the boundary scales like
/// delta^{1 - 1/grading}; grading = 1 is uniform. Deterministic.
Mesh build_mesh(const DomainSpec& spec, int resolution, double grading = 2.0);

} // namespace greenlab
