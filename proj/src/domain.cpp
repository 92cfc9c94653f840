#include "greenlab/domain.hpp"

#include "greenlab/special_functions.hpp"

#include <cmath>
#include <sstream>

namespace greenlab {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

void DomainSpec::validate() const {
    if (dim != 1 && dim != 2) throw DomainError("DomainSpec: only N = 1 and N = 2 are meshed");
    if (!(radius > 0.0)) throw DomainError("DomainSpec: radius must be positive");
    if (!(s > 0.0 && s < 1.0)) throw DomainError("DomainSpec: s must be in (0,1)");
    if (!(gamma > 0.0 && gamma <= 1.0)) throw DomainError("DomainSpec: gamma must be in (0,1]");
    if (!(dim > 2.0 * s)) throw DomainError("DomainSpec: N > 2s required");
}

double distance_to_boundary(const DomainSpec& spec, const Eigen::VectorXd& x) {
    if (x.size() != spec.dim) throw DomainError("distance_to_boundary: dimension mismatch");
    return spec.radius - x.norm();
}

double Mesh::cell_radius(int i) const {
    if (spec.dim == 1) return 0.5 * weights[i];
    return std::sqrt(weights[i] / kPi);
}

std::uint64_t Mesh::hash() const {
    std::uint64_t h = fnv1a64(nodes.data(), sizeof(double) * nodes.size());
    h = fnv1a64(weights.data(), sizeof(double) * weights.size(), h);
    return h;
}

std::string Mesh::to_json() const {
    std::ostringstream os;
    os.precision(17);
    auto emit = [&os](const char* key, auto&& write_row, int n) {
        os << '"' << key << "\":[";
        for (int i = 0; i < n; ++i) {
            if (i) os << ',';
            write_row(i);
        }
        os << ']';
    };
    os << '{';
    emit("nodes", [&](int i) {
        if (spec.dim == 1) { os << nodes(i, 0); return; }
        os << '[';
        for (int d = 0; d < spec.dim; ++d) { if (d) os << ','; os << nodes(i, d); }
        os << ']';
    }, size());
    os << ',';
    emit("weights", [&](int i) { os << weights[i]; }, size());
    os << ',';
    emit("delta", [&](int i) { os << delta[i]; }, size());
    os << '}';
    return os.str();
}

namespace {

// graded edge positions on [0, R]: r(t) = R(1 - (1-t)^g), so dr ~ delta^{1-1/g}
Eigen::VectorXd graded_edges(double R, int m, double g) {
    Eigen::VectorXd e(m + 1);
    for (int k = 0; k <= m; ++k) {
        const double t = static_cast<double>(k) / m;
        e[k] = R * (1.0 - std::pow(1.0 - t, g));
    }
    e[0] = 0.0;
    e[m] = R;
    return e;
}

Mesh build_interval(const DomainSpec& spec, int resolution, double grading) {
    const double R = spec.radius;
    const int half = (resolution + 1) / 2;
    const Eigen::VectorXd right = graded_edges(R, half, grading);
    const int n = 2 * half;
    Mesh mesh;
    mesh.spec = spec;
    mesh.edges.resize(n + 1);
    for (int k = 0; k <= half; ++k) {
        mesh.edges[half - k] = -right[k];
        mesh.edges[half + k] = right[k];
    }
    mesh.nodes.resize(n, 1);
    mesh.weights.resize(n);
    mesh.delta.resize(n);
    mesh.diameter.resize(n);
    mesh.normal_extent.resize(n);
    for (int i = 0; i < n; ++i) {
        const double a = mesh.edges[i], b = mesh.edges[i + 1];
        mesh.nodes(i, 0) = 0.5 * (a + b);
        mesh.weights[i] = b - a;
        mesh.delta[i] = R - std::abs(mesh.nodes(i, 0));
        mesh.diameter[i] = b - a;
        mesh.normal_extent[i] = b - a;
    }
    return mesh;
}

Mesh build_disk(const DomainSpec& spec, int resolution, double grading) {
    const double R = spec.radius;
    const int m = resolution; // radial rings
    const Eigen::VectorXd r = graded_edges(R, m, grading);
    Mesh mesh;
    mesh.spec = spec;
    mesh.edges = r;
    std::vector<double> cx, cy, cw, cdiam, cnorm;
    for (int j = 0; j < m; ++j) {
        const double r0 = r[j], r1 = r[j + 1];
        // angular count at the uniform-equivalent scale; boundary cells stay thin radially
        const double rmid = 0.5 * (r0 + r1);
        const int nj = std::max(6, static_cast<int>(std::ceil(2.0 * kPi * rmid * m / R)));
        mesh.ring_sizes.push_back(nj);
        const double dth = 2.0 * kPi / nj;
        const double area = 0.5 * (r1 * r1 - r0 * r0) * dth;
        // area centroid radius of the polar cell
        const double rc = (r1 * r1 + r1 * r0 + r0 * r0) > 0.0
                              ? (2.0 / 3.0) * (r1 * r1 * r1 - r0 * r0 * r0) / (r1 * r1 - r0 * r0)
                              : 0.0;
        for (int k = 0; k < nj; ++k) {
            const double th = (k + 0.5) * dth;
            cx.push_back(rc * std::cos(th));
            cy.push_back(rc * std::sin(th));
            cw.push_back(area);
            cdiam.push_back(std::max(r1 - r0, rmid * dth));
            cnorm.push_back(r1 - r0);
            mesh.node_ring.push_back(j);
        }
    }
    const int n = static_cast<int>(cx.size());
    mesh.nodes.resize(n, 2);
    mesh.weights.resize(n);
    mesh.delta.resize(n);
    mesh.diameter.resize(n);
    mesh.normal_extent.resize(n);
    for (int i = 0; i < n; ++i) {
        mesh.nodes(i, 0) = cx[i];
        mesh.nodes(i, 1) = cy[i];
        mesh.weights[i] = cw[i];
        mesh.delta[i] = R - mesh.nodes.row(i).norm();
        mesh.diameter[i] = cdiam[i];
        mesh.normal_extent[i] = cnorm[i];
    }
    return mesh;
}

} // namespace

Mesh build_mesh(const DomainSpec& spec, int resolution, double grading) {
    spec.validate();
    if (resolution < 4) throw DomainError("build_mesh: resolution must be >= 4");
    if (!(grading >= 1.0)) throw DomainError("build_mesh: grading must be >= 1");
    Mesh mesh = (spec.dim == 1) ? build_interval(spec, resolution, grading)
                                : build_disk(spec, resolution, grading);
    mesh.grading = grading;
    mesh.resolution = resolution;
    mesh.layer_threshold = spec.radius / 8.0;
    mesh.boundary_layer.resize(mesh.size());
    for (int i = 0; i < mesh.size(); ++i)
        mesh.boundary_layer[i] = mesh.delta[i] < mesh.layer_threshold ? 1 : 0;
    return mesh;
}

} // namespace greenlab
