#include <doctest.h>

#include "greenlab/domain.hpp"

#include <cmath>
#include <cstring>

using namespace greenlab;

namespace {
constexpr double kPi = 3.14159265358979323846;

Eigen::VectorXd pt1(double x) {
    Eigen::VectorXd p(1);
    p[0] = x;
    return p;
}
Eigen::VectorXd pt2(double x, double y) {
    Eigen::VectorXd p(2);
    p << x, y;
    return p;
}
} // namespace

TEST_CASE("distance to boundary") {
    DomainSpec spec{1, 1.0, 0.25, 0.25};
    CHECK(distance_to_boundary(spec, pt1(0.0)) == doctest::Approx(1.0));
    CHECK(distance_to_boundary(spec, pt1(0.75)) == doctest::Approx(0.25));
    DomainSpec disk{2, 1.0, 0.5, 0.5};
    CHECK(distance_to_boundary(disk, pt2(0.3, 0.4)) == doctest::Approx(0.5));
    CHECK(distance_to_boundary(disk, pt2(1.5, 0.0)) < 0.0); // outside flagged by sign
}

TEST_CASE("spec validation") {
    CHECK_THROWS_AS((DomainSpec{3, 1.0, 0.5, 0.5}).validate(), DomainError); // only N=1,2 meshed
    CHECK_THROWS_AS((DomainSpec{1, 1.0, 0.6, 0.6}).validate(), DomainError); // N > 2s
    CHECK_THROWS_AS((DomainSpec{1, 1.0, 0.25, 1.5}).validate(), DomainError);
    CHECK_NOTHROW((DomainSpec{2, 1.0, 0.75, 0.5}).validate());
}

TEST_CASE("uniform interval mesh: 8 cells, total measure 2") {
    DomainSpec spec{1, 1.0, 0.25, 0.25};
    const Mesh mesh = build_mesh(spec, 8, 1.0);
    CHECK(mesh.size() == 8);
    CHECK(mesh.weights.sum() == doctest::Approx(2.0).epsilon(1e-12));
    for (int i = 0; i < mesh.size(); ++i) {
        CHECK(mesh.weights[i] == doctest::Approx(0.25).epsilon(1e-12));
        CHECK(mesh.delta[i] > 0.0);
    }
}

TEST_CASE("disk mesh: total measure pi") {
    DomainSpec spec{2, 1.0, 0.5, 0.5};
    const Mesh mesh = build_mesh(spec, 8, 1.0);
    CHECK(mesh.weights.sum() == doctest::Approx(kPi).epsilon(1e-6));
    CHECK(mesh.weights.minCoeff() > 0.0);
    for (int i = 0; i < mesh.size(); ++i) CHECK(mesh.delta[i] > 0.0);
}

TEST_CASE("graded mesh refines at the boundary") {
    DomainSpec spec{1, 1.0, 0.25, 0.25};
    const Mesh mesh = build_mesh(spec, 64, 2.0);
    double smallest_boundary = 1e9, largest_interior = 0.0;
    for (int i = 0; i < mesh.size(); ++i) {
        if (mesh.boundary_layer[i]) smallest_boundary = std::min(smallest_boundary, mesh.normal_extent[i]);
        else largest_interior = std::max(largest_interior, mesh.normal_extent[i]);
    }
    CHECK(smallest_boundary <= 0.25 * largest_interior);
    // disk: boundary refinement in the normal direction
    DomainSpec disk{2, 1.0, 0.5, 0.5};
    const Mesh dm = build_mesh(disk, 16, 2.0);
    double sb = 1e9, li = 0.0;
    for (int i = 0; i < dm.size(); ++i) {
        if (dm.boundary_layer[i]) sb = std::min(sb, dm.normal_extent[i]);
        else li = std::max(li, dm.normal_extent[i]);
    }
    CHECK(sb <= 0.5 * li);
}

TEST_CASE("build_mesh input guards") {
    DomainSpec spec{1, 1.0, 0.25, 0.25};
    CHECK_THROWS_AS(build_mesh(spec, 3, 1.0), DomainError);
    CHECK_THROWS_AS(build_mesh(DomainSpec{3, 1.0, 0.25, 0.25}, 8, 1.0), DomainError);
}

TEST_CASE("quadrature of delta^alpha converges with order >= 1") {
    // interval: int (1-|x|)^a dx = 2/(1+a); disk: 2 pi int_0^1 (1-r)^a r dr
    DomainSpec spec{1, 1.0, 0.25, 0.25};
    const double a = 0.25;
    const double exact1 = 2.0 / (1.0 + a);
    auto quad_err = [&](int n) {
        const Mesh m = build_mesh(spec, n, 2.0);
        double q = 0.0;
        for (int i = 0; i < m.size(); ++i) q += std::pow(m.delta[i], a) * m.weights[i];
        return std::abs(q - exact1);
    };
    const double e1 = quad_err(64), e2 = quad_err(128), e3 = quad_err(256);
    CHECK(e2 < e1);
    CHECK(e3 < e2);
    CHECK(e1 / e2 >= 2.0); // observed order >= 1
    CHECK(e2 / e3 >= 2.0);

    DomainSpec disk{2, 1.0, 0.5, 0.5};
    const double g = 0.5;
    const double exact2 = 2.0 * kPi * (1.0 / (1.0 + g) - 1.0 / (2.0 + g));
    auto disk_err = [&](int n) {
        const Mesh m = build_mesh(disk, n, 2.0);
        double q = 0.0;
        for (int i = 0; i < m.size(); ++i) q += std::pow(m.delta[i], g) * m.weights[i];
        return std::abs(q - exact2);
    };
    const double d1 = disk_err(8), d2 = disk_err(16), d3 = disk_err(32);
    CHECK(d2 < d1);
    CHECK(d1 / d2 >= 2.0);
    CHECK(d2 / d3 >= 2.0);
}

TEST_CASE("meshes are bit-identical across rebuilds") {
    DomainSpec spec{1, 1.0, 0.25, 0.25};
    const Mesh a = build_mesh(spec, 128, 2.0);
    const Mesh b = build_mesh(spec, 128, 2.0);
    CHECK(a.hash() == b.hash());
    CHECK(std::memcmp(a.nodes.data(), b.nodes.data(), sizeof(double) * a.nodes.size()) == 0);
    DomainSpec disk{2, 1.0, 0.5, 0.5};
    CHECK(build_mesh(disk, 12, 2.0).hash() == build_mesh(disk, 12, 2.0).hash());
}

TEST_CASE("mesh json export carries nodes, weights, delta") {
    DomainSpec spec{1, 1.0, 0.25, 0.25};
    const Mesh m = build_mesh(spec, 8, 1.0);
    const std::string js = m.to_json();
    CHECK(js.find("\"nodes\"") != std::string::npos);
    CHECK(js.find("\"weights\"") != std::string::npos);
    CHECK(js.find("\"delta\"") != std::string::npos);
}
