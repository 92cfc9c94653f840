#include "greenlab/greenop.hpp"

#include "greenlab/special_functions.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <thread>

#include <nlohmann/json.hpp>

namespace greenlab {

namespace {
constexpr double kPi = 3.14159265358979323846;

double surface_measure(int N) { return N == 1 ? 2.0 : 2.0 * kPi; }

// exact integral of |t - y0|^{2s-1} over [a, b] (1-D head)
double head_integral_1d(double a, double b, double y0, double s) {
    auto F = [s](double t) {
        return std::copysign(std::pow(std::abs(t), 2.0 * s), t) / (2.0 * s);
    };
    return F(b - y0) - F(a - y0);
}

struct PolarCell {
    double r0, r1, th0, th1;
};

PolarCell polar_cell_of(const Mesh& mesh, int i) {
    const int ring = mesh.node_ring[i];
    const double r0 = mesh.edges[ring], r1 = mesh.edges[ring + 1];
    const int nj = mesh.ring_sizes[ring];
    const double dth = 2.0 * kPi / nj;
    double th = std::atan2(mesh.nodes(i, 1), mesh.nodes(i, 0));
    if (th < 0.0) th += 2.0 * kPi;
    const int k = std::min(nj - 1, static_cast<int>(th / dth));
    return {r0, r1, k * dth, (k + 1) * dth};
}

// integral of |x - y0|^{2s-2} over a polar cell: midpoint subcells, the subcell
// containing y0 by an equal-area disk head centered at y0
double head_integral_2d(const Mesh& mesh, int i, const Eigen::VectorXd& y0, double s) {
    const PolarCell c = polar_cell_of(mesh, i);
    const int K = 6;
    double total = 0.0;
    for (int a = 0; a < K; ++a) {
        for (int b = 0; b < K; ++b) {
            const double ra = c.r0 + (c.r1 - c.r0) * (a + 0.0) / K;
            const double rb = c.r0 + (c.r1 - c.r0) * (a + 1.0) / K;
            const double ta = c.th0 + (c.th1 - c.th0) * (b + 0.0) / K;
            const double tb = c.th0 + (c.th1 - c.th0) * (b + 1.0) / K;
            const double area = 0.5 * (rb * rb - ra * ra) * (tb - ta);
            const double rc = 0.5 * (ra + rb), tc = 0.5 * (ta + tb);
            const Eigen::Vector2d xc(rc * std::cos(tc), rc * std::sin(tc));
            const double d = (xc - y0).norm();
            const double sigma = std::sqrt(area / kPi);
            if (d < sigma) {
                total += 2.0 * kPi * std::pow(sigma, 2.0 * s) / (2.0 * s);
            } else {
                total += std::pow(d, 2.0 * s - 2.0) * area;
            }
        }
    }
    return total;
}

double head_integral(const Mesh& mesh, int i, const Eigen::VectorXd& y0, double s) {
    if (mesh.spec.dim == 1)
        return head_integral_1d(mesh.edges[i], mesh.edges[i + 1], y0[0], s);
    return head_integral_2d(mesh, i, y0, s);
}

Eigen::VectorXd inward_probe(const Mesh& mesh, int i, double offset) {
    Eigen::VectorXd x = mesh.node(i);
    Eigen::VectorXd dir;
    if (x.norm() > 1e-12) dir = -x.normalized();
    else {
        dir = Eigen::VectorXd::Zero(x.size());
        dir[0] = 1.0;
    }
    return x + offset * dir;
}

} // namespace

TestFunction make_test_function(const MeshPtr& mesh, const GridFunction& w) {
    w.check_finite();
    if (w.mesh.get() != mesh.get()) throw GreenOpError("make_test_function: mesh mismatch");
    TestFunction tf;
    tf.bound_factor = w;
    Eigen::VectorXd xi(mesh->size());
    const double g = mesh->spec.gamma;
    for (int i = 0; i < mesh->size(); ++i) xi[i] = std::pow(mesh->delta[i], g) * w.values[i];
    tf.xi = GridFunction(mesh, std::move(xi), "delta^g*" + w.label);
    return tf;
}

TestFunction make_test_function(const MeshPtr& mesh,
                                const std::function<double(const Eigen::VectorXd&)>& w,
                                std::string label) {
    return make_test_function(mesh, make_grid_function(mesh, w, std::move(label)));
}

DiscreteGreenOperator assemble(const KernelBackend& backend, const MeshPtr& mesh, int workers) {
    // default split: beta at the smallest admissible integer offset, eps = 4 cells
    const double hbar = mesh->normal_extent.maxCoeff();
    return assemble(backend, mesh, RegularizedSplit::with_default_beta(backend.spec, 4.0 * hbar),
                    workers);
}

DiscreteGreenOperator assemble(const KernelBackend& backend, const MeshPtr& mesh,
                               const RegularizedSplit& split, int workers) {
    if (backend.spec.dim != mesh->spec.dim || std::abs(backend.spec.radius - mesh->spec.radius) > 0.0)
        throw GreenOpError("assemble: backend/mesh domain mismatch");
    const int n = mesh->size();
    DiscreteGreenOperator op;
    op.mesh = mesh;
    op.backend = backend;
    op.split = split;
    op.table.resize(n, n);
    const double s = backend.spec.s;
    const int N = backend.spec.dim;

    auto fill_rows = [&](int lo, int hi) {
        for (int i = lo; i < hi; ++i) {
            const Eigen::VectorXd xi = mesh->node(i);
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                op.table(i, j) = green_eval(backend, xi, mesh->node(j)) * mesh->weights[j];
            }
            // diagonal cell: analytic singular head over the measure-equivalent ball
            // plus the midpoint value of the smooth remainder
            const double sigma = mesh->cell_radius(i);
            const double head =
                backend.head_coeff * surface_measure(N) * std::pow(sigma, 2.0 * s) / (2.0 * s);
            const Eigen::VectorXd probe = inward_probe(*mesh, i, 0.5 * sigma);
            const double pd = (xi - probe).norm();
            const double remainder =
                green_eval(backend, xi, probe) - backend.head_coeff * std::pow(pd, 2.0 * s - N);
            op.table(i, i) = head + mesh->weights[i] * remainder;
        }
    };

    workers = std::max(1, workers);
    if (workers == 1) {
        fill_rows(0, n);
    } else {
        std::vector<std::thread> pool;
        const int chunk = (n + workers - 1) / workers;
        for (int w = 0; w < workers; ++w) {
            const int lo = w * chunk, hi = std::min(n, lo + chunk);
            if (lo < hi) pool.emplace_back(fill_rows, lo, hi);
        }
        for (auto& t : pool) t.join();
    }

    op.report.split_eps = split.eps;
    op.report.split_beta = split.beta;
    int clamped = 0;
    for (int i = 0; i < n; ++i) {
        if (op.table(i, i) < 0.0) {
            op.table(i, i) = 0.0;
            ++clamped;
        }
    }
    op.report.clamped_diagonals = clamped;
    op.report.min_diagonal = op.table.diagonal().minCoeff();
    return op;
}

GridFunction apply_density(const DiscreteGreenOperator& op, const GridFunction& f) {
    if (f.mesh.get() != op.mesh.get()) throw GreenOpError("apply_density: mesh mismatch");
    f.check_finite();
    return GridFunction(op.mesh, op.table * f.values, "G[" + f.label + "]");
}

GridFunction apply_measure(const DiscreteGreenOperator& op, const RadonMeasure& mu) {
    const Mesh& mesh = *op.mesh;
    mu.validate(mesh.spec);
    Eigen::VectorXd out = Eigen::VectorXd::Zero(mesh.size());
    for (const auto& atom : mu.atoms) {
        // refuse atoms sitting on (or inside one cell radius of) a node
        int nearest = 0;
        double dmin = std::numeric_limits<double>::infinity();
        for (int i = 0; i < mesh.size(); ++i) {
            const double d = (mesh.node(i) - atom.location).norm();
            if (d < dmin) { dmin = d; nearest = i; }
        }
        if (dmin < (1.0 - 1e-9) * mesh.cell_radius(nearest))
            throw GreenOpError("apply_measure: atom-on-node collision (within one cell radius)");
        for (int i = 0; i < mesh.size(); ++i)
            out[i] += atom.weight * green_eval(op.backend, mesh.node(i), atom.location);
    }
    if (mu.density) out += op.table * mu.density->values;
    return GridFunction(op.mesh, std::move(out), "G[mu]");
}

std::pair<GridFunction, GridFunction> envelope_potentials(const DiscreteGreenOperator& op,
                                                          const RadonMeasure& mu) {
    auto [pos, neg] = split_signs(mu);
    GridFunction vplus = apply_measure(op, pos);
    GridFunction vminus = apply_measure(op, neg);
    vminus.values = -vminus.values;
    vminus.label = "-G[mu-]";
    vplus.label = "G[mu+]";
    return {std::move(vminus), std::move(vplus)};
}

double mesh_inner(const GridFunction& u, const GridFunction& v) {
    if (u.mesh.get() != v.mesh.get()) throw GreenOpError("mesh_inner: mesh mismatch");
    return (u.values.array() * v.values.array() * u.mesh->weights.array()).sum();
}

double green_potential_at(const DiscreteGreenOperator& op, const Eigen::VectorXd& p,
                          const GridFunction& f, bool corrected) {
    const Mesh& mesh = *op.mesh;
    const KernelBackend& b = op.backend;
    const double s = b.spec.s;
    const int N = b.spec.dim;
    double total = 0.0;
    for (int i = 0; i < mesh.size(); ++i) {
        const double d = (mesh.node(i) - p).norm();
        if (d == 0.0) throw GreenOpError("green_potential_at: point coincides with a node");
        const double sigma = mesh.cell_radius(i);
        if (corrected && d <= 3.0 * sigma) {
            const double head = b.head_coeff * head_integral(mesh, i, p, s);
            const double rem = green_eval(b, mesh.node(i), p) - b.head_coeff * std::pow(d, 2.0 * s - N);
            total += (head + rem * mesh.weights[i]) * f.values[i];
        } else {
            total += green_eval(b, mesh.node(i), p) * mesh.weights[i] * f.values[i];
        }
    }
    return total;
}

double pair_measure_with_potential(const DiscreteGreenOperator& op, const RadonMeasure& mu,
                                   const GridFunction& xi) {
    const Mesh& mesh = *op.mesh;
    double total = 0.0;
    for (const auto& atom : mu.atoms) {
        double gxi = 0.0;
        for (int j = 0; j < mesh.size(); ++j)
            gxi += green_eval(op.backend, atom.location, mesh.node(j)) * mesh.weights[j] *
                   xi.values[j];
        total += atom.weight * gxi;
    }
    if (mu.density) total += mesh_inner(apply_density(op, *mu.density), xi);
    return total;
}

double interpolate_at(const Mesh& mesh, const Eigen::VectorXd& values, const Eigen::VectorXd& p) {
    if (mesh.spec.dim == 1) {
        const double x = p[0];
        // nodes ascend by construction
        int hi = 0;
        while (hi < mesh.size() && mesh.nodes(hi, 0) < x) ++hi;
        if (hi == 0) hi = 1;
        if (hi == mesh.size()) hi = mesh.size() - 1;
        const int lo = hi - 1;
        const double x0 = mesh.nodes(lo, 0), x1 = mesh.nodes(hi, 0);
        const double t = (x - x0) / (x1 - x0);
        return (1.0 - t) * values[lo] + t * values[hi];
    }
    // inverse-squared-distance over the 4 nearest nodes
    std::vector<std::pair<double, int>> near;
    near.reserve(mesh.size());
    for (int i = 0; i < mesh.size(); ++i) near.push_back({(mesh.node(i) - p).norm(), i});
    std::partial_sort(near.begin(), near.begin() + 4, near.end());
    double wsum = 0.0, vsum = 0.0;
    for (int k = 0; k < 4; ++k) {
        const double d = std::max(near[k].first, 1e-300);
        const double w = 1.0 / (d * d);
        wsum += w;
        vsum += w * values[near[k].second];
    }
    return vsum / wsum;
}

DualityGap duality_gap(const DiscreteGreenOperator& op, const RadonMeasure& mu,
                       const GridFunction& xi) {
    if (mu.atoms.empty())
        throw GreenOpError("duality_gap: needs atomic mass (density routes coincide identically)");
    const Eigen::VectorXd a_xi = op.table * xi.values;
    DualityGap out;
    double scale = 0.0;
    for (const auto& atom : mu.atoms) {
        const double route1 = green_potential_at(op, atom.location, xi, true);
        const double route2 = interpolate_at(*op.mesh, a_xi, atom.location);
        out.lhs += atom.weight * route1;
        out.rhs += atom.weight * route2;
        scale += std::abs(atom.weight * route1);
    }
    if (mu.density) {
        const double shared = mesh_inner(apply_density(op, *mu.density), xi);
        out.lhs += shared;
        out.rhs += shared;
        scale += std::abs(shared);
    }
    out.gap = std::abs(out.lhs - out.rhs);
    out.scale = std::max(scale, 1e-300);
    return out;
}

SupBoundReport sup_bound_check(const DiscreteGreenOperator& op, const GridFunction& f, double r) {
    const DomainSpec& spec = op.backend.spec;
    SupBoundReport rep;
    rep.threshold = (spec.dim + spec.gamma) / (2.0 * spec.s);
    rep.below_threshold = !(r > rep.threshold);
    const GridFunction u = apply_density(op, f);
    rep.sup_norm = u.values.cwiseAbs().maxCoeff();
    rep.lr_norm = lq_norm(f, r, spec.gamma);
    rep.ratio = rep.lr_norm > 0.0 ? rep.sup_norm / rep.lr_norm : 0.0;
    const Mesh& mesh = *op.mesh;
    const double hbar = mesh.diameter.maxCoeff();
    for (double dist : {1.5 * hbar, 3.0 * hbar, 6.0 * hbar}) {
        double worst = 0.0;
        for (int i = 0; i < mesh.size(); ++i)
            for (int j = i + 1; j < mesh.size(); ++j)
                if ((mesh.node(i) - mesh.node(j)).norm() <= dist)
                    worst = std::max(worst, std::abs(u.values[i] - u.values[j]));
        rep.modulus.push_back({dist, worst});
    }
    return rep;
}

namespace {

double kernel_sum_at(const DiscreteGreenOperator& op, const Eigen::VectorXd& x,
                     const RadonMeasure& mu, int part) {
    // part: 0 = full G, 1 = G^eps, 2 = H^eps
    double v = 0.0;
    auto eval = [&](const Eigen::VectorXd& y) {
        if (part == 0) return green_eval(op.backend, x, y);
        const KernelSplitValue sp = kernel_split(op.backend, op.split, x, y);
        return part == 1 ? sp.regular : sp.nearfield;
    };
    for (const auto& atom : mu.atoms) v += atom.weight * eval(atom.location);
    if (mu.density) {
        const Mesh& mesh = *op.mesh;
        for (int j = 0; j < mesh.size(); ++j) {
            if ((mesh.node(j) - x).norm() == 0.0) continue;
            v += eval(mesh.node(j)) * mesh.weights[j] * mu.density->values[j];
        }
    }
    return v;
}

} // namespace

TranslationReport translation_equicontinuity(const DiscreteGreenOperator& op,
                                             const std::vector<RadonMeasure>& family,
                                             const Eigen::VectorXd& h, double margin,
                                             bool with_split_diagnostics) {
    const Mesh& mesh = *op.mesh;
    const DomainSpec& spec = op.backend.spec;
    if (h.size() != spec.dim) throw GreenOpError("translation_equicontinuity: bad shift dimension");
    if (!(margin > h.norm()))
        throw GreenOpError("translation_equicontinuity: window margin must exceed |h|");
    std::vector<int> window;
    for (int i = 0; i < mesh.size(); ++i) {
        if (mesh.delta[i] >= margin) {
            if (!((mesh.node(i) + h).norm() < spec.radius))
                throw GreenOpError("translation_equicontinuity: window violation (K + h not in domain)");
            window.push_back(i);
        }
    }
    TranslationReport rep;
    rep.window_size = static_cast<int>(window.size());
    rep.eps = op.split.eps;
    rep.eps_pow_2s = std::pow(op.split.eps, 2.0 * spec.s);
    for (const auto& mu : family) {
        const double mass = weighted_total_variation(mu, spec, spec.gamma);
        if (std::abs(mass - 1.0) > 1e-8)
            throw GreenOpError("translation_equicontinuity: family must have unit weighted mass");
        double total = 0.0, tj1 = 0.0, tj2 = 0.0, tj3 = 0.0;
        for (int i : window) {
            const Eigen::VectorXd x = mesh.node(i);
            const Eigen::VectorXd xh = x + h;
            total += std::abs(kernel_sum_at(op, xh, mu, 0) - kernel_sum_at(op, x, mu, 0)) *
                     mesh.weights[i];
            if (with_split_diagnostics) {
                const double hx = kernel_sum_at(op, x, mu, 2);
                const double hxh = kernel_sum_at(op, xh, mu, 2);
                const double gx = kernel_sum_at(op, x, mu, 1);
                const double gxh = kernel_sum_at(op, xh, mu, 1);
                tj1 += std::abs(hx) * mesh.weights[i];
                tj2 += std::abs(hxh) * mesh.weights[i];
                tj3 += std::abs(gxh - gx) * mesh.weights[i];
            }
        }
        rep.value = std::max(rep.value, total);
        rep.j1 = std::max(rep.j1, tj1);
        rep.j2 = std::max(rep.j2, tj2);
        rep.j3 = std::max(rep.j3, tj3);
    }
    return rep;
}

Eigen::VectorXd singular_value_decay(const DiscreteGreenOperator& op, double alpha) {
    const int n = op.size();
    if (n > 4000) throw GreenOpError("singular_value_decay: mesh too large for dense SVD (> 4000)");
    const Mesh& mesh = *op.mesh;
    Eigen::MatrixXd B(n, n);
    Eigen::VectorXd left(n), right(n);
    for (int i = 0; i < n; ++i) {
        const double m = std::pow(mesh.delta[i], alpha) * mesh.weights[i];
        left[i] = std::sqrt(m);
        right[i] = 1.0 / left[i];
    }
    B = left.asDiagonal() * op.table * right.asDiagonal();
    Eigen::BDCSVD<Eigen::MatrixXd> svd(B);
    return svd.singularValues();
}

Eigen::VectorXd snap_to_cell_corner(const Mesh& mesh, const Eigen::VectorXd& request) {
    if (mesh.spec.dim == 1) {
        int best = 1;
        double dmin = std::numeric_limits<double>::infinity();
        // interior edges only (endpoints are the boundary)
        for (int k = 1; k + 1 < mesh.edges.size() + 0; ++k) {
            const double d = std::abs(mesh.edges[k] - request[0]);
            if (d < dmin) { dmin = d; best = k; }
        }
        Eigen::VectorXd out(1);
        out[0] = mesh.edges[best];
        return out;
    }
    // nearest ring edge at the requested angle, then nearest angular corner on it
    const double rq = request.norm();
    double th = std::atan2(request[1], request[0]);
    if (th < 0.0) th += 2.0 * kPi;
    int ring = 1;
    double dmin = std::numeric_limits<double>::infinity();
    for (int k = 1; k + 1 < mesh.edges.size(); ++k) {
        const double d = std::abs(mesh.edges[k] - rq);
        if (d < dmin) { dmin = d; ring = k; }
    }
    const double r = mesh.edges[ring];
    const int nj = mesh.ring_sizes[std::min<int>(ring, static_cast<int>(mesh.ring_sizes.size()) - 1)];
    const double dth = 2.0 * kPi / nj;
    const double snapped = std::round(th / dth) * dth;
    Eigen::VectorXd out(2);
    out[0] = r * std::cos(snapped);
    out[1] = r * std::sin(snapped);
    return out;
}

void save_operator(const DiscreteGreenOperator& op, const std::string& path) {
    nlohmann::json header;
    header["format"] = "greenlab-operator-v1";
    header["n"] = op.size();
    header["mesh_hash"] = op.mesh->hash();
    header["kernel"] = kernel_variant_name(op.backend.variant);
    header["s"] = op.backend.spec.s;
    header["gamma"] = op.backend.spec.gamma;
    header["dim"] = op.backend.spec.dim;
    header["radius"] = op.backend.spec.radius;
    header["c0"] = op.backend.c0;
    header["split_eps"] = op.split.eps;
    header["split_beta"] = op.split.beta;
    const std::string hs = header.dump();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw GreenOpError("save_operator: cannot open " + path);
    const std::uint64_t len = hs.size();
    out.write(reinterpret_cast<const char*>(&len), sizeof(len));
    out.write(hs.data(), static_cast<std::streamsize>(hs.size()));
    out.write(reinterpret_cast<const char*>(op.table.data()),
              static_cast<std::streamsize>(sizeof(double) * op.table.size()));
    if (!out) throw GreenOpError("save_operator: write failed for " + path);
}

DiscreteGreenOperator load_operator(const std::string& path, const MeshPtr& mesh,
                                    const KernelBackend& backend) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw GreenOpError("load_operator: cannot open " + path);
    std::uint64_t len = 0;
    in.read(reinterpret_cast<char*>(&len), sizeof(len));
    std::string hs(len, '\0');
    in.read(hs.data(), static_cast<std::streamsize>(len));
    const nlohmann::json header = nlohmann::json::parse(hs);
    if (header.at("mesh_hash").get<std::uint64_t>() != mesh->hash())
        throw GreenOpError("load_operator: mesh hash mismatch");
    if (header.at("kernel").get<std::string>() != kernel_variant_name(backend.variant))
        throw GreenOpError("load_operator: kernel variant mismatch");
    const int n = header.at("n").get<int>();
    if (n != mesh->size()) throw GreenOpError("load_operator: size mismatch");
    DiscreteGreenOperator op;
    op.mesh = mesh;
    op.backend = backend;
    op.split = RegularizedSplit(backend.spec, header.at("split_eps").get<double>(),
                                header.at("split_beta").get<double>());
    op.table.resize(n, n);
    in.read(reinterpret_cast<char*>(op.table.data()),
            static_cast<std::streamsize>(sizeof(double) * op.table.size()));
    if (!in) throw GreenOpError("load_operator: truncated table in " + path);
    op.report.split_eps = op.split.eps;
    op.report.split_beta = op.split.beta;
    op.report.min_diagonal = op.table.diagonal().minCoeff();
    return op;
}

} // namespace greenlab
