#include "greenlab/config.hpp"

#include <cmath>
#include <set>

namespace greenlab {

namespace {

using nlohmann::json;

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    if (!j.is_object()) throw ConfigError("config: '" + where + "' must be an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!allowed.count(it.key()))
            throw ConfigError("config: unknown key '" + it.key() + "' in " + where);
    }
}

double num(const json& j, const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number()) throw ConfigError(std::string("config: '") + key + "' must be a number");
    return j.at(key).get<double>();
}

} // namespace

RunConfig parse_config(const json& j) {
    reject_unknown(j, {"kernel", "mesh", "solver", "nonlinearity", "measure", "experiment",
                       "seed", "workers", "out"},
                   "top level");
    RunConfig c;
    if (j.contains("kernel")) {
        const json& k = j.at("kernel");
        reject_unknown(k, {"kernel", "N", "R", "s", "gamma", "c0", "K"}, "kernel");
        c.kernel = k.value("kernel", c.kernel);
        if (c.kernel != "rfl" && c.kernel != "sfl" && c.kernel != "cfl" && c.kernel != "envelope")
            throw ConfigError("config: kernel must be rfl|sfl|cfl|envelope");
        c.spec.dim = static_cast<int>(num(k, "N", c.spec.dim));
        c.spec.radius = num(k, "R", c.spec.radius);
        c.spec.s = num(k, "s", c.spec.s);
        // kernel-determined gamma defaults: s (rfl), 1 (sfl), 2s-1 (cfl)
        double gdef = c.spec.s;
        if (c.kernel == "sfl") gdef = 1.0;
        else if (c.kernel == "cfl") gdef = 2.0 * c.spec.s - 1.0;
        else if (c.kernel == "envelope") gdef = c.spec.gamma;
        c.spec.gamma = num(k, "gamma", gdef);
        c.c0 = num(k, "c0", c.c0);
        c.spectral_order = static_cast<int>(num(k, "K", c.spectral_order));
    }
    if (j.contains("mesh")) {
        const json& m = j.at("mesh");
        reject_unknown(m, {"resolution", "grading"}, "mesh");
        c.resolution = static_cast<int>(num(m, "resolution", c.resolution));
        c.grading = num(m, "grading", c.grading);
    }
    if (j.contains("solver")) {
        const json& s = j.at("solver");
        reject_unknown(s, {"tol", "max_iter", "damping"}, "solver");
        c.solve.tol = num(s, "tol", c.solve.tol);
        c.solve.max_iter = static_cast<int>(num(s, "max_iter", c.solve.max_iter));
        c.solve.damping = num(s, "damping", c.solve.damping);
    }
    if (j.contains("nonlinearity")) {
        const json& g = j.at("nonlinearity");
        reject_unknown(g, {"kind", "p", "cap", "t", "g"}, "nonlinearity");
        c.g_kind = g.value("kind", c.g_kind);
        if (c.g_kind != "power" && c.g_kind != "linear" && c.g_kind != "table" &&
            c.g_kind != "saturating")
            throw ConfigError("config: nonlinearity kind must be power|linear|table|saturating");
        c.g_p = num(g, "p", c.g_p);
        c.g_cap = num(g, "cap", c.g_cap);
        if (g.contains("t")) c.g_knots_t = g.at("t").get<std::vector<double>>();
        if (g.contains("g")) c.g_knots_v = g.at("g").get<std::vector<double>>();
    }
    if (j.contains("measure")) {
        const json& m = j.at("measure");
        reject_unknown(m, {"atoms", "density"}, "measure");
        if (m.contains("atoms")) {
            for (const auto& a : m.at("atoms")) {
                reject_unknown(a, {"x", "w"}, "measure.atoms[]");
                std::vector<double> x;
                if (a.at("x").is_number()) x.push_back(a.at("x").get<double>());
                else x = a.at("x").get<std::vector<double>>();
                Eigen::VectorXd v(x.size());
                for (std::size_t i = 0; i < x.size(); ++i) v[static_cast<int>(i)] = x[i];
                c.atoms.push_back({v, a.at("w").get<double>()});
            }
        }
        c.density_expr = m.value("density", c.density_expr);
        if (!c.density_expr.empty() && c.density_expr != "one" && c.density_expr != "sin" &&
            c.density_expr != "delta^gamma")
            throw ConfigError("config: measure.density must be one of \"\", one, sin, delta^gamma");
    }
    if (j.contains("experiment")) {
        const json& e = j.at("experiment");
        reject_unknown(e, {"p", "levels", "ray", "scales", "sweep_p", "sweep_resolutions",
                           "sweep_distances", "sweep_grading"},
                       "experiment");
        c.p = num(e, "p", c.p);
        c.levels = static_cast<int>(num(e, "levels", c.levels));
        if (e.contains("ray")) c.ray_distances = e.at("ray").get<std::vector<double>>();
        if (e.contains("scales")) c.stability_scales = e.at("scales").get<std::vector<double>>();
        if (e.contains("sweep_p")) c.sweep_p = e.at("sweep_p").get<std::vector<double>>();
        if (e.contains("sweep_resolutions"))
            c.sweep_resolutions = e.at("sweep_resolutions").get<std::vector<int>>();
        if (e.contains("sweep_distances"))
            c.sweep_distances = e.at("sweep_distances").get<std::vector<double>>();
        c.sweep_grading = num(e, "sweep_grading", c.sweep_grading);
    }
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("workers")) c.workers = j.at("workers").get<int>();
    if (j.contains("out")) c.out_dir = j.at("out").get<std::string>();
    return c;
}

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("malformed JSON in " + origin + ": " + e.what());
    }
    return parse_config(j);
}

nlohmann::json RunConfig::resolved() const {
    json j;
    j["kernel"] = {{"kernel", kernel}, {"N", spec.dim},     {"R", spec.radius},
                   {"s", spec.s},      {"gamma", spec.gamma}, {"c0", c0},
                   {"K", spectral_order}};
    j["mesh"] = {{"resolution", resolution}, {"grading", grading}};
    j["solver"] = {{"tol", solve.tol}, {"max_iter", solve.max_iter}, {"damping", solve.damping}};
    json gj = {{"kind", g_kind}, {"p", g_p}, {"cap", g_cap}};
    if (!g_knots_t.empty()) {
        gj["t"] = g_knots_t;
        gj["g"] = g_knots_v;
    }
    j["nonlinearity"] = gj;
    json atoms_j = json::array();
    for (const auto& [x, w] : atoms) {
        std::vector<double> xs(x.data(), x.data() + x.size());
        atoms_j.push_back({{"x", xs}, {"w", w}});
    }
    j["measure"] = {{"atoms", atoms_j}, {"density", density_expr}};
    j["experiment"] = {{"p", p},
                       {"levels", levels},
                       {"ray", ray_distances},
                       {"scales", stability_scales},
                       {"sweep_p", sweep_p},
                       {"sweep_resolutions", sweep_resolutions},
                       {"sweep_distances", sweep_distances},
                       {"sweep_grading", sweep_grading}};
    j["seed"] = seed;
    j["workers"] = workers;
    j["out"] = out_dir;
    return j;
}

KernelBackend RunConfig::make_backend() const {
    if (kernel == "rfl") return make_rfl_ball(spec);
    if (kernel == "sfl") return make_sfl_interval(spec, spectral_order);
    if (kernel == "cfl") return make_cfl_surrogate(spec, c0);
    return make_envelope(spec, c0);
}

Nonlinearity RunConfig::make_nonlinearity() const {
    if (g_kind == "power") return Nonlinearity::power(g_p);
    if (g_kind == "linear") return Nonlinearity::linear();
    if (g_kind == "saturating") return Nonlinearity::saturating(g_cap);
    return Nonlinearity::table(g_knots_t, g_knots_v);
}

RadonMeasure RunConfig::make_measure(const MeshPtr& mesh) const {
    RadonMeasure mu;
    for (const auto& [x, w] : atoms)
        mu.atoms.push_back(Atom{snap_to_cell_corner(*mesh, x), w});
    if (density_expr == "one") {
        mu.density = make_grid_function(mesh, [](const Eigen::VectorXd&) { return 1.0; }, "one");
    } else if (density_expr == "sin") {
        mu.density = make_grid_function(
            mesh, [](const Eigen::VectorXd& x) { return std::sin(3.14159265358979323846 * x[0]); },
            "sin");
    } else if (density_expr == "delta^gamma") {
        const double g = spec.gamma;
        const double R = spec.radius;
        mu.density = make_grid_function(
            mesh, [g, R](const Eigen::VectorXd& x) { return std::pow(R - x.norm(), g); },
            "delta^gamma");
    }
    return mu;
}

std::vector<std::string> preset_names() {
    return {"rfl-interval-s025", "rfl-disk-s05", "sfl-interval-s025", "cfl-disk-s075"};
}

nlohmann::json preset_json(const std::string& name) {
    json j;
    if (name == "rfl-interval-s025") {
        j["kernel"] = {{"kernel", "rfl"}, {"N", 1}, {"s", 0.25}};
        j["mesh"] = {{"resolution", 256}, {"grading", 2.0}};
    } else if (name == "rfl-disk-s05") {
        j["kernel"] = {{"kernel", "rfl"}, {"N", 2}, {"s", 0.5}};
        j["mesh"] = {{"resolution", 24}, {"grading", 2.0}};
    } else if (name == "sfl-interval-s025") {
        j["kernel"] = {{"kernel", "sfl"}, {"N", 1}, {"s", 0.25}};
        j["mesh"] = {{"resolution", 256}, {"grading", 2.0}};
    } else if (name == "cfl-disk-s075") {
        j["kernel"] = {{"kernel", "cfl"}, {"N", 2}, {"s", 0.75}};
        j["mesh"] = {{"resolution", 24}, {"grading", 2.0}};
    } else {
        throw ConfigError("unknown preset: " + name);
    }
    j["seed"] = 20240101;
    return j;
}

} // namespace greenlab
