#pragma once

#include "greenlab/experiments.hpp"

#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

namespace greenlab {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Fully resolved run configuration. The JSON schema is strict: unknown keys are
/// rejected anywhere in the tree.
struct RunConfig {
    // kernel block
    std::string kernel = "rfl";
    DomainSpec spec{1, 1.0, 0.25, 0.25};
    double c0 = 1.0;
    int spectral_order = 0;

    // mesh block
    int resolution = 256;
    double grading = 2.0;

    // solver block
    SolveConfig solve;

    // nonlinearity block
    std::string g_kind = "power";
    double g_p = 2.0;
    double g_cap = 1.0;
    std::vector<double> g_knots_t, g_knots_v;

    // measure block
    std::vector<std::pair<Eigen::VectorXd, double>> atoms;
    std::string density_expr; // "", "one", "sin", "delta^gamma"

    // experiment block
    double p = 1.3;
    int levels = 6;
    std::vector<double> ray_distances;
    std::vector<double> stability_scales;
    std::vector<double> sweep_p;
    std::vector<int> sweep_resolutions;
    std::vector<double> sweep_distances;
    double sweep_grading = 5.0;

    std::uint64_t seed = 1;
    int workers = 1;
    std::string out_dir = "out";

    nlohmann::json resolved() const; // defaults expanded, canonical-key JSON

    KernelBackend make_backend() const;
    Nonlinearity make_nonlinearity() const;
    RadonMeasure make_measure(const MeshPtr& mesh) const;
};

/// Parse + validate a config JSON (strict schema). Missing blocks get defaults.
RunConfig parse_config(const nlohmann::json& j);
RunConfig parse_config_text(const std::string& text, const std::string& origin = "<config>");

/// Named presets for the acceptance configurations.
std::vector<std::string> preset_names();
nlohmann::json preset_json(const std::string& name);

} // namespace greenlab
