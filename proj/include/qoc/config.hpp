#ifndef QOC_CONFIG_HPP
#define QOC_CONFIG_HPP

#include <optional>
#include <string>

#include "qoc/cost.hpp"
#include "qoc/levelset.hpp"
#include "qoc/optimizer.hpp"

namespace qoc {

/// Fully validated run configuration. `raw_text` preserves the input bytes
/// for the config echo in result documents.
struct RunConfig {
    std::string raw_text;
    std::uint64_t seed = 0;

    // model section
    std::string model_name;
    std::string observable;
    double dipole_sign = 1.0;
    Eigen::VectorXcd psi0;
    Eigen::VectorXd base_c;
    Eigen::VectorXd base_s; // scale point for single optimize runs
    Eigen::VectorXd s_min;
    Eigen::VectorXd s_max;

    // field section
    int pulse_count = 1;
    Eigen::VectorXd b_init;
    Eigen::VectorXd b_lo;
    Eigen::VectorXd b_hi;

    // grid section
    double horizon = 1.0;
    int steps = 1000;

    // cost section
    CostWeights weights{1.0, 0.0, 0.0};

    // optimizer section
    OptSettings opt;

    // sweep section (optional)
    bool has_sweep = false;
    SweepGrid sweep_grid;
    bool warm_start = true;
    double continuity_threshold = 0.0; // <= 0: auto

    QuantumModel build_model() const;
    TimeGrid build_time_grid() const { return TimeGrid(horizon, steps); }
    OptSettings build_settings() const; // opt with bounds and seed filled in
};

/// Parse and validate a config document. Unknown keys are rejected; every
/// error message names the offending key. Throws qoc::Error on any problem.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

} // namespace qoc

#endif
