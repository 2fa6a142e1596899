#include <doctest.h>

#include <json.hpp>

#include "helpers.hpp"
#include "qoc/config.hpp"
#include "qoc/results.hpp"

using namespace qoc;

namespace {

// a minimal valid config; tests mutate copies of this JSON
const char* kValidConfig = R"({
  "format_version": 1,
  "seed": 42,
  "model": {
    "name": "two_level",
    "c": [1.0],
    "s": [1.0],
    "s_min": [0.5],
    "s_max": [2.0],
    "dipole_sign": 1,
    "psi0": [[1.0, 0.0], [0.0, 0.0]]
  },
  "field": {
    "pulses": 1,
    "b_init": [0.2, 5.0, 2.0, 1.0],
    "b_lo": [-2.0, 0.0, 0.5, 0.0],
    "b_hi": [2.0, 10.0, 5.0, 3.0]
  },
  "grid": { "T": 10.0, "steps": 500 },
  "cost": { "K": 100.0, "L": 0.001, "theta0": -1.0, "observable": "sigma_z" },
  "optimizer": {
    "max_iters": 50,
    "grad_tol": 1e-4,
    "cost_rel_tol": 1e-8,
    "backtrack_beta": 0.5,
    "armijo_c1": 1e-4,
    "restarts": 1
  },
  "sweep": { "s_axes": [[0.8, 1.0, 1.2]] }
})";

std::string patched(const std::string& from, const std::string& to) {
    std::string text = kValidConfig;
    const auto pos = text.find(from);
    REQUIRE(pos != std::string::npos);
    text.replace(pos, from.size(), to);
    return text;
}

void check_error_names_key(const std::string& text, const std::string& key) {
    try {
        parse_config(text);
        FAIL("expected bad_config for key ", key);
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find(key) != std::string::npos);
    }
}

} // namespace

TEST_CASE("valid config parses and builds the model stack") {
    const RunConfig cfg = parse_config(kValidConfig);
    CHECK(cfg.seed == 42);
    CHECK(cfg.has_sweep);
    CHECK(cfg.sweep_grid.s_axes.size() == 1);
    const QuantumModel model = cfg.build_model();
    CHECK(model.dim == 2);
    const OptSettings st = cfg.build_settings();
    CHECK(st.rng_seed == 42);
    CHECK(st.b_lo.size() == 4);
    CHECK(cfg.raw_text == kValidConfig);
}

TEST_CASE("unknown keys are rejected by name") {
    check_error_names_key(patched("\"seed\": 42", "\"sneed\": 42"), "sneed");
    check_error_names_key(
        patched("\"pulses\": 1", "\"pulses\": 1, \"chirp\": 2"),
        "field.chirp");
}

TEST_CASE("negative width bound is rejected naming the key") {
    check_error_names_key(
        patched("\"b_lo\": [-2.0, 0.0, 0.5, 0.0]",
                "\"b_lo\": [-2.0, 0.0, -0.5, 0.0]"),
        "field.b_lo[2]");
}

TEST_CASE("unknown observable is rejected") {
    check_error_names_key(
        patched("\"observable\": \"sigma_z\"", "\"observable\": \"number\""),
        "cost.observable");
}

TEST_CASE("duplicate parameter names are rejected") {
    check_error_names_key(
        patched("\"c\": [1.0]",
                "\"c\": [1.0], \"a_names\": [\"omega0\"], "
                "\"c_names\": [\"omega0\"]"),
        "omega0");
}

TEST_CASE("b_init outside bounds is rejected") {
    check_error_names_key(
        patched("\"b_init\": [0.2, 5.0, 2.0, 1.0]",
                "\"b_init\": [3.0, 5.0, 2.0, 1.0]"),
        "field.b_init[0]");
}

TEST_CASE("sweep axis outside scale bounds is rejected") {
    check_error_names_key(
        patched("\"s_axes\": [[0.8, 1.0, 1.2]]",
                "\"s_axes\": [[0.8, 1.0, 3.0]]"),
        "sweep.s_axes[0][2]");
}

TEST_CASE("base scale point defaults to the bounds midpoint") {
    const RunConfig cfg =
        parse_config(patched("\"s\": [1.0],\n    ", ""));
    CHECK(cfg.base_s[0] == doctest::Approx(1.25));
}

TEST_CASE("optimize result document carries a byte-identical config echo") {
    const RunConfig cfg = parse_config(kValidConfig);
    OptResult res;
    res.b_opt = cfg.b_init;
    res.cost = CostBreakdown{0.1, 0.2, 0.3, -0.9};
    res.grad_inf_norm = 1e-5;
    res.iterations = 3;
    res.converged = true;
    res.stop_reason = "gradient";
    res.trace = {{0, 1.0, 1.0}, {1, 0.5, 0.1}};
    const std::string doc =
        optimize_result_to_json(cfg, res, 1.25, 77);
    CHECK(doc.find("\"command\": \"optimize\"") != std::string::npos);
    const auto parsed = nlohmann::json::parse(doc);
    CHECK(parsed["config_text"].get<std::string>() == kValidConfig);
    CHECK(parsed["forward_propagations"] == 77);
}

TEST_CASE("trace CSV export") {
    const RunConfig cfg = parse_config(kValidConfig);
    OptResult res;
    res.b_opt = cfg.b_init;
    res.cost = CostBreakdown{0, 0, 0.25, 0};
    res.trace = {{0, 1.0, 2.0}, {1, 0.25, 0.125}};
    const std::string csv =
        trace_to_csv(optimize_result_to_json(cfg, res, 0.0, 0));
    CHECK(csv.find("iter,total_cost,grad_inf_norm") == 0);
    CHECK(csv.find("1,0.25,0.125") != std::string::npos);
}

TEST_CASE("atomic write replaces the target in one step") {
    const std::string path = "/tmp/qoc_test_atomic.json";
    atomic_write(path, "hello");
    CHECK(read_file(path) == "hello");
    atomic_write(path, "world");
    CHECK(read_file(path) == "world");
    std::remove(path.c_str());
}
