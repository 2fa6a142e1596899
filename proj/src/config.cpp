#include "qoc/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace qoc {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& key, const std::string& msg) {
    throw Error("bad_config", key + ": " + msg);
}

void check_keys(const json& obj, const std::string& section,
                const std::set<std::string>& allowed) {
    if (!obj.is_object()) fail(section, "must be an object");
    for (const auto& [key, value] : obj.items()) {
        if (!allowed.count(key)) fail(section + "." + key, "unknown key");
    }
}

const json& require(const json& obj, const std::string& section,
                    const std::string& key) {
    auto it = obj.find(key);
    if (it == obj.end()) fail(section + "." + key, "missing required key");
    return *it;
}

double get_number(const json& obj, const std::string& section,
                  const std::string& key) {
    const json& v = require(obj, section, key);
    if (!v.is_number()) fail(section + "." + key, "must be a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail(section + "." + key, "must be finite");
    return x;
}

int get_int(const json& obj, const std::string& section,
            const std::string& key) {
    const json& v = require(obj, section, key);
    if (!v.is_number_integer()) fail(section + "." + key, "must be an integer");
    return v.get<int>();
}

Eigen::VectorXd get_vector(const json& obj, const std::string& section,
                           const std::string& key) {
    const json& v = require(obj, section, key);
    if (!v.is_array() || v.empty()) {
        fail(section + "." + key, "must be a non-empty array");
    }
    Eigen::VectorXd out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_number()) {
            fail(section + "." + key + "[" + std::to_string(i) + "]",
                 "must be a number");
        }
        out[i] = v[i].get<double>();
        if (!std::isfinite(out[i])) {
            fail(section + "." + key + "[" + std::to_string(i) + "]",
                 "must be finite");
        }
    }
    return out;
}

const std::set<std::string> kReservedPulseNames = {"amplitude", "center",
                                                   "width", "carrier"};

void check_names(const json& sec, const std::string& path,
                 const std::string& key,
                 const std::vector<std::string>& expected) {
    if (!sec.contains(key)) return;
    const json& v = sec.at(key);
    if (!v.is_array() || v.size() != expected.size()) {
        fail(path + "." + key,
             "must list exactly " + std::to_string(expected.size()) +
                 " names");
    }
    std::set<std::string> seen;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const std::string name = v[i].get<std::string>();
        if (!seen.insert(name).second) {
            fail(path + "." + key + "[" + std::to_string(i) + "]",
                 "duplicate parameter name '" + name + "'");
        }
        if (kReservedPulseNames.count(name)) {
            fail(path + "." + key + "[" + std::to_string(i) + "]",
                 "'" + name + "' collides with a control parameter name");
        }
    }
}

} // namespace

QuantumModel RunConfig::build_model() const {
    return make_model(model_name, observable, dipole_sign, psi0, s_min, s_max);
}

OptSettings RunConfig::build_settings() const {
    OptSettings st = opt;
    st.b_lo = b_lo;
    st.b_hi = b_hi;
    st.rng_seed = seed;
    return st;
}

RunConfig parse_config(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw Error("bad_config", std::string("parse error: ") + e.what());
    }

    RunConfig cfg;
    cfg.raw_text = text;

    check_keys(doc, "config",
               {"format_version", "seed", "model", "field", "grid", "cost",
                "optimizer", "sweep"});
    if (doc.contains("format_version") &&
        doc.at("format_version").get<int>() != 1) {
        fail("config.format_version", "unsupported version");
    }
    if (doc.contains("seed")) {
        if (!doc.at("seed").is_number_integer() ||
            doc.at("seed").get<long long>() < 0) {
            fail("config.seed", "must be a non-negative integer");
        }
        cfg.seed = doc.at("seed").get<std::uint64_t>();
    }

    // model
    const json& jm = require(doc, "config", "model");
    check_keys(jm, "model",
               {"name", "a_names", "c_names", "c", "s", "dipole_sign", "psi0",
                "s_min", "s_max"});
    cfg.model_name = require(jm, "model", "name").get<std::string>();
    const int n = model_param_count(cfg.model_name); // throws on unknown name
    const int dim = model_dim(cfg.model_name);
    cfg.base_c = get_vector(jm, "model", "c");
    if (cfg.base_c.size() != n) {
        fail("model.c", "must have " + std::to_string(n) + " components");
    }
    cfg.dipole_sign =
        jm.contains("dipole_sign") ? get_number(jm, "model", "dipole_sign")
                                   : 1.0;
    if (cfg.dipole_sign != 1.0 && cfg.dipole_sign != -1.0) {
        fail("model.dipole_sign", "must be +1 or -1");
    }
    const json& jpsi = require(jm, "model", "psi0");
    if (!jpsi.is_array() || static_cast<int>(jpsi.size()) != dim) {
        fail("model.psi0",
             "must be an array of " + std::to_string(dim) + " [re, im] pairs");
    }
    cfg.psi0.resize(dim);
    for (int i = 0; i < dim; ++i) {
        if (!jpsi[i].is_array() || jpsi[i].size() != 2) {
            fail("model.psi0[" + std::to_string(i) + "]",
                 "must be a [re, im] pair");
        }
        cfg.psi0[i] =
            Complex(jpsi[i][0].get<double>(), jpsi[i][1].get<double>());
    }
    if (cfg.psi0.norm() < 1e-300) fail("model.psi0", "must have nonzero norm");
    cfg.s_min = get_vector(jm, "model", "s_min");
    cfg.s_max = get_vector(jm, "model", "s_max");
    if (cfg.s_min.size() != cfg.s_max.size()) {
        fail("model.s_max", "length must match model.s_min");
    }
    for (Eigen::Index i = 0; i < cfg.s_min.size(); ++i) {
        if (!(cfg.s_min[i] < cfg.s_max[i])) {
            fail("model.s_min[" + std::to_string(i) + "]",
                 "must be below s_max");
        }
    }
    if (jm.contains("s")) {
        cfg.base_s = get_vector(jm, "model", "s");
        if (cfg.base_s.size() != cfg.s_min.size()) {
            fail("model.s", "length must match model.s_min");
        }
        for (Eigen::Index i = 0; i < cfg.base_s.size(); ++i) {
            if (cfg.base_s[i] < cfg.s_min[i] || cfg.base_s[i] > cfg.s_max[i]) {
                fail("model.s[" + std::to_string(i) + "]",
                     "outside scale bounds");
            }
        }
    } else {
        cfg.base_s = 0.5 * (cfg.s_min + cfg.s_max);
    }
    {
        std::vector<std::string> a_def, c_def;
        if (cfg.model_name == "two_level") {
            a_def = {"omega0"};
            c_def = {"c1"};
        } else {
            a_def = {"omega1", "omega2"};
            c_def = {"c1", "c2"};
        }
        check_names(jm, "model", "a_names", a_def);
        check_names(jm, "model", "c_names", c_def);
        // system and control parameters must stay disjoint
        if (jm.contains("a_names") && jm.contains("c_names")) {
            std::set<std::string> a_set;
            for (const auto& v : jm.at("a_names")) {
                a_set.insert(v.get<std::string>());
            }
            for (const auto& v : jm.at("c_names")) {
                if (a_set.count(v.get<std::string>())) {
                    fail("model.c_names", "duplicate parameter name '" +
                                              v.get<std::string>() + "'");
                }
            }
        }
    }

    // field
    const json& jf = require(doc, "config", "field");
    check_keys(jf, "field", {"pulses", "b_init", "b_lo", "b_hi"});
    cfg.pulse_count = get_int(jf, "field", "pulses");
    if (cfg.pulse_count < 1) fail("field.pulses", "must be >= 1");
    const int m = 4 * cfg.pulse_count;
    cfg.b_init = get_vector(jf, "field", "b_init");
    cfg.b_lo = get_vector(jf, "field", "b_lo");
    cfg.b_hi = get_vector(jf, "field", "b_hi");
    if (cfg.b_init.size() != m) {
        fail("field.b_init", "must have length " + std::to_string(m));
    }
    if (cfg.b_lo.size() != m) {
        fail("field.b_lo", "must have length " + std::to_string(m));
    }
    if (cfg.b_hi.size() != m) {
        fail("field.b_hi", "must have length " + std::to_string(m));
    }
    for (int i = 0; i < m; ++i) {
        if (cfg.b_lo[i] > cfg.b_hi[i]) {
            fail("field.b_lo[" + std::to_string(i) + "]", "exceeds b_hi");
        }
        if (i % 4 == 2 && !(cfg.b_lo[i] > 0.0)) {
            fail("field.b_lo[" + std::to_string(i) + "]",
                 "pulse width lower bound must be > 0");
        }
        if (cfg.b_init[i] < cfg.b_lo[i] || cfg.b_init[i] > cfg.b_hi[i]) {
            fail("field.b_init[" + std::to_string(i) + "]", "outside bounds");
        }
    }

    // grid
    const json& jg = require(doc, "config", "grid");
    check_keys(jg, "grid", {"T", "steps"});
    cfg.horizon = get_number(jg, "grid", "T");
    if (!(cfg.horizon > 0.0)) fail("grid.T", "must be > 0");
    cfg.steps = get_int(jg, "grid", "steps");
    if (cfg.steps < 2) fail("grid.steps", "must be >= 2");

    // cost
    const json& jc = require(doc, "config", "cost");
    check_keys(jc, "cost", {"K", "L", "theta0", "observable"});
    cfg.weights.deviation_weight = get_number(jc, "cost", "K");
    cfg.weights.intensity_weight = get_number(jc, "cost", "L");
    cfg.weights.theta0 = get_number(jc, "cost", "theta0");
    if (cfg.weights.deviation_weight < 0.0 ||
        cfg.weights.intensity_weight < 0.0) {
        fail("cost.K", "K and L must be non-negative");
    }
    if (cfg.weights.deviation_weight == 0.0 &&
        cfg.weights.intensity_weight == 0.0) {
        fail("cost.K", "K and L must not both be zero");
    }
    cfg.observable = require(jc, "cost", "observable").get<std::string>();
    if (!observable_known(cfg.observable, dim)) {
        fail("cost.observable", "unknown observable '" + cfg.observable +
                                    "' for model '" + cfg.model_name + "'");
    }

    // optimizer
    const json& jo = require(doc, "config", "optimizer");
    check_keys(jo, "optimizer",
               {"max_iters", "grad_tol", "cost_rel_tol", "backtrack_beta",
                "armijo_c1", "restarts", "max_backtracks", "threads"});
    cfg.opt.max_iters = get_int(jo, "optimizer", "max_iters");
    if (cfg.opt.max_iters < 1) fail("optimizer.max_iters", "must be >= 1");
    cfg.opt.grad_tol = get_number(jo, "optimizer", "grad_tol");
    cfg.opt.cost_rel_tol = get_number(jo, "optimizer", "cost_rel_tol");
    cfg.opt.backtrack_beta = get_number(jo, "optimizer", "backtrack_beta");
    if (!(cfg.opt.backtrack_beta > 0.0 && cfg.opt.backtrack_beta < 1.0)) {
        fail("optimizer.backtrack_beta", "must be in (0, 1)");
    }
    cfg.opt.armijo_c1 = get_number(jo, "optimizer", "armijo_c1");
    if (!(cfg.opt.armijo_c1 > 0.0 && cfg.opt.armijo_c1 < 1.0)) {
        fail("optimizer.armijo_c1", "must be in (0, 1)");
    }
    cfg.opt.restarts = get_int(jo, "optimizer", "restarts");
    if (cfg.opt.restarts < 0) fail("optimizer.restarts", "must be >= 0");
    if (jo.contains("max_backtracks")) {
        cfg.opt.max_backtracks = get_int(jo, "optimizer", "max_backtracks");
        if (cfg.opt.max_backtracks < 1) {
            fail("optimizer.max_backtracks", "must be >= 1");
        }
    }
    if (jo.contains("threads")) {
        cfg.opt.threads = get_int(jo, "optimizer", "threads");
        if (cfg.opt.threads < 1) fail("optimizer.threads", "must be >= 1");
    }

    // sweep (optional)
    if (doc.contains("sweep")) {
        cfg.has_sweep = true;
        const json& js = doc.at("sweep");
        check_keys(js, "sweep",
                   {"s_axes", "c_axes", "continuity_threshold", "warm_start"});
        const json& jsa = require(js, "sweep", "s_axes");
        if (!jsa.is_array() ||
            jsa.size() != static_cast<std::size_t>(cfg.s_min.size())) {
            fail("sweep.s_axes", "must declare one axis per scale component");
        }
        for (std::size_t d = 0; d < jsa.size(); ++d) {
            Eigen::VectorXd axis(jsa[d].size());
            for (std::size_t i = 0; i < jsa[d].size(); ++i) {
                axis[i] = jsa[d][i].get<double>();
                if (axis[i] < cfg.s_min[d] || axis[i] > cfg.s_max[d]) {
                    fail("sweep.s_axes[" + std::to_string(d) + "][" +
                             std::to_string(i) + "]",
                         "outside model scale bounds");
                }
            }
            cfg.sweep_grid.s_axes.push_back(axis);
        }
        if (js.contains("c_axes")) {
            const json& jca = js.at("c_axes");
            if (!jca.is_array() ||
                jca.size() > static_cast<std::size_t>(cfg.base_c.size())) {
                fail("sweep.c_axes", "more axes than unscaled parameters");
            }
            for (std::size_t d = 0; d < jca.size(); ++d) {
                Eigen::VectorXd axis(jca[d].size());
                for (std::size_t i = 0; i < jca[d].size(); ++i) {
                    axis[i] = jca[d][i].get<double>();
                }
                cfg.sweep_grid.c_axes.push_back(axis);
            }
        }
        validate_sweep_grid(cfg.sweep_grid);
        if (js.contains("continuity_threshold")) {
            cfg.continuity_threshold =
                get_number(js, "sweep", "continuity_threshold");
        }
        if (js.contains("warm_start")) {
            cfg.warm_start = js.at("warm_start").get<bool>();
        }
    }

    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("io_error", "cannot read config file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

} // namespace qoc
