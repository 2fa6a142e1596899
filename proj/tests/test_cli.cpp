#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

#ifndef QOC_CLI_PATH
#error "QOC_CLI_PATH must point at the built CLI binary"
#endif

int run(const std::string& args) {
    const std::string cmd =
        std::string(QOC_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

fs::path work_dir() {
    const fs::path dir = fs::temp_directory_path() / "qoc_cli_tests";
    fs::create_directories(dir);
    return dir;
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// small instances keep these end-to-end runs fast
json base_config() {
    return json{
        {"format_version", 1},
        {"seed", 42},
        {"model",
         {{"name", "two_level"},
          {"c", {1.0}},
          {"s", {1.0}},
          {"s_min", {0.5}},
          {"s_max", {2.0}},
          {"dipole_sign", 1},
          {"psi0", {{1.0, 0.0}, {0.0, 0.0}}}}},
        {"field",
         {{"pulses", 1},
          {"b_init", {0.2, 5.0, 2.0, 1.0}},
          {"b_lo", {-2.0, 0.0, 0.5, 0.0}},
          {"b_hi", {2.0, 10.0, 5.0, 3.0}}}},
        {"grid", {{"T", 10.0}, {"steps", 250}}},
        {"cost",
         {{"K", 100.0}, {"L", 0.001}, {"theta0", -1.0},
          {"observable", "sigma_z"}}},
        {"optimizer",
         {{"max_iters", 120},
          {"grad_tol", 1e-3},
          {"cost_rel_tol", 1e-8},
          {"backtrack_beta", 0.5},
          {"armijo_c1", 1e-4},
          {"restarts", 1}}},
        {"sweep", {{"s_axes", {{0.9, 1.0, 1.1}}}}}};
}

json strip_wall_clock(json doc) {
    doc.erase("wall_clock_sec");
    return doc;
}

} // namespace

TEST_CASE("validate accepts a good config and rejects a bad one") {
    const fs::path dir = work_dir();
    write_file(dir / "good.json", base_config().dump(2));
    CHECK(run("validate --config " + (dir / "good.json").string()) == 0);

    json bad = base_config();
    bad["field"]["b_lo"][2] = -0.5;
    write_file(dir / "bad.json", bad.dump(2));
    CHECK(run("validate --config " + (dir / "bad.json").string()) == 1);

    CHECK(run("validate --config " + (dir / "missing.json").string()) == 1);
}

TEST_CASE("optimize writes a result document with a config echo") {
    const fs::path dir = work_dir();
    const std::string cfg_text = base_config().dump(2);
    write_file(dir / "opt.json", cfg_text);
    const int rc = run("optimize --config " + (dir / "opt.json").string() +
                       " --out " + (dir / "opt_out.json").string());
    CHECK((rc == 0 || rc == 2));
    const json doc = json::parse(slurp(dir / "opt_out.json"));
    CHECK(doc["config_text"].get<std::string>() == cfg_text);
    CHECK(doc["result"]["b_opt"].size() == 4);
    CHECK(doc["forward_propagations"].get<int>() > 0);
}

TEST_CASE("optimize from a poor seed with one iteration exits 2") {
    const fs::path dir = work_dir();
    json cfg = base_config();
    cfg["optimizer"]["max_iters"] = 1;
    cfg["optimizer"]["grad_tol"] = 1e-12;
    cfg["optimizer"]["restarts"] = 0;
    write_file(dir / "poor.json", cfg.dump(2));
    CHECK(run("optimize --config " + (dir / "poor.json").string() +
              " --out " + (dir / "poor_out.json").string()) == 2);
    CHECK(fs::exists(dir / "poor_out.json")); // result still written
}

TEST_CASE("unwritable output path exits 1") {
    const fs::path dir = work_dir();
    write_file(dir / "cfg.json", base_config().dump(2));
    CHECK(run("optimize --config " + (dir / "cfg.json").string() +
              " --out /nonexistent-dir/out.json") == 1);
}

TEST_CASE("sweep produces one entry per node and a degenerate grid matches "
          "optimize") {
    const fs::path dir = work_dir();
    write_file(dir / "sweep.json", base_config().dump(2));
    const int rc = run("sweep --config " + (dir / "sweep.json").string() +
                       " --out " + (dir / "sheet.json").string());
    CHECK((rc == 0 || rc == 2));
    const json sheet = json::parse(slurp(dir / "sheet.json"));
    CHECK(sheet["entries"].size() == 3);

    json one = base_config();
    one["sweep"]["s_axes"] = {{1.0}};
    write_file(dir / "one.json", one.dump(2));
    run("sweep --config " + (dir / "one.json").string() + " --out " +
        (dir / "one_sheet.json").string());
    one.erase("sweep");
    write_file(dir / "one_opt.json", one.dump(2));
    run("optimize --config " + (dir / "one_opt.json").string() + " --out " +
        (dir / "one_out.json").string());
    const json sheet1 = json::parse(slurp(dir / "one_sheet.json"));
    const json opt1 = json::parse(slurp(dir / "one_out.json"));
    CHECK(sheet1["entries"][0]["b"] == opt1["result"]["b_opt"]);
}

TEST_CASE("predict echoes stored controls at a grid node") {
    const fs::path dir = work_dir();
    write_file(dir / "sweep.json", base_config().dump(2));
    run("sweep --config " + (dir / "sweep.json").string() + " --out " +
        (dir / "sheet.json").string());

    CHECK(run("predict --sheet " + (dir / "sheet.json").string() +
              " --out " + (dir / "pred.json").string() + " --s 1.0") == 0);
    const json sheet = json::parse(slurp(dir / "sheet.json"));
    const json pred = json::parse(slurp(dir / "pred.json"));
    for (int i = 0; i < 4; ++i) {
        CHECK(std::abs(pred["b"][i].get<double>() -
                       sheet["entries"][1]["b"][i].get<double>()) <= 1e-12);
    }

    // out-of-hull without --extrapolate
    CHECK(run("predict --sheet " + (dir / "sheet.json").string() +
              " --out " + (dir / "pred2.json").string() + " --s 1.5") == 1);
    CHECK(run("predict --sheet " + (dir / "sheet.json").string() +
              " --out " + (dir / "pred3.json").string() +
              " --s 1.5 --extrapolate") == 0);
    CHECK(json::parse(slurp(dir / "pred3.json"))["extrapolated"] == true);

    // refinement reports its own work
    CHECK(run("predict --sheet " + (dir / "sheet.json").string() +
              " --out " + (dir / "pred4.json").string() +
              " --s 0.95 --refine") == 0);
    const json refined = json::parse(slurp(dir / "pred4.json"));
    CHECK(refined["refine"]["iterations"].get<int>() <= 5);
}

TEST_CASE("export-plot kinds") {
    const fs::path dir = work_dir();
    write_file(dir / "cfg.json", base_config().dump(2));
    run("optimize --config " + (dir / "cfg.json").string() + " --out " +
        (dir / "opt_out.json").string());
    run("sweep --config " + (dir / "cfg.json").string() + " --out " +
        (dir / "sheet.json").string());

    CHECK(run("export-plot --result " + (dir / "opt_out.json").string() +
              " --kind trace --out " + (dir / "trace.csv").string()) == 0);
    CHECK(slurp(dir / "trace.csv").find("iter,total_cost,grad_inf_norm") == 0);

    CHECK(run("export-plot --result " + (dir / "sheet.json").string() +
              " --kind sheet --out " + (dir / "sheet.csv").string()) == 0);
    CHECK(slurp(dir / "sheet.csv").find("axis_0,b_0") == 0);

    CHECK(run("export-plot --result " + (dir / "opt_out.json").string() +
              " --kind trajectory --out " + (dir / "traj.csv").string()) == 0);
    CHECK(slurp(dir / "traj.csv").find("t,re_0,im_0") == 0);

    CHECK(run("export-plot --result " + (dir / "opt_out.json").string() +
              " --kind spectrogram --out " + (dir / "x.csv").string()) == 1);
}

TEST_CASE("repeated runs with one seed produce identical documents") {
    const fs::path dir = work_dir();
    write_file(dir / "det.json", base_config().dump(2));
    run("optimize --config " + (dir / "det.json").string() + " --out " +
        (dir / "det1.json").string());
    run("optimize --config " + (dir / "det.json").string() + " --out " +
        (dir / "det2.json").string());
    CHECK(strip_wall_clock(json::parse(slurp(dir / "det1.json"))) ==
          strip_wall_clock(json::parse(slurp(dir / "det2.json"))));

    // --seed overrides the config seed and changes the random restarts
    run("optimize --config " + (dir / "det.json").string() + " --out " +
        (dir / "det3.json").string() + " --seed 7");
    CHECK(json::parse(slurp(dir / "det3.json"))["seed"] == 7);
}
