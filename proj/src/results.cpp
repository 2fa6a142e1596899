#include "qoc/results.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace qoc {

namespace {

using nlohmann::json;

json vec_to_json(const Eigen::VectorXd& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
    return out;
}

json mat_to_json(const Eigen::MatrixXd& m) {
    json out = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        out.push_back(vec_to_json(m.col(j)));
    }
    return out;
}

void append_csv_number(std::ostringstream& out, double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    out << buf;
}

} // namespace

void atomic_write(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("io_error", "cannot write " + tmp);
        out << content;
        if (!out) throw Error("io_error", "short write to " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        throw Error("io_error", "cannot rename " + tmp + " to " + path);
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("io_error", "cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string optimize_result_to_json(const RunConfig& cfg, const OptResult& res,
                                    double wall_clock_sec,
                                    std::uint64_t forward_propagations) {
    json doc;
    doc["format_version"] = 1;
    doc["command"] = "optimize";
    doc["config_text"] = cfg.raw_text;
    doc["seed"] = cfg.seed;
    doc["wall_clock_sec"] = wall_clock_sec;
    doc["forward_propagations"] = forward_propagations;
    json trace = json::array();
    for (const TracePoint& tp : res.trace) {
        trace.push_back({tp.iter, tp.total, tp.grad_inf_norm});
    }
    doc["result"] = {{"b_opt", vec_to_json(res.b_opt)},
                     {"cost",
                      {{"deviation", res.cost.deviation},
                       {"intensity", res.cost.intensity},
                       {"total", res.cost.total},
                       {"theta_T", res.cost.theta_T}}},
                     {"grad_inf_norm", res.grad_inf_norm},
                     {"iterations", res.iterations},
                     {"converged", res.converged},
                     {"stop_reason", res.stop_reason},
                     {"restart_index", res.restart_index},
                     {"trace", trace}};
    return doc.dump(2);
}

std::string sheet_result_to_json(const RunConfig& cfg,
                                 const SolutionSheet& sheet,
                                 double wall_clock_sec) {
    SolutionSheet copy = sheet;
    copy.config_text = cfg.raw_text;
    json doc = json::parse(sheet_to_json(copy));
    doc["command"] = "sweep";
    doc["seed"] = cfg.seed;
    doc["wall_clock_sec"] = wall_clock_sec;
    return doc.dump(2);
}

std::string predict_result_to_json(const SolutionSheet& sheet,
                                   const PredictReport& report,
                                   double wall_clock_sec) {
    json doc;
    doc["format_version"] = 1;
    doc["command"] = "predict";
    doc["config_text"] = sheet.config_text;
    doc["wall_clock_sec"] = wall_clock_sec;
    doc["at"] = vec_to_json(report.at);
    doc["branch"] = report.branch;
    doc["b"] = vec_to_json(report.prediction.b);
    doc["extrapolated"] = report.prediction.extrapolated;
    doc["geometry"] = {{"tangents", mat_to_json(report.geo.tangents)},
                       {"velocities", mat_to_json(report.geo.velocities)},
                       {"normal_speeds", mat_to_json(report.geo.normal_speeds)}};
    if (report.refined) {
        doc["refine"] = {{"total", report.refined_total},
                         {"iterations", report.refine_iterations},
                         {"forward_propagations", report.refine_propagations}};
    }
    return doc.dump(2);
}

std::string trace_to_csv(const std::string& result_json) {
    json doc;
    try {
        doc = json::parse(result_json);
    } catch (const json::exception& e) {
        throw Error("bad_result_document", e.what());
    }
    if (!doc.contains("result") || !doc["result"].contains("trace")) {
        throw Error("bad_result_document", "no optimizer trace in document");
    }
    std::ostringstream out;
    out << "iter,total_cost,grad_inf_norm\n";
    for (const auto& row : doc["result"]["trace"]) {
        out << row[0].get<int>() << ",";
        append_csv_number(out, row[1].get<double>());
        out << ",";
        append_csv_number(out, row[2].get<double>());
        out << "\n";
    }
    return out.str();
}

std::string sheet_to_csv(const std::string& sheet_json) {
    const SolutionSheet sheet = sheet_from_json(sheet_json);
    const int naxes = sheet.grid.axis_count();
    const int m = sheet.entries.empty()
                      ? 0
                      : static_cast<int>(sheet.entries.front().b.size());
    std::ostringstream out;
    for (int d = 0; d < naxes; ++d) out << "axis_" << d << ",";
    for (int i = 0; i < m; ++i) out << "b_" << i << ",";
    out << "total_cost,branch\n";
    for (const SheetEntry& e : sheet.entries) {
        for (int d = 0; d < naxes; ++d) {
            append_csv_number(out, sheet.grid.axis(d)[e.idx[d]]);
            out << ",";
        }
        for (int i = 0; i < m; ++i) {
            append_csv_number(out, e.b[i]);
            out << ",";
        }
        append_csv_number(out, e.total);
        out << "," << e.branch << "\n";
    }
    return out.str();
}

} // namespace qoc
