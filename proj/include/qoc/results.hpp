#ifndef QOC_RESULTS_HPP
#define QOC_RESULTS_HPP

#include <string>

#include "qoc/config.hpp"
#include "qoc/levelset.hpp"
#include "qoc/optimizer.hpp"

namespace qoc {

/// Write-temp-then-rename so readers never observe a partial document.
void atomic_write(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

std::string optimize_result_to_json(const RunConfig& cfg, const OptResult& res,
                                    double wall_clock_sec,
                                    std::uint64_t forward_propagations);

struct PredictReport {
    Eigen::VectorXd at;
    int branch = 0;
    Prediction prediction;
    FrontGeometry geo;
    bool refined = false;
    double refined_total = 0.0;
    int refine_iterations = 0;
    std::uint64_t refine_propagations = 0;
};

std::string predict_result_to_json(const SolutionSheet& sheet,
                                   const PredictReport& report,
                                   double wall_clock_sec);

std::string sheet_result_to_json(const RunConfig& cfg,
                                 const SolutionSheet& sheet,
                                 double wall_clock_sec);

// CSV exports for external plotting.
std::string trace_to_csv(const std::string& result_json);
std::string sheet_to_csv(const std::string& sheet_json);

} // namespace qoc

#endif
