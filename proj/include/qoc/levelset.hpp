#ifndef QOC_LEVELSET_HPP
#define QOC_LEVELSET_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qoc/optimizer.hpp"
#include "qoc/spline.hpp"

namespace qoc {

/// Sweep axes over the scale vector s and the unscaled parameters c. Each
/// c axis j drives component j of c; remaining c components stay at the base
/// value. Combined query points are ordered (s axes..., c axes...).
struct SweepGrid {
    std::vector<Eigen::VectorXd> s_axes;
    std::vector<Eigen::VectorXd> c_axes;

    int axis_count() const {
        return static_cast<int>(s_axes.size() + c_axes.size());
    }
    const Eigen::VectorXd& axis(int d) const {
        return d < static_cast<int>(s_axes.size())
                   ? s_axes[d]
                   : c_axes[d - s_axes.size()];
    }
};

void validate_sweep_grid(const SweepGrid& grid);

struct SheetEntry {
    std::vector<int> idx; // combined index tuple (s axes then c axes)
    Eigen::VectorXd b;
    double total = 0.0;
    double deviation = 0.0;
    double intensity = 0.0;
    double theta_T = 0.0;
    double grad_inf_norm = 0.0;
    int iterations = 0;
    bool converged = false;
    int branch = -1;
};

/// Grid of per-node optimal controls with branch labels. Interpolants are
/// rebuilt from this on load, never serialized.
struct SolutionSheet {
    SweepGrid grid;
    std::vector<SheetEntry> entries; // lexicographic node order
    Eigen::VectorXd b_lo;
    Eigen::VectorXd b_hi;
    double continuity_threshold = 0.0; // resolved value used for labeling
    std::uint64_t forward_propagations = 0;
    std::string config_text; // config echo, used to rebuild models
};

struct SweepOptions {
    Eigen::VectorXd b_init;
    Eigen::VectorXd base_c;
    bool warm_start = true;
    // <= 0 means "auto": 10x the median adjacent neighbor gap
    double continuity_threshold = 0.0;
};

/// Visits grid nodes in lexicographic order, running multistart at each with
/// the nearest solved neighbor's b as warm start. Failed nodes are flagged
/// and skipped; throws only if more than half the nodes fail. Branch ids are
/// assigned afterwards by b-space continuity between adjacent nodes.
SolutionSheet sweep(const QuantumModel& model, const SweepGrid& grid,
                    const TimeGrid& tgrid, const CostWeights& w,
                    const OptSettings& st, const SweepOptions& opts);

/// Assign branch ids (connected components of adjacent converged nodes whose
/// b gap stays under the threshold). Exposed for rebuilding loaded sheets.
void label_branches(SolutionSheet& sheet);

/// Per-branch, per-component interpolants over the sheet axes.
class SheetInterpolant {
public:
    static SheetInterpolant fit(const SolutionSheet& sheet);

    std::vector<int> branch_ids() const;
    bool has_branch(int branch) const;
    /// Axis ranges covered by one branch (its bounding sub-grid).
    const std::vector<Eigen::VectorXd>& branch_axes(int branch) const;
    bool in_hull(int branch, const Eigen::VectorXd& at) const;

    Eigen::VectorXd value(int branch, const Eigen::VectorXd& at) const;
    /// partial of every b component along one combined axis
    Eigen::VectorXd partial(int branch, const Eigen::VectorXd& at,
                            int axis) const;

    int scale_axis_count() const { return p_s_; }
    int c_axis_count() const { return p_c_; }
    int param_count() const { return m_; }
    const Eigen::VectorXd& b_lo() const { return b_lo_; }
    const Eigen::VectorXd& b_hi() const { return b_hi_; }

private:
    struct Branch {
        std::vector<Eigen::VectorXd> axes;
        std::vector<TensorInterpolant> components;
    };
    std::map<int, Branch> branches_;
    int p_s_ = 0;
    int p_c_ = 0;
    int m_ = 0;
    Eigen::VectorXd b_lo_;
    Eigen::VectorXd b_hi_;
};

/// Level-set geometry at a query point: tangent directions of the level set
/// (db/dc_j), the per-scale-axis velocities db/ds_i, and their components
/// normal to the tangent span.
struct FrontGeometry {
    Eigen::MatrixXd tangents;      // m x q, column j = db/dc_j
    Eigen::MatrixXd velocities;    // m x p, column i = db/ds_i
    Eigen::MatrixXd normal_speeds; // m x p, velocity minus tangent projection
};

FrontGeometry geometry(const SheetInterpolant& interp,
                       const Eigen::VectorXd& at, int branch);

struct Prediction {
    Eigen::VectorXd b; // clipped to the sheet's bounds
    bool extrapolated = false;
};

Prediction predict(const SheetInterpolant& interp, const Eigen::VectorXd& at,
                   int branch, bool allow_extrapolation = false);

// JSON persistence of the sheet document (format_version field included).
std::string sheet_to_json(const SolutionSheet& sheet);
SolutionSheet sheet_from_json(const std::string& text);

} // namespace qoc

#endif
