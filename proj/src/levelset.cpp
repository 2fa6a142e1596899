#include "qoc/levelset.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <json.hpp>

#include "qoc/propagator.hpp"

namespace qoc {

namespace {

using nlohmann::json;

std::vector<Eigen::Index> grid_dims(const SweepGrid& grid) {
    std::vector<Eigen::Index> dims;
    for (int d = 0; d < grid.axis_count(); ++d) {
        dims.push_back(grid.axis(d).size());
    }
    return dims;
}

Eigen::Index node_count(const std::vector<Eigen::Index>& dims) {
    return std::accumulate(dims.begin(), dims.end(), Eigen::Index(1),
                           std::multiplies<>());
}

std::vector<int> unflatten(Eigen::Index flat,
                           const std::vector<Eigen::Index>& dims) {
    std::vector<int> idx(dims.size());
    for (int d = static_cast<int>(dims.size()) - 1; d >= 0; --d) {
        idx[d] = static_cast<int>(flat % dims[d]);
        flat /= dims[d];
    }
    return idx;
}

int l1_distance(const std::vector<int>& a, const std::vector<int>& b) {
    int dist = 0;
    for (std::size_t d = 0; d < a.size(); ++d) dist += std::abs(a[d] - b[d]);
    return dist;
}

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    int find(int i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    }
    void unite(int i, int j) { parent[find(i)] = find(j); }
};

json vec_to_json(const Eigen::VectorXd& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
    return out;
}

Eigen::VectorXd vec_from_json(const json& j) {
    Eigen::VectorXd v(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) v[i] = j[i].get<double>();
    return v;
}

} // namespace

void validate_sweep_grid(const SweepGrid& grid) {
    if (grid.axis_count() == 0) {
        throw Error("bad_sweep_grid", "at least one sweep axis required");
    }
    for (int d = 0; d < grid.axis_count(); ++d) {
        const Eigen::VectorXd& axis = grid.axis(d);
        if (axis.size() < 1) {
            throw Error("bad_sweep_grid",
                        "axis " + std::to_string(d) + " has no nodes");
        }
        for (Eigen::Index i = 0; i + 1 < axis.size(); ++i) {
            if (!(axis[i] < axis[i + 1])) {
                throw Error("bad_sweep_grid",
                            "axis " + std::to_string(d) +
                                " must be strictly increasing");
            }
        }
    }
}

SolutionSheet sweep(const QuantumModel& model, const SweepGrid& grid,
                    const TimeGrid& tgrid, const CostWeights& w,
                    const OptSettings& st, const SweepOptions& opts) {
    validate_sweep_grid(grid);
    const int p = static_cast<int>(grid.s_axes.size());
    if (p != model.s_min.size()) {
        throw Error("dim_mismatch", "sweep declares " + std::to_string(p) +
                                        " s axes, model expects " +
                                        std::to_string(model.s_min.size()));
    }
    const auto nc = static_cast<Eigen::Index>(model.c_names.size());
    if (opts.base_c.size() != nc) {
        throw Error("dim_mismatch", "base c has wrong length");
    }
    if (static_cast<Eigen::Index>(grid.c_axes.size()) > nc) {
        throw Error("dim_mismatch", "more c axes than c components");
    }

    const auto dims = grid_dims(grid);
    const Eigen::Index total = node_count(dims);
    const int m = static_cast<int>(opts.b_init.size());

    SolutionSheet sheet;
    sheet.grid = grid;
    sheet.b_lo = st.b_lo;
    sheet.b_hi = st.b_hi;
    sheet.continuity_threshold = opts.continuity_threshold;

    const std::uint64_t props_before = forward_propagation_count();
    Eigen::Index failed = 0;
    for (Eigen::Index flat = 0; flat < total; ++flat) {
        SheetEntry entry;
        entry.idx = unflatten(flat, dims);

        Eigen::VectorXd s(p);
        for (int d = 0; d < p; ++d) s[d] = grid.s_axes[d][entry.idx[d]];
        Eigen::VectorXd c = opts.base_c;
        for (std::size_t j = 0; j < grid.c_axes.size(); ++j) {
            c[j] = grid.c_axes[j][entry.idx[p + j]];
        }

        // warm start from the nearest solved converged node
        Eigen::VectorXd b_start = opts.b_init;
        if (opts.warm_start) {
            int best_dist = -1;
            for (const SheetEntry& prev : sheet.entries) {
                if (!prev.converged) continue;
                const int dist = l1_distance(prev.idx, entry.idx);
                if (best_dist < 0 || dist < best_dist) {
                    best_dist = dist;
                    b_start = prev.b;
                }
            }
        }

        try {
            const SystemParams a = map_scale(model, ScaleVector{s}, c);
            OptResult res =
                multistart(model, a, ControlParams::from_vector(b_start),
                           tgrid, w, st);
            entry.b = res.b_opt;
            entry.total = res.cost.total;
            entry.deviation = res.cost.deviation;
            entry.intensity = res.cost.intensity;
            entry.theta_T = res.cost.theta_T;
            entry.grad_inf_norm = res.grad_inf_norm;
            entry.iterations = res.iterations;
            entry.converged = res.converged;
        } catch (const Error&) {
            entry.b = Eigen::VectorXd::Zero(m);
            entry.converged = false;
        }
        if (!entry.converged) ++failed;
        sheet.entries.push_back(std::move(entry));
    }
    sheet.forward_propagations = forward_propagation_count() - props_before;

    if (2 * failed > total) {
        throw Error("sweep_failed", std::to_string(failed) + " of " +
                                        std::to_string(total) +
                                        " nodes failed to converge");
    }
    label_branches(sheet);
    return sheet;
}

void label_branches(SolutionSheet& sheet) {
    const auto dims = grid_dims(sheet.grid);
    const int n = static_cast<int>(sheet.entries.size());

    // adjacent converged pairs and their b gaps
    std::vector<std::pair<std::pair<int, int>, double>> pairs;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (!sheet.entries[i].converged || !sheet.entries[j].converged) {
                continue;
            }
            if (l1_distance(sheet.entries[i].idx, sheet.entries[j].idx) != 1) {
                continue;
            }
            const double gap = (sheet.entries[i].b - sheet.entries[j].b)
                                   .lpNorm<Eigen::Infinity>();
            pairs.push_back({{i, j}, gap});
        }
    }

    double threshold = sheet.continuity_threshold;
    if (!(threshold > 0.0)) {
        std::vector<double> gaps;
        for (const auto& pr : pairs) gaps.push_back(pr.second);
        if (!gaps.empty()) {
            std::sort(gaps.begin(), gaps.end());
            const double median = gaps[gaps.size() / 2];
            threshold = 10.0 * std::max(median, 1e-12);
        } else {
            threshold = 1e-12;
        }
        sheet.continuity_threshold = threshold;
    }

    UnionFind uf(n);
    for (const auto& pr : pairs) {
        if (pr.second <= threshold) uf.unite(pr.first.first, pr.first.second);
    }

    std::map<int, int> relabel;
    for (int i = 0; i < n; ++i) {
        if (!sheet.entries[i].converged) {
            sheet.entries[i].branch = -1;
            continue;
        }
        const int root = uf.find(i);
        auto it = relabel.find(root);
        if (it == relabel.end()) {
            it = relabel.emplace(root, static_cast<int>(relabel.size())).first;
        }
        sheet.entries[i].branch = it->second;
    }
}

SheetInterpolant SheetInterpolant::fit(const SolutionSheet& sheet) {
    const auto dims = grid_dims(sheet.grid);
    const int naxes = sheet.grid.axis_count();

    SheetInterpolant out;
    out.p_s_ = static_cast<int>(sheet.grid.s_axes.size());
    out.p_c_ = static_cast<int>(sheet.grid.c_axes.size());
    out.b_lo_ = sheet.b_lo;
    out.b_hi_ = sheet.b_hi;

    std::map<int, std::vector<const SheetEntry*>> by_branch;
    for (const SheetEntry& e : sheet.entries) {
        if (e.converged && e.branch >= 0) by_branch[e.branch].push_back(&e);
    }
    if (by_branch.empty()) {
        throw Error("empty_sheet", "no converged nodes to fit");
    }
    out.m_ = static_cast<int>(by_branch.begin()->second.front()->b.size());

    for (const auto& [branch, nodes] : by_branch) {
        // bounding index box of the branch
        std::vector<int> lo(naxes, std::numeric_limits<int>::max());
        std::vector<int> hi(naxes, -1);
        for (const SheetEntry* e : nodes) {
            for (int d = 0; d < naxes; ++d) {
                lo[d] = std::min(lo[d], e->idx[d]);
                hi[d] = std::max(hi[d], e->idx[d]);
            }
        }
        std::vector<Eigen::Index> extents(naxes);
        Eigen::Index box = 1;
        for (int d = 0; d < naxes; ++d) {
            extents[d] = hi[d] - lo[d] + 1;
            if (extents[d] < 2) {
                throw Error("insufficient_nodes",
                            "branch " + std::to_string(branch) + " axis " +
                                std::to_string(d) +
                                " has fewer than 2 valid nodes");
            }
            box *= extents[d];
        }
        if (static_cast<Eigen::Index>(nodes.size()) != box) {
            throw Error("insufficient_nodes",
                        "branch " + std::to_string(branch) +
                            " does not fill its bounding sub-grid");
        }

        Branch br;
        for (int d = 0; d < naxes; ++d) {
            br.axes.push_back(
                sheet.grid.axis(d).segment(lo[d], extents[d]));
        }
        // flat values per b component, lexicographic within the box
        std::vector<Eigen::VectorXd> values(out.m_,
                                            Eigen::VectorXd::Zero(box));
        for (const SheetEntry* e : nodes) {
            Eigen::Index flat = 0;
            for (int d = 0; d < naxes; ++d) {
                flat = flat * extents[d] + (e->idx[d] - lo[d]);
            }
            for (int i = 0; i < out.m_; ++i) values[i][flat] = e->b[i];
        }
        for (int i = 0; i < out.m_; ++i) {
            br.components.emplace_back(br.axes, values[i]);
        }
        out.branches_.emplace(branch, std::move(br));
    }
    return out;
}

std::vector<int> SheetInterpolant::branch_ids() const {
    std::vector<int> ids;
    for (const auto& [id, br] : branches_) ids.push_back(id);
    return ids;
}

bool SheetInterpolant::has_branch(int branch) const {
    return branches_.count(branch) > 0;
}

const std::vector<Eigen::VectorXd>&
SheetInterpolant::branch_axes(int branch) const {
    auto it = branches_.find(branch);
    if (it == branches_.end()) {
        throw Error("unknown_branch", "no branch " + std::to_string(branch));
    }
    return it->second.axes;
}

bool SheetInterpolant::in_hull(int branch, const Eigen::VectorXd& at) const {
    return branches_.at(branch).components.front().in_hull(at);
}

Eigen::VectorXd SheetInterpolant::value(int branch,
                                        const Eigen::VectorXd& at) const {
    auto it = branches_.find(branch);
    if (it == branches_.end()) {
        throw Error("unknown_branch", "no branch " + std::to_string(branch));
    }
    Eigen::VectorXd b(m_);
    for (int i = 0; i < m_; ++i) b[i] = it->second.components[i].value(at);
    return b;
}

Eigen::VectorXd SheetInterpolant::partial(int branch,
                                          const Eigen::VectorXd& at,
                                          int axis) const {
    auto it = branches_.find(branch);
    if (it == branches_.end()) {
        throw Error("unknown_branch", "no branch " + std::to_string(branch));
    }
    Eigen::VectorXd db(m_);
    for (int i = 0; i < m_; ++i) {
        db[i] = it->second.components[i].partial(at, axis);
    }
    return db;
}

FrontGeometry geometry(const SheetInterpolant& interp,
                       const Eigen::VectorXd& at, int branch) {
    if (!interp.has_branch(branch)) {
        throw Error("unknown_branch", "no branch " + std::to_string(branch));
    }
    if (!interp.in_hull(branch, at)) {
        throw Error("out_of_hull", "geometry query outside the grid hull");
    }
    const int p = interp.scale_axis_count();
    const int q = interp.c_axis_count();
    const int m = interp.param_count();

    FrontGeometry geo;
    geo.velocities.resize(m, p);
    geo.tangents.resize(m, q);
    for (int i = 0; i < p; ++i) {
        geo.velocities.col(i) = interp.partial(branch, at, i);
    }
    for (int j = 0; j < q; ++j) {
        geo.tangents.col(j) = interp.partial(branch, at, p + j);
    }
    geo.normal_speeds.resize(m, p);
    if (q == 0) {
        // level set is a point; the full velocity is the normal speed
        geo.normal_speeds = geo.velocities;
    } else {
        const auto qr = geo.tangents.colPivHouseholderQr();
        for (int i = 0; i < p; ++i) {
            const Eigen::VectorXd proj =
                geo.tangents * qr.solve(geo.velocities.col(i));
            geo.normal_speeds.col(i) = geo.velocities.col(i) - proj;
        }
    }
    return geo;
}

Prediction predict(const SheetInterpolant& interp, const Eigen::VectorXd& at,
                   int branch, bool allow_extrapolation) {
    if (!interp.has_branch(branch)) {
        throw Error("unknown_branch", "no branch " + std::to_string(branch));
    }
    const bool inside = interp.in_hull(branch, at);
    if (!inside && !allow_extrapolation) {
        throw Error("out_of_hull",
                    "query outside the grid hull; extrapolation disabled");
    }
    Prediction pred;
    pred.b = interp.value(branch, at)
                 .cwiseMax(interp.b_lo())
                 .cwiseMin(interp.b_hi());
    pred.extrapolated = !inside;
    return pred;
}

std::string sheet_to_json(const SolutionSheet& sheet) {
    json doc;
    doc["format_version"] = 1;
    json s_axes = json::array(), c_axes = json::array();
    for (const auto& a : sheet.grid.s_axes) s_axes.push_back(vec_to_json(a));
    for (const auto& a : sheet.grid.c_axes) c_axes.push_back(vec_to_json(a));
    doc["grid"] = {{"s_axes", s_axes}, {"c_axes", c_axes}};
    doc["b_lo"] = vec_to_json(sheet.b_lo);
    doc["b_hi"] = vec_to_json(sheet.b_hi);
    doc["continuity_threshold"] = sheet.continuity_threshold;
    doc["forward_propagations"] = sheet.forward_propagations;
    json entries = json::array();
    for (const SheetEntry& e : sheet.entries) {
        entries.push_back({{"idx", e.idx},
                           {"b", vec_to_json(e.b)},
                           {"total", e.total},
                           {"deviation", e.deviation},
                           {"intensity", e.intensity},
                           {"theta_T", e.theta_T},
                           {"grad_inf_norm", e.grad_inf_norm},
                           {"iterations", e.iterations},
                           {"converged", e.converged},
                           {"branch", e.branch}});
    }
    doc["entries"] = entries;
    doc["config_text"] = sheet.config_text;
    return doc.dump(2);
}

SolutionSheet sheet_from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw Error("bad_sheet_document", e.what());
    }
    try {
        if (doc.at("format_version").get<int>() != 1) {
            throw Error("bad_sheet_document", "unsupported format_version");
        }
        SolutionSheet sheet;
        for (const auto& a : doc.at("grid").at("s_axes")) {
            sheet.grid.s_axes.push_back(vec_from_json(a));
        }
        for (const auto& a : doc.at("grid").at("c_axes")) {
            sheet.grid.c_axes.push_back(vec_from_json(a));
        }
        sheet.b_lo = vec_from_json(doc.at("b_lo"));
        sheet.b_hi = vec_from_json(doc.at("b_hi"));
        sheet.continuity_threshold =
            doc.at("continuity_threshold").get<double>();
        sheet.forward_propagations =
            doc.at("forward_propagations").get<std::uint64_t>();
        for (const auto& je : doc.at("entries")) {
            SheetEntry e;
            e.idx = je.at("idx").get<std::vector<int>>();
            e.b = vec_from_json(je.at("b"));
            e.total = je.at("total").get<double>();
            e.deviation = je.at("deviation").get<double>();
            e.intensity = je.at("intensity").get<double>();
            e.theta_T = je.at("theta_T").get<double>();
            e.grad_inf_norm = je.at("grad_inf_norm").get<double>();
            e.iterations = je.at("iterations").get<int>();
            e.converged = je.at("converged").get<bool>();
            e.branch = je.at("branch").get<int>();
            sheet.entries.push_back(std::move(e));
        }
        sheet.config_text = doc.at("config_text").get<std::string>();
        validate_sweep_grid(sheet.grid);
        return sheet;
    } catch (const json::exception& e) {
        throw Error("bad_sheet_document", e.what());
    }
}

} // namespace qoc
