#include "qoc/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <thread>

namespace qoc {

namespace {

Eigen::VectorXd clip(const Eigen::VectorXd& b, const OptSettings& st) {
    return b.cwiseMax(st.b_lo).cwiseMin(st.b_hi);
}

} // namespace

void validate_settings(const OptSettings& st, int m) {
    if (st.max_iters < 1) throw Error("bad_settings", "max_iters must be >= 1");
    if (!(st.backtrack_beta > 0.0 && st.backtrack_beta < 1.0)) {
        throw Error("bad_settings", "backtrack_beta must be in (0, 1)");
    }
    if (!(st.armijo_c1 > 0.0 && st.armijo_c1 < 1.0)) {
        throw Error("bad_settings", "armijo_c1 must be in (0, 1)");
    }
    if (st.restarts < 0) throw Error("bad_settings", "restarts must be >= 0");
    if (st.threads < 1) throw Error("bad_settings", "threads must be >= 1");
    if (st.b_lo.size() != m || st.b_hi.size() != m) {
        throw Error("bad_settings",
                    "bounds length must equal parameter count " +
                        std::to_string(m));
    }
    for (int i = 0; i < m; ++i) {
        if (st.b_lo[i] > st.b_hi[i]) {
            throw Error("bad_settings",
                        "b_lo[" + std::to_string(i) + "] exceeds b_hi");
        }
    }
}

Eigen::VectorXd projected_gradient(const Eigen::VectorXd& b,
                                   const Eigen::VectorXd& grad,
                                   const OptSettings& st) {
    Eigen::VectorXd pg = grad;
    for (Eigen::Index i = 0; i < b.size(); ++i) {
        if (st.b_lo[i] == st.b_hi[i]) {
            pg[i] = 0.0;
        } else if (b[i] <= st.b_lo[i] && grad[i] > 0.0) {
            pg[i] = 0.0;
        } else if (b[i] >= st.b_hi[i] && grad[i] < 0.0) {
            pg[i] = 0.0;
        }
    }
    return pg;
}

OptResult optimize(const QuantumModel& model, const SystemParams& a,
                   const ControlParams& b_init, const TimeGrid& grid,
                   const CostWeights& w, const OptSettings& st) {
    const int m = b_init.size();
    validate_settings(st, m);
    validate_weights(w);
    Eigen::VectorXd b = b_init.to_vector();
    for (int i = 0; i < m; ++i) {
        if (b[i] < st.b_lo[i] - 1e-12 || b[i] > st.b_hi[i] + 1e-12) {
            throw Error("init_out_of_bounds",
                        "b_init[" + std::to_string(i) + "] = " +
                            std::to_string(b[i]) + " outside bounds");
        }
    }
    b = clip(b, st);

    auto full = cost_and_gradient(model, a, ControlParams::from_vector(b),
                                  grid, w);
    CostBreakdown cost = full.first;
    Eigen::VectorXd grad = full.second;
    Eigen::VectorXd pg = projected_gradient(b, grad, st);
    double pg_inf = pg.lpNorm<Eigen::Infinity>();

    OptResult res;
    res.trace.push_back({0, cost.total, pg_inf});
    if (pg_inf <= st.grad_tol) {
        res.b_opt = b;
        res.cost = cost;
        res.grad_inf_norm = pg_inf;
        res.iterations = 0;
        res.converged = true;
        res.stop_reason = "gradient";
        return res;
    }

    // First trial step displaces no component by more than a tenth of the
    // widest box range; afterwards the accepted alpha carries over and grows.
    double box_range = 0.0;
    for (int i = 0; i < m; ++i) {
        box_range = std::max(box_range, st.b_hi[i] - st.b_lo[i]);
    }
    if (box_range <= 0.0) box_range = 1.0;
    double alpha = 0.1 * box_range / std::max(pg_inf, 1e-12);
    int accepted = 0;
    int stagnant = 0;
    bool converged = false;
    std::string reason = "max_iters";

    while (accepted < st.max_iters) {
        // backtracking line search on the projected step
        bool found = false;
        Eigen::VectorXd b_try;
        CostBreakdown cost_try{};
        for (int ls = 0; ls <= st.max_backtracks; ++ls) {
            b_try = clip(b - alpha * pg, st);
            const double dot = grad.dot(b_try - b);
            if (dot < 0.0) {
                cost_try = evaluate_cost(
                    model, a, ControlParams::from_vector(b_try), grid, w);
                if (cost_try.total <= cost.total + st.armijo_c1 * dot) {
                    found = true;
                    break;
                }
            }
            alpha *= st.backtrack_beta;
        }
        if (!found) {
            reason = "line_search_failure";
            break;
        }

        const double prev_total = cost.total;
        b = b_try;
        full = cost_and_gradient(model, a, ControlParams::from_vector(b), grid,
                                 w);
        cost = full.first;
        grad = full.second;
        pg = projected_gradient(b, grad, st);
        pg_inf = pg.lpNorm<Eigen::Infinity>();
        ++accepted;
        res.trace.push_back({accepted, cost.total, pg_inf});
        alpha = std::min(alpha / st.backtrack_beta, 1e6);

        if (pg_inf <= st.grad_tol) {
            converged = true;
            reason = "gradient";
            break;
        }
        const double rel = std::abs(prev_total - cost.total) /
                           std::max(std::abs(prev_total), 1e-300);
        stagnant = (rel <= st.cost_rel_tol) ? stagnant + 1 : 0;
        if (stagnant >= 3) {
            converged = true;
            reason = "cost_stagnation";
            break;
        }
    }

    res.b_opt = b;
    res.cost = cost;
    res.grad_inf_norm = pg_inf;
    res.iterations = accepted;
    res.converged = converged;
    res.stop_reason = reason;
    return res;
}

OptResult multistart(const QuantumModel& model, const SystemParams& a,
                     const ControlParams& b_init, const TimeGrid& grid,
                     const CostWeights& w, const OptSettings& st) {
    const int m = b_init.size();
    validate_settings(st, m);

    // Draw all starting points up front so thread scheduling cannot change
    // the random stream.
    std::vector<Eigen::VectorXd> starts;
    starts.push_back(b_init.to_vector());
    std::mt19937_64 rng(st.rng_seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int r = 0; r < st.restarts; ++r) {
        Eigen::VectorXd b(m);
        for (int i = 0; i < m; ++i) {
            b[i] = st.b_lo[i] + (st.b_hi[i] - st.b_lo[i]) * unit(rng);
        }
        starts.push_back(b);
    }

    const int n = static_cast<int>(starts.size());
    std::vector<OptResult> results(n);
    std::vector<bool> ok(n, false);
    std::vector<std::string> errors(n);

    auto run_one = [&](int r) {
        try {
            OptResult res = optimize(model, a,
                                     ControlParams::from_vector(starts[r]),
                                     grid, w, st);
            res.restart_index = r;
            results[r] = std::move(res);
            ok[r] = true;
        } catch (const Error& e) {
            errors[r] = e.what();
        }
    };

    const int threads = std::min(st.threads, n);
    if (threads <= 1) {
        for (int r = 0; r < n; ++r) run_one(r);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) {
            pool.emplace_back([&, t] {
                for (int r = t; r < n; r += threads) run_one(r);
            });
        }
        for (auto& th : pool) th.join();
    }

    int best = -1;
    for (int r = 0; r < n; ++r) {
        if (!ok[r]) continue;
        if (best < 0) {
            best = r;
            continue;
        }
        const OptResult& cand = results[r];
        const OptResult& inc = results[best];
        if (cand.cost.total < inc.cost.total ||
            (cand.cost.total == inc.cost.total &&
             (cand.grad_inf_norm < inc.grad_inf_norm ||
              (cand.grad_inf_norm == inc.grad_inf_norm &&
               r < best)))) {
            best = r;
        }
    }
    if (best < 0) {
        throw Error("all_starts_failed",
                    "every start failed; first error: " +
                        (errors.empty() ? std::string("none") : errors[0]));
    }
    return results[best];
}

} // namespace qoc
