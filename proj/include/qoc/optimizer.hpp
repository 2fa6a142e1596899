#ifndef QOC_OPTIMIZER_HPP
#define QOC_OPTIMIZER_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qoc/cost.hpp"

namespace qoc {

struct OptSettings {
    int max_iters = 200;
    double grad_tol = 1e-6;
    double cost_rel_tol = 1e-10;
    double backtrack_beta = 0.5; // step shrink factor, in (0,1)
    double armijo_c1 = 1e-4;     // sufficient-decrease constant, in (0,1)
    int max_backtracks = 40;
    int restarts = 0;
    std::uint64_t rng_seed = 0;
    Eigen::VectorXd b_lo; // per-component bounds; lo == hi freezes a component
    Eigen::VectorXd b_hi;
    int threads = 1;
};

struct TracePoint {
    int iter;
    double total;
    double grad_inf_norm;
};

struct OptResult {
    Eigen::VectorXd b_opt;
    CostBreakdown cost;
    double grad_inf_norm; // projected-gradient infinity norm
    int iterations;
    bool converged;
    std::string stop_reason; // gradient | cost_stagnation | max_iters | line_search_failure
    std::vector<TracePoint> trace;
    int restart_index = 0;
};

void validate_settings(const OptSettings& st, int m);

/// Gradient with active box constraints projected out: components pushing
/// past a bound (or frozen by lo == hi) are zeroed.
Eigen::VectorXd projected_gradient(const Eigen::VectorXd& b,
                                   const Eigen::VectorXd& grad,
                                   const OptSettings& st);

/// Steepest descent with Armijo backtracking on the total cost, iterates
/// clipped to the box bounds. Stops on projected-gradient norm, on three
/// consecutive accepted steps with relative cost change below cost_rel_tol,
/// or at max_iters.
OptResult optimize(const QuantumModel& model, const SystemParams& a,
                   const ControlParams& b_init, const TimeGrid& grid,
                   const CostWeights& w, const OptSettings& st);

/// optimize from restarts + 1 starting points: the given b_init plus uniform
/// draws inside the bounds, seeded from rng_seed. Returns the lowest-cost
/// result; ties broken by gradient norm, then restart index.
OptResult multistart(const QuantumModel& model, const SystemParams& a,
                     const ControlParams& b_init, const TimeGrid& grid,
                     const CostWeights& w, const OptSettings& st);

} // namespace qoc

#endif
