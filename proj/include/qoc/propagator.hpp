#ifndef QOC_PROPAGATOR_HPP
#define QOC_PROPAGATOR_HPP

#include <atomic>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "qoc/control_field.hpp"
#include "qoc/model.hpp"
#include "qoc/types.hpp"

namespace qoc {

/// Uniform grid on [0, T] with `steps` intervals; node k sits at k * dt.
struct TimeGrid {
    double horizon;
    int steps;

    TimeGrid(double T, int n) : horizon(T), steps(n) {
        if (!(T > 0.0) || n < 2) {
            throw Error("bad_grid", "need horizon > 0 and steps >= 2");
        }
    }

    double dt() const { return horizon / steps; }
    double node(int k) const { return k * dt(); }
};

/// Forward state trajectory: steps + 1 normalized states.
struct Trajectory {
    std::vector<Eigen::VectorXcd> states;
    TimeGrid grid;
};

/// Backward costate trajectory: steps + 1 vectors, not normalized, constant
/// Euclidean norm along the trajectory.
struct CostateTrajectory {
    std::vector<Eigen::VectorXcd> costates;
    TimeGrid grid;
};

/// Running count of forward propagations, used to measure how much work the
/// level-set prediction path avoids. Incremented by propagate_forward.
std::uint64_t forward_propagation_count();
void reset_forward_propagation_count();

/// Exponential midpoint stepper: psi_{k+1} = exp(-i dt H(t_k + dt/2)) psi_k,
/// with the field evaluated at the interval midpoint. Unitary per step.
Trajectory propagate_forward(const QuantumModel& model, const SystemParams& a,
                             const ControlParams& b, const TimeGrid& grid);

/// Exact adjoint of the forward stepper applied in reverse:
/// lambda_k = exp(+i dt H(t_k + dt/2)) lambda_{k+1}.
CostateTrajectory propagate_backward(const QuantumModel& model,
                                     const SystemParams& a,
                                     const ControlParams& b,
                                     const Eigen::VectorXcd& lambda_T,
                                     const TimeGrid& grid);

/// CSV dump: t, Re/Im of each amplitude, <observable>(t).
void write_trajectory_csv(const Trajectory& traj, const QuantumModel& model,
                          std::ostream& out);

} // namespace qoc

#endif
