#include "qoc/cost.hpp"

#include <cmath>

namespace qoc {

namespace {
const Complex kI(0.0, 1.0);

double trapezoid_weight(int k, int steps) {
    return (k == 0 || k == steps) ? 0.5 : 1.0;
}
} // namespace

void validate_weights(const CostWeights& w) {
    if (!std::isfinite(w.deviation_weight) || !std::isfinite(w.intensity_weight) ||
        !std::isfinite(w.theta0)) {
        throw Error("bad_weights", "cost weights must be finite");
    }
    if (w.deviation_weight < 0.0 || w.intensity_weight < 0.0) {
        throw Error("bad_weights", "K and L must be non-negative");
    }
    if (w.deviation_weight == 0.0 && w.intensity_weight == 0.0) {
        throw Error("bad_weights", "K and L must not both be zero");
    }
}

double deviation_cost(double theta_T, const CostWeights& w) {
    const double d = theta_T - w.theta0;
    return w.deviation_weight * d * d;
}

double intensity_cost(const ControlParams& b, const TimeGrid& grid,
                      const CostWeights& w) {
    double acc = 0.0;
    for (int k = 0; k <= grid.steps; ++k) {
        const double e = field_value(b, grid.node(k));
        acc += trapezoid_weight(k, grid.steps) * e * e;
    }
    return w.intensity_weight * acc * grid.dt();
}

Eigen::VectorXcd terminal_costate(const QuantumModel& model,
                                  const QuantumState& psi_T, double theta_T,
                                  const CostWeights& w) {
    const Complex prefactor =
        2.0 * w.deviation_weight * (theta_T - w.theta0) / kI;
    return prefactor * (model.observable.mat() * psi_T.vec());
}

CostBreakdown evaluate_cost(const QuantumModel& model, const SystemParams& a,
                            const ControlParams& b, const TimeGrid& grid,
                            const CostWeights& w) {
    const Trajectory traj = propagate_forward(model, a, b, grid);
    const QuantumState psi_T(traj.states.back());
    const double theta_T = expectation(model.observable, psi_T);
    const double dev = deviation_cost(theta_T, w);
    const double inten = intensity_cost(b, grid, w);
    return CostBreakdown{dev, inten, dev + inten, theta_T};
}

std::pair<CostBreakdown, Eigen::VectorXd>
cost_and_gradient(const QuantumModel& model, const SystemParams& a,
                  const ControlParams& b, const TimeGrid& grid,
                  const CostWeights& w) {
    const Trajectory traj = propagate_forward(model, a, b, grid);
    const QuantumState psi_T(traj.states.back());
    const double theta_T = expectation(model.observable, psi_T);
    const double dev = deviation_cost(theta_T, w);
    const double inten = intensity_cost(b, grid, w);

    const Eigen::VectorXcd lambda_T = terminal_costate(model, psi_T, theta_T, w);
    const CostateTrajectory costate =
        propagate_backward(model, a, b, lambda_T, grid);

    // The terminal costate carries a 1/i factor, so the deviation term of the
    // gradient is -Re of the matrix element rather than Im of the i-free one;
    // the finite-difference oracle fixes this convention.
    const Eigen::MatrixXcd& mu = model.dipole.mat();
    Eigen::VectorXd grad = Eigen::VectorXd::Zero(b.size());
    for (int k = 0; k <= grid.steps; ++k) {
        const double t = grid.node(k);
        const double e = field_value(b, t);
        const Complex elem = costate.costates[k].dot(mu * traj.states[k]);
        const double integrand =
            2.0 * w.intensity_weight * e -
            2.0 * model.dipole_sign * elem.real();
        grad += trapezoid_weight(k, grid.steps) * integrand * field_gradient(b, t);
    }
    grad *= grid.dt();

    return {CostBreakdown{dev, inten, dev + inten, theta_T}, grad};
}

} // namespace qoc
