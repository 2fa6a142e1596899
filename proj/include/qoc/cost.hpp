#ifndef QOC_COST_HPP
#define QOC_COST_HPP

#include <Eigen/Dense>

#include "qoc/control_field.hpp"
#include "qoc/model.hpp"
#include "qoc/propagator.hpp"

namespace qoc {

/// Cost weights: deviation weight K, intensity weight L, and the observable
/// set point theta0.
struct CostWeights {
    double deviation_weight; // K
    double intensity_weight; // L
    double theta0;
};

struct CostBreakdown {
    double deviation;
    double intensity;
    double total;
    double theta_T;
};

void validate_weights(const CostWeights& w);

/// K * (theta_T - theta0)^2
double deviation_cost(double theta_T, const CostWeights& w);

/// L * integral of E(t)^2 over [0, T], trapezoid on the grid nodes.
double intensity_cost(const ControlParams& b, const TimeGrid& grid,
                      const CostWeights& w);

/// Terminal costate lambda(T) = (2K / i) (theta_T - theta0) Theta |psi(T)>.
Eigen::VectorXcd terminal_costate(const QuantumModel& model,
                                  const QuantumState& psi_T, double theta_T,
                                  const CostWeights& w);

/// Total cost only (one forward propagation, no costate).
CostBreakdown evaluate_cost(const QuantumModel& model, const SystemParams& a,
                            const ControlParams& b, const TimeGrid& grid,
                            const CostWeights& w);

/// Adjoint gradient of the total cost with respect to the flattened b:
/// forward propagation, terminal costate, backward propagation, then
/// trapezoid quadrature of the intensity and deviation terms.
std::pair<CostBreakdown, Eigen::VectorXd>
cost_and_gradient(const QuantumModel& model, const SystemParams& a,
                  const ControlParams& b, const TimeGrid& grid,
                  const CostWeights& w);

} // namespace qoc

#endif
