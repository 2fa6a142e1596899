#ifndef QOC_TEST_HELPERS_HPP
#define QOC_TEST_HELPERS_HPP

#include <random>

#include "qoc/cost.hpp"
#include "qoc/model.hpp"

namespace qoc::test {

inline QuantumModel two_level(const std::string& observable = "sigma_z",
                              double dipole_sign = 1.0) {
    Eigen::VectorXcd psi0(2);
    psi0 << 1, 0;
    Eigen::VectorXd smin(1), smax(1);
    smin << 0.5;
    smax << 2.0;
    return make_two_level(observable, dipole_sign, psi0, smin, smax);
}

inline SystemParams two_level_params(const QuantumModel& model,
                                     double omega0 = 1.0) {
    Eigen::VectorXd c(1);
    c << omega0;
    return map_scale(model, ScaleVector{Eigen::VectorXd::Ones(1)}, c);
}

inline QuantumModel three_level(const std::string& observable = "proj_2") {
    Eigen::VectorXcd psi0(3);
    psi0 << 1, 0, 0;
    Eigen::VectorXd smin(2), smax(2);
    smin << 0.5, 0.5;
    smax << 2.0, 2.0;
    return make_three_level_ladder(observable, 1.0, psi0, smin, smax);
}

/// A single pulse with parameters drawn from ranges that keep the dynamics
/// well inside the model's response.
inline ControlParams random_pulse(std::mt19937_64& rng, double horizon) {
    std::uniform_real_distribution<double> amp(-1.0, 1.0);
    std::uniform_real_distribution<double> center(0.2 * horizon,
                                                  0.8 * horizon);
    std::uniform_real_distribution<double> width(0.1 * horizon, 0.5 * horizon);
    std::uniform_real_distribution<double> carrier(0.0, 2.0);
    return ControlParams(
        {Pulse{amp(rng), center(rng), width(rng), carrier(rng)}});
}

/// Central finite difference of the total cost, the independent oracle for
/// the adjoint gradient.
inline Eigen::VectorXd fd_cost_gradient(const QuantumModel& model,
                                        const SystemParams& a,
                                        const Eigen::VectorXd& b,
                                        const TimeGrid& grid,
                                        const CostWeights& w, double h) {
    Eigen::VectorXd g(b.size());
    for (Eigen::Index i = 0; i < b.size(); ++i) {
        Eigen::VectorXd bp = b, bm = b;
        bp[i] += h;
        bm[i] -= h;
        const double fp =
            evaluate_cost(model, a, ControlParams::from_vector(bp), grid, w)
                .total;
        const double fm =
            evaluate_cost(model, a, ControlParams::from_vector(bm), grid, w)
                .total;
        g[i] = (fp - fm) / (2.0 * h);
    }
    return g;
}

/// Exact two-level Rabi excited-state population under a constant drive E
/// with detuning delta = omega0 / 2.
inline double rabi_population(double e, double omega0, double t) {
    const double delta = 0.5 * omega0;
    const double omega_eff = std::sqrt(delta * delta + e * e);
    const double s = std::sin(omega_eff * t);
    return (e * e) / (delta * delta + e * e) * s * s;
}

} // namespace qoc::test

#endif
