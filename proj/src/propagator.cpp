#include "qoc/propagator.hpp"

#include <cmath>
#include <ostream>

namespace qoc {

namespace {

std::atomic<std::uint64_t> g_forward_count{0};

const Complex kI(0.0, 1.0);

// exp(sign * i * dt * H) via eigendecomposition; H Hermitian.
Eigen::MatrixXcd step_exponential(const Eigen::MatrixXcd& h, double dt,
                                  double sign) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    const Eigen::VectorXd& ev = es.eigenvalues();
    Eigen::VectorXcd phases(ev.size());
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        phases[i] = std::exp(sign * kI * dt * ev[i]);
    }
    return es.eigenvectors() * phases.asDiagonal() *
           es.eigenvectors().adjoint();
}

Eigen::MatrixXcd midpoint_hamiltonian(const QuantumModel& model,
                                      const SystemParams& a,
                                      const ControlParams& b,
                                      const TimeGrid& grid, int k) {
    const double t_mid = grid.node(k) + 0.5 * grid.dt();
    const double e = field_value(b, t_mid);
    if (!std::isfinite(e)) {
        throw Error("bad_field", "non-finite field at t = " +
                                     std::to_string(t_mid));
    }
    return model.h0_builder(a.a) + model.dipole_sign * e * model.dipole.mat();
}

} // namespace

std::uint64_t forward_propagation_count() { return g_forward_count.load(); }

void reset_forward_propagation_count() { g_forward_count.store(0); }

Trajectory propagate_forward(const QuantumModel& model, const SystemParams& a,
                             const ControlParams& b, const TimeGrid& grid) {
    g_forward_count.fetch_add(1, std::memory_order_relaxed);
    Trajectory traj{{}, grid};
    traj.states.reserve(grid.steps + 1);
    traj.states.push_back(model.psi0.vec());
    for (int k = 0; k < grid.steps; ++k) {
        const Eigen::MatrixXcd u = step_exponential(
            midpoint_hamiltonian(model, a, b, grid, k), grid.dt(), -1.0);
        traj.states.push_back(u * traj.states.back());
    }
    return traj;
}

CostateTrajectory propagate_backward(const QuantumModel& model,
                                     const SystemParams& a,
                                     const ControlParams& b,
                                     const Eigen::VectorXcd& lambda_T,
                                     const TimeGrid& grid) {
    if (!lambda_T.allFinite()) {
        throw Error("bad_costate", "terminal costate must be finite");
    }
    CostateTrajectory traj{{}, grid};
    traj.costates.assign(grid.steps + 1, Eigen::VectorXcd());
    traj.costates[grid.steps] = lambda_T;
    for (int k = grid.steps - 1; k >= 0; --k) {
        const Eigen::MatrixXcd u = step_exponential(
            midpoint_hamiltonian(model, a, b, grid, k), grid.dt(), +1.0);
        traj.costates[k] = u * traj.costates[k + 1];
    }
    return traj;
}

void write_trajectory_csv(const Trajectory& traj, const QuantumModel& model,
                          std::ostream& out) {
    const Eigen::Index n = traj.states.front().size();
    out << "t";
    for (Eigen::Index i = 0; i < n; ++i) {
        out << ",re_" << i << ",im_" << i;
    }
    out << ",observable\n";
    for (int k = 0; k < static_cast<int>(traj.states.size()); ++k) {
        const Eigen::VectorXcd& psi = traj.states[k];
        out << traj.grid.node(k);
        for (Eigen::Index i = 0; i < n; ++i) {
            out << "," << psi[i].real() << "," << psi[i].imag();
        }
        const Complex theta = psi.dot(model.observable.mat() * psi);
        out << "," << theta.real() << "\n";
    }
}

} // namespace qoc
