#ifndef QOC_MODEL_HPP
#define QOC_MODEL_HPP

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qoc/types.hpp"

namespace qoc {

/// System parameters a together with the unscaled parameters c they were
/// derived from.
struct SystemParams {
    Eigen::VectorXd a;
    Eigen::VectorXd c;
};

/// Dimensionless scale vector s (p >= 1 components).
struct ScaleVector {
    Eigen::VectorXd s;
};

/// A finite-dimensional driven system: drift Hamiltonian builder H_o(a),
/// fixed dipole operator, observable, initial state, and the physics map
/// (s, c) -> a. Immutable after construction.
struct QuantumModel {
    std::string name;
    int dim;
    std::vector<std::string> a_names;
    std::vector<std::string> c_names;
    Eigen::VectorXd s_min; // per scale axis
    Eigen::VectorXd s_max;
    double dipole_sign; // +1 or -1, sign of the mu*E coupling
    std::function<Eigen::MatrixXcd(const Eigen::VectorXd&)> h0_builder;
    HermitianOperator dipole;
    HermitianOperator observable;
    QuantumState psi0;
};

// Pauli matrices.
Eigen::MatrixXcd sigma_x();
Eigen::MatrixXcd sigma_y();
Eigen::MatrixXcd sigma_z();

/// Observable matrix by name for a given model dimension. Two-level:
/// sigma_x, sigma_y, sigma_z. Three-level: proj_0, proj_1, proj_2, number.
Eigen::MatrixXcd named_observable(const std::string& name, int dim);
bool observable_known(const std::string& name, int dim);

/// Driven two-level system: H_o = (omega0/2) sigma_z, mu = sigma_x.
/// a = {omega0}, one unscaled parameter c = {c1}, a1 = c1 * s1.
QuantumModel make_two_level(const std::string& observable, double dipole_sign,
                            const Eigen::VectorXcd& psi0,
                            const Eigen::VectorXd& s_min,
                            const Eigen::VectorXd& s_max);

/// Three-level ladder: H_o = diag(0, omega1, omega1 + omega2), dipole with
/// nearest-neighbor couplings. a = {omega1, omega2}, a_i = c_i * s_{min(i,p-1)}.
QuantumModel make_three_level_ladder(const std::string& observable,
                                     double dipole_sign,
                                     const Eigen::VectorXcd& psi0,
                                     const Eigen::VectorXd& s_min,
                                     const Eigen::VectorXd& s_max);

QuantumModel make_model(const std::string& model_name,
                        const std::string& observable, double dipole_sign,
                        const Eigen::VectorXcd& psi0,
                        const Eigen::VectorXd& s_min,
                        const Eigen::VectorXd& s_max);

/// Number of system parameters n for a named builtin model.
int model_param_count(const std::string& model_name);
int model_dim(const std::string& model_name);

/// The physics map (s, c) -> a: multiplicative, a_i = c_i * s_{min(i, p-1)}.
/// Throws if s is outside the model's configured scale bounds.
SystemParams map_scale(const QuantumModel& model, const ScaleVector& s,
                       const Eigen::VectorXd& c);

/// H_o(a) + dipole_sign * field_value * mu. Throws on non-finite field.
HermitianOperator build_hamiltonian(const QuantumModel& model,
                                    const SystemParams& a, double field_value);

} // namespace qoc

#endif
