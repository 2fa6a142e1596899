#include "qoc/model.hpp"

#include <cmath>

namespace qoc {

namespace {
const Complex kI(0.0, 1.0);
}

Eigen::MatrixXcd sigma_x() {
    Eigen::MatrixXcd m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

Eigen::MatrixXcd sigma_y() {
    Eigen::MatrixXcd m(2, 2);
    m << 0, -kI, kI, 0;
    return m;
}

Eigen::MatrixXcd sigma_z() {
    Eigen::MatrixXcd m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

namespace {

Eigen::MatrixXcd projector(int k, int dim) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    m(k, k) = 1.0;
    return m;
}

Eigen::MatrixXcd ladder_number(int dim) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    for (int k = 0; k < dim; ++k) m(k, k) = static_cast<double>(k);
    return m;
}

Eigen::MatrixXcd ladder_dipole(int dim) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    for (int k = 0; k + 1 < dim; ++k) {
        m(k, k + 1) = 1.0;
        m(k + 1, k) = 1.0;
    }
    return m;
}

void check_scale_dims(const Eigen::VectorXd& s_min,
                      const Eigen::VectorXd& s_max) {
    if (s_min.size() < 1 || s_min.size() != s_max.size()) {
        throw Error("bad_scale_bounds", "scale bounds must have equal size >= 1");
    }
    for (Eigen::Index i = 0; i < s_min.size(); ++i) {
        if (!(s_min[i] < s_max[i])) {
            throw Error("bad_scale_bounds",
                        "s_min must be < s_max on axis " + std::to_string(i));
        }
    }
}

} // namespace

bool observable_known(const std::string& name, int dim) {
    if (dim == 2) {
        return name == "sigma_x" || name == "sigma_y" || name == "sigma_z";
    }
    if (dim == 3) {
        return name == "proj_0" || name == "proj_1" || name == "proj_2" ||
               name == "number";
    }
    return false;
}

Eigen::MatrixXcd named_observable(const std::string& name, int dim) {
    if (dim == 2) {
        if (name == "sigma_x") return sigma_x();
        if (name == "sigma_y") return sigma_y();
        if (name == "sigma_z") return sigma_z();
    } else if (dim == 3) {
        if (name == "proj_0") return projector(0, 3);
        if (name == "proj_1") return projector(1, 3);
        if (name == "proj_2") return projector(2, 3);
        if (name == "number") return ladder_number(3);
    }
    throw Error("unknown_observable",
                "no observable '" + name + "' for dim " + std::to_string(dim));
}

QuantumModel make_two_level(const std::string& observable, double dipole_sign,
                            const Eigen::VectorXcd& psi0,
                            const Eigen::VectorXd& s_min,
                            const Eigen::VectorXd& s_max) {
    check_scale_dims(s_min, s_max);
    if (std::abs(std::abs(dipole_sign) - 1.0) > 0) {
        throw Error("bad_dipole_sign", "dipole_sign must be +1 or -1");
    }
    return QuantumModel{
        "two_level",
        2,
        {"omega0"},
        {"c1"},
        s_min,
        s_max,
        dipole_sign,
        [](const Eigen::VectorXd& a) {
            return Eigen::MatrixXcd(0.5 * a[0] * sigma_z());
        },
        HermitianOperator(sigma_x()),
        HermitianOperator(named_observable(observable, 2)),
        QuantumState(psi0)};
}

QuantumModel make_three_level_ladder(const std::string& observable,
                                     double dipole_sign,
                                     const Eigen::VectorXcd& psi0,
                                     const Eigen::VectorXd& s_min,
                                     const Eigen::VectorXd& s_max) {
    check_scale_dims(s_min, s_max);
    return QuantumModel{
        "three_level_ladder",
        3,
        {"omega1", "omega2"},
        {"c1", "c2"},
        s_min,
        s_max,
        dipole_sign,
        [](const Eigen::VectorXd& a) {
            Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(3, 3);
            h(1, 1) = a[0];
            h(2, 2) = a[0] + a[1];
            return h;
        },
        HermitianOperator(ladder_dipole(3)),
        HermitianOperator(named_observable(observable, 3)),
        QuantumState(psi0)};
}

QuantumModel make_model(const std::string& model_name,
                        const std::string& observable, double dipole_sign,
                        const Eigen::VectorXcd& psi0,
                        const Eigen::VectorXd& s_min,
                        const Eigen::VectorXd& s_max) {
    if (model_name == "two_level") {
        return make_two_level(observable, dipole_sign, psi0, s_min, s_max);
    }
    if (model_name == "three_level_ladder") {
        return make_three_level_ladder(observable, dipole_sign, psi0, s_min,
                                       s_max);
    }
    throw Error("unknown_model", "no builtin model '" + model_name + "'");
}

int model_param_count(const std::string& model_name) {
    if (model_name == "two_level") return 1;
    if (model_name == "three_level_ladder") return 2;
    throw Error("unknown_model", "no builtin model '" + model_name + "'");
}

int model_dim(const std::string& model_name) {
    if (model_name == "two_level") return 2;
    if (model_name == "three_level_ladder") return 3;
    throw Error("unknown_model", "no builtin model '" + model_name + "'");
}

SystemParams map_scale(const QuantumModel& model, const ScaleVector& s,
                       const Eigen::VectorXd& c) {
    if (s.s.size() != model.s_min.size()) {
        throw Error("dim_mismatch",
                    "scale vector has " + std::to_string(s.s.size()) +
                        " components, model expects " +
                        std::to_string(model.s_min.size()));
    }
    if (!s.s.allFinite()) {
        throw Error("bad_scale", "scale vector must be finite");
    }
    for (Eigen::Index i = 0; i < s.s.size(); ++i) {
        if (s.s[i] < model.s_min[i] || s.s[i] > model.s_max[i]) {
            throw Error("scale_out_of_bounds",
                        "s[" + std::to_string(i) + "] = " +
                            std::to_string(s.s[i]) + " outside [" +
                            std::to_string(model.s_min[i]) + ", " +
                            std::to_string(model.s_max[i]) + "]");
        }
    }
    const auto n = static_cast<Eigen::Index>(model.a_names.size());
    if (c.size() != n) {
        throw Error("dim_mismatch",
                    "unscaled parameter vector has " + std::to_string(c.size()) +
                        " components, model expects " + std::to_string(n));
    }
    const Eigen::Index p = s.s.size();
    Eigen::VectorXd a(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        a[i] = c[i] * s.s[std::min(i, p - 1)];
    }
    return SystemParams{a, c};
}

HermitianOperator build_hamiltonian(const QuantumModel& model,
                                    const SystemParams& a, double field_value) {
    if (!std::isfinite(field_value)) {
        throw Error("bad_field", "field value must be finite");
    }
    return HermitianOperator(model.h0_builder(a.a) +
                             model.dipole_sign * field_value *
                                 model.dipole.mat());
}

} // namespace qoc
