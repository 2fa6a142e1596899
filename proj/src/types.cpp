#include "qoc/types.hpp"

#include <cmath>

namespace qoc {

QuantumState::QuantumState(Eigen::VectorXcd amplitudes)
    : amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.size() < 2) {
        throw Error("bad_state", "state dimension must be >= 2, got " +
                                     std::to_string(amplitudes_.size()));
    }
    if (!amplitudes_.allFinite()) {
        throw Error("bad_state", "state amplitudes must be finite");
    }
    const double norm = amplitudes_.norm();
    if (norm < 1e-300) {
        throw Error("bad_state", "state vector has zero norm");
    }
    amplitudes_ /= norm;
}

HermitianOperator::HermitianOperator(Eigen::MatrixXcd matrix)
    : matrix_(std::move(matrix)) {
    if (matrix_.rows() != matrix_.cols() || matrix_.rows() < 2) {
        throw Error("bad_operator", "operator must be square with dim >= 2");
    }
    if (!matrix_.allFinite()) {
        throw Error("bad_operator", "operator entries must be finite");
    }
    const double dev =
        (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
    if (dev > 1e-12) {
        throw Error("not_hermitian",
                    "max |M - M^dagger| = " + std::to_string(dev));
    }
}

double HermitianOperator::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(matrix_,
                                                       Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

double HermitianOperator::max_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(matrix_,
                                                       Eigen::EigenvaluesOnly);
    return es.eigenvalues().maxCoeff();
}

double expectation(const HermitianOperator& op, const QuantumState& psi) {
    if (op.dim() != psi.dim()) {
        throw Error("dim_mismatch",
                    "operator dim " + std::to_string(op.dim()) +
                        " vs state dim " + std::to_string(psi.dim()));
    }
    const Complex value = psi.vec().dot(op.mat() * psi.vec());
    if (std::abs(value.imag()) > 1e-12) {
        throw Error("expectation_not_real",
                    "imaginary residue " + std::to_string(value.imag()));
    }
    return value.real();
}

} // namespace qoc
