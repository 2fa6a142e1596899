#ifndef QOC_TYPES_HPP
#define QOC_TYPES_HPP

#include <complex>

#include <Eigen/Dense>

#include "qoc/error.hpp"

namespace qoc {

using Complex = std::complex<double>;

/// Normalized finite-dimensional state vector. Normalization is enforced at
/// construction; the stored vector has unit Euclidean norm to 1e-12.
class QuantumState {
public:
    explicit QuantumState(Eigen::VectorXcd amplitudes);

    const Eigen::VectorXcd& vec() const { return amplitudes_; }
    Eigen::Index dim() const { return amplitudes_.size(); }

private:
    Eigen::VectorXcd amplitudes_;
};

/// Hermitian matrix wrapper; hermiticity (max element deviation from the
/// adjoint <= 1e-12) is checked at construction.
class HermitianOperator {
public:
    explicit HermitianOperator(Eigen::MatrixXcd matrix);

    const Eigen::MatrixXcd& mat() const { return matrix_; }
    Eigen::Index dim() const { return matrix_.rows(); }

    double min_eigenvalue() const;
    double max_eigenvalue() const;

private:
    Eigen::MatrixXcd matrix_;
};

/// Re<psi|op|psi>. Throws on dimension mismatch; the imaginary residue must
/// be below 1e-12 (guaranteed for Hermitian op up to roundoff).
double expectation(const HermitianOperator& op, const QuantumState& psi);

} // namespace qoc

#endif
