#ifndef QOC_SPLINE_HPP
#define QOC_SPLINE_HPP

#include <vector>

#include <Eigen/Dense>

#include "qoc/error.hpp"

namespace qoc {

/// Natural cubic spline through (x_i, y_i), x strictly increasing. With two
/// nodes it degenerates to the chord. Evaluation outside [x_0, x_{n-1}] uses
/// the end cubic (callers gate extrapolation).
class CubicSpline1D {
public:
    CubicSpline1D() = default;
    CubicSpline1D(Eigen::VectorXd x, Eigen::VectorXd y);

    double value(double t) const;
    double derivative(double t) const;

private:
    int segment(double t) const;

    Eigen::VectorXd x_;
    Eigen::VectorXd y_;
    Eigen::VectorXd m_; // second derivatives at the nodes
};

/// Interpolant on a tensor-product grid: natural cubic splines for one or
/// two axes, multilinear above. Exact at grid nodes.
class TensorInterpolant {
public:
    TensorInterpolant() = default;
    /// values flat in lexicographic order (last axis fastest).
    TensorInterpolant(std::vector<Eigen::VectorXd> axes, Eigen::VectorXd values);

    double value(const Eigen::VectorXd& point) const;
    double partial(const Eigen::VectorXd& point, int axis) const;

    int axis_count() const { return static_cast<int>(axes_.size()); }
    const std::vector<Eigen::VectorXd>& axes() const { return axes_; }
    bool in_hull(const Eigen::VectorXd& point) const;

private:
    double eval(const Eigen::VectorXd& point, int diff_axis) const;
    double eval_linear(const Eigen::VectorXd& point, int diff_axis, int axis,
                       Eigen::Index offset) const;

    std::vector<Eigen::VectorXd> axes_;
    Eigen::VectorXd values_;
    std::vector<Eigen::Index> strides_;
    bool cubic_ = true;
};

} // namespace qoc

#endif
