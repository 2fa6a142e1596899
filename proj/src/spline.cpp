#include "qoc/spline.hpp"

#include <cmath>

namespace qoc {

CubicSpline1D::CubicSpline1D(Eigen::VectorXd x, Eigen::VectorXd y)
    : x_(std::move(x)), y_(std::move(y)) {
    const Eigen::Index n = x_.size();
    if (n < 2 || y_.size() != n) {
        throw Error("bad_spline", "need >= 2 nodes and matching values");
    }
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
        if (!(x_[i] < x_[i + 1])) {
            throw Error("bad_spline", "abscissae must be strictly increasing");
        }
    }
    m_ = Eigen::VectorXd::Zero(n);
    if (n > 2) {
        // tridiagonal system for the interior second derivatives
        const Eigen::Index k = n - 2;
        Eigen::VectorXd diag(k), sub(k), sup(k), rhs(k);
        for (Eigen::Index i = 0; i < k; ++i) {
            const double h0 = x_[i + 1] - x_[i];
            const double h1 = x_[i + 2] - x_[i + 1];
            sub[i] = h0;
            diag[i] = 2.0 * (h0 + h1);
            sup[i] = h1;
            rhs[i] = 6.0 * ((y_[i + 2] - y_[i + 1]) / h1 -
                            (y_[i + 1] - y_[i]) / h0);
        }
        // Thomas algorithm
        for (Eigen::Index i = 1; i < k; ++i) {
            const double w = sub[i] / diag[i - 1];
            diag[i] -= w * sup[i - 1];
            rhs[i] -= w * rhs[i - 1];
        }
        m_[k] = rhs[k - 1] / diag[k - 1];
        for (Eigen::Index i = k - 1; i >= 1; --i) {
            m_[i] = (rhs[i - 1] - sup[i - 1] * m_[i + 1]) / diag[i - 1];
        }
    }
}

int CubicSpline1D::segment(double t) const {
    const Eigen::Index n = x_.size();
    Eigen::Index lo = 0, hi = n - 2;
    if (t <= x_[0]) return 0;
    if (t >= x_[n - 1]) return static_cast<int>(n - 2);
    while (lo < hi) {
        const Eigen::Index mid = (lo + hi + 1) / 2;
        if (x_[mid] <= t) {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    return static_cast<int>(lo);
}

double CubicSpline1D::value(double t) const {
    const int i = segment(t);
    const double h = x_[i + 1] - x_[i];
    const double a = (x_[i + 1] - t) / h;
    const double b = (t - x_[i]) / h;
    return a * y_[i] + b * y_[i + 1] +
           ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * h * h /
               6.0;
}

double CubicSpline1D::derivative(double t) const {
    const int i = segment(t);
    const double h = x_[i + 1] - x_[i];
    const double a = (x_[i + 1] - t) / h;
    const double b = (t - x_[i]) / h;
    return (y_[i + 1] - y_[i]) / h +
           h / 6.0 *
               (-(3.0 * a * a - 1.0) * m_[i] + (3.0 * b * b - 1.0) * m_[i + 1]);
}

TensorInterpolant::TensorInterpolant(std::vector<Eigen::VectorXd> axes,
                                     Eigen::VectorXd values)
    : axes_(std::move(axes)), values_(std::move(values)) {
    if (axes_.empty()) throw Error("bad_interpolant", "need >= 1 axis");
    Eigen::Index total = 1;
    for (std::size_t d = 0; d < axes_.size(); ++d) {
        if (axes_[d].size() < 2) {
            throw Error("axis_too_short",
                        "axis " + std::to_string(d) + " needs >= 2 nodes");
        }
        for (Eigen::Index i = 0; i + 1 < axes_[d].size(); ++i) {
            if (!(axes_[d][i] < axes_[d][i + 1])) {
                throw Error("bad_interpolant",
                            "axis " + std::to_string(d) + " not increasing");
            }
        }
        total *= axes_[d].size();
    }
    if (values_.size() != total) {
        throw Error("bad_interpolant", "value count does not match grid size");
    }
    strides_.assign(axes_.size(), 1);
    for (int d = static_cast<int>(axes_.size()) - 2; d >= 0; --d) {
        strides_[d] = strides_[d + 1] * axes_[d + 1].size();
    }
    cubic_ = axes_.size() <= 2;
}

bool TensorInterpolant::in_hull(const Eigen::VectorXd& point) const {
    if (point.size() != static_cast<Eigen::Index>(axes_.size())) {
        throw Error("dim_mismatch", "query dimension mismatch");
    }
    for (std::size_t d = 0; d < axes_.size(); ++d) {
        if (point[d] < axes_[d][0] ||
            point[d] > axes_[d][axes_[d].size() - 1]) {
            return false;
        }
    }
    return true;
}

double TensorInterpolant::value(const Eigen::VectorXd& point) const {
    return eval(point, -1);
}

double TensorInterpolant::partial(const Eigen::VectorXd& point,
                                  int axis) const {
    if (axis < 0 || axis >= axis_count()) {
        throw Error("bad_axis", "no axis " + std::to_string(axis));
    }
    return eval(point, axis);
}

double TensorInterpolant::eval(const Eigen::VectorXd& point,
                               int diff_axis) const {
    if (point.size() != static_cast<Eigen::Index>(axes_.size())) {
        throw Error("dim_mismatch", "query dimension mismatch");
    }
    if (!cubic_) {
        return eval_linear(point, diff_axis, 0, 0);
    }
    if (axes_.size() == 1) {
        CubicSpline1D sp(axes_[0], values_);
        return diff_axis == 0 ? sp.derivative(point[0]) : sp.value(point[0]);
    }
    // two axes: spline along axis 1 per axis-0 node, then spline the results
    const Eigen::Index n0 = axes_[0].size();
    const Eigen::Index n1 = axes_[1].size();
    Eigen::VectorXd g(n0);
    for (Eigen::Index i = 0; i < n0; ++i) {
        CubicSpline1D inner(axes_[1], values_.segment(i * n1, n1));
        g[i] = diff_axis == 1 ? inner.derivative(point[1])
                              : inner.value(point[1]);
    }
    CubicSpline1D outer(axes_[0], g);
    return diff_axis == 0 ? outer.derivative(point[0]) : outer.value(point[0]);
}

double TensorInterpolant::eval_linear(const Eigen::VectorXd& point,
                                      int diff_axis, int axis,
                                      Eigen::Index offset) const {
    if (axis == axis_count()) {
        return values_[offset];
    }
    const Eigen::VectorXd& x = axes_[axis];
    Eigen::Index j = 0;
    while (j + 2 < x.size() && x[j + 1] <= point[axis]) ++j;
    const double h = x[j + 1] - x[j];
    const double w = (point[axis] - x[j]) / h;
    const double v0 =
        eval_linear(point, diff_axis, axis + 1, offset + j * strides_[axis]);
    const double v1 = eval_linear(point, diff_axis, axis + 1,
                                  offset + (j + 1) * strides_[axis]);
    if (diff_axis == axis) return (v1 - v0) / h;
    return v0 + w * (v1 - v0);
}

} // namespace qoc
