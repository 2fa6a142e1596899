#ifndef QOC_CONTROL_FIELD_HPP
#define QOC_CONTROL_FIELD_HPP

#include <vector>

#include <Eigen/Dense>

#include "qoc/error.hpp"

namespace qoc {

/// One Gaussian-envelope cosine-carrier pulse:
///   A * exp(-(t - t_c)^2 / (2 sigma_w^2)) * cos(omega t)
struct Pulse {
    double amplitude;
    double center;
    double width; // > 0
    double carrier;
};

/// Pulse train E(t; b). The flattened parameter vector b orders each pulse
/// as (amplitude, center, width, carrier), pulses in declaration order.
class ControlParams {
public:
    explicit ControlParams(std::vector<Pulse> pulses);

    static ControlParams from_vector(const Eigen::VectorXd& b);
    Eigen::VectorXd to_vector() const;

    const std::vector<Pulse>& pulses() const { return pulses_; }
    int size() const { return static_cast<int>(4 * pulses_.size()); }

private:
    std::vector<Pulse> pulses_;
};

double field_value(const ControlParams& b, double t);

/// Closed-form partials of field_value with respect to the flattened b.
Eigen::VectorXd field_gradient(const ControlParams& b, double t);

} // namespace qoc

#endif
