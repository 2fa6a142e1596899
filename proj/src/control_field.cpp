#include "qoc/control_field.hpp"

#include <cmath>

namespace qoc {

ControlParams::ControlParams(std::vector<Pulse> pulses)
    : pulses_(std::move(pulses)) {
    if (pulses_.empty()) {
        throw Error("bad_control", "at least one pulse required");
    }
    for (std::size_t j = 0; j < pulses_.size(); ++j) {
        const Pulse& p = pulses_[j];
        if (!std::isfinite(p.amplitude) || !std::isfinite(p.center) ||
            !std::isfinite(p.width) || !std::isfinite(p.carrier)) {
            throw Error("bad_control",
                        "pulse " + std::to_string(j) + " has non-finite entry");
        }
        if (!(p.width > 0.0)) {
            throw Error("bad_control", "pulse " + std::to_string(j) +
                                           " width must be > 0, got " +
                                           std::to_string(p.width));
        }
    }
}

ControlParams ControlParams::from_vector(const Eigen::VectorXd& b) {
    if (b.size() == 0 || b.size() % 4 != 0) {
        throw Error("bad_control", "flattened b length must be a positive "
                                   "multiple of 4, got " +
                                       std::to_string(b.size()));
    }
    std::vector<Pulse> pulses;
    pulses.reserve(b.size() / 4);
    for (Eigen::Index j = 0; j < b.size(); j += 4) {
        pulses.push_back(Pulse{b[j], b[j + 1], b[j + 2], b[j + 3]});
    }
    return ControlParams(std::move(pulses));
}

Eigen::VectorXd ControlParams::to_vector() const {
    Eigen::VectorXd b(size());
    for (std::size_t j = 0; j < pulses_.size(); ++j) {
        b[4 * j + 0] = pulses_[j].amplitude;
        b[4 * j + 1] = pulses_[j].center;
        b[4 * j + 2] = pulses_[j].width;
        b[4 * j + 3] = pulses_[j].carrier;
    }
    return b;
}

double field_value(const ControlParams& b, double t) {
    double e = 0.0;
    for (const Pulse& p : b.pulses()) {
        const double u = (t - p.center) / p.width;
        e += p.amplitude * std::exp(-0.5 * u * u) * std::cos(p.carrier * t);
    }
    return e;
}

Eigen::VectorXd field_gradient(const ControlParams& b, double t) {
    Eigen::VectorXd g(b.size());
    int k = 0;
    for (const Pulse& p : b.pulses()) {
        const double u = (t - p.center) / p.width;
        const double env = std::exp(-0.5 * u * u);
        const double c = std::cos(p.carrier * t);
        const double s = std::sin(p.carrier * t);
        g[k++] = env * c;
        g[k++] = p.amplitude * env * c * (t - p.center) / (p.width * p.width);
        g[k++] = p.amplitude * env * c * (t - p.center) * (t - p.center) /
                 (p.width * p.width * p.width);
        g[k++] = -p.amplitude * env * s * t;
    }
    return g;
}

} // namespace qoc
