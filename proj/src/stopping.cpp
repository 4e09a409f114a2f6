#include "qubolab/stopping.hpp"

#include <cmath>
#include <stdexcept>

namespace qubolab {

StopMonitor::StopMonitor(StopMode mode, long long patience, double tol, Direction direction)
    : mode_(mode), patience_(patience), tol_(tol), direction_(direction) {
    if (patience < 1) throw std::invalid_argument("patience must be at least 1");
    if (mode == StopMode::strict && tol < 0.0) throw std::invalid_argument("tolerance must be >= 0");
}

bool StopMonitor::improves(double value, double reference) const {
    return direction_ == Direction::minimize ? value < reference : value > reference;
}

bool StopMonitor::observe(double value) {
    if (stopped_) return true;
    if (!has_prev_) {
        has_prev_ = true;
        prev_ = value;
        best_ = value;
        return false;
    }

    if (mode_ == StopMode::strict) {
        no_improve_streak_ = improves(value, prev_) ? 0 : no_improve_streak_ + 1;
        small_delta_streak_ = std::abs(value - prev_) < tol_ ? small_delta_streak_ + 1 : 0;
        stopped_ = no_improve_streak_ >= patience_ || small_delta_streak_ >= patience_;
    } else {
        if (improves(value, best_)) {
            best_ = value;
            since_best_ = 0;
        } else {
            ++since_best_;
        }
        stopped_ = since_best_ >= patience_;
    }

    if (improves(value, best_)) best_ = value;
    prev_ = value;
    return stopped_;
}

bool strict_should_stop(StopMonitor& monitor, double value) {
    if (monitor.mode() != StopMode::strict)
        throw std::invalid_argument("monitor is not in strict mode");
    return monitor.observe(value);
}

bool fuzzy_should_stop(StopMonitor& monitor, double value) {
    if (monitor.mode() != StopMode::fuzzy)
        throw std::invalid_argument("monitor is not in fuzzy mode");
    return monitor.observe(value);
}

}  // namespace qubolab
