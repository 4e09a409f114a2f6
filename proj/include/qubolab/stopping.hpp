#ifndef QUBOLAB_STOPPING_HPP
#define QUBOLAB_STOPPING_HPP

namespace qubolab {

enum class StopMode { strict, fuzzy };
enum class Direction { minimize, maximize };

/// Early-stopping monitor fed one objective value per epoch.
///
/// strict: stop once the last P consecutive epochs each brought no
/// improvement over their immediate predecessor, or each varied by less
/// than tol in absolute value.
///
/// fuzzy: stop once P consecutive epochs brought no improvement over the
/// best value seen so far; improvement is strict inequality, so plateaus
/// terminate. No tolerance is involved.
class StopMonitor {
public:
    StopMonitor(StopMode mode, long long patience, double tol, Direction direction);

    /// Feeds one epoch value, returns true when training should stop.
    /// Once true, stays true.
    bool observe(double value);

    bool stopped() const { return stopped_; }
    double best() const { return best_; }
    StopMode mode() const { return mode_; }

private:
    bool improves(double value, double reference) const;

    StopMode mode_;
    long long patience_;
    double tol_;
    Direction direction_;

    bool has_prev_ = false;
    double prev_ = 0.0;
    double best_ = 0.0;
    long long no_improve_streak_ = 0;   // strict: vs immediate predecessor
    long long small_delta_streak_ = 0;  // strict: |delta| < tol
    long long since_best_ = 0;          // fuzzy: epochs since obj* improved
    bool stopped_ = false;
};

/// Single-epoch feeds matching the two definitions; thin wrappers over
/// observe() that also assert the monitor's mode.
bool strict_should_stop(StopMonitor& monitor, double value);
bool fuzzy_should_stop(StopMonitor& monitor, double value);

}  // namespace qubolab

#endif
