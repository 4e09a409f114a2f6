#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <vector>

#include "qubolab/rng.hpp"
#include "qubolab/stopping.hpp"

using namespace qubolab;

namespace {

// Epoch (1-based) at which the monitor fires on the sequence, or -1.
long long stop_epoch(StopMonitor& monitor, const std::vector<double>& values) {
    for (std::size_t i = 0; i < values.size(); ++i)
        if (monitor.observe(values[i])) return static_cast<long long>(i) + 1;
    return -1;
}

std::vector<double> tiny_delta_sequence(std::size_t len, double delta = 1e-8) {
    std::vector<double> v(len);
    double x = 10.0;
    for (auto& e : v) {
        e = x;
        x -= delta;
    }
    return v;
}

}  // namespace

TEST_CASE("strict stopping") {
    SUBCASE("never fires on steady unit improvements") {
        StopMonitor m(StopMode::strict, 3, 1e-4, Direction::minimize);
        double loss = 100.0;
        for (int e = 0; e < 1000; ++e) {
            CHECK_FALSE(strict_should_stop(m, loss));
            loss -= 1.0;
        }
    }
    SUBCASE("constant loss fires after P values beyond the first") {
        StopMonitor m(StopMode::strict, 3, 1e-4, Direction::minimize);
        CHECK(stop_epoch(m, {5, 5, 5, 5, 5, 5}) == 4);
    }
    SUBCASE("insignificant deltas fire at epoch P+1 even though every epoch improves") {
        StopMonitor m(StopMode::strict, 100, 1e-4, Direction::minimize);
        CHECK(stop_epoch(m, tiny_delta_sequence(400)) == 101);
    }
}

TEST_CASE("fuzzy stopping") {
    SUBCASE("insignificant deltas never fire: each epoch improves the best") {
        StopMonitor m(StopMode::fuzzy, 100, 0.0, Direction::minimize);
        for (double v : tiny_delta_sequence(5000)) CHECK_FALSE(fuzzy_should_stop(m, v));
    }
    SUBCASE("plateau at the best value fires after P epochs") {
        StopMonitor m(StopMode::fuzzy, 3, 0.0, Direction::minimize);
        CHECK(stop_epoch(m, {7, 7, 7, 7}) == 4);
    }
    SUBCASE("late improvement resets the counter (maximize direction)") {
        StopMonitor m(StopMode::fuzzy, 700, 0.0, Direction::maximize);
        std::vector<double> rewards(700, 10.0);  // 1 sets best, 699 non-improving
        rewards.push_back(11.0);
        CHECK(stop_epoch(m, rewards) == -1);
        CHECK(m.best() == 11.0);
        // One fewer improvement and it would have fired at 701.
        StopMonitor m2(StopMode::fuzzy, 700, 0.0, Direction::maximize);
        CHECK(stop_epoch(m2, std::vector<double>(701, 10.0)) == 701);
    }
    SUBCASE("stays stopped when re-fed the best value") {
        StopMonitor m(StopMode::fuzzy, 2, 0.0, Direction::minimize);
        CHECK_FALSE(m.observe(3.0));
        CHECK_FALSE(m.observe(3.0));
        CHECK(m.observe(3.0));
        CHECK(m.observe(3.0));
        CHECK(m.observe(3.0));
    }
}

TEST_CASE("mode guards") {
    StopMonitor strict(StopMode::strict, 2, 1e-4, Direction::minimize);
    StopMonitor fuzzy(StopMode::fuzzy, 2, 0.0, Direction::minimize);
    CHECK_THROWS_AS(fuzzy_should_stop(strict, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(strict_should_stop(fuzzy, 1.0), std::invalid_argument);
}

TEST_CASE("monotone improvement: fuzzy never stops, strict iff deltas below tol") {
    Rng rng(99);
    for (int trial = 0; trial < 50; ++trial) {
        long long patience = 2 + static_cast<long long>(rng.next_below(6));
        double tol = 1e-4;
        bool below_tol = trial % 2 == 0;
        std::vector<double> seq;
        double x = 50.0;
        for (int e = 0; e < 100; ++e) {
            double delta = below_tol ? tol * (0.1 + 0.8 * rng.next_double())
                                     : tol * (1.5 + rng.next_double());
            x -= delta;
            seq.push_back(x);
        }
        StopMonitor fuzzy(StopMode::fuzzy, patience, 0.0, Direction::minimize);
        CHECK(stop_epoch(fuzzy, seq) == -1);
        StopMonitor strict(StopMode::strict, patience, tol, Direction::minimize);
        long long fired = stop_epoch(strict, seq);
        if (below_tol)
            CHECK(fired == patience + 1);
        else
            CHECK(fired == -1);
    }
}

// On non-increasing sequences an improvement over the previous value is an
// improvement over the best, so the fuzzy counter and strict's no-improvement
// streak move together and strict's tolerance branch can only fire earlier.
TEST_CASE("fuzzy stops no earlier than strict on non-increasing sequences") {
    Rng rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        long long patience = 2 + static_cast<long long>(rng.next_below(5));
        std::vector<double> seq;
        double x = 10.0;
        for (int e = 0; e < 60; ++e) {
            if (rng.next_below(3) == 0) {
                // plateau
            } else if (rng.next_below(2) == 0) {
                x -= 1e-6 * rng.next_double();
            } else {
                x -= rng.next_double();
            }
            seq.push_back(x);
        }
        StopMonitor strict(StopMode::strict, patience, 1e-4, Direction::minimize);
        StopMonitor fuzzy(StopMode::fuzzy, patience, 0.0, Direction::minimize);
        long long strict_at = stop_epoch(strict, seq);
        long long fuzzy_at = stop_epoch(fuzzy, seq);
        if (fuzzy_at != -1) {
            REQUIRE(strict_at != -1);
            CHECK(fuzzy_at >= strict_at);
        }
    }
}
