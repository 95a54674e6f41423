#include "catch2/catch_amalgamated.hpp"

#include <cmath>
#include <vector>

#include "tethersim/paradigm.hpp"

using namespace tethersim;

namespace {

WeightingState fresh_weighting() {
    WeightingState w;
    w.k_v = 1.0;
    w.k_p = 1.0;
    w.beta = 0.2;
    w.window_s = 4.0;
    w.rate_hz = 1.0;
    return w;
}

Level2State fresh_level2() {
    Level2State l2;
    l2.wall_safe_m = 0.85;
    l2.yank_rate_radps = 1.0;
    l2.yank_duration_s = 1.0;
    return l2;
}

}  // namespace

TEST_CASE("planner weight drops only when the whole window is pressure",
          "[paradigm][weighting]") {
    SECTION("exhaustive over every 4-sample occupancy pattern") {
        for (int bits = 0; bits < 16; ++bits) {
            auto w = fresh_weighting();
            double t = 0.0;
            for (int i = 0; i < 4; ++i) {
                const bool pressed = (bits >> i) & 1;
                w = update_weighting(w, pressed ? Region::Integration : Region::Safe, t);
                t += 1.0;
            }
            INFO("pattern bits=" << bits);
            if (bits == 0xF) {
                REQUIRE(w.k_p == Catch::Approx(0.2).margin(0.0));
                REQUIRE(w.reduced());
            } else {
                REQUIRE(w.k_p == 1.0);
                REQUIRE_FALSE(w.reduced());
            }
        }
    }

    SECTION("a lost tag counts as pressure") {
        auto w = fresh_weighting();
        for (int i = 0; i < 4; ++i) w = update_weighting(w, Region::OutOfView, i);
        REQUIRE(w.reduced());
    }

    SECTION("a partially filled window never reduces") {
        auto w = fresh_weighting();
        for (int i = 0; i < 3; ++i) {
            w = update_weighting(w, Region::Integration, i);
            REQUIRE_FALSE(w.reduced());
        }
    }

    SECTION("one safe sample restores the weight immediately") {
        auto w = fresh_weighting();
        for (int i = 0; i < 6; ++i) w = update_weighting(w, Region::Integration, i);
        REQUIRE(w.reduced());
        w = update_weighting(w, Region::Safe, 6.0);
        REQUIRE_FALSE(w.reduced());
        REQUIRE(w.k_p == w.k_v);
        // And it takes a full window of renewed pressure to drop again.
        for (int i = 0; i < 3; ++i) {
            w = update_weighting(w, Region::Integration, 7.0 + i);
            REQUIRE_FALSE(w.reduced());
        }
        w = update_weighting(w, Region::Integration, 10.0);
        REQUIRE(w.reduced());
    }
}

TEST_CASE("yank fires near a wall with a pressed tag and runs to completion",
          "[paradigm][level2]") {
    SECTION("trigger sets the direction away from the wall") {
        auto [inj, l2] = level2_indicator(fresh_level2(), -0.3, Region::Integration, 5.0);
        REQUIRE(inj == -1.0);
        REQUIRE(l2.mu == -1);
        REQUIRE(l2.active(5.5));
        REQUIRE_FALSE(l2.active(6.0));

        auto [inj2, l22] = level2_indicator(fresh_level2(), 0.3, Region::Integration, 5.0);
        REQUIRE(inj2 == 1.0);
        REQUIRE(l22.mu == 1);
    }

    SECTION("a comfortable wall margin suppresses the trigger") {
        auto [inj, l2] = level2_indicator(fresh_level2(), -0.86, Region::Integration, 5.0);
        REQUIRE(inj == 0.0);
        REQUIRE(l2.mu == 0);
    }

    SECTION("a safe tag suppresses the trigger") {
        auto [inj, l2] = level2_indicator(fresh_level2(), -0.3, Region::Safe, 5.0);
        REQUIRE(inj == 0.0);
    }

    SECTION("an active pulse continues even if conditions clear") {
        auto [inj, l2] = level2_indicator(fresh_level2(), -0.3, Region::Integration, 5.0);
        REQUIRE(inj == -1.0);
        auto [mid, l2b] = level2_indicator(l2, -2.5, Region::Safe, 5.5);
        REQUIRE(mid == -1.0);
        auto [after, l2c] = level2_indicator(l2b, -2.5, Region::Safe, 6.0);
        REQUIRE(after == 0.0);
        (void)l2c;
    }

    SECTION("pulse onsets are separated by at least the duration") {
        auto l2 = fresh_level2();
        std::vector<double> onsets;
        double last_until = -1.0;
        for (int i = 0; i < 300; ++i) {
            const double t = i * 0.02;
            auto [inj, next] = level2_indicator(l2, -0.3, Region::Integration, t);
            REQUIRE(inj == -1.0);  // sustained pressure keeps the pulse train running
            if (next.active_until_s != last_until) {
                onsets.push_back(t);
                last_until = next.active_until_s;
            }
            l2 = next;
        }
        REQUIRE(onsets.size() >= 2);
        for (std::size_t i = 1; i < onsets.size(); ++i) {
            REQUIRE(onsets[i] - onsets[i - 1] >= l2.yank_duration_s - 1e-9);
        }
    }

    SECTION("degenerate wall distances are rejected") {
        REQUIRE_THROWS_AS(level2_indicator(fresh_level2(), 0.0, Region::Integration, 0.0),
                          std::invalid_argument);
        REQUIRE_THROWS_AS(
            level2_indicator(fresh_level2(), std::nan(""), Region::Integration, 0.0),
            std::invalid_argument);
    }
}

TEST_CASE("the follower recognizes a yank from the relative yaw alone",
          "[paradigm][detector]") {
    Level2Detector det;
    det.threshold_rad = 0.5;
    det.lookback_s = 1.0;

    SECTION("a fast positive swing selects the left side") {
        REQUIRE_FALSE(detect_level2(det, {0.0, 0.0}));
        REQUIRE_FALSE(detect_level2(det, {0.5, 0.3}));  // window not spanned yet
        const auto lam = detect_level2(det, {1.0, 0.7});
        REQUIRE(lam);
        REQUIRE(*lam == 1);
    }

    SECTION("a fast negative swing selects the right side") {
        REQUIRE_FALSE(detect_level2(det, {0.0, 0.0}));
        REQUIRE_FALSE(detect_level2(det, {0.5, -0.3}));
        const auto lam = detect_level2(det, {1.0, -0.7});
        REQUIRE(lam);
        REQUIRE(*lam == -1);
    }

    SECTION("a slow drift stays below the threshold") {
        REQUIRE_FALSE(detect_level2(det, {0.0, 0.0}));
        REQUIRE_FALSE(detect_level2(det, {1.0, 0.3}));
        REQUIRE_FALSE(detect_level2(det, {2.0, 0.45}));  // 0.15 over the last second
    }

    SECTION("the comparison wraps across the angle seam") {
        // +3.0 to -3.0 is a 0.28 rad step the short way around, not 6.0.
        REQUIRE_FALSE(detect_level2(det, {0.0, 3.0}));
        REQUIRE_FALSE(detect_level2(det, {1.0, -3.0}));
    }

    SECTION("an exactly zero current yaw yields no side") {
        REQUIRE_FALSE(detect_level2(det, {0.0, 0.7}));
        REQUIRE_FALSE(detect_level2(det, {1.0, 0.0}));
    }

    SECTION("a swing fires once and a steady offset does not re-fire") {
        REQUIRE_FALSE(detect_level2(det, {0.0, 0.0}));
        REQUIRE_FALSE(detect_level2(det, {0.9, 0.65}));
        const auto lam = detect_level2(det, {1.0, 0.65});
        REQUIRE(lam);
        REQUIRE(*lam == 1);
        // Once the jump ages past the lookback, a constant offset is quiet.
        REQUIRE_FALSE(detect_level2(det, {1.9, 0.65}));
        REQUIRE_FALSE(detect_level2(det, {2.9, 0.65}));
    }
}

TEST_CASE("leader composition weights the planner against the tether",
          "[paradigm][compose]") {
    const auto params = make_dynamics(0.02, 0.5, {0.6, 0.6, 0.0, 0.0, 0.0, 1.5});
    ControlInput planner;
    planner.x = 0.3;
    planner.y = -0.1;
    planner.yaw = 0.05;
    ControlInput ibvs;
    ibvs.x = -0.1;
    ibvs.y = 0.2;

    SECTION("full weight sums the two commands") {
        auto w = fresh_weighting();
        const auto u = compose_asv(planner, ibvs, 0.0, w, params);
        REQUIRE(u.x == Catch::Approx(0.2).margin(1e-15));
        REQUIRE(u.y == Catch::Approx(0.1).margin(1e-15));
        REQUIRE(u.yaw == Catch::Approx(0.05).margin(1e-15));
    }

    SECTION("a reduced weight scales only the planner share") {
        auto w = fresh_weighting();
        for (int i = 0; i < 4; ++i) w = update_weighting(w, Region::Integration, i);
        const auto u = compose_asv(planner, ibvs, 0.0, w, params);
        REQUIRE(u.x == Catch::Approx(0.2 * 0.3 - 0.1).margin(1e-15));
        REQUIRE(u.y == Catch::Approx(0.2 * -0.1 + 0.2).margin(1e-15));
    }

    SECTION("the yaw injection adds on top and the result is clamped") {
        auto w = fresh_weighting();
        const auto u = compose_asv(planner, ibvs, 2.0, w, params);
        REQUIRE(u.yaw == Catch::Approx(1.5).margin(1e-15));  // clamped at saturation
        ControlInput big;
        big.x = 5.0;
        const auto v = compose_asv(big, ibvs, 0.0, w, params);
        REQUIRE(v.x == 0.6);
    }
}

TEST_CASE("follower composition sums its three sources", "[paradigm][compose]") {
    const auto params = make_dynamics(0.02, 0.5, {0.6, 0.6, 0.3, 0.5, 0.5, 0.5});
    ControlInput avoid;
    avoid.x = -0.2;
    avoid.y = 0.4;
    ControlInput ibvs;
    ibvs.x = 0.2;
    ibvs.y = -0.4;
    ControlInput depth;
    depth.z = -0.25;

    SECTION("zeros in give zeros out") {
        const auto u = compose_auv(ControlInput{}, ControlInput{}, ControlInput{}, params);
        REQUIRE(u.x == 0.0);
        REQUIRE(u.y == 0.0);
        REQUIRE(u.z == 0.0);
    }

    SECTION("opposing planar commands cancel while depth passes through") {
        const auto u = compose_auv(avoid, ibvs, depth, params);
        REQUIRE(u.x == 0.0);
        REQUIRE(u.y == 0.0);
        REQUIRE(u.z == Catch::Approx(-0.25).margin(1e-15));
    }

    SECTION("a single source passes through unchanged below saturation") {
        const auto u = compose_auv(avoid, ControlInput{}, ControlInput{}, params);
        REQUIRE(u.x == -0.2);
        REQUIRE(u.y == 0.4);
    }

    SECTION("sums clamp at the follower limits") {
        ControlInput hard = avoid;
        hard.y = 0.5;
        const auto u = compose_auv(hard, avoid, ControlInput{}, params);
        REQUIRE(u.y == 0.6);  // 0.9 clamps
    }
}
