#include <cmath>

#include "doctest.h"
#include "nilsphere/common.hpp"
#include "nilsphere/sharpness.hpp"

using namespace nilsphere;

TEST_CASE("endpoint profile: dyadic shells match the closed form and barely converge") {
    ShellTable t = stein_lp_profile(2, 2.0, 3, 14);
    REQUIRE(!t.rows.empty());
    for (const auto& row : t.rows) {
        if (!std::isfinite(row.closed_form)) continue;
        // d = 2, p = 2: the shell mass is 2 pi / (log 2 * j (j+1)), exactly
        const double expect = 2.0 * pi / (std::log(2.0) * row.j * (row.j + 1));
        CHECK(row.closed_form == doctest::Approx(expect).epsilon(1e-12));
        CHECK(row.integral == doctest::Approx(row.closed_form).epsilon(1e-7));
    }
    CHECK(t.convergent);
    // no geometric decay; convergence rides on the squared-log factor alone
    CHECK(std::abs(t.pow2_exponent) < 0.05);
    CHECK(t.log_exponent == doctest::Approx(2.0).epsilon(0.15));
    CHECK(t.raabe_limit == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("endpoint profile in higher dimension and the divergent control") {
    ShellTable t3 = stein_lp_profile(3, 1.5, 3, 12);
    CHECK(t3.convergent);
    CHECK(std::abs(t3.pow2_exponent) < 0.05);
    CHECK(t3.log_exponent == doctest::Approx(1.5).epsilon(0.2));

    // above the critical integrability the shells grow geometrically
    ShellTable bad = stein_lp_profile(2, 2.5, 3, 12);
    CHECK(!bad.convergent);
    CHECK(bad.pow2_exponent < -0.4);
}

TEST_CASE("profile geometry: taper plateau, inner truncation, central cutoff") {
    SteinFunction f;
    f.d = 2;
    f.outer_radius = 0.25;
    // identical to the bare profile inside half the taper radius
    const double r = 0.06;
    CHECK(f.radial(r) == doctest::Approx((1.0 / r) / std::abs(std::log(r))));
    CHECK(f.radial(0.3) == 0.0);

    SteinFunction g = f;
    g.inner_cutoff = 0.05;
    CHECK(g.radial(0.04) == 0.0);
    CHECK(g.radial(0.06) == f.radial(0.06));

    Eigen::VectorXd y(2);
    y << 0.06, 0.0;
    CHECK(f.value(y, 0.0) == doctest::Approx(f.radial(0.06)));
    CHECK(f.value(y, 10.0) == 0.0);  // outside the central plateau

    BallSpec ball{0.5};
    Eigen::VectorXd x(2);
    x << 0.4, 0.0;
    CHECK(ball.contains(x, 0.2));
    CHECK(!ball.contains(x, 0.3));  // central coordinate scales quadratically
    x << 0.6, 0.0;
    CHECK(!ball.contains(x, 0.0));
}

TEST_CASE("truncated averages blow up while the critical norm stays bounded") {
    BlowupTable b = blowup_experiment(4, 8);
    REQUIRE(b.rows.size() == 5);
    CHECK(b.monotone);
    // roughly one doubling per truncation level at the moving probe
    CHECK(b.growth > 0.5);
    CHECK(b.growth < 1.6);
    // the same probes see nothing grow for a smooth reference function
    CHECK(std::abs(b.smooth_growth) < 0.1);
    // the critical-space norms of the truncations stay uniformly bounded
    CHECK(b.lp_bound < 2.0);
    for (std::size_t i = 0; i + 1 < b.rows.size(); ++i)
        CHECK(b.rows[i + 1].lp_partial >= b.rows[i].lp_partial);
}

TEST_CASE("fixed-probe averages diverge logarithmically in the truncation") {
    EndpointTable e = endpoint_divergence(4, 11);
    REQUIRE(e.rows.size() == 8);
    CHECK(e.monotone);
    CHECK(e.log_slope > 0.0);
    CHECK(e.correlation > 0.99);
}

TEST_CASE("translation differences obey the integral smoothness bounds") {
    KernelConfig cfg = KernelConfig::flat_h1(1.0);
    HormanderTable t = hormander_condition_check(cfg, {4}, {0, 1}, {1.0 / 32, 1.0 / 64}, 1);
    REQUIRE(t.rows.size() == 4);
    for (const auto& row : t.rows) {
        CAPTURE(row.k);
        CAPTURE(row.l);
        CAPTURE(row.r);
        CHECK(row.integral > 0.0);
        CHECK(row.ratio ==
              doctest::Approx(row.integral / std::min(row.bound_band, row.bound_grad)));
        CHECK(row.bound_band == doctest::Approx(std::ldexp(1.0, row.k - row.l) *
                                                (1.0 + std::ldexp(1.0, row.l))));
    }
    // a single constant covers every row: the worst ratio is small
    CHECK(t.fitted_constant < 3.0);
    // when 10 r clears the supports the difference integral vanishes identically
    CHECK(t.disjoint_support_integral == 0.0);
    // near-identity translations produce near-zero difference integrals
    CHECK(t.continuity_value < 0.05 * t.rows.front().integral);
}
