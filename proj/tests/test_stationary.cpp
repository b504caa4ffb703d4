#include <cmath>

#include "doctest.h"
#include "nilsphere/stationary.hpp"

using namespace nilsphere;

// One full run feeds every check; the expansion experiment is deterministic.
static const StationaryResult& result() {
    static StationaryResult r = run_stationary_experiment(1);
    return r;
}

TEST_CASE("phase Hessian at the critical point is unimodular with zero signature") {
    const StationaryResult& r = result();
    CHECK(r.theta_det_err < 1e-12);
    CHECK(r.theta_signature == 0);
}

TEST_CASE("flat-amplitude normalization plateaus at one") {
    // with b == 1 near the critical point the normalized integral must equal 1
    // up to the tail of the cutoff, which decays faster than any power
    CHECK(result().plateau_error < 1e-3);
}

TEST_CASE("one- and two-term expansions converge at their expected rates") {
    const StationaryResult& r = result();
    REQUIRE(!r.cases.empty());
    for (const auto& c : r.cases) {
        CAPTURE(c.l);
        // window must actually be active at the critical frequency
        CHECK(c.window_at_crit > 0.0);
        REQUIRE(c.samples.size() >= 3);
        // the zeroth term misses by O(1/lambda); the corrected one by O(1/lambda^2)
        CHECK(c.err0_fit.slope < -0.7);
        CHECK(c.err1_fit.slope < -1.5);
        CHECK(c.err1_fit.slope < c.err0_fit.slope);
        // at the largest lambda the corrected expansion is strictly better
        const auto& last = c.samples.back();
        CHECK(last.err1 < last.err0);
    }
}

TEST_CASE("reduced fiber integral agrees with the brute-force tensor quadrature") {
    for (const auto& c : result().cases) {
        CAPTURE(c.l);
        CHECK(c.brute_rel_err < 1e-3);
    }
}
