#include <Eigen/Dense>
#include <cmath>

#include "doctest.h"
#include "nilsphere/common.hpp"
#include "nilsphere/group.hpp"

using namespace nilsphere;

namespace {

GroupElement random_element(const StepTwoGroup& g, Rng& rng) {
    GroupElement a;
    a.x = Eigen::VectorXd::NullaryExpr(g.d(), [&](Eigen::Index) { return rng.uniform(-2.0, 2.0); });
    a.u = Eigen::VectorXd::NullaryExpr(g.m(), [&](Eigen::Index) { return rng.uniform(-2.0, 2.0); });
    return a;
}

double dist(const GroupElement& a, const GroupElement& b) {
    return (a.x - b.x).norm() + (a.u - b.u).norm();
}

std::vector<StepTwoGroup> all_builders() {
    return {heisenberg_group(1),       heisenberg_group(2), heisenberg_group(1, true),
            appendix_group(),          htype_companion_group(),
            quaternionic_group(),      abelian_group(3, 2)};
}

}  // namespace

TEST_CASE("group axioms hold on random elements for every builder") {
    Rng rng(42);
    for (const StepTwoGroup& g : all_builders()) {
        CAPTURE(g.label());
        for (int trial = 0; trial < 200; ++trial) {
            GroupElement a = random_element(g, rng);
            GroupElement b = random_element(g, rng);
            GroupElement c = random_element(g, rng);

            GroupElement ab_c = g.multiply(g.multiply(a, b), c);
            GroupElement a_bc = g.multiply(a, g.multiply(b, c));
            CHECK(dist(ab_c, a_bc) < 1e-12);

            GroupElement e = g.identity();
            CHECK(dist(g.multiply(a, e), a) < 1e-15);
            CHECK(dist(g.multiply(e, a), a) < 1e-15);
            CHECK(dist(g.multiply(a, g.inverse(a)), e) < 1e-12);
            CHECK(dist(g.multiply(g.inverse(a), a), e) < 1e-12);
        }
    }
}

TEST_CASE("dilations are automorphisms and scale the center quadratically") {
    Rng rng(43);
    for (const StepTwoGroup& g : all_builders()) {
        CAPTURE(g.label());
        for (int trial = 0; trial < 100; ++trial) {
            GroupElement a = random_element(g, rng);
            GroupElement b = random_element(g, rng);
            double t = rng.uniform(0.1, 3.0);
            GroupElement lhs = g.dilate(t, g.multiply(a, b));
            GroupElement rhs = g.multiply(g.dilate(t, a), g.dilate(t, b));
            CHECK(dist(lhs, rhs) < 1e-11);

            double s = rng.uniform(0.1, 3.0);
            GroupElement two = g.dilate(t, g.dilate(s, a));
            GroupElement one = g.dilate(t * s, a);
            CHECK(dist(two, one) < 1e-12);
        }
    }
}

TEST_CASE("twist matrices are skew and the commutator matches them") {
    Rng rng(44);
    for (const StepTwoGroup& g : all_builders()) {
        CAPTURE(g.label());
        for (int i = 0; i < g.m(); ++i)
            CHECK((g.J(i) + g.J(i).transpose()).norm() == doctest::Approx(0.0).epsilon(1e-14));
        for (int trial = 0; trial < 50; ++trial) {
            GroupElement a = random_element(g, rng);
            GroupElement b = random_element(g, rng);
            Eigen::VectorXd c = g.commutator(a.x, b.x);
            for (int i = 0; i < g.m(); ++i)
                CHECK(c[i] == doctest::Approx(a.x.dot(g.J(i) * b.x)).epsilon(1e-13));
            // anti-symmetry of the commutator
            CHECK((g.commutator(a.x, b.x) + g.commutator(b.x, a.x)).norm() < 1e-12);
        }
    }
}

TEST_CASE("classification flags for the five builders") {
    StepTwoGroup h1 = heisenberg_group(1);
    CHECK(h1.is_metivier());
    REQUIRE(h1.h_type_kappa().has_value());
    CHECK(*h1.h_type_kappa() == doctest::Approx(1.0).epsilon(1e-12));

    StepTwoGroup h2 = heisenberg_group(2);
    CHECK(h2.is_metivier());
    CHECK(h2.h_type_kappa().has_value());

    // doubled variant: twist scaled by two, so the H-type constant is four
    StepTwoGroup hd = heisenberg_group(1, true);
    CHECK(hd.d() == 2);
    CHECK(hd.is_metivier());
    REQUIRE(hd.h_type_kappa().has_value());
    CHECK(*hd.h_type_kappa() == doctest::Approx(4.0).epsilon(1e-12));

    StepTwoGroup ap = appendix_group();
    CHECK(ap.d() == 8);
    CHECK(ap.m() == 2);
    CHECK(ap.is_metivier());
    CHECK_FALSE(ap.h_type_kappa().has_value());

    StepTwoGroup ht = htype_companion_group();
    CHECK(ht.d() == 8);
    CHECK(ht.m() == 2);
    CHECK(ht.is_metivier());
    REQUIRE(ht.h_type_kappa().has_value());
    CHECK(*ht.h_type_kappa() == doctest::Approx(1.0).epsilon(1e-12));

    StepTwoGroup q = quaternionic_group();
    CHECK(q.d() == 4);
    CHECK(q.m() == 3);
    CHECK(q.is_metivier());
    REQUIRE(q.h_type_kappa().has_value());
    CHECK(*q.h_type_kappa() == doctest::Approx(1.0).epsilon(1e-12));

    StepTwoGroup ab = abelian_group(2, 1);
    CHECK_FALSE(ab.is_metivier());
    for (int i = 0; i < ab.m(); ++i) CHECK(ab.J(i).norm() == 0.0);
}

TEST_CASE("quaternion twist matrices satisfy the quaternion algebra") {
    StepTwoGroup q = quaternionic_group();
    const Eigen::MatrixXd& Li = q.J(0);
    const Eigen::MatrixXd& Lj = q.J(1);
    const Eigen::MatrixXd& Lk = q.J(2);
    Eigen::MatrixXd I = Eigen::MatrixXd::Identity(4, 4);
    CHECK((Li * Li + I).norm() < 1e-14);
    CHECK((Lj * Lj + I).norm() < 1e-14);
    CHECK((Lk * Lk + I).norm() < 1e-14);
    CHECK((Li * Lj - Lk).norm() < 1e-14);
    CHECK((Lj * Lk - Li).norm() < 1e-14);
    CHECK((Lk * Li - Lj).norm() < 1e-14);
}

TEST_CASE("nondegeneracy constants: exact values and rotation invariance") {
    StepTwoGroup h1 = heisenberg_group(1);
    auto ch = h1.nondegeneracy_constants();
    CHECK(ch.c0 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(ch.C0 == doctest::Approx(1.0).epsilon(1e-12));

    // |J_u| has singular values split by the two pencil blocks
    StepTwoGroup ap = appendix_group();
    auto ca = ap.nondegeneracy_constants();
    CHECK(ca.c0 > 0.5);
    CHECK(ca.c0 < ca.C0);
    CHECK(ca.C0 < 1.4);

    Rng rng(45);
    for (int trial = 0; trial < 5; ++trial) {
        Eigen::MatrixXd M = Eigen::MatrixXd::NullaryExpr(
            8, 8, [&](Eigen::Index, Eigen::Index) { return rng.normal(); });
        Eigen::MatrixXd Q = Eigen::HouseholderQR<Eigen::MatrixXd>(M).householderQ();
        auto cr = ap.conjugate_by_rotation(Q).nondegeneracy_constants();
        CHECK(std::abs(cr.c0 - ca.c0) < 1e-10);
        CHECK(std::abs(cr.C0 - ca.C0) < 1e-10);
    }
}

TEST_CASE("serialization round-trips every builder") {
    Rng rng(46);
    for (const StepTwoGroup& g : all_builders()) {
        StepTwoGroup back = StepTwoGroup::from_json(g.to_json());
        CHECK(back.d() == g.d());
        CHECK(back.m() == g.m());
        CHECK(back.label() == g.label());
        for (int i = 0; i < g.m(); ++i) CHECK((back.J(i) - g.J(i)).norm() == 0.0);
        GroupElement a = random_element(g, rng);
        GroupElement b = random_element(g, rng);
        CHECK(dist(back.multiply(a, b), g.multiply(a, b)) == 0.0);
    }
}
