#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "osclab/four_vector.hpp"

using namespace osclab;

namespace {

std::mt19937_64 rng(7081u);

FourVector random_event() {
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    return FourVector(u(rng), u(rng), u(rng), u(rng));
}

const BoostVelocity kBoosts[] = {
    BoostVelocity{},
    BoostVelocity(0.6, 0.0, 0.0),
    BoostVelocity(0.0, 0.0, 0.9),
    BoostVelocity(0.5484827557301445, 0.5484827557301445, 0.5484827557301445),
};

} // namespace

TEST_CASE("minkowski dot uses the (+,+,+,-) signature") {
    const FourVector a(1.0, 2.0, 3.0, 4.0);
    const FourVector b(5.0, 6.0, 7.0, 8.0);
    CHECK(minkowski_dot(a, b) == 5.0 + 12.0 + 21.0 - 32.0);
    CHECK(minkowski_dot(a, a) == 1.0 + 4.0 + 9.0 - 16.0);

    const FourVectorC c(std::complex<double>(0.0, 1.0), {}, {}, std::complex<double>(2.0, 0.0));
    CHECK(minkowski_dot(c, c) == std::complex<double>(-5.0, 0.0));
}

TEST_CASE("raising flips only the time component and is an involution") {
    const FourVector a(1.0, -2.0, 3.0, 4.0);
    const FourVector up = raise_index(a);
    CHECK(up[0] == 1.0);
    CHECK(up[1] == -2.0);
    CHECK(up[2] == 3.0);
    CHECK(up[3] == -4.0);
    CHECK(lower_index(up) == a);
}

TEST_CASE("boost velocity validates and caches gamma") {
    CHECK(BoostVelocity{}.gamma() == 1.0);
    CHECK(BoostVelocity(0.6, 0.0, 0.0).gamma() == doctest::Approx(1.25).epsilon(1e-15));
    CHECK((BoostVelocity(0.6, 0.0, 0.0).reversed().vec() - Eigen::Vector3d(-0.6, 0.0, 0.0))
              .norm() == 0.0);
    CHECK_THROWS_AS(BoostVelocity(1.0, 0.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(BoostVelocity(0.8, 0.8, 0.0), std::domain_error);
    CHECK_THROWS_AS(BoostVelocity(0.0, 0.0, 1.0 - 1e-13), std::domain_error);
}

TEST_CASE("coordinate boost matches the worked example") {
    const FourVector x(0.0, 0.0, 0.0, 1.0);
    const FourVector moved = boost_coordinates(x, BoostVelocity(0.6, 0.0, 0.0));
    CHECK(moved[0] == doctest::Approx(-0.75).epsilon(1e-15));
    CHECK(moved[1] == 0.0);
    CHECK(moved[2] == 0.0);
    CHECK(moved[3] == doctest::Approx(1.25).epsilon(1e-15));
}

TEST_CASE("coordinate boost preserves the interval and inverts cleanly") {
    for (const BoostVelocity& v : kBoosts) {
        for (int k = 0; k < 40; ++k) {
            const FourVector x = random_event();
            const FourVector y = random_event();
            const FourVector xb = boost_coordinates(x, v);
            const FourVector yb = boost_coordinates(y, v);
            CHECK(minkowski_dot(xb, yb) ==
                  doctest::Approx(minkowski_dot(x, y)).epsilon(1e-12));
            const FourVector back = boost_coordinates(xb, v.reversed());
            for (int mu = 0; mu < 4; ++mu)
                CHECK(back[mu] == doctest::Approx(x[mu]).epsilon(1e-12));
        }
    }
}

TEST_CASE("frame momentum is on shell") {
    const FrameMomentum p(2.0, BoostVelocity(0.6, 0.0, 0.0));
    CHECK(p.p()[0] == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(p.p()[3] == doctest::Approx(2.5).epsilon(1e-15));
    CHECK(p.energy() == p.p()[3]);
    CHECK(minkowski_dot(p.p(), p.p()) == doctest::Approx(-4.0).epsilon(1e-14));
    CHECK_THROWS_AS(FrameMomentum(0.0, BoostVelocity{}), std::domain_error);
    CHECK_THROWS_AS(FrameMomentum(-1.0, BoostVelocity{}), std::domain_error);

    for (const BoostVelocity& v : kBoosts) {
        const FrameMomentum q = momentum_from_boost(3.0, v);
        CHECK(minkowski_dot(q.p(), q.p()) == doctest::Approx(-9.0).epsilon(1e-12));
    }
}

TEST_CASE("transverse projection: worked example, orthogonality, idempotence") {
    const FrameMomentum frame(2.0, BoostVelocity(0.6, 0.0, 0.0));
    const FourVector x(1.0, 0.0, 0.0, 0.5);
    const FourVector perp = perp_project(x, frame);
    CHECK(perp[0] == doctest::Approx(1.09375).epsilon(1e-15));
    CHECK(perp[1] == 0.0);
    CHECK(perp[2] == 0.0);
    CHECK(perp[3] == doctest::Approx(0.65625).epsilon(1e-15));

    for (const BoostVelocity& v : kBoosts) {
        const FrameMomentum f(1.7, v);
        for (int k = 0; k < 20; ++k) {
            const FourVector y = random_event();
            const FourVector yp = perp_project(y, f);
            CHECK(std::abs(minkowski_dot(f.p(), yp)) < 1e-12 * f.energy() * 10.0);
            const FourVector ypp = perp_project(yp, f);
            for (int mu = 0; mu < 4; ++mu)
                CHECK(ypp[mu] == doctest::Approx(yp[mu]).epsilon(1e-12));
        }
    }
}

TEST_CASE("epsilon parameters partition the rest mass") {
    const EpsilonPair eps = epsilon_params(2.0, 1.0, 3.0);
    CHECK(eps.e1 == 2.0);
    CHECK(eps.e2 == 1.0);
    CHECK_THROWS_AS(epsilon_params(1.0, 1.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(epsilon_params(-1.0, 1.0, 2.0), std::domain_error);
}

TEST_CASE("center-of-momentum split: exact small case and round trip") {
    const EpsilonPair eps{1.0, 2.0};
    const double m0 = 3.0;
    const FourVector x1(1.0, 0.0, 0.0, 0.0), x2;
    const FourVector p1(1.0, 0.0, 0.0, 0.0), p2(0.0, -1.0, 0.0, 0.0);
    const ComSplit s = com_split(x1, x2, p1, p2, eps, m0);
    CHECK(s.x_com[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(s.x_rel == x1);
    CHECK(s.p_total[0] == 1.0);
    CHECK(s.p_total[1] == -1.0);
    CHECK(s.p_rel[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(s.p_rel[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

    const ComMerge m = com_merge(s, eps, m0);
    for (int mu = 0; mu < 4; ++mu) {
        CHECK(m.x1[mu] == doctest::Approx(x1[mu]).epsilon(1e-14));
        CHECK(m.x2[mu] == doctest::Approx(x2[mu]).epsilon(1e-14));
        CHECK(m.p1[mu] == doctest::Approx(p1[mu]).epsilon(1e-14));
        CHECK(m.p2[mu] == doctest::Approx(p2[mu]).epsilon(1e-14));
    }

    for (int k = 0; k < 20; ++k) {
        const ComSplit r = com_split(random_event(), random_event(), random_event(),
                                     random_event(), eps, m0);
        const ComMerge back = com_merge(r, eps, m0);
        const ComSplit again =
            com_split(back.x1, back.x2, back.p1, back.p2, eps, m0);
        for (int mu = 0; mu < 4; ++mu) {
            CHECK(again.x_com[mu] == doctest::Approx(r.x_com[mu]).epsilon(1e-13));
            CHECK(again.p_rel[mu] == doctest::Approx(r.p_rel[mu]).epsilon(1e-13));
        }
    }
}
