#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "wedge/geometry.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace wedge;
using geom::FieldClass;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("from_spherical produces the expected unit vectors") {
    const auto f = geom::from_spherical(kPi / 2, kPi / 4);
    CHECK(f.b1 == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
    CHECK(f.b2 == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
    CHECK(f.b3 == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));

    const auto g = geom::from_spherical(0.0, 0.0);
    CHECK(g.b1 == 0.0);
    CHECK(g.b2 == 0.0);
    CHECK(g.b3 == 1.0);

    const auto h = geom::from_spherical(kPi / 2, 0.0);
    CHECK(h.b1 == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
    CHECK(h.b2 == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(h.b3) < 1e-15);

    CHECK_THROWS_AS(geom::from_spherical(-0.1, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(geom::from_spherical(0.0, kPi), std::invalid_argument);
}

TEST_CASE("from_spherical satisfies the unit and component invariants") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> d(0.0, kPi / 2);
    for (int k = 0; k < 200; ++k) {
        const double gamma = d(rng), theta = d(rng);
        const auto f = geom::from_spherical(gamma, theta);
        CHECK(std::abs(f.b1 * f.b1 + f.b2 * f.b2 + f.b3 * f.b3 - 1.0) < 1e-12);
        CHECK(std::abs(f.b1 - std::sin(gamma) * std::sin(theta)) < 1e-12);
        CHECK(std::abs(f.b2 - std::sin(gamma) * std::cos(theta)) < 1e-12);
        CHECK(std::abs(f.b3 - std::cos(gamma)) < 1e-12);
    }
}

TEST_CASE("canonicalize records flips and recovers the input") {
    auto [f1, s1] = geom::canonicalize(0.0, -1.0, 0.0);
    CHECK(f1.b2 == 1.0);
    CHECK(s1.s1 == 1);
    CHECK(s1.s2 == -1);
    CHECK(s1.s3 == 1);

    const double r = 1.0 / std::sqrt(2.0);
    auto [f2, s2] = geom::canonicalize(r, r, 0.0);
    CHECK(f2.b1 == doctest::Approx(r).epsilon(1e-15));
    CHECK(f2.b2 == doctest::Approx(r).epsilon(1e-15));
    CHECK((s2.s1 == 1 && s2.s2 == 1 && s2.s3 == 1));

    auto [f3, s3] = geom::canonicalize(-3.0, 0.0, 4.0);
    CHECK(f3.b1 == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(f3.b2 == 0.0);
    CHECK(f3.b3 == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(s3.s1 == -1);

    CHECK_THROWS_AS(geom::canonicalize(0.0, 0.0, 0.0), std::invalid_argument);

    // roundtrip property: flips applied to the canonical field recover the
    // normalized input exactly
    std::mt19937 rng(12);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    for (int k = 0; k < 300; ++k) {
        double b[3] = {d(rng), d(rng), d(rng)};
        const double nrm = std::sqrt(b[0] * b[0] + b[1] * b[1] + b[2] * b[2]);
        if (nrm < 1e-3) continue;
        auto [f, s] = geom::canonicalize(b[0], b[1], b[2]);
        CHECK(s.s1 * f.b1 == doctest::Approx(b[0] / nrm).epsilon(1e-14));
        CHECK(s.s2 * f.b2 == doctest::Approx(b[1] / nrm).epsilon(1e-14));
        CHECK(s.s3 * f.b3 == doctest::Approx(b[2] / nrm).epsilon(1e-14));
    }
}

TEST_CASE("face angles reproduce the rhombus-sector reference values") {
    const auto f = geom::from_spherical(kPi / 2, kPi / 4);   // B = (1,1,0)/sqrt(2)
    const auto g = geom::face_angles(f, 4 * kPi / 5);
    CHECK(g.theta_plus == doctest::Approx(3 * kPi / 20).epsilon(1e-13));
    CHECK(g.theta_minus == doctest::Approx(7 * kPi / 20).epsilon(1e-13));
    CHECK(g.theta0 == doctest::Approx(3 * kPi / 20).epsilon(1e-13));
    CHECK(g.klass == FieldClass::Ingoing);

    const auto t = geom::face_angles(f, kPi / 2);
    CHECK(std::abs(t.theta_plus) < 1e-12);
    CHECK(t.klass == FieldClass::Tangent);

    const auto axis = geom::from_spherical(0.0, 0.0);   // B = (0,0,1)
    const auto a1 = geom::face_angles(axis, 0.3 * kPi);
    CHECK(a1.theta_plus == 0.0);
    CHECK(a1.theta_minus == 0.0);
    CHECK(a1.klass == FieldClass::Tangent);

    CHECK_THROWS_AS(geom::face_angles(f, kPi), std::invalid_argument);
}

TEST_CASE("face angle formula is symmetric under theta -> -theta") {
    std::mt19937 rng(13);
    std::uniform_real_distribution<double> d(0.0, 1.0);
    for (int k = 0; k < 200; ++k) {
        const double gamma = d(rng) * kPi / 2;
        const double theta = d(rng) * kPi / 2;
        const double alpha = 0.05 * kPi + d(rng) * 0.9 * kPi;
        const double tp = geom::face_angle(gamma, theta, alpha, +1);
        const double tm = geom::face_angle(gamma, theta, alpha, -1);
        CHECK(geom::face_angle(gamma, -theta, alpha, +1) == doctest::Approx(tm).epsilon(1e-13));
        CHECK(geom::face_angle(gamma, -theta, alpha, -1) == doctest::Approx(tp).epsilon(1e-13));
    }
}

TEST_CASE("classification: tangent iff a face angle vanishes; monotone in alpha") {
    std::mt19937 rng(14);
    std::uniform_real_distribution<double> d(0.0, 1.0);
    for (int k = 0; k < 300; ++k) {
        const double gamma = 0.05 + d(rng) * (kPi / 2 - 0.05);
        const double theta = d(rng) * kPi / 2;
        const double alpha = 0.05 * kPi + d(rng) * 1.8 * kPi;
        if (std::abs(alpha - kPi) < 1e-3) continue;
        const auto f = geom::from_spherical(gamma, theta);
        const auto g = geom::face_angles(f, alpha);
        if (g.klass == FieldClass::Tangent) {
            CHECK(g.theta0 < 1e-9);
        } else {
            CHECK(g.theta0 > 1e-9);
        }
        if (g.klass == FieldClass::Outgoing) CHECK(alpha < kPi);
    }

    // increasing alpha at fixed field moves outgoing -> tangent -> ingoing
    const auto f = geom::from_spherical(kPi / 2, kPi / 4);
    int state = 0;   // 0 outgoing, 1 tangent, 2 ingoing
    for (double alpha = 0.1 * kPi; alpha < 0.99 * kPi; alpha += 0.01 * kPi) {
        const auto g = geom::face_angles(f, alpha);
        const int s = g.klass == FieldClass::Outgoing ? 0
                    : g.klass == FieldClass::Tangent ? 1 : 2;
        CHECK(s >= state);
        state = s;
    }
    CHECK(state == 2);
}
