#include <doctest.h>

#include <cfloat>
#include <cmath>

#include "lpplab/errors.hpp"
#include "lpplab/scalings.hpp"

using namespace lpplab;

namespace {
const double k43 = std::pow(2.0, 4.0 / 3.0);
}

TEST_CASE("mu_sigma_pp") {
    auto s = mu_sigma_pp(1);
    CHECK(s.center == doctest::Approx(4));
    CHECK(s.scale == doctest::Approx(k43));
    CHECK(mu_sigma_pp(4).center == doctest::Approx(9));
    CHECK(std::abs(mu_sigma_pp(1 + 1e-6).scale - k43) < 1e-5);
    CHECK(std::abs(mu_sigma_pp(1 - 1e-6).scale - k43) < 1e-5);
    CHECK_THROWS_AS(mu_sigma_pp(0), DomainError);
    CHECK_THROWS_AS(mu_sigma_pp(-1), DomainError);
}

TEST_CASE("mu_a") {
    CHECK(mu_a(1, 1, 0).center == doctest::Approx(5.75));
    CHECK(mu_a(1, 2, 2).center == doctest::Approx(7.75));
    CHECK(mu_a(8, 1, 0).scale == doctest::Approx(k43 * 2));
    CHECK_THROWS_AS(mu_a(1, 0, 0), DomainError);

    // against the point-to-point law of the tilted endpoint (t + q t^{2/3}, t)
    const double t = 1e6, a = 2, u = 1, q = a + u / a;
    const double x = t + q * std::pow(t, 2.0 / 3.0);
    const double pp = mu_sigma_pp(x / t, t).center;
    const double term = q * q * std::cbrt(t) / 4;
    CHECK(std::abs(pp - mu_a(t, a, u).center) <= 0.1 * term);
}

TEST_CASE("critical points") {
    CHECK(critical_end(1000, 2, 0) == Point{1000, 1000});
    CHECK(critical_end(1000, 2, 4) == Point{1200, 1000});
    CHECK(l_plus(1000, 2) == Point{-200, 0});
    CHECK(l_minus(1000, 2) == Point{0, -200});
}

TEST_CASE("eplus") {
    const double t = 1000, a = 2, u = 1;
    auto e0 = eplus(t, a, u, 0);
    CHECK(e0.point == critical_end(t, a, u));
    CHECK(e0.mu.center == 0);
    CHECK(e0.c_eps == 1);
    CHECK(eplus(t, a, u, 1).point == Point{ifloor(-a * pow23(t)), 0});
    CHECK(eplus(t, a, 0, 1).point == l_plus(t, a));
    CHECK(eplus(t, a, u, 0.5).c_eps == doctest::Approx(std::cbrt(2.0)));
    CHECK_THROWS_AS(eplus(t, a, u, 1.1), DomainError);
    CHECK_THROWS_AS(eplus(t, a, u, -0.1), DomainError);

    // split identity with r1 = q (1 - eps), r2 = q eps
    const double A = 2, U = 1, eps = 0.3, q = U / A + A;
    const double r1 = q * (1 - eps), r2 = q * eps;
    CHECK(std::abs(r2 * r2 / (4 * eps) + r1 * r1 / (4 * (1 - eps)) - q * q / 4) < 1e-12);
    // and the centers split the same way: mu_a = mu^eps + the (1 - eps) segment
    const double T = 1e6;
    const double rest = 4 * (1 - eps) * T + 2 * (1 - eps) * q * pow23(T) - (1 - eps) * q * q * pow13(T) / 4;
    CHECK(mu_a(T, A, U).center == doctest::Approx(eplus(T, A, U, eps).mu.center + rest).epsilon(1e-14));
}

TEST_CASE("schedules") {
    for (double a : {1.0, 2.0, 4.0, 8.0, 16.0, 100.0, 1e4}) {
        CAPTURE(a);
        CHECK(k_schedule(a) == doctest::Approx(std::sqrt(a)));
        const double e = eps_schedule(a);
        // (k/a, 1) is empty at a = 1, so only the limit is asked of it there
        CHECK(e <= 1);
        if (a > 1) {
            CHECK(e < 1);
            CHECK(e > k_schedule(a) / a);
        }
    }
    CHECK(eps_schedule(1e4) == doctest::Approx(0.02));
}

TEST_CASE("shock params") {
    auto p = shock_params_beta(0.5);
    CHECK(p.rho1 == 0.25);
    CHECK(p.rho2 == 0.75);
    CHECK(p.sigma1 == doctest::Approx(std::pow(1.5, 2.0 / 3.0)).epsilon(1e-14));
    auto z = shock_params_beta(0);
    CHECK(z.sigma1 == doctest::Approx(std::pow(2.0, -1.0 / 3.0)));
    CHECK(z.sigma2 == doctest::Approx(std::pow(2.0, -1.0 / 3.0)));
    auto r = shock_params_rho(0.4, 0.4);
    CHECK(r.c1 == r.c2);
    CHECK(shock_params_rho(0.8, 0.2).c1 == doctest::Approx(std::pow(0.2, -2.0 / 3.0) * std::cbrt(0.8)));
    CHECK_THROWS_AS(shock_params_beta(1), DomainError);
    CHECK_THROWS_AS(shock_params_rho(0.2, 0.8), DomainError);
}

TEST_CASE("tasep map constants") {
    CHECK(tasep_map_constants(1e6, 2, -4, 0.3).c1 == 0);
    CHECK(tasep_map_constants(1e6, 2, -4, 0.3).t == 250000);
    CHECK(tasep_map_constants(999, 1, -1, 0).t == 249);

    // second code path: long double, pow instead of cbrt
    using L = long double;
    const L T = 1e6L, a = 1, u = 0, s = 0;
    const L q = u / a + a, c1 = -q / 2, c2 = u / a;
    const L xi2 = q * q / 2 - std::pow(2.0L, -1.0L / 3) * s;
    const L T23 = std::pow(T, 2.0L / 3), T13 = std::pow(T, 1.0L / 3);
    const long t = long(std::floor(T / 4 + c1 * T23));
    const long M = t + long(std::floor(c2 * T23 + xi2 * T13));
    const L tt = L(t);
    const long h = long(std::floor(-a * (std::pow(4 * tt, 2.0L / 3) - c1 * (2.0L / 3) * std::pow(tt, 1.0L / 3) *
                                                                         std::pow(4.0L, 4.0L / 3))));
    const L thr = 4 * tt - c1 * std::pow(tt, 2.0L / 3) * std::pow(4.0L, 5.0L / 3) +
                  c1 * c1 * (2.0L / 3) * std::pow(tt, 1.0L / 3) * std::pow(4.0L, 7.0L / 3);

    auto c = tasep_map_constants(1e6, 1, 0, 0);
    CHECK(c.c1 == double(c1));
    CHECK(c.c2 == double(c2));
    CHECK(c.xi2 == doctest::Approx(double(xi2)).epsilon(1e-15));
    CHECK(c.t == t);
    CHECK(c.M == M);
    CHECK(c.lhat_plus == Point{h, 0});
    CHECK(c.lhat_minus == Point{0, h});
    CHECK(c.threshold == doctest::Approx(double(thr)).epsilon(1e-14));
    CHECK_THROWS_AS(tasep_map_constants(1e6, 0, 0, 0), DomainError);
}

// The particle-number identity with a = beta T^{1/3}. The difference of the two
// sides is exactly u^2 / (4 beta^2) T^{-1/3}.
TEST_CASE("particle number: closed form of the difference") {
    for (double T : {1e3, 1e6, 1e9})
        for (double beta : {0.05, 0.2, 0.5})
            for (double u : {-1.0, 1.0, 2.0}) {
                const double a = beta * std::cbrt(T);
                const double d = particle_number_exact(T, a, u) - particle_number_approx(T, beta, u);
                const double want = u * u / (4 * beta * beta) / std::cbrt(T);
                // both sides are O(T); allow a few ulps of T for cancellation
                CHECK(std::abs(d - want) <= 1e-9 * want + 64 * DBL_EPSILON * T);
            }
}

TEST_CASE("particle number: the 10 T^{-1/3} bound at beta = 0.05" * doctest::should_fail()) {
    const double T = 1e6, beta = 0.05, u = 1;
    const double d = particle_number_exact(T, beta * std::cbrt(T), u) - particle_number_approx(T, beta, u);
    CHECK(std::abs(d) <= 10 / std::cbrt(T));
}

TEST_CASE("timelike points") {
    auto p = timelike_points(0.7, 0, 1000);
    CHECK(p.point == Point{0, 0});
    CHECK(p.mu.center == doctest::Approx(4 * 700));
    auto q = p2_point(0.5, 2, 0, 1000);
    CHECK(q.point == Point{500, 501});
    CHECK(q.mu.center == doctest::Approx(2000));
    CHECK_THROWS_AS(p2_point(2, 1, 0, 10), DomainError);

    // centers along the characteristic: P(a,u) -> P2(u) -> (at, at)
    const double t = 1e6, tau = 1, a = 4, u = 1;
    auto P = timelike_points(a, u, t);
    auto P2 = p2_point(tau, a, u, t);
    const Point end{ifloor(a * t), ifloor(a * t)};
    const Point d = end - P2.point;
    const double second = std::pow(std::sqrt(double(d.x)) + std::sqrt(double(d.y)), 2);
    const double first = P2.mu.center;
    const double total = P.mu.center;
    CHECK(std::abs(first + second - total) <= std::cbrt(t));
}

TEST_CASE("forbidden segments") {
    RegionParams rp;
    rp.t = 1000;
    rp.a = 3;
    rp.eps = 0.6;
    auto r = forbidden_segments(RegionKind::RPlus, 3, rp);
    CHECK(r.a.x == 0);
    CHECK(r.a.y == 0);
    CHECK(r.thickness == 2);
    CHECK(r.b == eplus(1000, 3, 0, 0.6).point + Point{300, 0});
    auto m = forbidden_segments(RegionKind::RMinus, 3, rp);
    CHECK(m.a == Point{0, 0});
    CHECK_THROWS_AS(forbidden_segments(RegionKind::RPlus, 0, rp), DomainError);
}

TEST_CASE("two density points") {
    auto g = two_density_points(0.5, 0.5, 0, 0, 1000, 0.9);
    CHECK(g.points["S1"] == Point{0, 0});
    CHECK(g.points["S2"] == Point{0, 0});

    const double T = 1e6, r1 = 0.8, r2 = 0.2;
    auto h = two_density_points(r1, r2, 0, 0, T, 0.9);
    const Point dS = h.points["S1"] - h.points["S2"];
    const double ratio = std::hypot(double(dS.x), double(dS.y)) / ((r1 - r2) * T);
    // exact: |((1-r1)+(1-r2), r1 - r2... )| from the two displayed points
    const double want = std::hypot((1 - r1) * (r1 - r2) - (1 - r2) * (r2 - r1), r1 * (r2 - r1) - (r1 - r2) * r2) / (r1 - r2);
    CHECK(ratio == doctest::Approx(want).epsilon(1e-5));
    CHECK(ratio > 0.1);
    CHECK(ratio < 10);

    auto z = two_density_points(r1, r2, 0.3, 0.1, 1000, 0);
    const Point e = z.points["E"], er = z.points["Erho2"];
    CHECK(e.x - er.x >= 0);
    CHECK(e.x - er.x <= 1);
    CHECK(e.y - er.y >= 0);
    CHECK(e.y - er.y <= 1);
    CHECK_THROWS_AS(two_density_points(0.2, 0.8, 0, 0, 10, 0.9), DomainError);
}

TEST_CASE("line geometry") {
    auto g = line_geometry(LineKind::Airy1, 0, 0, 1000, 1);
    CHECK(g.points["E1"] == g.points["E2"]);
    auto h = line_geometry(LineKind::Airy1, 2, 0, 1000, 1);
    CHECK(h.points["E4"] == h.points["E3"] + h.points["E1"]);
    CHECK(h.windows["F2"].center == Point{-200, 200});
    CHECK(h.windows["F2"].contains({-190, 190}));
    CHECK_FALSE(h.windows["F2"].contains({-90, 90}));
    CHECK(h.regions.count("R1") == 1);
    auto k = line_geometry(LineKind::Airy21, 2, 1, 1000, 1);
    CHECK(k.points["E1"] == Point{900, 1100});
    CHECK(k.points["E2"] == Point{700, 1300});
}

TEST_CASE("scales are positive") {
    for (double t : {1.0, 64.0, 1000.0})
        for (double a : {0.5, 1.0, 4.0}) {
            CHECK(mu_a(t, a, 0.3).scale > 0);
            CHECK(eplus(t, a, 0.3, 0.5).mu.scale > 0);
            CHECK(timelike_points(a, 0.3, t).mu.scale > 0);
        }
    for (double e : {0.01, 1.0, 100.0}) CHECK(mu_sigma_pp(e).scale > 0);
}
