#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "lpplab/errors.hpp"
#include "lpplab/refdist.hpp"
#include "lpplab/scalings.hpp"
#include "pinned_airy.hpp"
#include "pinned_refdist.hpp"

using namespace lpplab;

namespace {

double uniform_cdf(double x) { return std::clamp(x, 0.0, 1.0); }

}  // namespace

TEST_CASE("airy against pins") {
    for (const auto& p : pinned::kAi) {
        CAPTURE(p.x);
        CHECK(std::abs(airy_ai(p.x) - p.ai) <= 1e-10 * std::abs(p.ai));
        CHECK(std::abs(airy_ai_prime(p.x) - p.aip) <= 1e-10 * std::abs(p.aip));
    }
    CHECK(airy_ai(0) == doctest::Approx(pinned::kAi0).epsilon(1e-14));
    CHECK(airy_ai(0) == doctest::Approx(std::pow(3.0, -2.0 / 3.0) / std::tgamma(2.0 / 3.0)).epsilon(1e-14));
    CHECK_THROWS_AS(airy_ai(-41), OutOfRange);
    CHECK_THROWS_AS(airy_ai(201), OutOfRange);
    CHECK(airy_ai(150) >= 0);
}

TEST_CASE("airy series at two precisions") {
    // Maclaurin series in double and long double
    auto series = [](auto x) {
        using T = decltype(x);
        const T c1 = T(0.355028053887817239260063186004183176L), c2 = T(0.258819403792806798405183560189203963L);
        T f = 1, g = x, sf = 0, sg = 0;
        for (int k = 0; k < 60; ++k) {
            sf += f;
            sg += g;
            f *= x * x * x / T((3 * k + 2) * (3 * k + 3));
            g *= x * x * x / T((3 * k + 3) * (3 * k + 4));
        }
        return c1 * sf - c2 * sg;
    };
    for (double x : {-3.0, -1.0, 0.0, 0.7, 2.0}) {
        const double d = series(x);
        const long double l = series((long double)x);
        CHECK(std::abs(double(l) - d) < 1e-12);
        CHECK(std::abs(airy_ai(x) - double(l)) < 1e-12);
    }
}

TEST_CASE("airy ODE residual") {
    // Richardson-extrapolated central difference, truncation error O(h^4)
    auto cd = [](double x, double h) { return (airy_ai_prime(x + h) - airy_ai_prime(x - h)) / (2 * h); };
    for (double x : {-5.0, -2.0, 0.0, 1.5, 5.0}) {
        const double d2 = (4 * cd(x, 5e-4) - cd(x, 1e-3)) / 3;
        CHECK(std::abs(d2 - x * airy_ai(x)) < 1e-9);
    }
    double prev = airy_ai(1);
    for (double x = 1.1; x < 30; x += 0.1) {
        const double v = airy_ai(x);
        CHECK(v > 0);
        CHECK(v < prev);
        prev = v;
    }
}

TEST_CASE("gauss-legendre rule") {
    auto q = gauss_legendre(20);
    double s0 = 0, s2 = 0, s38 = 0;
    for (std::size_t i = 0; i < q.nodes.size(); ++i) {
        s0 += q.weights[i];
        s2 += q.weights[i] * q.nodes[i] * q.nodes[i];
        s38 += q.weights[i] * std::pow(q.nodes[i], 38);
    }
    CHECK(s0 == doctest::Approx(2).epsilon(1e-14));
    CHECK(s2 == doctest::Approx(2.0 / 3).epsilon(1e-14));
    CHECK(s38 == doctest::Approx(2.0 / 39).epsilon(1e-12));
}

TEST_CASE("tracy-widom pins") {
    const TwCdf gue(Ensemble::GUE), goe(Ensemble::GOE);
    for (const auto& p : pinned::kTw) {
        CAPTURE(p.goe);
        CAPTURE(p.s);
        const double v = p.goe ? goe(p.s) : gue(p.s);
        CHECK(std::abs(v - p.F) <= 1e-8);
        const double t = p.goe ? goe_cdf()(p.s) : gue_cdf()(p.s);
        CHECK(std::abs(t - p.F) <= 1e-7);
        CHECK(tw_cdf(p.goe ? Ensemble::GOE : Ensemble::GUE, p.s) == v);
    }
}

TEST_CASE("two-resolution agreement, monotonicity, endpoints") {
    for (auto e : {Ensemble::GUE, Ensemble::GOE}) {
        const TwCdf a(e), b(e, 2 * TwCdf::kDefaultOrder);
        double worst = 0;
        for (double s = -8; s <= 6 + 1e-9; s += 0.05) worst = std::max(worst, std::abs(a(s) - b(s)));
        CHECK(worst <= 1e-8);

        double prev = -1;
        bool mono = true, range = true;
        for (int i = 0; i < 1000; ++i) {
            const double s = TwCdf::kMin + (TwCdf::kMax - TwCdf::kMin) * i / 999.0;
            const double v = a(s);
            mono &= v >= prev;
            range &= v >= 0 && v <= 1;
            prev = v;
        }
        CHECK(mono);
        CHECK(range);
        CHECK(a(TwCdf::kMin) <= 1e-6);
        CHECK(a(TwCdf::kMax) >= 1 - 1e-6);
        CHECK(a(8) >= 1 - 1e-6);
        CHECK_THROWS_AS(a(8.5), OutOfRange);
        CHECK(a.clamped(-20) == 0);
        CHECK(a.clamped(20) == 1);
    }
}

TEST_CASE("moments stable under order doubling") {
    for (auto e : {Ensemble::GUE, Ensemble::GOE}) {
        double m[2], v[2];
        int k = 0;
        for (int order : {32, 64}) {
            const TwCdf F(e, order);
            // integrate s dF on a fine grid
            double mean = 0, m2 = 0, prev = F(-10);
            const double h = 0.01;
            for (double s = -10 + h; s <= 8 + 1e-9; s += h) {
                const double cur = F(s), x = s - h / 2;
                mean += x * (cur - prev);
                m2 += x * x * (cur - prev);
                prev = cur;
            }
            m[k] = mean;
            v[k] = m2 - mean * mean;
            ++k;
        }
        CHECK(std::abs(m[0] - m[1]) <= 1e-4);
        CHECK(std::abs(v[0] - v[1]) <= 1e-4);
    }
}

TEST_CASE("inverse-cdf samples reproduce the curve mean") {
    const Cdf F = gue_cdf();
    double mean = 0, prev = 0;
    const double h = 0.001;
    for (double s = -10 + h; s <= 8; s += h) {
        const double cur = F(s);
        mean += (s - h / 2) * (cur - prev);
        prev = cur;
    }
    // stratified uniforms, bisection inverse
    const int N = 20000;
    double sum = 0;
    for (int i = 0; i < N; ++i) {
        const double u = (i + 0.5) / N;
        double lo = -10, hi = 8;
        for (int it = 0; it < 60; ++it) {
            const double mid = (lo + hi) / 2;
            (F(mid) < u ? lo : hi) = mid;
        }
        sum += (lo + hi) / 2;
    }
    CHECK(std::abs(sum / N - mean) <= 0.01);
}

TEST_CASE("product limits") {
    const Cdf F = gue_cdf();
    for (double s : {-3.0, -1.0, 0.0, 2.0}) {
        CHECK(product_limit_lpp(s, 0) == doctest::Approx(F(s) * F(s)).epsilon(1e-15));
        CHECK(product_limit_tasep(s, 0) == doctest::Approx(F(s) * F(s)).epsilon(1e-15));
        CHECK(product_limit_tasep(s, 50) == 0);
        double prev = 2;
        for (double u = -5; u <= 5; u += 0.05) {
            const double v = product_limit_lpp(s, u);
            CHECK(v <= prev);
            prev = v;
        }
    }
    // the two scale conventions differ by the factor 2^{8/3} in u
    CHECK(product_limit_tasep(0.3, 0.2) == doctest::Approx(product_limit_lpp(0.3, 0.2 * std::pow(2.0, 8.0 / 3.0))));
}

TEST_CASE("mock cdf composition is exact") {
    const Cdf U = uniform_cdf;
    const double k43 = std::cbrt(16.0);
    for (double s : {0.1, 0.45, 0.8}) {
        for (double u : {0.0, 0.1, 0.3}) {
            CHECK(product_limit_lpp(s, u, U) == U(s) * U(s - u / k43));
            CHECK(product_limit_tasep(s, u, U) == U(s) * U(s - u * k43));
        }
        const auto sp = shock_params_beta(0.5);
        CHECK(gue_shock_product(s, 0.02, 0.5, U) ==
              U((s - 0.02 / sp.rho1) / sp.sigma1) * U((s - 0.02 / sp.rho2) / sp.sigma2));
        const auto gp = shock_params_rho(0.8, 0.2);
        CHECK(goe_shock_product(s, 0.01, 0.8, 0.2, U) ==
              U(std::cbrt(4.0) * (s - 0.01 / 0.8) * gp.c1) * U(std::cbrt(4.0) * (s - 0.01 / 0.2) * gp.c2));

        SandwichParams p;
        p.s = s;
        p.u = 0.1;
        p.delta = 0.05;
        p.eps = 0.3;
        p.surrogate = 0.01;
        p.G1 = U;
        for (auto kind : {BoundKind::TasepScale, BoundKind::LppScale}) {
            const double sh = kind == BoundKind::TasepScale ? p.u * k43 : p.u / k43;
            auto b = sandwich_bounds(kind, p);
            CHECK(b.lower == U(s) * U(s - sh));
            CHECK(b.upper == std::min(1.0, U((s + p.delta) / std::cbrt(1 - p.eps)) * U(s - sh) +
                                               U(-p.delta / std::cbrt(p.eps)) + p.surrogate));
        }
        SandwichParams q;
        q.s = s;
        q.s2 = 0.6;
        q.delta = 0.05;
        q.c_eps = 1.2;
        q.surrogate = 0.01;
        q.G1 = U;
        q.G2 = [](double x) { return uniform_cdf(x / 2); };
        q.G0 = [](double x) { return uniform_cdf(x + 0.5); };
        auto g = sandwich_bounds(BoundKind::General, q);
        CHECK(g.lower == U(s) * q.G2(0.6));
        CHECK(g.upper == std::min(1.0, U((s + 0.05) * 1.2) * q.G2(0.6) + q.G0(-0.05) + 3 * 0.01));
    }
}

TEST_CASE("sandwich limits and ordering") {
    const Cdf F = gue_cdf();
    SandwichParams p;
    p.s = -1;
    p.u = 0.5;
    p.eps = 0.25;
    p.delta = 1000;
    p.surrogate = 0.02;
    auto far = sandwich_bounds(BoundKind::TasepScale, p);
    CHECK(far.upper == doctest::Approx(std::min(1.0, F(-1 - 0.5 * std::cbrt(16.0)) + 0.02)).epsilon(1e-12));

    // closes when eps, delta, surrogate -> 0 with delta eps^{-1/3} -> inf
    double prevgap = 1;
    for (double e : {1e-6, 1e-12, 1e-18, 1e-24}) {
        SandwichParams q;
        q.s = 0.3;
        q.eps = e;
        q.delta = std::pow(e, 1.0 / 6.0);
        q.surrogate = e;
        auto b = sandwich_bounds(BoundKind::LppScale, q);
        const double gap = b.upper - b.lower;
        CHECK(gap >= 0);
        CHECK(gap <= prevgap);
        prevgap = gap;
    }
    CHECK(prevgap < 1e-3);

    SandwichParams r;
    r.s = 0;
    r.u = 0;
    r.delta = 0.5;
    r.eps = 0.25;
    for (auto kind : {BoundKind::TasepScale, BoundKind::LppScale}) {
        auto b = sandwich_bounds(kind, r);
        CHECK(b.lower == doctest::Approx(F(0) * F(0)));
        CHECK(b.lower <= b.upper);
    }
    CHECK_THROWS_AS(sandwich_bounds(BoundKind::LppScale, SandwichParams{.eps = 1.5}), DomainError);
    CHECK_THROWS_AS(sandwich_bounds(BoundKind::General, SandwichParams{}), DomainError);
}

TEST_CASE("general sandwich is well formed for tracy-widom evaluators") {
    SandwichParams p;
    p.G1 = gue_cdf();
    p.G2 = goe_cdf();
    p.G0 = gue_cdf();
    int bad = 0;
    for (double c : {1.0, 1.3, 2.0, 4.0})
        for (double d : {0.0, 0.1, 0.5, 1.0, 3.0})
            for (double psi : {0.0, 0.01})
                for (double s = -6; s <= 4; s += 0.25)
                    for (double s2 : {-3.0, 0.0, 2.0}) {
                        p.c_eps = c, p.delta = d, p.surrogate = psi, p.s = s, p.s2 = s2;
                        auto b = sandwich_bounds(BoundKind::General, p);
                        bad += b.lower > b.upper + 1e-15;
                    }
    CHECK(bad == 0);
}

TEST_CASE("shock products") {
    const Cdf Fo = goe_cdf(), Fu = gue_cdf();
    const auto sp = shock_params_rho(0.5, 0.5);
    for (double s : {-1.0, 0.0, 0.7})
        CHECK(goe_shock_product(s, 0, 0.5, 0.5) ==
              doctest::Approx(std::pow(Fo(std::cbrt(4.0) * s * sp.c1), 2)).epsilon(1e-14));
    CHECK(goe_shock_product(-50, 0, 0.8, 0.2) == 0);
    double goe0 = 0;
    for (const auto& p : pinned::kTw)
        if (p.goe && p.s == 0) goe0 = p.F;
    CHECK(std::abs(goe_shock_product(0, 0, 0.8, 0.2) - goe0 * goe0) <= 2e-7);

    CHECK(gue_shock_product(0.5, 0, 1e-9) == doctest::Approx(std::pow(Fu(std::cbrt(2.0) * 0.5), 2)).epsilon(1e-6));
    CHECK(gue_shock_product(50, 0, 0.5) == 1);
    const TwCdf G(Ensemble::GUE);
    const double s1 = std::pow(1.5, 2.0 / 3.0), s2 = std::pow(0.5, 2.0 / 3.0) / std::cbrt(2.0 * 1.5);
    CHECK(std::abs(gue_shock_product(0, 1, 0.5) - G(-4 / s1) * G(-(1 / 0.75) / s2)) <= 2e-7);
}
