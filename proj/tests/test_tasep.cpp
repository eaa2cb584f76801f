#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "lpplab/errors.hpp"
#include "lpplab/lpp.hpp"
#include "lpplab/stats.hpp"
#include "lpplab/tasep.hpp"

using namespace lpplab;

namespace {

// x_n(T) through the LPP link, on weights independent of the TASEP clocks.
i64 position_via_lpp(const TasepInit& init, i64 n, double T, const Seed& seed, i64 m_lo, i64 m_hi) {
    const StartSet start = tasep_to_lpp(init, n, m_lo).start;
    std::vector<Point> ends;
    for (i64 m = m_lo; m <= m_hi; ++m) ends.push_back({m, n});
    WeightField f(seed, start, Rect{{m_lo, n}, {m_hi, n}});
    auto r = multi_endpoint_last_passage(f, start, ends);
    i64 best = m_lo - 1;
    for (std::size_t k = 0; k < r.size(); ++k)
        if (r[k].value <= T) best = m_lo + i64(k);
    REQUIRE(best >= m_lo);
    REQUIRE(best < m_hi);
    return best - n;
}

}  // namespace

TEST_CASE("initial configurations") {
    auto s = init_config(InitKind::StepA, {.a = 0}, 100, 0, 10);
    for (i64 n = 0; n <= 10; ++n) CHECK(s.x0[std::size_t(n - s.n_min)] == -n);
    CHECK(s.n_min == 0);

    auto b = init_config(InitKind::ShockBeta, {.beta = 0.5}, 100, 0, 3);
    CHECK(b.position(1) == -51);
    CHECK(b.position(0) == 0);
    CHECK(b.position(-50) == 50);
    CHECK(b.n_min == -50);

    auto f = init_config(InitKind::Flat, {.rho = 0.5}, 10, 0, 5);
    for (i64 n = -20; n <= 20; ++n) CHECK(f.position(n) == -2 * n);
    CHECK(f.guard.has_value());

    auto a = init_config(InitKind::StepA, {.a = 1}, 1000, 0, 3);
    CHECK(a.position(-100) == 100);
    CHECK(a.position(0) == 0);
    CHECK(a.position(1) == -101);
    CHECK_THROWS_AS(init_config(InitKind::StepA, {.a = 1}, 1000, -101, 3), DomainError);

    auto t = init_config(InitKind::TwoDensity, {.rho1 = 0.75, .rho2 = 0.25}, 10, -3, 3);
    CHECK(t.position(-3) == 4);
    CHECK(t.position(2) == -8);
    for (std::size_t k = 1; k < t.x0.size(); ++k) CHECK(t.x0[k] < t.x0[k - 1]);

    CHECK_THROWS_AS(init_config(InitKind::ShockBeta, {.beta = 1.2}, 10, 0, 1), DomainError);
    CHECK_THROWS_AS(init_config(InitKind::Flat, {.rho = 0}, 10, 0, 1), DomainError);
    CHECK_THROWS_AS(init_config(InitKind::TwoDensity, {.rho1 = 0.2, .rho2 = 0.8}, 10, 0, 1), DomainError);
}

TEST_CASE("T = 0 leaves the configuration alone") {
    auto in = init_config(InitKind::Flat, {.rho = 0.5}, 0, 0, 5);
    auto st = simulate_tasep(in, 0, Seed{1, "t0", 0});
    CHECK(st.x == in.x0);
    CHECK(st.events == 0);
}

TEST_CASE("single free particle is Poisson") {
    const int N = 100000;
    const double T = 10;
    auto in = init_config(InitKind::StepA, {.a = 0}, T, 0, 0);
    REQUIRE(in.x0.size() == 1);
    std::vector<double> tasep(N), lpp(N);
    double sum = 0;
    for (int r = 0; r < N; ++r) {
        const Seed s{3, "poisson", std::uint64_t(r)};
        tasep[std::size_t(r)] = double(simulate_tasep(in, T, s).at(0));
        sum += tasep[std::size_t(r)];
        lpp[std::size_t(r)] = double(position_via_lpp(in, 0, T, s, 0, 60));
    }
    CHECK(std::abs(sum / N - T) <= 3 * std::sqrt(T / N));

    // P(x_0(T) <= k) = Q(k + 1, T)
    auto poisson = [&](double k) { return k < 0 ? 0.0 : boost::math::gamma_q(std::floor(k) + 1, T); };
    CHECK(ks_distance(Ecdf(tasep), poisson) < 0.01);
    // Gamma side: P(x_0(T) >= m) = P(Gamma(m) <= T)
    CHECK(ks_distance(Ecdf(lpp), poisson) < 0.01);
    CHECK(two_sample_ks(Ecdf(tasep), Ecdf(lpp)) <= 0.02);
}

TEST_CASE("order preservation and monotone trajectories") {
    auto in = init_config(InitKind::StepA, {.a = 0}, 5, 0, 1);
    std::vector<i64> prev = in.x0;
    for (double T = 0.01; T <= 5; T += 0.01) {
        auto st = simulate_tasep(in, T, Seed{4, "pair", 0});
        CHECK(st.at(1) < st.at(0));
        CHECK(st.at(0) >= prev[0]);
        CHECK(st.at(1) >= prev[1]);
        prev = st.x;
    }
    auto sh = init_config(InitKind::ShockBeta, {.beta = 0.5}, 40, 0, 10);
    auto st = simulate_tasep(sh, 40, Seed{4, "shock", 0});
    for (std::size_t k = 1; k < st.x.size(); ++k) CHECK(st.x[k] < st.x[k - 1]);
    for (std::size_t k = 0; k < st.x.size(); ++k) CHECK(st.x[k] >= sh.x0[k]);
    CHECK(st.events > 0);
}

TEST_CASE("tasep_to_lpp start sets") {
    auto s = init_config(InitKind::StepA, {.a = 0}, 10, 0, 8);
    auto l = tasep_to_lpp(s, 5, 9);
    CHECK(l.end == Point{9, 5});
    for (i64 k = 0; k <= 5; ++k) CHECK(l.start.contains({0, k}));
    CHECK(truncate(l.start, l.end).pts.size() == 6);

    const double T = 100, beta = 0.3;
    auto b = init_config(InitKind::ShockBeta, {.beta = beta}, T, 0, 8);
    auto lb = tasep_to_lpp(b, 8, 20);
    const i64 B = ifloor(beta * T);
    for (i64 n = -B; n <= 0; ++n) CHECK(lb.start.contains({0, n}));
    for (i64 n = 1; n <= 8; ++n) CHECK(lb.start.contains({-B, n}));
    CHECK_FALSE(lb.start.contains({0, 1}));
    CHECK_FALSE(lb.start.contains({0, -B - 1}));

    auto f = init_config(InitKind::Flat, {.rho = 0.5}, 10, 0, 3);
    auto lf = tasep_to_lpp(f, 2, 3);
    for (i64 n = -5; n <= 5; ++n) CHECK(lf.start.contains({n - 2 * n, n}));
}

TEST_CASE("step: tasep and its lpp link agree") {
    const int N = 4000;
    const double T = 30;
    const i64 n = 5;
    auto in = init_config(InitKind::StepA, {.a = 0}, T, 0, n);
    std::vector<double> a(N), b(N);
    for (int r = 0; r < N; ++r) {
        a[std::size_t(r)] = double(simulate_tasep(in, T, Seed{5, "link", std::uint64_t(r)}).at(n));
        b[std::size_t(r)] = double(position_via_lpp(in, n, T, Seed{5, "link", std::uint64_t(r)}, 0, 120));
    }
    CHECK(two_sample_ks(Ecdf(a), Ecdf(b)) <= 1.63 * std::sqrt(2.0 / N));
}

TEST_CASE("flat: tasep and the staircase lpp agree") {
    const int N = 4000;
    const double T = 20;
    auto in = init_config(InitKind::Flat, {.rho = 0.5}, T, 0, 0);
    std::vector<double> a(N), b(N);
    for (int r = 0; r < N; ++r) {
        a[std::size_t(r)] = double(simulate_tasep(in, T, Seed{6, "flat", std::uint64_t(r)}).at(0));
        b[std::size_t(r)] = double(position_via_lpp(in, 0, T, Seed{6, "flat", std::uint64_t(r)}, 0, 80));
    }
    CHECK(two_sample_ks(Ecdf(a), Ecdf(b)) <= 1.63 * std::sqrt(2.0 / N));
}

TEST_CASE("light cone is rarely reached") {
    const int N = 2000;
    int hits = 0;
    const double T = 20;
    auto in = init_config(InitKind::Flat, {.rho = 0.5}, T, 0, 5);
    for (int r = 0; r < N; ++r) {
        try {
            // buffer_valid speaks for the whole simulated window, which the
            // buffer is allowed to spoil; only the observed labels count here
            simulate_tasep(in, T, Seed{7, "cone", std::uint64_t(r)});
        } catch (const BufferExhausted&) {
            ++hits;
        }
    }
    CHECK(double(hits) / N < 1e-3);
    CHECK(buffer_sites(100) == 500);
}

TEST_CASE("density profiles") {
    TasepState empty;
    auto e = empirical_density(empty, 10, 0.1);
    CHECK(!e.values.empty());
    for (double v : e.values) CHECK(v == 0);

    // step, T = 2000, averaged over a few replicas
    const double T = 2000;
    auto in = init_config(InitKind::StepA, {.a = 0}, T, 0, i64(T) + 1);
    const int R = 20;
    std::vector<double> acc;
    DensityProfile last;
    for (int r = 0; r < R; ++r) {
        auto st = simulate_tasep(in, T, Seed{8, "profile", std::uint64_t(r)});
        last = empirical_density(st, T, 0.05, -1, 1);
        if (acc.empty()) acc.assign(last.values.size(), 0.0);
        for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += last.values[k] / R;
    }
    double worst = 0;
    for (std::size_t k = 0; k < acc.size(); ++k) {
        const double xi = last.centers[k];
        CHECK(acc[k] >= 0);
        CHECK(acc[k] <= 1);
        if (xi >= -0.9 && xi <= 0.9) worst = std::max(worst, std::abs(acc[k] - (1 - xi) / 2));
    }
    CHECK(worst <= 0.05);
    double integral = 0;
    for (std::size_t k = 0; k < acc.size(); ++k) integral += acc[k] * last.widths[k];
    CHECK(integral <= (T + 2) / T + 1e-12);
}

TEST_CASE("exact rationals") {
    CHECK(exact_rational(0.5)->num == 1);
    CHECK(exact_rational(0.5)->den == 2);
    CHECK(exact_rational(0.75)->den == 4);
    CHECK(exact_rational(1.0 / 3.0)->den == 3);
    CHECK_FALSE(exact_rational(M_PI / 4).has_value());
}
