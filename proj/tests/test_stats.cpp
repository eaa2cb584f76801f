#include <doctest.h>

#include <cmath>
#include <vector>

#include "lpplab/errors.hpp"
#include "lpplab/stats.hpp"
#include "lpplab/weights.hpp"

using namespace lpplab;

namespace {

std::vector<double> exp_sample(std::uint64_t replica, int n) {
    WeightField f(Seed{99, "stats", replica}, StartSet::empty(), Rect{{0, 0}, {1, 1}});
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) v[std::size_t(i)] = f.weight_at({i, 0});
    return v;
}

}  // namespace

TEST_CASE("ecdf basics") {
    Ecdf e({3, 1, 2});
    CHECK(e(2) == doctest::Approx(2.0 / 3.0));
    CHECK(e.below(2) == doctest::Approx(1.0 / 3.0));
    CHECK(e(0.5) == 0);
    CHECK(e(3) == 1);
    CHECK(e.quantile(0.5) == 2);
    CHECK(e.quantile(0.25) == 1.5);
    CHECK_THROWS_AS(Ecdf({}), DomainError);
    CHECK_THROWS_AS(Ecdf2({}), DomainError);

    // against itself as a step function
    Ecdf s(exp_sample(0, 500));
    CHECK(ks_distance(s, [&](double x) { return s(x); }) == 0.0);
}

TEST_CASE("ks_distance sees both sides of each jump") {
    Ecdf e({0.5});
    // reference jumps at 0.5 too, from 0.3 to 0.6
    CHECK(ks_distance(e, [](double x) { return x < 0.5 ? 0.3 : 0.6; }) == doctest::Approx(0.4));
    CHECK(ks_distance(Ecdf({1, 2}), [](double) { return 0.5; }) == doctest::Approx(0.5));
}

TEST_CASE("two-sample ks") {
    const int N = 10000;
    Ecdf a(exp_sample(0, N)), b(exp_sample(1, N));
    CHECK(two_sample_ks(a, b) < 1.63 * std::sqrt(2.0 / N));
    CHECK(two_sample_ks(a, a) == 0.0);
    CHECK(two_sample_ks(Ecdf({0, 1}), Ecdf({2, 3})) == 1.0);
}

TEST_CASE("ecdf2 and table") {
    Ecdf2 e({{1, 2}, {2, 1}, {3, 3}});
    CHECK(e(2, 2) == doctest::Approx(2.0 / 3.0));
    CHECK(e(1, 1) == 0.0);
    const std::vector<double> g1{0, 1.5, 2.5, 4}, g2{0.5, 2, 3};
    auto t = e.table(g1, g2);
    for (std::size_t i = 0; i < g1.size(); ++i)
        for (std::size_t j = 0; j < g2.size(); ++j) CHECK(t[i * g2.size() + j] == e(g1[i], g2[j]));
    CHECK(e.marginal1()(2) == doctest::Approx(2.0 / 3.0));
    CHECK(e.marginal2()(1) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("decoupling gap: comonotone pairs reach 1/4") {
    const auto x = exp_sample(2, 10000);
    std::vector<std::pair<double, double>> xy;
    for (double v : x) xy.push_back({v, v});
    const auto g = linspace(0, 4, 201);
    auto r = decoupling_gap(Ecdf2(xy), g, g);
    // direct: sup over the grid of F(1 - F)
    Ecdf m(x);
    double want = 0;
    for (double s : g) want = std::max(want, m(s) * (1 - m(s)));
    CHECK(r.signed_sup == doctest::Approx(want).epsilon(1e-12));
    CHECK(std::abs(r.signed_sup - 0.25) <= 3 * r.se);
}

TEST_CASE("decoupling gap: independent pairs") {
    const auto x = exp_sample(3, 10000), y = exp_sample(4, 10000);
    std::vector<std::pair<double, double>> xy;
    for (std::size_t i = 0; i < x.size(); ++i) xy.push_back({x[i], y[i]});
    const auto g = linspace(0, 4, 21);
    auto r = decoupling_gap(Ecdf2(xy), g, g);
    CHECK(std::abs(r.signed_sup) <= 3 * r.se);
}

TEST_CASE("decoupling gap: single point and mismatch") {
    auto r = decoupling_gap(std::vector<double>{0.4}, std::vector<double>{0.25}, 100);
    CHECK(r.signed_sup == doctest::Approx(0.15));
    CHECK(r.abs_sup == doctest::Approx(0.15));
    CHECK(r.se == doctest::Approx(std::sqrt(0.4 * 0.6 / 100)));
    auto n = decoupling_gap(std::vector<double>{0.1, 0.5}, std::vector<double>{0.3, 0.4}, 100);
    CHECK(n.signed_sup == doctest::Approx(0.1));
    CHECK(n.abs_sup == doctest::Approx(0.2));
    CHECK_THROWS_AS(decoupling_gap(std::vector<double>{0.1}, std::vector<double>{0.1, 0.2}, 10), DomainError);
}

TEST_CASE("bootstrap is deterministic and sane") {
    const auto x = exp_sample(5, 2000);
    auto med = [](const Ecdf& e) { return e.quantile(0.5); };
    const double a = bootstrap_se(x, med, 200, Seed{1, "boot", 0});
    const double b = bootstrap_se(x, med, 200, Seed{1, "boot", 0});
    CHECK(a == b);
    // asymptotic SE of the exp(1) median: 1 / (2 f(m) sqrt(n)) with f(m) = 1/2
    const double want = 1.0 / std::sqrt(2000.0);
    CHECK(a == doctest::Approx(want).epsilon(0.3));
}

TEST_CASE("binomial se and linspace") {
    CHECK(binomial_se(0.5, 100) == doctest::Approx(0.05));
    CHECK(binomial_se(0, 100) == 0);
    auto v = linspace(-1, 1, 5);
    CHECK(v == std::vector<double>{-1, -0.5, 0, 0.5, 1});
}
