#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "lpplab/stats.hpp"
#include "lpplab/weights.hpp"

using namespace lpplab;

TEST_CASE("philox4x32-10 known answers") {
    // Random123 kat_vectors
    auto o = philox4x32_10({0, 0, 0, 0}, {0, 0});
    CHECK(o == Philox4x32{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
    o = philox4x32_10({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu});
    CHECK(o == Philox4x32{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
    o = philox4x32_10({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u});
    CHECK(o == Philox4x32{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("fnv1a64 reference values") {
    CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
    CHECK(fnv1a64("foobar") == 0x85944171f73967e8ull);
}

TEST_CASE("exp1_from_bits against libm") {
    const StreamKey k = stream_key(Seed{7, "libm", 0});
    double worst = 0;
    for (std::uint32_t i = 0; i < 200000; ++i) {
        const std::uint64_t x = draw_u64(k, i, 0);
        const double ref = -std::log1p(-unit_from_bits(x));
        const double got = exp1_from_bits(x);
        if (ref > 0) worst = std::max(worst, std::abs(got - ref) / ref);
        else CHECK(got == 0.0);
    }
    CHECK(worst < 1e-15);
    CHECK(exp1_from_bits(0) == 0.0);
    const double top = exp1_from_bits(~0ull);
    CHECK(top == doctest::Approx(53 * std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("weight field: zero set and determinism") {
    const Seed s{20240601, "w", 0};
    WeightField f(s, StartSet::point({0, 0}), Rect{{0, 0}, {4, 4}});
    CHECK(f.weight_at({0, 0}) == 0.0);
    CHECK(f.weight_at({1, 0}) > 0.0);

    WeightField g(s, AntiDiagonalLine{}, Rect{{-3, -3}, {3, 3}});
    for (int k = -5; k <= 5; ++k) CHECK(g.weight_at({-k, k}) == 0.0);

    // two query orders, and points outside the domain hint
    std::vector<Point> pts;
    for (int j = -20; j < 20; ++j)
        for (int i = -20; i < 20; ++i) pts.push_back({i * 37, j * 11});
    std::vector<double> fwd, rev;
    for (auto p : pts) fwd.push_back(f.weight_at(p));
    for (auto it = pts.rbegin(); it != pts.rend(); ++it) rev.push_back(f.weight_at(*it));
    std::reverse(rev.begin(), rev.end());
    CHECK(fwd == rev);

    WeightField f2(s, StartSet::point({0, 0}), Rect{{-100, -100}, {100, 100}});
    for (std::size_t i = 0; i < pts.size(); i += 17) CHECK(f2.weight_at(pts[i]) == fwd[i]);
}

TEST_CASE("fill_row matches weight_at bit for bit") {
    WeightField f(Seed{3, "rows", 9}, Union{{StartSet::point({2, 1}), AntiDiagonalHalfLine{}}}, Rect{{0, 0}, {1, 1}});
    std::vector<double> row(301);
    int bad = 0;
    for (i64 j = -7; j <= 7; ++j) {
        f.fill_row(j, -150, row);
        for (i64 t = 0; t < 301; ++t) bad += row[std::size_t(t)] != f.weight_at({-150 + t, j});
    }
    CHECK(bad == 0);
    // odd lengths exercise the tail
    for (std::size_t len : {1u, 3u, 7u, 9u, 17u}) {
        std::vector<double> r(len);
        f.fill_row(4, -3, r);
        for (std::size_t t = 0; t < len; ++t) CHECK(r[t] == f.weight_at({-3 + i64(t), 4}));
    }
}

TEST_CASE("one-cell field over 1e5 replicas has mean 1") {
    const int N = 100000;
    double sum = 0;
    for (int r = 0; r < N; ++r) sum += WeightField(Seed{11, "cell", std::uint64_t(r)}, StartSet::empty(), Rect{{0, 0}, {0, 0}}).weight_at({0, 0});
    CHECK(std::abs(sum / N - 1) < 0.02);
}

TEST_CASE("fixed point over 1e5 root seeds is exp(1)") {
    const int N = 100000;
    std::vector<double> a(N), b(N);
    for (int r = 0; r < N; ++r) {
        WeightField f(Seed{std::uint64_t(r), "roots", 0}, StartSet::empty(), Rect{{0, 0}, {1, 1}});
        a[std::size_t(r)] = f.weight_at({5, -2});
        b[std::size_t(r)] = f.weight_at({6, -2});
    }
    const double ks = ks_distance(Ecdf(a), [](double x) { return x <= 0 ? 0.0 : 1 - std::exp(-x); });
    CHECK(ks < 0.01);

    double ma = 0, mb = 0;
    for (int r = 0; r < N; ++r) ma += a[std::size_t(r)], mb += b[std::size_t(r)];
    ma /= N;
    mb /= N;
    double sab = 0, saa = 0, sbb = 0;
    for (int r = 0; r < N; ++r) {
        const double da = a[std::size_t(r)] - ma, db = b[std::size_t(r)] - mb;
        sab += da * db, saa += da * da, sbb += db * db;
    }
    CHECK(std::abs(sab / std::sqrt(saa * sbb)) < 0.01);
    double var = saa / (N - 1);
    CHECK(std::abs(var - 1) < 0.03);
}

TEST_CASE("replica streams are pairwise uncorrelated") {
    const int N = 100000;
    // N matched cells of replica 0 and replica 1
    WeightField f0(Seed{5, "pair", 0}, StartSet::empty(), Rect{{0, 0}, {1, 1}});
    WeightField f1(Seed{5, "pair", 1}, StartSet::empty(), Rect{{0, 0}, {1, 1}});
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    for (int i = 0; i < N; ++i) {
        const Point p{i % 400, i / 400};
        const double x = f0.weight_at(p), y = f1.weight_at(p);
        sx += x, sy += y, sxx += x * x, syy += y * y, sxy += x * y;
    }
    const double cov = sxy / N - sx / N * sy / N;
    const double rho = cov / std::sqrt((sxx / N - sx * sx / N / N) * (syy / N - sy * sy / N / N));
    CHECK(std::abs(rho) < 3 / std::sqrt(double(N)));
}

TEST_CASE("stream keys separate domains, ids and replicas") {
    const Seed s{1, "x", 0};
    const auto w = stream_key(s, StreamDomain::Weights), t = stream_key(s, StreamDomain::Tasep),
               b = stream_key(s, StreamDomain::Bootstrap);
    auto same = [](StreamKey a, StreamKey c) { return a.k0 == c.k0 && a.k1 == c.k1 && a.c2 == c.c2 && a.c3 == c.c3; };
    CHECK_FALSE(same(w, t));
    CHECK_FALSE(same(w, b));
    CHECK_FALSE(same(t, b));
    CHECK_FALSE(same(w, stream_key(Seed{1, "y", 0})));
    CHECK_FALSE(same(w, stream_key(Seed{2, "x", 0})));
    const auto r1 = stream_key(Seed{1, "x", 0x100000002ull});
    CHECK(r1.c2 == 2u);
    CHECK(r1.c3 == 1u);
}

TEST_CASE("fixed weights") {
    FixedWeights w(Rect{{0, 0}, {1, 1}}, {1, 3, 2, 4});
    CHECK(w.weight_at({1, 0}) == 3);
    CHECK(w.weight_at({0, 1}) == 2);
    CHECK(w.weight_at({5, 5}) == 0);
    w.set({1, 1}, 9);
    CHECK(w.weight_at({1, 1}) == 9);
    std::vector<double> r(4);
    w.fill_row(1, -1, r);
    CHECK(r == std::vector<double>{0, 2, 9, 0});
}
