#include "lpplab/start_set.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lpplab/errors.hpp"

namespace lpplab {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void normalize(std::vector<Point>& pts) {
    std::sort(pts.begin(), pts.end(), RowMajorLess{});
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
}

bool in_range(IndexRange r, i64 n) {
    switch (r) {
        case IndexRange::NonPositive: return n <= 0;
        case IndexRange::Positive: return n >= 1;
        case IndexRange::All: return true;
    }
    return false;
}

constexpr i64 kNoBound = std::numeric_limits<i64>::min() / 4;

// Points of a one-parameter family k -> (x(k), k) with x nonincreasing in k,
// restricted to k in [kmin, kmax] and x(k) <= m.
template <class X>
void monotone_family(X x, i64 kmin, i64 kmax, i64 m, std::vector<Point>& out) {
    if (kmax < kmin) return;
    if (x(kmax) > m) return;
    // smallest k in [kmin, kmax] with x(k) <= m
    i64 hi = kmax;  // x(hi) <= m
    i64 lo;         // x(lo) > m, or lo = kmin - 1
    i64 step = 1;
    for (;;) {
        i64 cand = hi - step;
        if (kmin != kNoBound && cand < kmin) {
            lo = kmin - 1;
            break;
        }
        if (x(cand) > m) {
            lo = cand;
            break;
        }
        hi = cand;
        step *= 2;
    }
    while (hi - lo > 1) {
        i64 mid = lo + (hi - lo) / 2;
        if (x(mid) <= m) hi = mid; else lo = mid;
    }
    for (i64 k = hi; k <= kmax; ++k) out.push_back({x(k), k});
}

}  // namespace

i64 ifloor(double v) { return static_cast<i64>(std::floor(v)); }

i64 staircase_column(const Rational& rho, i64 n) {
    return n - floor_div(n * rho.den, rho.num);
}

StartSet::StartSet(FinitePoints f) {
    normalize(f.pts);
    v_ = std::move(f);
}

StartSet::StartSet(Staircase s) : v_(s) {
    if (s.rho.num <= 0 || s.rho.den <= 0 || s.rho.num >= s.rho.den)
        throw DomainError("staircase needs 0 < rho < 1");
}

StartSet::StartSet(Union u) : v_(std::move(u)) {}

StartSet StartSet::join(StartSet a, StartSet b) {
    Union u;
    u.parts.push_back(std::move(a));
    u.parts.push_back(std::move(b));
    return StartSet(std::move(u));
}

bool StartSet::contains(Point p) const {
    return std::visit(
        overloaded{
            [&](const SinglePoint& s) { return s.p == p; },
            [&](const FinitePoints& f) {
                return std::binary_search(f.pts.begin(), f.pts.end(), p, RowMajorLess{});
            },
            [&](const AntiDiagonalLine&) { return p.x + p.y == 0; },
            [&](const AntiDiagonalHalfLine&) { return p.x + p.y == 0 && p.y >= 0; },
            [&](const Staircase& s) {
                return in_range(s.range, p.y) && p.x == staircase_column(s.rho, p.y);
            },
            [&](const Union& u) {
                return std::any_of(u.parts.begin(), u.parts.end(),
                                   [&](const StartSet& s) { return s.contains(p); });
            },
        },
        v_);
}

bool StartSet::is_finite() const {
    return std::visit(
        overloaded{
            [](const SinglePoint&) { return true; },
            [](const FinitePoints&) { return true; },
            [](const AntiDiagonalLine&) { return false; },
            [](const AntiDiagonalHalfLine&) { return false; },
            [](const Staircase&) { return false; },
            [](const Union& u) {
                return std::all_of(u.parts.begin(), u.parts.end(),
                                   [](const StartSet& s) { return s.is_finite(); });
            },
        },
        v_);
}

void StartSet::row_members(i64 j, i64 i0, i64 i1, std::vector<i64>& out) const {
    auto take = [&](i64 i) {
        if (i >= i0 && i <= i1) out.push_back(i);
    };
    std::visit(overloaded{
                   [&](const SinglePoint& s) {
                       if (s.p.y == j) take(s.p.x);
                   },
                   [&](const FinitePoints& f) {
                       auto it = std::lower_bound(f.pts.begin(), f.pts.end(), Point{i0, j},
                                                  RowMajorLess{});
                       for (; it != f.pts.end() && it->y == j && it->x <= i1; ++it)
                           out.push_back(it->x);
                   },
                   [&](const AntiDiagonalLine&) { take(-j); },
                   [&](const AntiDiagonalHalfLine&) {
                       if (j >= 0) take(-j);
                   },
                   [&](const Staircase& s) {
                       if (in_range(s.range, j)) take(staircase_column(s.rho, j));
                   },
                   [&](const Union& u) {
                       for (const auto& s : u.parts) s.row_members(j, i0, i1, out);
                   },
               },
               v_);
}

FinitePoints StartSet::truncate(Point end) const {
    const i64 m = end.x;
    const i64 n = end.y;
    FinitePoints res;
    auto& out = res.pts;
    std::visit(
        overloaded{
            [&](const SinglePoint& s) {
                if (s.p.x <= m && s.p.y <= n) out.push_back(s.p);
            },
            [&](const FinitePoints& f) {
                for (const auto& p : f.pts)
                    if (p.x <= m && p.y <= n) out.push_back(p);
            },
            [&](const AntiDiagonalLine&) {
                for (i64 k = -m; k <= n; ++k) out.push_back({-k, k});
            },
            [&](const AntiDiagonalHalfLine&) {
                for (i64 k = std::max<i64>(0, -m); k <= n; ++k) out.push_back({-k, k});
            },
            [&](const Staircase& s) {
                i64 kmin = s.range == IndexRange::Positive ? 1 : kNoBound;
                i64 kmax = s.range == IndexRange::NonPositive ? std::min<i64>(0, n) : n;
                monotone_family([&](i64 k) { return staircase_column(s.rho, k); }, kmin,
                                kmax, m, out);
            },
            [&](const Union& u) {
                for (const auto& s : u.parts) {
                    auto part = s.truncate(end);
                    out.insert(out.end(), part.pts.begin(), part.pts.end());
                }
            },
        },
        v_);
    normalize(out);
    return res;
}

FinitePoints truncate(const StartSet& start, Point end) { return start.truncate(end); }

}  // namespace lpplab
