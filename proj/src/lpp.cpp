#include "lpplab/lpp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace lpplab {

namespace {

using i128 = __int128;

constexpr std::pair<i64, i64> kEmptyInterval{1, 0};

// One row of the max-plus recursion on columns [lo, hi]. Buffers are indexed
// by column - off; `v` holds the previous row on entry and this row on exit.
template <bool Track>
void row_update(double* v, Point* org, const double* wr, i64 off, i64 lo, i64 hi, i64 j,
                std::span<const Point> seeds, std::pair<i64, i64> forb) {
    const auto [flo, fhi] = forb;
    const bool has_forb = flo <= fhi;
    double left = kNegInf;
    Point oleft{};
    std::size_t s = 0;
    i64 i = lo;
    while (i <= hi) {
        while (s < seeds.size() && seeds[s].x < i) ++s;
        i64 ns = hi + 1;
        if (s < seeds.size()) ns = std::min(ns, seeds[s].x);
        if (has_forb && fhi >= i) ns = std::min(ns, std::max(flo, i));

        if constexpr (Track) {
            for (; i < ns; ++i) {
                const i64 k = i - off;
                const double up = v[k];
                const Point o = left >= up ? oleft : org[k];
                const double val = wr[k] + std::max(left, up);
                v[k] = val;
                org[k] = o;
                left = val;
                oleft = o;
            }
        } else {
            for (; i < ns; ++i) {
                const i64 k = i - off;
                const double val = wr[k] + std::max(left, v[k]);
                v[k] = val;
                left = val;
            }
        }
        if (i > hi) break;

        if (has_forb && i >= flo && i <= fhi) {
            const i64 e = std::min(fhi, hi);
            for (; i <= e; ++i) v[i - off] = kNegInf;
            left = kNegInf;
            continue;
        }

        // start-set cell
        const i64 k = i - off;
        const double up = v[k];
        double m = std::max(left, up);
        Point o{};
        if constexpr (Track) o = left >= up ? oleft : org[k];
        if (0.0 > m) {
            m = 0.0;
            o = {i, j};
        }
        const double val = wr[k] + m;
        v[k] = val;
        left = val;
        if constexpr (Track) {
            org[k] = o;
            oleft = o;
        }
        ++i;
    }
}

struct ChannelState {
    const Channel* ch = nullptr;
    i64 y0 = 0, y1 = -1, xhi = 0;
    i64 lo = std::numeric_limits<i64>::max();
    std::size_t next_start = 0;
    std::vector<double> v;
    std::vector<Point> org;
    std::vector<std::size_t> end_order;
    std::size_t next_end = 0;
};

template <class W>
LppResult full_grid_path(const W& weights, const FinitePoints& start, const ForbiddenRegion* forb,
                         Point end) {
    const auto& pts = start.pts;
    const i64 X0 = std::min_element(pts.begin(), pts.end(), [](Point a, Point b) { return a.x < b.x; })->x;
    const i64 Y0 = pts.front().y;
    const i64 width = end.x - X0 + 1;
    const i64 height = end.y - Y0 + 1;
    std::vector<double> grid(std::size_t(width * height), kNegInf);
    std::vector<double> v(std::size_t(width), kNegInf);
    std::vector<double> wr(static_cast<std::size_t>(width));
    i64 lo = std::numeric_limits<i64>::max();
    std::size_t ns = 0;
    for (i64 j = Y0; j <= end.y; ++j) {
        std::size_t s0 = ns;
        while (ns < pts.size() && pts[ns].y == j) {
            lo = std::min(lo, pts[ns].x);
            ++ns;
        }
        double* row = grid.data() + (j - Y0) * width;
        if (lo <= end.x) {
            weights.fill_row(j, lo, std::span<double>(wr.data() + (lo - X0), std::size_t(end.x - lo + 1)));
            auto fi = forb ? forb->row_interval(j) : kEmptyInterval;
            row_update<false>(v.data(), nullptr, wr.data(), X0, lo, end.x, j,
                              std::span<const Point>(pts.data() + s0, ns - s0), fi);
        }
        std::copy(v.begin(), v.end(), row);
    }
    auto at = [&](i64 i, i64 j) {
        if (i < X0 || j < Y0) return kNegInf;
        return grid[std::size_t((j - Y0) * width + (i - X0))];
    };
    LppResult res;
    res.value = at(end.x, end.y);
    if (res.value == kNegInf) throw NoAdmissiblePath();
    Path path;
    Point cur = end;
    for (;;) {
        path.push_back(cur);
        const double left = at(cur.x - 1, cur.y);
        const double up = at(cur.x, cur.y - 1);
        const bool seed = std::binary_search(pts.begin(), pts.end(), cur, RowMajorLess{}) &&
                          !(forb && forb->contains(cur));
        double m = std::max(left, up);
        if (seed && 0.0 > m) m = 0.0;
        if (left == m && left != kNegInf) {
            --cur.x;
        } else if (up == m && up != kNegInf) {
            --cur.y;
        } else {
            break;
        }
    }
    std::reverse(path.begin(), path.end());
    res.start_point = path.front();
    res.path = std::move(path);
    return res;
}

Point corner_of(std::span<const Point> ends) {
    Point c = ends.front();
    for (auto e : ends) {
        c.x = std::max(c.x, e.x);
        c.y = std::max(c.y, e.y);
    }
    return c;
}

}  // namespace

bool ForbiddenRegion::contains(Point p) const {
    const i128 dx = b.x - a.x, dy = b.y - a.y;
    const i128 wx = p.x - a.x, wy = p.y - a.y;
    const i128 r2 = i128(thickness) * thickness;
    const i128 dot = wx * dx + wy * dy;
    const i128 dd = dx * dx + dy * dy;
    if (dot <= 0 || dd == 0) return wx * wx + wy * wy <= r2;
    if (dot >= dd) {
        const i128 ux = p.x - b.x, uy = p.y - b.y;
        return ux * ux + uy * uy <= r2;
    }
    const i128 cross = wx * dy - wy * dx;
    return cross * cross <= r2 * dd;
}

std::pair<i64, i64> ForbiddenRegion::row_interval(i64 j) const {
    const i64 ymin = std::min(a.y, b.y), ymax = std::max(a.y, b.y);
    if (j < ymin - thickness || j > ymax + thickness) return kEmptyInterval;
    double xs;
    if (a.y == b.y) {
        xs = double(a.x);
    } else if (j < ymin) {
        xs = double(a.y == ymin ? a.x : b.x);
    } else if (j > ymax) {
        xs = double(a.y == ymax ? a.x : b.x);
    } else {
        xs = double(a.x) + double(j - a.y) * double(b.x - a.x) / double(b.y - a.y);
    }
    const i64 f = ifloor(xs);
    i64 c = std::numeric_limits<i64>::min();
    for (i64 cand : {f, f + 1, f - 1, f + 2})
        if (contains({cand, j})) {
            c = cand;
            break;
        }
    if (c == std::numeric_limits<i64>::min()) return kEmptyInterval;

    i64 out_lo = std::min(a.x, b.x) - thickness - 1, in_lo = c;
    while (in_lo - out_lo > 1) {
        i64 mid = out_lo + (in_lo - out_lo) / 2;
        if (contains({mid, j})) in_lo = mid; else out_lo = mid;
    }
    i64 in_hi = c, out_hi = std::max(a.x, b.x) + thickness + 1;
    while (out_hi - in_hi > 1) {
        i64 mid = in_hi + (out_hi - in_hi) / 2;
        if (contains({mid, j})) in_hi = mid; else out_hi = mid;
    }
    return {in_lo, in_hi};
}

template <class W>
std::vector<ChannelValues> sweep(const W& weights, std::span<const Channel> channels) {
    std::vector<ChannelValues> out(channels.size());
    std::vector<ChannelState> st;
    i64 X0 = std::numeric_limits<i64>::max(), X1 = std::numeric_limits<i64>::min();
    i64 Y0 = std::numeric_limits<i64>::max(), Y1 = std::numeric_limits<i64>::min();
    for (std::size_t c = 0; c < channels.size(); ++c) {
        const Channel& ch = channels[c];
        out[c].values.assign(ch.ends.size(), kNegInf);
        if (ch.track_origin) out[c].origins.assign(ch.ends.size(), Point{});
        if (ch.start.pts.empty() || ch.ends.empty()) continue;
        ChannelState s;
        s.ch = &ch;
        s.y0 = ch.start.pts.front().y;
        Point corner = corner_of(ch.ends);
        s.y1 = corner.y;
        s.xhi = corner.x;
        if (s.y1 < s.y0) continue;
        i64 xmin = ch.start.pts.front().x;
        for (auto p : ch.start.pts) xmin = std::min(xmin, p.x);
        if (xmin > s.xhi) continue;
        s.end_order.resize(ch.ends.size());
        for (std::size_t e = 0; e < ch.ends.size(); ++e) s.end_order[e] = e;
        std::stable_sort(s.end_order.begin(), s.end_order.end(),
                         [&](std::size_t p, std::size_t q) { return ch.ends[p].y < ch.ends[q].y; });
        while (s.next_end < s.end_order.size() && ch.ends[s.end_order[s.next_end]].y < s.y0) ++s.next_end;
        X0 = std::min(X0, xmin);
        X1 = std::max(X1, s.xhi);
        Y0 = std::min(Y0, s.y0);
        Y1 = std::max(Y1, s.y1);
        st.push_back(std::move(s));
    }
    if (st.empty()) return out;
    const std::size_t width = std::size_t(X1 - X0 + 1);
    for (auto& s : st) {
        s.v.assign(width, kNegInf);
        if (s.ch->track_origin) s.org.assign(width, Point{});
    }
    std::vector<double> wr(width);
    std::vector<std::pair<std::size_t, std::size_t>> seed_range(st.size());

    for (i64 j = Y0; j <= Y1; ++j) {
        i64 ulo = std::numeric_limits<i64>::max(), uhi = std::numeric_limits<i64>::min();
        for (std::size_t c = 0; c < st.size(); ++c) {
            auto& s = st[c];
            if (j < s.y0 || j > s.y1) continue;
            const auto& pts = s.ch->start.pts;
            std::size_t s0 = s.next_start;
            while (s.next_start < pts.size() && pts[s.next_start].y == j) {
                s.lo = std::min(s.lo, pts[s.next_start].x);
                ++s.next_start;
            }
            seed_range[c] = {s0, s.next_start};
            if (s.lo > s.xhi) continue;
            ulo = std::min(ulo, s.lo);
            uhi = std::max(uhi, s.xhi);
        }
        const bool any = ulo <= uhi;
        if (any)
            weights.fill_row(j, ulo, std::span<double>(wr.data() + (ulo - X0), std::size_t(uhi - ulo + 1)));
        for (std::size_t c = 0; c < st.size(); ++c) {
            auto& s = st[c];
            if (j < s.y0 || j > s.y1) continue;
            const Channel& ch = *s.ch;
            if (any && s.lo <= s.xhi) {
                auto seeds = std::span<const Point>(ch.start.pts.data() + seed_range[c].first,
                                                    seed_range[c].second - seed_range[c].first);
                auto fi = ch.forbidden ? ch.forbidden->row_interval(j) : kEmptyInterval;
                if (ch.track_origin)
                    row_update<true>(s.v.data(), s.org.data(), wr.data(), X0, s.lo, s.xhi, j, seeds, fi);
                else
                    row_update<false>(s.v.data(), nullptr, wr.data(), X0, s.lo, s.xhi, j, seeds, fi);
            }
            while (s.next_end < s.end_order.size() && ch.ends[s.end_order[s.next_end]].y == j) {
                const std::size_t e = s.end_order[s.next_end++];
                const i64 x = ch.ends[e].x;
                if (x < s.lo) continue;
                out[c].values[e] = s.v[std::size_t(x - X0)];
                if (ch.track_origin) out[c].origins[e] = s.org[std::size_t(x - X0)];
            }
        }
    }
    return out;
}

template <class W>
LppResult last_passage(const W& weights, const StartSet& start, Point end, bool want_path) {
    FinitePoints trunc = start.truncate(end);
    if (trunc.pts.empty()) throw NoAdmissiblePath();
    if (want_path) return full_grid_path(weights, trunc, nullptr, end);
    Channel ch{std::move(trunc), std::nullopt, {end}, true};
    auto r = sweep(weights, std::span<const Channel>(&ch, 1));
    LppResult res;
    res.value = r[0].values[0];
    if (res.value == kNegInf) throw NoAdmissiblePath();
    res.start_point = r[0].origins[0];
    return res;
}

template <class W>
LppResult restricted_last_passage(const W& weights, const StartSet& start, Point end,
                                  const ForbiddenRegion& forbidden, bool want_path) {
    FinitePoints trunc = start.truncate(end);
    if (trunc.pts.empty()) throw NoAdmissiblePath();
    if (want_path) return full_grid_path(weights, trunc, &forbidden, end);
    Channel ch{std::move(trunc), forbidden, {end}, true};
    auto r = sweep(weights, std::span<const Channel>(&ch, 1));
    LppResult res;
    res.value = r[0].values[0];
    if (res.value == kNegInf) throw NoAdmissiblePath();
    res.start_point = r[0].origins[0];
    return res;
}

template <class W>
std::vector<LppResult> multi_endpoint_last_passage(const W& weights, const StartSet& start,
                                                   std::span<const Point> ends) {
    if (ends.empty()) return {};
    Channel ch{start.truncate(corner_of(ends)), std::nullopt, {ends.begin(), ends.end()}, true};
    auto r = sweep(weights, std::span<const Channel>(&ch, 1));
    std::vector<LppResult> res(ends.size());
    for (std::size_t e = 0; e < ends.size(); ++e) {
        if (r[0].values[e] == kNegInf)
            throw NoAdmissiblePath("no admissible up-right path to end point #" + std::to_string(e));
        res[e].value = r[0].values[e];
        res[e].start_point = r[0].origins[e];
    }
    return res;
}

PathStats path_stats(const LppResult& result, Point ref_a, Point ref_b, double t) {
    if (!result.path || result.path->empty()) throw MissingPath();
    if (ref_a.x == ref_b.x || ref_a.y == ref_b.y)
        throw DomainError("path_stats: reference line must be neither horizontal nor vertical");
    const Path& p = *result.path;
    PathStats st;
    st.row0 = p.front().y;
    st.col0 = p.front().x;
    st.z.assign(std::size_t(p.back().y - st.row0 + 1), std::numeric_limits<i64>::min());
    st.y_top.assign(std::size_t(p.back().x - st.col0 + 1), std::numeric_limits<i64>::min());
    for (auto q : p) {
        auto& z = st.z[std::size_t(q.y - st.row0)];
        z = std::max(z, q.x);
        auto& y = st.y_top[std::size_t(q.x - st.col0)];
        y = std::max(y, q.y);
    }
    const double dx = double(ref_b.x - ref_a.x), dy = double(ref_b.y - ref_a.y);
    const double unit = std::pow(t, 2.0 / 3.0);
    double right = -std::numeric_limits<double>::infinity();
    for (std::size_t l = 0; l < st.z.size(); ++l) {
        const double row = double(st.row0 + i64(l));
        const double ref = double(ref_a.x) + (row - double(ref_a.y)) * dx / dy;
        right = std::max(right, double(st.z[l]) - ref);
    }
    double up = -std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < st.y_top.size(); ++r) {
        const double col = double(st.col0 + i64(r));
        const double ref = double(ref_a.y) + (col - double(ref_a.x)) * dy / dx;
        up = std::max(up, double(st.y_top[r]) - ref);
    }
    const double norm = std::hypot(dx, dy);
    double perp = 0;
    for (auto q : p) {
        const double cross = (double(q.x - ref_a.x) * dy - double(q.y - ref_a.y) * dx) / norm;
        perp = std::max(perp, std::abs(cross));
    }
    st.max_right = right / unit;
    st.max_up = up / unit;
    st.max_deviation = std::max(st.max_right, st.max_up);
    st.max_perp = perp / unit;
    return st;
}

double local_shift_check(const WeightField& field, i64 K, double v, double gamma) {
    if (K < 1 || gamma < 0 || gamma > 1.0 / 3.0) throw DomainError("local_shift_check: need K >= 1, gamma in [0,1/3]");
    const double kg = std::pow(double(K), gamma);
    const Point base{K, K};
    const Point shifted{K + ifloor(kg * v), K};
    const Point ends[2] = {base, shifted};
    auto r = multi_endpoint_last_passage(field, StartSet::point({0, 0}), std::span<const Point>(ends, 2));
    return (r[1].value - r[0].value - 2.0 * v * kg) / std::cbrt(double(K));
}

#define LPPLAB_INSTANTIATE_DP(W)                                                                 \
    template std::vector<ChannelValues> sweep<W>(const W&, std::span<const Channel>);             \
    template LppResult last_passage<W>(const W&, const StartSet&, Point, bool);                   \
    template LppResult restricted_last_passage<W>(const W&, const StartSet&, Point,               \
                                                  const ForbiddenRegion&, bool);                  \
    template std::vector<LppResult> multi_endpoint_last_passage<W>(const W&, const StartSet&,     \
                                                                   std::span<const Point>);
LPPLAB_INSTANTIATE_DP(WeightField)
LPPLAB_INSTANTIATE_DP(FixedWeights)

}  // namespace lpplab
