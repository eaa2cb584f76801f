#pragma once

// Exhaustive path enumeration, the oracle for the DP.

#include <functional>
#include <optional>
#include <vector>

#include "lpplab/lpp.hpp"

namespace brute {

using namespace lpplab;

// Start-set members from which `end` is reachable, found by scanning a box.
inline std::vector<Point> reachable_starts(const StartSet& s, Point end, i64 reach = 24) {
    std::vector<Point> out;
    for (i64 y = end.y - reach; y <= end.y; ++y)
        for (i64 x = end.x - reach; x <= end.x; ++x)
            if (s.contains({x, y})) out.push_back({x, y});
    return out;
}

struct Best {
    double value = kNegInf;
    Path path;
    long paths = 0;
};

// Tie order of the DP backtrack: walking back from the end, a horizontal
// predecessor beats a vertical one, and both beat stopping at a start point.
inline bool backtrack_less(const Path& a, const Path& b) {
    auto ia = a.rbegin(), ib = b.rbegin();
    for (; ia != a.rend() && ib != b.rend(); ++ia, ++ib)
        if (*ia != *ib) return ia->x < ib->x;
    return ib == b.rend() && ia != a.rend();
}

template <class W>
Best best_path(const W& w, const std::vector<Point>& starts, Point end, const ForbiddenRegion* forb = nullptr) {
    Best b;
    Path cur;
    std::function<void(Point, double)> go = [&](Point p, double acc) {
        if (forb && forb->contains(p)) return;
        cur.push_back(p);
        acc += w.weight_at(p);
        if (p == end) {
            ++b.paths;
            if (acc > b.value || (acc == b.value && backtrack_less(cur, b.path))) {
                b.value = acc;
                b.path = cur;
            }
        } else {
            if (p.x < end.x) go({p.x + 1, p.y}, acc);
            if (p.y < end.y) go({p.x, p.y + 1}, acc);
        }
        cur.pop_back();
    };
    for (Point s : starts) go(s, 0.0);
    return b;
}

}  // namespace brute
