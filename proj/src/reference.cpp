#include "lpplab/reference.hpp"

#include <algorithm>

namespace lpplab::reference {

template <class W>
LppResult last_passage(const W& weights, const StartSet& start, Point end, bool want_path,
                       const ForbiddenRegion* forbidden) {
    FinitePoints trunc = start.truncate(end);
    if (trunc.pts.empty()) throw NoAdmissiblePath();
    Rect box{trunc.pts.front(), end};
    for (auto p : trunc.pts) {
        box.lo.x = std::min(box.lo.x, p.x);
        box.lo.y = std::min(box.lo.y, p.y);
    }
    const i64 W_ = box.width();
    std::vector<double> g(std::size_t(W_ * box.height()), kNegInf);
    auto at = [&](i64 i, i64 j) -> double {
        if (i < box.lo.x || j < box.lo.y) return kNegInf;
        return g[std::size_t((j - box.lo.y) * W_ + (i - box.lo.x))];
    };
    auto is_seed = [&](Point p) {
        return std::binary_search(trunc.pts.begin(), trunc.pts.end(), p, RowMajorLess{});
    };
    for (i64 j = box.lo.y; j <= end.y; ++j) {
        for (i64 i = box.lo.x; i <= end.x; ++i) {
            const Point p{i, j};
            double& cell = g[std::size_t((j - box.lo.y) * W_ + (i - box.lo.x))];
            if (forbidden && forbidden->contains(p)) {
                cell = kNegInf;
                continue;
            }
            double m = std::max(at(i - 1, j), at(i, j - 1));
            if (is_seed(p) && m < 0.0) m = 0.0;
            cell = m == kNegInf ? kNegInf : weights.weight_at(p) + m;
        }
    }
    LppResult res;
    res.value = at(end.x, end.y);
    if (res.value == kNegInf) throw NoAdmissiblePath();
    Path path;
    Point cur = end;
    for (;;) {
        path.push_back(cur);
        const double left = at(cur.x - 1, cur.y), up = at(cur.x, cur.y - 1);
        double m = std::max(left, up);
        if (is_seed(cur) && m < 0.0) m = 0.0;
        if (left == m && left != kNegInf)
            --cur.x;
        else if (up == m && up != kNegInf)
            --cur.y;
        else
            break;
    }
    std::reverse(path.begin(), path.end());
    res.start_point = path.front();
    if (want_path) res.path = std::move(path);
    return res;
}

template LppResult last_passage<WeightField>(const WeightField&, const StartSet&, Point, bool,
                                             const ForbiddenRegion*);
template LppResult last_passage<FixedWeights>(const FixedWeights&, const StartSet&, Point, bool,
                                              const ForbiddenRegion*);

}  // namespace lpplab::reference
