#pragma once

#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "lpplab/errors.hpp"
#include "lpplab/lattice.hpp"
#include "lpplab/start_set.hpp"
#include "lpplab/weights.hpp"

namespace lpplab {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

using Path = std::vector<Point>;

struct LppResult {
    double value = kNegInf;
    std::optional<Path> path;
    std::optional<Point> start_point;
};

// Lattice points within Euclidean distance `thickness` of the segment AB.
struct ForbiddenRegion {
    Point a;
    Point b;
    i64 thickness = 2;

    bool contains(Point p) const;
    // Columns of row j inside the region as [first, second]; first > second if none.
    std::pair<i64, i64> row_interval(i64 j) const;
};

struct PathStats {
    i64 row0 = 0;                 // z[l - row0] = Z_l
    std::vector<i64> z;
    i64 col0 = 0;                 // y_top[r - col0] = Y_r^TOP
    std::vector<i64> y_top;
    double max_right = 0;         // max_l Z_l - ref(l), over t^{2/3}
    double max_up = 0;            // max_r Y_r - ref(r), over t^{2/3}
    double max_deviation = 0;     // max(max_right, max_up)
    double max_perp = 0;          // max Euclidean distance to the reference line, over t^{2/3}
};

// One DP sweep serves several channels that share the weight realization.
struct Channel {
    FinitePoints start;  // already truncated; sorted row-major
    std::optional<ForbiddenRegion> forbidden;
    std::vector<Point> ends;
    bool track_origin = false;
};

struct ChannelValues {
    std::vector<double> values;   // kNegInf when no admissible path
    std::vector<Point> origins;   // filled when track_origin
};

template <class W>
std::vector<ChannelValues> sweep(const W& weights, std::span<const Channel> channels);

template <class W>
LppResult last_passage(const W& weights, const StartSet& start, Point end, bool want_path = false);

template <class W>
LppResult restricted_last_passage(const W& weights, const StartSet& start, Point end,
                                  const ForbiddenRegion& forbidden, bool want_path = false);

template <class W>
std::vector<LppResult> multi_endpoint_last_passage(const W& weights, const StartSet& start,
                                                   std::span<const Point> ends);

PathStats path_stats(const LppResult& result, Point ref_a, Point ref_b, double t);

double local_shift_check(const WeightField& field, i64 K, double v, double gamma);

#define LPPLAB_DECLARE_DP(W)                                                                     \
    extern template std::vector<ChannelValues> sweep<W>(const W&, std::span<const Channel>);      \
    extern template LppResult last_passage<W>(const W&, const StartSet&, Point, bool);            \
    extern template LppResult restricted_last_passage<W>(const W&, const StartSet&, Point,        \
                                                         const ForbiddenRegion&, bool);           \
    extern template std::vector<LppResult> multi_endpoint_last_passage<W>(                        \
        const W&, const StartSet&, std::span<const Point>);
LPPLAB_DECLARE_DP(WeightField)
LPPLAB_DECLARE_DP(FixedWeights)
#undef LPPLAB_DECLARE_DP

}  // namespace lpplab
