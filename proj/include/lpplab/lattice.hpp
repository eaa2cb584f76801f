#pragma once

#include <cmath>
#include <cstdint>
#include <compare>
#include <ostream>

namespace lpplab {

using i64 = std::int64_t;

struct Point {
    i64 x = 0;
    i64 y = 0;

    friend constexpr auto operator<=>(const Point&, const Point&) = default;
    friend constexpr Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
    friend constexpr Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
    friend std::ostream& operator<<(std::ostream& os, Point p) {
        return os << '(' << p.x << ',' << p.y << ')';
    }
};

// Orders points row by row, which is the order DP sweeps visit them.
struct RowMajorLess {
    constexpr bool operator()(Point a, Point b) const {
        return a.y != b.y ? a.y < b.y : a.x < b.x;
    }
};

struct Rect {
    Point lo;
    Point hi;  // inclusive

    constexpr bool empty() const { return hi.x < lo.x || hi.y < lo.y; }
    constexpr bool contains(Point p) const {
        return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y;
    }
    constexpr i64 width() const { return hi.x - lo.x + 1; }
    constexpr i64 height() const { return hi.y - lo.y + 1; }
};

// Floor of a real coordinate; all lattice constructors go through here.
i64 ifloor(double v);

// t^{1/3} and t^{2/3} through cbrt, so that perfect cubes floor cleanly.
inline double pow13(double t) { return std::cbrt(t); }
inline double pow23(double t) {
    const double c = std::cbrt(t);
    return c * c;
}

// Floor division for signed integers.
constexpr i64 floor_div(i64 a, i64 b) {
    i64 q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

}  // namespace lpplab
