#pragma once

#include <variant>
#include <vector>

#include "lpplab/lattice.hpp"

namespace lpplab {

// rho = num/den, kept exact so that floor(n/rho) needs no floating point.
struct Rational {
    i64 num = 1;
    i64 den = 2;
    double value() const { return double(num) / double(den); }
};

enum class IndexRange { NonPositive, Positive, All };

struct SinglePoint {
    Point p;
};

// Sorted row-major, no duplicates.
struct FinitePoints {
    std::vector<Point> pts;
};

// {(-k, k) : k in Z}
struct AntiDiagonalLine {};

// {(-k, k) : k >= 0}
struct AntiDiagonalHalfLine {};

// {(n - floor(n/rho), n) : n in range}
struct Staircase {
    Rational rho;
    IndexRange range = IndexRange::All;
};

class StartSet;

struct Union {
    std::vector<StartSet> parts;
};

class StartSet {
public:
    using Variant = std::variant<SinglePoint, FinitePoints, AntiDiagonalLine,
                                 AntiDiagonalHalfLine, Staircase, Union>;

    StartSet() : v_(FinitePoints{}) {}
    StartSet(SinglePoint s) : v_(s) {}
    StartSet(FinitePoints f);
    StartSet(AntiDiagonalLine l) : v_(l) {}
    StartSet(AntiDiagonalHalfLine l) : v_(l) {}
    StartSet(Staircase s);
    StartSet(Union u);

    static StartSet point(Point p) { return SinglePoint{p}; }
    static StartSet points(std::vector<Point> pts) { return FinitePoints{std::move(pts)}; }
    static StartSet empty() { return FinitePoints{}; }
    static StartSet join(StartSet a, StartSet b);

    const Variant& variant() const { return v_; }

    bool contains(Point p) const;
    bool is_finite() const;

    // Appends the columns of row j inside [i0, i1] that belong to the set.
    // Unions may append duplicates.
    void row_members(i64 j, i64 i0, i64 i1, std::vector<i64>& out) const;

    // Points from which an up-right path to `end` exists.
    FinitePoints truncate(Point end) const;

private:
    Variant v_;
};

FinitePoints truncate(const StartSet& start, Point end);

// Column of the staircase point with row index n.
i64 staircase_column(const Rational& rho, i64 n);

}  // namespace lpplab
