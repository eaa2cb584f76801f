#pragma once

// Straightforward serial implementations kept as the comparison baseline for
// the batched sweep and the parallel replica runner.

#include <functional>
#include <vector>

#include "lpplab/lpp.hpp"

namespace lpplab::reference {

// Full-grid DP over the bounding box of the truncated start set and `end`;
// weights fetched one cell at a time.
template <class W>
LppResult last_passage(const W& weights, const StartSet& start, Point end, bool want_path = false,
                       const ForbiddenRegion* forbidden = nullptr);

// for r in [0, n): out[r] = f(r)
template <class T>
std::vector<T> run_replicas(std::size_t n, const std::function<T(std::size_t)>& f) {
    std::vector<T> out;
    out.reserve(n);
    for (std::size_t r = 0; r < n; ++r) out.push_back(f(r));
    return out;
}

extern template LppResult last_passage<WeightField>(const WeightField&, const StartSet&, Point, bool,
                                                    const ForbiddenRegion*);
extern template LppResult last_passage<FixedWeights>(const FixedWeights&, const StartSet&, Point, bool,
                                                     const ForbiddenRegion*);

}  // namespace lpplab::reference
