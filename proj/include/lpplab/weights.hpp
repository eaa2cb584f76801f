#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lpplab/lattice.hpp"
#include "lpplab/start_set.hpp"

namespace lpplab {

struct Seed {
    std::uint64_t root = 0;
    std::string experiment;
    std::uint64_t replica = 0;
};

// Stream domains. Weight fields and TASEP clocks never share a key.
enum class StreamDomain : std::uint64_t { Weights = 0, Tasep = 1, Bootstrap = 2 };

// Philox4x32 key plus the two counter words fixed by the replica index.
struct StreamKey {
    std::uint32_t k0 = 0;
    std::uint32_t k1 = 0;
    std::uint32_t c2 = 0;
    std::uint32_t c3 = 0;
};

std::uint64_t fnv1a64(std::string_view s);
std::uint64_t splitmix64_mix(std::uint64_t z);
StreamKey stream_key(const Seed& seed, StreamDomain domain = StreamDomain::Weights);

using Philox4x32 = std::array<std::uint32_t, 4>;
Philox4x32 philox4x32_10(Philox4x32 ctr, std::array<std::uint32_t, 2> key);

// Draw with counter (c0, c1, key.c2, key.c3); words 0 and 1 packed high/low.
std::uint64_t draw_u64(const StreamKey& key, std::uint32_t c0, std::uint32_t c1);

// U = (x >> 11) * 2^-53 in [0, 1).
inline double unit_from_bits(std::uint64_t x) { return double(x >> 11) * 0x1.0p-53; }

// -ln(1 - U) for the U above; libm-free so scalar and batched paths agree bit for bit.
double exp1_from_bits(std::uint64_t x);

class WeightField {
public:
    WeightField(Seed seed, StartSet zero_set, Rect domain);

    double weight_at(Point p) const;

    // out[t] = weight_at({i0 + t, j})
    void fill_row(i64 j, i64 i0, std::span<double> out) const;

    const Seed& seed() const { return seed_; }
    const StartSet& zero_set() const { return zero_; }
    const Rect& domain() const { return domain_; }

private:
    Seed seed_;
    StartSet zero_;
    Rect domain_;
    StreamKey key_;
};

WeightField make_weight_field(Seed seed, StartSet zero_set, Rect domain);
double weight_at(const WeightField& field, Point p);

// Explicit weights on a rectangle, zero outside. Used for fixed-weight checks.
class FixedWeights {
public:
    FixedWeights(Rect box, std::vector<double> row_major);
    static FixedWeights from_field(const WeightField& field, Rect box);

    double weight_at(Point p) const;
    void fill_row(i64 j, i64 i0, std::span<double> out) const;
    void set(Point p, double w);
    const Rect& box() const { return box_; }

private:
    Rect box_;
    std::vector<double> w_;
};

}  // namespace lpplab
