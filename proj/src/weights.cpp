#include "lpplab/weights.hpp"

#include <bit>

#include "lpplab/errors.hpp"

namespace lpplab {

namespace {

constexpr std::uint32_t kM0 = 0xD2511F53u;
constexpr std::uint32_t kM1 = 0xCD9E8D57u;
constexpr std::uint32_t kW0 = 0x9E3779B9u;
constexpr std::uint32_t kW1 = 0xBB67AE85u;

#define LPPLAB_PHILOX_ROUND                                                      \
    {                                                                            \
        std::uint64_t p0 = std::uint64_t(kM0) * c0;                              \
        std::uint64_t p1 = std::uint64_t(kM1) * c2;                              \
        std::uint32_t n0 = std::uint32_t(p1 >> 32) ^ c1 ^ k0;                    \
        std::uint32_t n1 = std::uint32_t(p1);                                    \
        std::uint32_t n2 = std::uint32_t(p0 >> 32) ^ c3 ^ k1;                    \
        std::uint32_t n3 = std::uint32_t(p0);                                    \
        c0 = n0; c1 = n1; c2 = n2; c3 = n3;                                      \
        k0 += kW0; k1 += kW1;                                                    \
    }

// Ten rounds written out: the vectorizer gives up on the rolled loop.
#define LPPLAB_PHILOX_10                                                         \
    LPPLAB_PHILOX_ROUND LPPLAB_PHILOX_ROUND LPPLAB_PHILOX_ROUND                  \
    LPPLAB_PHILOX_ROUND LPPLAB_PHILOX_ROUND LPPLAB_PHILOX_ROUND                  \
    LPPLAB_PHILOX_ROUND LPPLAB_PHILOX_ROUND LPPLAB_PHILOX_ROUND                  \
    LPPLAB_PHILOX_ROUND

// ln(y) for y in (0, 1]: y = 2^e m with m in [sqrt(2)/2, sqrt(2)),
// ln m = 2 atanh(s), s = (m-1)/(m+1), series to s^21.
#pragma omp declare simd
inline double neg_log_unit(double y) {
    std::uint64_t b = std::bit_cast<std::uint64_t>(y);
    std::uint64_t mant = b & 0x000fffffffffffffULL;
    std::uint64_t hi = mant > 0x6A09E667F3BCCULL;
    std::int64_t e = std::int64_t(b >> 52) - 1023 + std::int64_t(hi);
    double m = std::bit_cast<double>(mant | (0x3ff0000000000000ULL - (hi << 52)));
    double f = m - 1.0;
    double s = f / (2.0 + f);
    double z = s * s;
    double p = 1.0 / 21;
    p = p * z + 1.0 / 19;
    p = p * z + 1.0 / 17;
    p = p * z + 1.0 / 15;
    p = p * z + 1.0 / 13;
    p = p * z + 1.0 / 11;
    p = p * z + 1.0 / 9;
    p = p * z + 1.0 / 7;
    p = p * z + 1.0 / 5;
    p = p * z + 1.0 / 3;
    double lm = 2.0 * s + 2.0 * s * z * p;
    double de = double(e);
    // 0.0 - x keeps the result +0.0 at y = 1
    return 0.0 - (de * 6.93147180369123816490e-01 + (lm + de * 1.90821492927058770002e-10));
}

inline double one_minus_unit(std::uint64_t x) {
    std::uint64_t k = x >> 11;
    return double(std::int64_t((1ULL << 53) - k)) * 0x1.0p-53;
}

}  // namespace

std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t splitmix64_mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

StreamKey stream_key(const Seed& seed, StreamDomain domain) {
    std::uint64_t label = fnv1a64(seed.experiment) ^ (std::uint64_t(domain) * 0x9e3779b97f4a7c15ULL);
    std::uint64_t k = splitmix64_mix(seed.root ^ splitmix64_mix(label));
    return {std::uint32_t(k), std::uint32_t(k >> 32), std::uint32_t(seed.replica),
            std::uint32_t(seed.replica >> 32)};
}

Philox4x32 philox4x32_10(Philox4x32 ctr, std::array<std::uint32_t, 2> key) {
    std::uint32_t c0 = ctr[0], c1 = ctr[1], c2 = ctr[2], c3 = ctr[3];
    std::uint32_t k0 = key[0], k1 = key[1];
    LPPLAB_PHILOX_10
    return {c0, c1, c2, c3};
}

std::uint64_t draw_u64(const StreamKey& key, std::uint32_t c0, std::uint32_t c1) {
    auto o = philox4x32_10({c0, c1, key.c2, key.c3}, {key.k0, key.k1});
    return (std::uint64_t(o[0]) << 32) | o[1];
}

double exp1_from_bits(std::uint64_t x) { return neg_log_unit(one_minus_unit(x)); }

WeightField::WeightField(Seed seed, StartSet zero_set, Rect domain)
    : seed_(std::move(seed)), zero_(std::move(zero_set)), domain_(domain), key_(stream_key(seed_)) {
    if (domain_.empty()) throw DomainError("weight field domain is empty");
}

double WeightField::weight_at(Point p) const {
    if (zero_.contains(p)) return 0.0;
    return exp1_from_bits(draw_u64(key_, std::uint32_t(p.x), std::uint32_t(p.y)));
}

void WeightField::fill_row(i64 j, i64 i0, std::span<double> out) const {
    const std::uint32_t cj = std::uint32_t(j);
    const std::uint32_t ci = std::uint32_t(i0);
    const StreamKey key = key_;
    double* __restrict o = out.data();
    const std::size_t n = out.size();
#pragma omp simd
    for (std::size_t t = 0; t < n; ++t) {
        std::uint32_t c0 = ci + std::uint32_t(t), c1 = cj, c2 = key.c2, c3 = key.c3;
        std::uint32_t k0 = key.k0, k1 = key.k1;
        LPPLAB_PHILOX_10
        std::uint64_t x = (std::uint64_t(c0) << 32) | c1;
        o[t] = neg_log_unit(one_minus_unit(x));
    }
    if (n == 0) return;
    std::vector<i64> cols;
    zero_.row_members(j, i0, i0 + i64(n) - 1, cols);
    for (i64 c : cols) o[c - i0] = 0.0;
}

WeightField make_weight_field(Seed seed, StartSet zero_set, Rect domain) {
    return WeightField(std::move(seed), std::move(zero_set), domain);
}

double weight_at(const WeightField& field, Point p) { return field.weight_at(p); }

FixedWeights::FixedWeights(Rect box, std::vector<double> row_major) : box_(box), w_(std::move(row_major)) {
    if (box_.empty() || i64(w_.size()) != box_.width() * box_.height())
        throw DomainError("fixed weights: size does not match box");
}

FixedWeights FixedWeights::from_field(const WeightField& field, Rect box) {
    std::vector<double> w(std::size_t(box.width() * box.height()));
    for (i64 j = box.lo.y; j <= box.hi.y; ++j)
        field.fill_row(j, box.lo.x,
                       std::span<double>(w.data() + (j - box.lo.y) * box.width(), std::size_t(box.width())));
    return FixedWeights(box, std::move(w));
}

double FixedWeights::weight_at(Point p) const {
    if (!box_.contains(p)) return 0.0;
    return w_[std::size_t((p.y - box_.lo.y) * box_.width() + (p.x - box_.lo.x))];
}

void FixedWeights::fill_row(i64 j, i64 i0, std::span<double> out) const {
    for (std::size_t t = 0; t < out.size(); ++t) out[t] = weight_at({i0 + i64(t), j});
}

void FixedWeights::set(Point p, double w) {
    if (!box_.contains(p)) throw OutOfRange("fixed weights: point outside box");
    w_[std::size_t((p.y - box_.lo.y) * box_.width() + (p.x - box_.lo.x))] = w;
}

}  // namespace lpplab
