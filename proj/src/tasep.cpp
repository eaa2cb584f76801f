#include "lpplab/tasep.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>

#include "lpplab/errors.hpp"

namespace lpplab {

namespace {

i64 floor_over(i64 n, double rho) {
    if (auto q = exact_rational(rho)) return floor_div(n * q->den, q->num);
    return ifloor(double(n) / rho);
}

i64 gap_of(const TasepInit& in) {
    switch (in.kind) {
        case InitKind::StepA: return ifloor(in.params.a * pow23(in.T));
        case InitKind::ShockBeta: return ifloor(in.params.beta * in.T);
        default: return 0;
    }
}

void validate(InitKind kind, const TasepParams& p, double T) {
    if (!(T >= 0)) throw DomainError("tasep: T must be >= 0");
    switch (kind) {
        case InitKind::StepA:
            if (!(p.a >= 0)) throw DomainError("tasep: StepA needs a >= 0");
            break;
        case InitKind::ShockBeta:
            if (!(p.beta > 0 && p.beta < 1)) throw DomainError("tasep: ShockBeta needs beta in (0,1)");
            break;
        case InitKind::Flat:
            if (!(p.rho > 0 && p.rho < 1)) throw DomainError("tasep: Flat needs rho in (0,1)");
            break;
        case InitKind::TwoDensity:
            if (!(p.rho2 > 0 && p.rho1 > p.rho2 && p.rho1 < 1))
                throw DomainError("tasep: TwoDensity needs 1 > rho1 > rho2 > 0");
            break;
    }
}

}  // namespace

std::optional<Rational> exact_rational(double rho) {
    for (i64 den = 1; den <= 10000; ++den) {
        const double num = std::round(rho * double(den));
        if (num / double(den) == rho) return Rational{i64(num), den};
    }
    return std::nullopt;
}

i64 buffer_sites(double T) { return i64(std::ceil(4.0 * T + 10.0 * std::sqrt(T))); }

std::optional<i64> TasepInit::lowest_label() const {
    switch (kind) {
        case InitKind::StepA:
        case InitKind::ShockBeta: return -gap_of(*this);
        default: return std::nullopt;
    }
}

i64 TasepInit::position(i64 n) const {
    switch (kind) {
        case InitKind::StepA:
        case InitKind::ShockBeta: return n <= 0 ? -n : -n - gap_of(*this);
        case InitKind::Flat: return -floor_over(n, params.rho);
        case InitKind::TwoDensity: return n <= 0 ? -floor_over(n, params.rho1) : -floor_over(n, params.rho2);
    }
    return 0;
}

std::pair<i64, i64> TasepState::exact_sites() const {
    if (x.empty()) return {1, 0};
    const i64 hi = bounded_cone ? cone - 1 : std::numeric_limits<i64>::max();
    return {x.back(), hi};
}

TasepInit init_config(InitKind kind, const TasepParams& params, double T, i64 obs_min, i64 obs_max) {
    validate(kind, params, T);
    if (obs_min > obs_max) throw DomainError("tasep: empty label window");
    TasepInit in;
    in.kind = kind;
    in.params = params;
    in.T = T;
    in.obs_min = obs_min;
    in.obs_max = obs_max;
    in.n_max = obs_max;
    if (auto low = in.lowest_label()) {
        if (obs_min < *low) throw DomainError("tasep: label window starts below the lowest particle");
        in.n_min = *low;
    } else {
        const i64 margin = buffer_sites(T);
        const i64 x_obs = in.position(obs_min);
        i64 n = obs_min;
        while (in.position(n) - x_obs < margin) --n;
        in.n_min = n;
        in.guard = in.position(n - 1);
    }
    in.x0.resize(std::size_t(in.n_max - in.n_min + 1));
    for (i64 n = in.n_min; n <= in.n_max; ++n) in.x0[std::size_t(n - in.n_min)] = in.position(n);
    return in;
}

TasepState simulate_tasep(const TasepInit& init, double T, const Seed& seed) {
    TasepState st;
    st.n_min = init.n_min;
    st.n_max = init.n_max;
    st.obs_min = init.obs_min;
    st.obs_max = init.obs_max;
    st.x = init.x0;
    st.bounded_cone = init.guard.has_value();
    st.cone = init.guard.value_or(std::numeric_limits<i64>::max());

    auto& x = st.x;
    const std::size_t N = x.size();
    std::vector<std::size_t> elig;
    std::vector<std::ptrdiff_t> where(N, -1);
    auto add = [&](std::size_t k) {
        where[k] = std::ptrdiff_t(elig.size());
        elig.push_back(k);
    };
    auto remove = [&](std::size_t k) {
        const std::size_t pos = std::size_t(where[k]);
        const std::size_t last = elig.back();
        elig[pos] = last;
        where[last] = std::ptrdiff_t(pos);
        elig.pop_back();
        where[k] = -1;
    };
    for (std::size_t k = 0; k < N; ++k)
        if (k == 0 || x[k] + 1 < x[k - 1]) add(k);

    const StreamKey key = stream_key(seed, StreamDomain::Tasep);
    double t = 0.0;
    std::uint64_t ev = 0;
    while (!elig.empty()) {
        const auto o = philox4x32_10({std::uint32_t(ev), std::uint32_t(ev >> 32), key.c2, key.c3},
                                     {key.k0, key.k1});
        const double E = double(elig.size());
        const double dt = exp1_from_bits((std::uint64_t(o[0]) << 32) | o[1]) / E;
        if (t + dt > T) break;
        t += dt;
        const std::uint64_t r = (std::uint64_t(o[2]) << 32) | o[3];
        const std::size_t k = elig[std::size_t((unsigned __int128)r * elig.size() >> 64)];
        if (st.bounded_cone && x[k] == st.cone - 1) --st.cone;
        ++x[k];
        assert(k == 0 || x[k] < x[k - 1]);
        if (k > 0 && x[k] + 1 >= x[k - 1]) remove(k);
        if (k + 1 < N && where[k + 1] < 0) add(k + 1);
        ++ev;
    }
    st.time = T;
    st.events = ev;
    if (st.bounded_cone && N > 0) {
        st.buffer_valid = x.front() <= st.cone - 1;
        if (st.at(init.obs_min) > st.cone - 1)
            throw BufferExhausted("tasep: light cone reached observed label " + std::to_string(init.obs_min));
    }
    return st;
}

DensityProfile empirical_density(const TasepState& state, double T, double bin_width) {
    if (state.x.empty()) return empirical_density(state, T, bin_width, -1.0, 1.0);
    return empirical_density(state, T, bin_width, double(state.x.back()) / T, double(state.x.front() + 1) / T);
}

DensityProfile empirical_density(const TasepState& state, double T, double bin_width, double xi_lo,
                                 double xi_hi) {
    if (!(T > 0) || !(bin_width > 0) || !(xi_hi > xi_lo)) throw DomainError("empirical_density: bad bins");
    DensityProfile prof;
    prof.T = T;
    const auto [ex_lo, ex_hi] = state.exact_sites();
    const i64 nb = i64(std::ceil((xi_hi - xi_lo) / bin_width - 1e-9));
    // positions are decreasing in k; count occupied sites in [a, b)
    auto count = [&](i64 a, i64 b) {
        auto first = std::lower_bound(state.x.begin(), state.x.end(), b - 1, std::greater<i64>());
        auto last = std::lower_bound(state.x.begin(), state.x.end(), a - 1, std::greater<i64>());
        return i64(last - first);
    };
    for (i64 k = 0; k < nb; ++k) {
        const i64 a = ifloor((xi_lo + double(k) * bin_width) * T);
        const i64 b = ifloor((xi_lo + double(k + 1) * bin_width) * T);
        if (b <= a) continue;
        prof.centers.push_back((double(a) + double(b - 1)) / (2.0 * T));
        prof.widths.push_back(double(b - a) / T);
        prof.values.push_back(double(count(a, b)) / double(b - a));
        prof.valid.push_back(!state.x.empty() && a >= ex_lo && b - 1 <= ex_hi);
    }
    return prof;
}

LppLink tasep_to_lpp(const TasepInit& init, i64 n, i64 m) {
    LppLink link;
    link.end = {m, n};
    auto window_points = [&]() {
        if (n < init.n_min || n > init.n_max) throw DomainError("tasep_to_lpp: label outside window");
        std::vector<Point> pts;
        for (i64 k = init.n_min; k <= n; ++k) pts.push_back({init.position(k) + k, k});
        return StartSet::points(std::move(pts));
    };
    switch (init.kind) {
        case InitKind::StepA:
        case InitKind::ShockBeta: {
            const i64 low = *init.lowest_label();
            if (n < low) throw DomainError("tasep_to_lpp: label below the lowest particle");
            std::vector<Point> pts;
            for (i64 k = low; k <= n; ++k) pts.push_back({init.position(k) + k, k});
            link.start = StartSet::points(std::move(pts));
            break;
        }
        case InitKind::Flat: {
            if (auto q = exact_rational(init.params.rho))
                link.start = Staircase{*q, IndexRange::All};
            else
                link.start = window_points();
            break;
        }
        case InitKind::TwoDensity: {
            auto q1 = exact_rational(init.params.rho1), q2 = exact_rational(init.params.rho2);
            if (q1 && q2)
                link.start = StartSet::join(Staircase{*q1, IndexRange::NonPositive},
                                            Staircase{*q2, IndexRange::Positive});
            else
                link.start = window_points();
            break;
        }
    }
    return link;
}

}  // namespace lpplab
