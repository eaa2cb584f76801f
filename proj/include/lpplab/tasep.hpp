#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "lpplab/lattice.hpp"
#include "lpplab/start_set.hpp"
#include "lpplab/weights.hpp"

namespace lpplab {

enum class InitKind { StepA, ShockBeta, Flat, TwoDensity };

struct TasepParams {
    double a = 0.0;      // StepA
    double beta = 0.5;   // ShockBeta
    double rho = 0.5;    // Flat
    double rho1 = 0.8;   // TwoDensity, n <= 0
    double rho2 = 0.2;   // TwoDensity, n > 0
};

// Labels n_min..n_max are simulated; obs_min..obs_max are the ones the caller
// reads. Labels above n_max never influence lower labels, so only the right
// edge needs a buffer.
struct TasepInit {
    InitKind kind = InitKind::StepA;
    TasepParams params;
    double T = 0.0;
    i64 n_min = 0, n_max = 0;
    i64 obs_min = 0, obs_max = 0;
    std::vector<i64> x0;          // x0[k] = x_{n_min + k}(0)
    std::optional<i64> guard;     // x_{n_min - 1}(0) when that particle exists

    i64 position(i64 n) const;    // x_n(0) in the untruncated configuration
    std::optional<i64> lowest_label() const;
};

struct TasepState {
    double time = 0.0;
    i64 n_min = 0, n_max = 0;
    i64 obs_min = 0, obs_max = 0;
    std::vector<i64> x;           // x[k] = x_{n_min + k}(time)
    i64 cone = 0;                 // sites < cone agree with the untruncated system
    bool bounded_cone = false;    // false: no truncation on the right
    bool buffer_valid = true;     // every simulated label is exact
    std::uint64_t events = 0;

    i64 at(i64 n) const { return x[std::size_t(n - n_min)]; }
    // Sites whose occupation is exact: [first, second].
    std::pair<i64, i64> exact_sites() const;
};

struct DensityProfile {
    double T = 0.0;
    std::vector<double> centers;  // xi = site / T
    std::vector<double> values;
    std::vector<double> widths;   // in xi units
    std::vector<bool> valid;      // bin lies in the exact site range
};

struct LppLink {
    StartSet start;
    Point end;
};

// Right-edge buffer in sites; every boundary signal travels at most this far
// with overwhelming probability.
i64 buffer_sites(double T);

TasepInit init_config(InitKind kind, const TasepParams& params, double T, i64 obs_min, i64 obs_max);

TasepState simulate_tasep(const TasepInit& init, double T, const Seed& seed);

DensityProfile empirical_density(const TasepState& state, double T, double bin_width);
DensityProfile empirical_density(const TasepState& state, double T, double bin_width, double xi_lo,
                                 double xi_hi);

LppLink tasep_to_lpp(const TasepInit& init, i64 n, i64 m);

// Exact rational for rho when it has a denominator <= 10^4.
std::optional<Rational> exact_rational(double rho);

}  // namespace lpplab
