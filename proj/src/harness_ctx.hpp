#pragma once

// Shared plumbing for the experiment implementations.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "lpplab/harness.hpp"
#include "lpplab/lpp.hpp"
#include "lpplab/refdist.hpp"
#include "lpplab/stats.hpp"
#include "lpplab/weights.hpp"

namespace lpplab::detail {

struct Ctx {
    const ExperimentConfig& cfg;
    const Params& P;
    Json doc;
    std::vector<CsvTable> tables;
    bool pass = true;

    explicit Ctx(const ExperimentConfig& c) : cfg(c), P(c.params) {}

    std::size_t N() const { return cfg.replicas; }
    Seed seed(std::size_t r, const std::string& tag = "") const {
        return Seed{cfg.seed, tag.empty() ? cfg.id : cfg.id + "/" + tag, r};
    }

    // Hard checks decide the exit code; diagnostics are reported only.
    void check(const std::string& name, double value, double limit, const std::string& rel, bool ok,
               bool hard = true);
    void caveat(const std::string& text);
    Json& stats() { return doc["statistics"]; }

    void cdf_table(const std::string& stat, const std::vector<double>& s, const std::vector<double>& emp,
                   const std::vector<double>& ref, const std::vector<double>& se);
    void cdf2_table(const std::string& stat, const std::vector<double>& g1, const std::vector<double>& g2,
                    const std::vector<double>& joint, const std::vector<double>& ref,
                    const std::vector<double>& se);
    void exceedance_table(const std::string& name, const std::vector<double>& k, const std::vector<double>& p,
                          const std::vector<double>& se);
    void table(CsvTable t) { tables.push_back(std::move(t)); }
};

std::vector<double> s_grid(const Params& P);
std::vector<double> grid2(const Params& P);
std::string tag_of(const char* name, double v);

// Checks joint >= prod(marginals) - 3 SE on a 2-D grid and records the decoupling gap.
struct PairSummary {
    GapResult gap;
    int fkg_violations = 0;
    double worst_fkg = 0;  // min over grid of (joint - product + 3 SE)
};
PairSummary pair_summary(Ctx& ctx, const std::string& stat, const std::vector<std::pair<double, double>>& xy);

// Centers and scales each coordinate by its sample mean and sd, for pairs without a natural scale.
std::vector<std::pair<double, double>> standardize(std::vector<std::pair<double, double>> xy);

// One-dimensional comparison: KS against ref, cdf table on the s-grid, hard check against tol.
double compare_1d(Ctx& ctx, const std::string& stat, const std::vector<double>& x, const Cdf& ref, double tol,
                  bool hard = true);

// x_n from one row of last passage times: L(m, n) for m = m_lo, m_lo + 1, ...
// x_n(T) = max{m : L(m, n) <= T} - n. Sets `censored` when the maximum is at either end.
i64 position_from_row(const std::vector<double>& L, i64 m_lo, i64 n, double T, bool& censored);
std::vector<Point> row_ends(i64 n, i64 m_lo, i64 m_hi);

// Trend check: gap(a_i+1) <= gap(a_i) + 2 SE_comb.
void trend_check(Ctx& ctx, const std::string& name, const std::vector<double>& a,
                 const std::vector<GapResult>& gaps, bool hard);

// Least squares slope of y on x.
double ls_slope(const std::vector<double>& x, const std::vector<double>& y);

Json point_json(Point p);

// Bounding rectangle of a channel set (domain hint for the weight field).
Rect hull_of(const std::vector<Channel>& chans);
Channel channel(const StartSet& s, std::vector<Point> ends, std::optional<ForbiddenRegion> f = std::nullopt,
                bool track = false);

using ExperimentFn = void (*)(Ctx&);
void step_gue(Ctx&);
void flat_goe(Ctx&);
void shock_gue2(Ctx&);
void critical_shock_lpp(Ctx&);
void critical_shock_tasep(Ctx&);
void shock_flat_goe2(Ctx&);
void airy2_twopoint(Ctx&);
void airy1_decoupling(Ctx&);
void airy21_decoupling(Ctx&);
void timelike_decoupling(Ctx&);
void transversal(Ctx&);
void slow_decorrelation(Ctx&);
void crossing(Ctx&);
void tasep_lpp_consistency(Ctx&);
void density_profile(Ctx&);
void fkg_floor(Ctx&);
void localshift(Ctx&);

}  // namespace lpplab::detail
