// TASEP experiments: cited limits, the two shock theorems and the LPP link.

#include <algorithm>
#include <cmath>

#include "harness_ctx.hpp"
#include "lpplab/scalings.hpp"
#include "lpplab/tasep.hpp"

namespace lpplab::detail {

namespace {

const double kCbrt2 = std::cbrt(2.0);

// Positions of the observed labels [obs_min, obs_max] at time T, one row per replica.
std::vector<std::vector<i64>> run_tasep(Ctx& ctx, const TasepInit& init, double T, const std::string& tag) {
    return farm<std::vector<i64>>(ctx.N(), [&](std::size_t r) {
        const TasepState st = simulate_tasep(init, T, ctx.seed(r, tag));
        std::vector<i64> out;
        for (i64 n = init.obs_min; n <= init.obs_max; ++n) out.push_back(st.at(n));
        return out;
    });
}

std::vector<double> column(const std::vector<std::vector<i64>>& rows, std::size_t k) {
    std::vector<double> v;
    v.reserve(rows.size());
    for (const auto& r : rows) v.push_back(double(r[k]));
    return v;
}

void tasep_basics(Ctx& ctx, const TasepInit& init) {
    ctx.doc["geometry"]["labels"] = {init.n_min, init.n_max};
    ctx.doc["geometry"]["observed"] = {init.obs_min, init.obs_max};
}

// Per replica: x_n through the LPP link with channels split by start-set part,
// plus the per-part values at the row end m0 for the FKG pair.
struct LinkSample {
    i64 x = 0;
    bool censored = false;
    double l1 = 0, l2 = 0;
};

std::vector<LinkSample> run_link(Ctx& ctx, const StartSet& zero, const StartSet& part1, const StartSet& part2,
                                 i64 n, i64 m_lo, i64 m_hi, i64 m0, double T, const std::string& tag) {
    std::vector<Point> ends = row_ends(n, m_lo, m_hi);
    std::vector<Channel> ch;
    ch.push_back(channel(part1, ends));
    ch.push_back(channel(part2, ends));
    const Rect dom = hull_of(ch);
    return farm<LinkSample>(ctx.N(), [&](std::size_t r) {
        const WeightField w(ctx.seed(r, tag), zero, dom);
        const auto v = sweep(w, std::span<const Channel>(ch));
        std::vector<double> L(ends.size());
        for (std::size_t k = 0; k < L.size(); ++k) L[k] = std::max(v[0].values[k], v[1].values[k]);
        LinkSample s;
        s.x = position_from_row(L, m_lo, n, T, s.censored);
        s.l1 = v[0].values[std::size_t(m0 - m_lo)];
        s.l2 = v[1].values[std::size_t(m0 - m_lo)];
        return s;
    });
}

void link_checks(Ctx& ctx, const std::string& stat, const std::vector<double>& tasep_stat,
                 const std::vector<double>& lpp_stat, std::size_t censored) {
    const double d = two_sample_ks(Ecdf(tasep_stat), Ecdf(lpp_stat));
    const double crit = 1.63 * std::sqrt(2.0 / double(ctx.N()));
    ctx.stats()[stat + "_routes"] = {{"two_sample_ks", d}, {"critical_1pct", crit}, {"censored", censored}};
    ctx.check("tasep vs lpp route " + stat, d, crit, "<=", d <= crit);
    ctx.check("lpp route censored rows " + stat, double(censored), 0, "==", censored == 0);
}

std::vector<double> delta_grid(const Params& P) {
    return linspace(0.0, P.num("delta_hi"), int(P.integer("delta_n")));
}

}  // namespace

void step_gue(Ctx& ctx) {
    const double T = ctx.P.num("T"), u = ctx.P.num("u");
    if (!(T >= 8)) throw DomainError("step-gue: T must be >= 8");
    const i64 n = ifloor(T / 4 + u * std::pow(2.0, -2.0 / 3.0) * pow23(T));
    TasepInit init = init_config(InitKind::StepA, TasepParams{}, T, n, n);
    tasep_basics(ctx, init);
    const auto rows = run_tasep(ctx, init, T, "tasep");
    const double shift = u * kCbrt2 * pow23(T) - u * u * pow13(T) / kCbrt2;
    std::vector<double> S;
    for (const auto& r : rows) S.push_back((double(r[0]) + shift) / (-pow13(T) / kCbrt2));
    compare_1d(ctx, "step", S, gue_cdf(), ctx.P.num("ks_tol"));
}

void flat_goe(Ctx& ctx) {
    const double T = ctx.P.num("T"), rho = ctx.P.num("rho"), u = ctx.P.num("u");
    if (!(T >= 8)) throw DomainError("flat-goe: T must be >= 8");
    if (!(rho > 0 && rho < 1)) throw DomainError("flat-goe: rho outside (0,1)");
    const i64 n = ifloor(rho * (1 - rho) * T + u * pow23(T));
    TasepParams tp;
    tp.rho = rho;
    TasepInit init = init_config(InitKind::Flat, tp, T, n, n);
    tasep_basics(ctx, init);
    const auto rows = run_tasep(ctx, init, T, "tasep");
    const double scale = std::pow(1 - rho, 2.0 / 3.0) / std::cbrt(rho) * pow13(T);
    std::vector<double> S;
    for (const auto& r : rows) S.push_back(-(double(r[0]) + u / rho * pow23(T)) / scale);
    const Cdf F = goe_cdf();
    const double k = std::cbrt(4.0);
    compare_1d(ctx, "flat", S, [F, k](double s) { return F(k * s); }, ctx.P.num("ks_tol"));
}

void shock_gue2(Ctx& ctx) {
    const double T = ctx.P.num("T"), beta = ctx.P.num("beta"), xi = ctx.P.num("xi");
    if (!(T >= 8)) throw DomainError("shock-gue2: T must be >= 8");
    const ShockParams sp = shock_params_beta(beta);
    if (beta == 0) throw DomainError("shock-gue2: beta must be > 0");
    const i64 n = ifloor((1 - beta) * (1 - beta) / 4 * T + xi * pow13(T));
    TasepParams tp;
    tp.beta = beta;
    TasepInit init = init_config(InitKind::ShockBeta, tp, T, n, n);
    tasep_basics(ctx, init);
    ctx.doc["geometry"]["rho"] = {sp.rho1, sp.rho2};
    ctx.doc["geometry"]["sigma"] = {sp.sigma1, sp.sigma2};
    const auto rows = run_tasep(ctx, init, T, "tasep");
    std::vector<double> S;
    for (const auto& r : rows) S.push_back(-double(r[0]) / pow13(T));
    compare_1d(ctx, "shock", S, [=](double s) { return gue_shock_product(s, xi, beta); }, ctx.P.num("ks_tol"));
}

void critical_shock_tasep(Ctx& ctx) {
    const double T = ctx.P.num("T"), a = ctx.P.num("a"), u = ctx.P.num("u");
    if (!(T >= 64)) throw DomainError("critical-shock-tasep: T must be >= 64");
    if (!(a > 0)) throw DomainError("critical-shock-tasep: a must be > 0");
    const double q = a + u / a, T13 = pow13(T), T23 = pow23(T);
    const i64 n_lim = ifloor(T / 4 - T23 * q / 2);
    const i64 n_cor = ifloor(T / 4 - T23 * q / 2 + T13 * q * q / 4);
    const i64 A = ifloor(a * T23);
    if (n_lim < -A) throw DomainError("critical-shock-tasep: particle label below the lowest particle");
    const double eps = ctx.P.opt("eplus.epsilon").value_or(eps_schedule(a));
    const double k = k_schedule(a);
    const auto sg = s_grid(ctx.P);

    TasepParams tp;
    tp.a = a;
    TasepInit init = init_config(InitKind::StepA, tp, T, n_lim, std::max(n_lim, n_cor));
    tasep_basics(ctx, init);
    ctx.doc["geometry"]["n_lim"] = n_lim;
    ctx.doc["geometry"]["n_cor"] = n_cor;
    ctx.doc["geometry"]["epsilon"] = eps;
    ctx.doc["geometry"]["k"] = k;
    const auto rows = run_tasep(ctx, init, T, "tasep");

    // x >= X(s) with X(s) = (u/a) T^{2/3} + T^{1/3} q^2/2 - T^{1/3} s / 2^{1/3}
    const double x_lim0 = u / a * T23 + T13 * q * q / 2;
    std::vector<double> S_lim, S_cor;
    for (const auto& r : rows) {
        S_lim.push_back(kCbrt2 * (x_lim0 - double(r[0])) / T13);
        S_cor.push_back(kCbrt2 * (u / a * T23 - double(r[std::size_t(n_cor - n_lim)])) / T13);
    }
    const Cdf F = gue_cdf();
    const double sh = u * std::cbrt(16.0);
    const Cdf prod = [F, sh](double s) { return F(s) * F(s - sh); };
    compare_1d(ctx, "limit", S_lim, prod, 1.0, false);
    compare_1d(ctx, "cor", S_cor, prod, 1.0, false);

    // LPP route through the exact link; the start set reduces to its two lowest points.
    const i64 m_lo = n_lim + ifloor(x_lim0 - 12 * T13 / kCbrt2);
    const i64 m_hi = n_lim + ifloor(x_lim0 + 12 * T13 / kCbrt2) + 1;
    const i64 m0 = n_lim + i64(std::ceil(x_lim0));
    const LppLink link = tasep_to_lpp(init, n_lim, m_hi);
    const auto ls = run_link(ctx, link.start, StartSet::point({0, -A}), StartSet::point({-A, 1}), n_lim, m_lo,
                             m_hi, m0, T, "lpp");
    std::vector<double> S_lpp;
    std::vector<std::pair<double, double>> pair;
    std::size_t cens = 0;
    for (const auto& s : ls) {
        S_lpp.push_back(kCbrt2 * (x_lim0 - double(s.x)) / T13);
        cens += s.censored;
        pair.push_back({s.l1, s.l2});
    }
    link_checks(ctx, "limit", S_lim, S_lpp, cens);
    const PairSummary ps = pair_summary(ctx, "pair_lpp", standardize(pair));
    ctx.check("fkg violations pair_lpp", ps.fkg_violations, 0, "==", ps.fkg_violations == 0);

    // Asymptotic mapping: start {Lhat+, Lhat-}, ends (M(s), t), threshold(s).
    std::vector<TasepMapConstants> cs;
    for (double s : sg) cs.push_back(tasep_map_constants(T, a, u, s));
    std::vector<Point> ends;
    for (std::size_t i = 0; i < cs.size(); ++i) {
        const Point e{cs[i].M, cs[i].t};
        for (Point h : {cs[0].lhat_plus, cs[0].lhat_minus})
            if (h.x > e.x || h.y > e.y)
                throw DomainError("critical-shock-tasep: T too small for the s grid, (M(s), t) not above Lhat at " +
                                  tag_of("s", sg[i]));
        ends.push_back(e);
    }
    ctx.doc["geometry"]["lhat_plus"] = point_json(cs[0].lhat_plus);
    ctx.doc["geometry"]["lhat_minus"] = point_json(cs[0].lhat_minus);
    ctx.doc["geometry"]["t"] = cs[0].t;
    ctx.doc["geometry"]["constants"] = {{"c1", cs[0].c1}, {"c2", cs[0].c2}};
    std::vector<Channel> ch{channel(StartSet::point(cs[0].lhat_plus), ends),
                            channel(StartSet::point(cs[0].lhat_minus), ends)};
    const Rect dom = hull_of(ch);
    const StartSet zero = StartSet::points({cs[0].lhat_minus, cs[0].lhat_plus});
    const auto hits = farm<std::vector<char>>(ctx.N(), [&](std::size_t r) {
        const WeightField w(ctx.seed(r, "lhat"), zero, dom);
        const auto v = sweep(w, std::span<const Channel>(ch));
        std::vector<char> h(cs.size());
        for (std::size_t i = 0; i < cs.size(); ++i)
            h[i] = std::max(v[0].values[i], v[1].values[i]) <= cs[i].threshold;
        return h;
    });
    const Ecdf e_lim(S_lim);
    std::vector<double> p_lhat, emp, se;
    double worst = 0;
    for (std::size_t i = 0; i < sg.size(); ++i) {
        double c = 0;
        for (const auto& h : hits) c += h[i];
        p_lhat.push_back(c / double(ctx.N()));
        emp.push_back(e_lim(sg[i]));
        se.push_back(binomial_se(p_lhat.back(), ctx.N()));
        worst = std::max(worst, std::abs(p_lhat.back() - emp.back()));
    }
    ctx.cdf_table("lhat_mapping", sg, p_lhat, emp, se);
    ctx.stats()["lhat_mapping"] = {{"max_abs_diff", worst}};
    ctx.check("lhat mapping vs tasep, max |diff|", worst, 0.1, "<=", worst <= 0.1, false);

    // Sandwich at finite T: diagnostic only, the error term is set to 0.
    const bool eps_ok = k / a < eps && eps < 1;
    if (eps_ok) {
        const auto dg = delta_grid(ctx.P);
        std::vector<double> lo, hi, bse;
        int below = 0, above = 0;
        for (std::size_t i = 0; i < sg.size(); ++i) {
            SandwichParams p;
            p.s = sg[i];
            p.u = u;
            p.eps = eps;
            double up = HUGE_VAL;
            Bounds b;
            for (double d : dg) {
                p.delta = d;
                b = sandwich_bounds(BoundKind::TasepScale, p);
                up = std::min(up, b.upper);
            }
            lo.push_back(b.lower);
            hi.push_back(up);
            const double s1 = binomial_se(b.lower, ctx.N()), s2 = binomial_se(up, ctx.N());
            bse.push_back(s1);
            if (emp[i] < b.lower - 3 * s1) ++below;
            if (emp[i] > up + 3 * s2) ++above;
        }
        ctx.cdf_table("lim_lower", sg, emp, lo, bse);
        ctx.cdf_table("lim_upper", sg, emp, hi, bse);
        ctx.check("sandwich lower misses", below, 0, "==", below == 0, false);
        ctx.check("sandwich upper misses", above, 0, "==", above == 0, false);
        ctx.caveat("finite-T sandwich uses C e^{-ck} = 0; reported as a diagnostic");
    } else {
        ctx.caveat("no epsilon with k/a < epsilon < 1; sandwich skipped");
    }
}

void shock_flat_goe2(Ctx& ctx) {
    const double T = ctx.P.num("T"), r1 = ctx.P.num("rho1"), r2 = ctx.P.num("rho2"), xi = ctx.P.num("xi");
    if (!(T >= 8)) throw DomainError("shock-flat-goe2: T must be >= 8");
    const ShockParams sp = shock_params_rho(r1, r2);
    if (r1 == r2) throw DomainError("shock-flat-goe2: need rho1 > rho2");
    const auto q1 = exact_rational(r1), q2 = exact_rational(r2);
    if (!q1 || !q2) throw DomainError("shock-flat-goe2: densities must be rationals with denominator <= 10^4");
    const double T13 = pow13(T);
    const i64 n = ifloor(r1 * r2 * T + xi * T13);
    TasepParams tp;
    tp.rho1 = r1;
    tp.rho2 = r2;
    TasepInit init = init_config(InitKind::TwoDensity, tp, T, n, n);
    tasep_basics(ctx, init);
    ctx.doc["geometry"]["c"] = {sp.c1, sp.c2};
    const GeometrySpec g = two_density_points(r1, r2, xi, 0.0, T, ctx.P.num("nu"));
    for (const auto& [name, p] : g.points) ctx.doc["geometry"][name] = point_json(p);

    const auto rows = run_tasep(ctx, init, T, "tasep");
    const double x0 = (1 - r1 - r2) * T;
    std::vector<double> S;
    for (const auto& r : rows) S.push_back((x0 - double(r[0])) / T13);
    compare_1d(ctx, "shock", S, [=](double s) { return goe_shock_product(s, xi, r1, r2); }, ctx.P.num("ks_tol"));

    const i64 m_lo = n + ifloor(x0 - 12 * T13), m_hi = n + ifloor(x0 + 12 * T13) + 1;
    const i64 m0 = n + i64(std::ceil(x0));
    const LppLink link = tasep_to_lpp(init, n, m_hi);
    const auto ls = run_link(ctx, link.start, Staircase{*q1, IndexRange::NonPositive},
                             Staircase{*q2, IndexRange::Positive}, n, m_lo, m_hi, m0, T, "lpp");
    std::vector<double> S_lpp;
    std::vector<std::pair<double, double>> pair;
    std::size_t cens = 0;
    for (const auto& s : ls) {
        S_lpp.push_back((x0 - double(s.x)) / T13);
        cens += s.censored;
        pair.push_back({s.l1, s.l2});
    }
    link_checks(ctx, "shock", S, S_lpp, cens);
    const PairSummary ps = pair_summary(ctx, "pair_lpp", standardize(pair));
    ctx.check("fkg violations pair_lpp", ps.fkg_violations, 0, "==", ps.fkg_violations == 0);
}

void tasep_lpp_consistency(Ctx& ctx) {
    const double T = ctx.P.num("T");
    const double tol = ctx.P.num("ks_tol");
    if (!(T > 0)) throw DomainError("tasep-lpp-consistency: T must be > 0");
    std::vector<i64> ns;
    for (double v : ctx.P.vec("n")) {
        if (v != std::floor(v) || v < 0) throw DomainError("tasep-lpp-consistency: n must be integers >= 0");
        ns.push_back(i64(v));
    }
    std::sort(ns.begin(), ns.end());
    ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
    TasepInit init = init_config(InitKind::StepA, TasepParams{}, T, 0, ns.back());
    tasep_basics(ctx, init);
    const auto rows = run_tasep(ctx, init, T, "tasep");

    // x_n(T) - x_n(0) <= Poisson(T) jumps
    const i64 span = i64(std::ceil(T + 10 * std::sqrt(T) + 20));
    std::vector<Channel> ch;
    std::vector<i64> lo;
    for (i64 n : ns) {
        const LppLink link = tasep_to_lpp(init, n, n + span);
        lo.push_back(0);
        ch.push_back(channel(link.start, row_ends(n, 0, n + span)));
    }
    const StartSet zero = tasep_to_lpp(init, ns.back(), 0).start;
    const Rect dom = hull_of(ch);
    struct Row {
        std::vector<i64> x;
        std::vector<char> cens;
    };
    const auto xs = farm<Row>(ctx.N(), [&](std::size_t r) {
        const WeightField w(ctx.seed(r, "lpp"), zero, dom);
        const auto v = sweep(w, std::span<const Channel>(ch));
        Row out;
        for (std::size_t c = 0; c < ns.size(); ++c) {
            bool cens = false;
            out.x.push_back(position_from_row(v[c].values, lo[c], ns[c], T, cens));
            out.cens.push_back(cens);
        }
        return out;
    });
    for (std::size_t c = 0; c < ns.size(); ++c) {
        std::vector<double> a = column(rows, std::size_t(ns[c] - init.obs_min)), b;
        std::size_t cens = 0;
        for (const auto& r : xs) {
            b.push_back(double(r.x[c]));
            cens += r.cens[c];
        }
        const std::string tag = "n=" + std::to_string(ns[c]);
        const double d = two_sample_ks(Ecdf(a), Ecdf(b));
        const double crit = 1.63 * std::sqrt(2.0 / double(ctx.N()));
        double ma = 0, mb = 0;
        for (double v : a) ma += v;
        for (double v : b) mb += v;
        ctx.stats()[tag] = {{"two_sample_ks", d},
                            {"critical_1pct", crit},
                            {"mean_tasep", ma / double(a.size())},
                            {"mean_lpp", mb / double(b.size())},
                            {"censored", cens}};
        ctx.check("two-sample ks " + tag, d, tol, "<=", d <= tol);
        ctx.check("lpp censored rows " + tag, double(cens), 0, "==", cens == 0);
    }
}

void density_profile(Ctx& ctx) {
    const double T = ctx.P.num("T"), bin = ctx.P.num("bin");
    const double lo = ctx.P.num("xi_lo"), hi = ctx.P.num("xi_hi"), tol = ctx.P.num("tol");
    const double r1 = ctx.P.num("rho1"), r2 = ctx.P.num("rho2");
    if (!(T >= 8 && bin > 0 && hi > lo && lo >= -1 && hi <= 1))
        throw DomainError("density-profile: need T >= 8, bin > 0, -1 <= xi_lo < xi_hi <= 1");
    if (!(r2 > 0 && r1 > r2 && r1 < 1)) throw DomainError("density-profile: need 1 > rho1 > rho2 > 0");

    auto average = [&](const TasepInit& init, double a, double b, const std::string& tag) {
        const auto profs = farm<DensityProfile>(ctx.N(), [&](std::size_t r) {
            return empirical_density(simulate_tasep(init, T, ctx.seed(r, tag)), T, bin, a, b);
        });
        DensityProfile avg = profs[0];
        for (std::size_t i = 0; i < avg.values.size(); ++i) {
            double s = 0;
            bool ok = true;
            for (const auto& p : profs) {
                s += p.values[i];
                ok = ok && p.valid[i];
            }
            avg.values[i] = s / double(profs.size());
            avg.valid[i] = ok;
        }
        return avg;
    };

    // step: particles 0..T cover sites down to -T
    const TasepInit step = init_config(InitKind::StepA, TasepParams{}, T, 0, i64(std::ceil(T)) + 1);
    const DensityProfile ps = average(step, -1.0, 1.0, "step");
    CsvTable ts{"profile_step.csv", {"xi", "density", "reference", "valid"}, {}};
    double sup = 0;
    int used = 0, invalid = 0;
    for (std::size_t i = 0; i < ps.centers.size(); ++i) {
        const double xi = ps.centers[i];
        const double ref = std::clamp((1 - xi) / 2, 0.0, 1.0);
        ts.rows.push_back({xi, ps.values[i], ref, double(ps.valid[i])});
        if (xi - ps.widths[i] / 2 < lo - 1e-12 || xi + ps.widths[i] / 2 > hi + 1e-12) continue;
        if (!ps.valid[i]) {
            ++invalid;
            continue;
        }
        ++used;
        sup = std::max(sup, std::abs(ps.values[i] - ref));
    }
    ctx.table(std::move(ts));
    ctx.stats()["step"] = {{"sup_deviation", sup}, {"bins", used}, {"invalid_bins", invalid}};
    ctx.check("step profile sup |rho - (1-xi)/2|", sup, tol, "<=", sup <= tol && used > 0);
    ctx.check("step profile bins outside the exact range", invalid, 0, "==", invalid == 0);

    // two-density: shock at xi_s = 1 - rho1 - rho2
    TasepParams tp;
    tp.rho1 = r1;
    tp.rho2 = r2;
    const double xs = 1 - r1 - r2;
    const i64 n_lo = -i64(std::ceil(r1 * T)), n_hi = i64(std::ceil(2 * r2 * T)) + 1;
    const TasepInit two = init_config(InitKind::TwoDensity, tp, T, n_lo, n_hi);
    const DensityProfile pt = average(two, xs - 0.4, xs + 0.4, "two");
    CsvTable tt{"profile_two_density.csv", {"xi", "density", "valid"}, {}};
    double left = 0, right = 0;
    int nl = 0, nr = 0, bad = 0;
    for (std::size_t i = 0; i < pt.centers.size(); ++i) {
        const double d = pt.centers[i] - xs;
        tt.rows.push_back({pt.centers[i], pt.values[i], double(pt.valid[i])});
        const bool in_l = d >= -0.3 && d <= -0.1, in_r = d >= 0.1 && d <= 0.3;
        if (!in_l && !in_r) continue;
        if (!pt.valid[i]) {
            ++bad;
            continue;
        }
        if (in_l) left += pt.values[i], ++nl;
        if (in_r) right += pt.values[i], ++nr;
    }
    ctx.table(std::move(tt));
    const double jump = (nl && nr) ? right / nr - left / nl : 0.0;
    const double jt = ctx.P.num("jump_tol");
    ctx.stats()["two_density"] = {{"left", nl ? left / nl : 0.0}, {"right", nr ? right / nr : 0.0},
                                  {"jump", jump}, {"expected", r1 - r2}, {"invalid_bins", bad}};
    ctx.check("two-density jump - (rho1 - rho2)", std::abs(jump - (r1 - r2)), jt, "<=",
              nl && nr && std::abs(jump - (r1 - r2)) <= jt);
    ctx.check("two-density bins outside the exact range", bad, 0, "==", bad == 0);
}

}  // namespace lpplab::detail
