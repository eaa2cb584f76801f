// LPP decoupling experiments: pairs of last passage times and their joint law.

#include <algorithm>
#include <cmath>

#include "harness_ctx.hpp"
#include "lpplab/scalings.hpp"

namespace lpplab::detail {

namespace {

const double kTwo43 = std::cbrt(16.0);

using Pairs = std::vector<std::pair<double, double>>;

struct CriticalSample {
    Pairs xy;                // (X+, X-) at E
    std::size_t crossed = 0; // restricted != unrestricted on either side
    bool restricted = false;
    double eps = 0, k = 0, c_eps = 1;
};

// Overrides from the config's scalings section, when the experiment has one.
std::optional<double> scaling(const Ctx& ctx, const std::string& key) {
    const Json& v = ctx.P.values();
    if (!v.contains("scalings") || !v["scalings"].contains(key)) return std::nullopt;
    return ctx.P.opt(key);
}

Json geometry_json(const GeometrySpec& g) {
    Json j;
    for (const auto& [name, p] : g.points) j[name] = point_json(p);
    for (const auto& [name, r] : g.regions) j[name] = {point_json(r.a), point_json(r.b)};
    for (const auto& [name, w] : g.windows) j[name] = {{"center", point_json(w.center)}, {"half_width", w.half_width}};
    return j;
}

CriticalSample critical_pairs(Ctx& ctx, double t, double a, double u, bool want_restricted, const std::string& tag) {
    if (!(a > 0)) throw DomainError("critical shock: a must be > 0");
    CriticalSample out;
    out.eps = scaling(ctx, "eplus.epsilon").value_or(eps_schedule(a));
    out.k = scaling(ctx, "forbidden.k").value_or(k_schedule(a));
    const double center = scaling(ctx, "mu_a").value_or(mu_a(t, a, u).center);
    const double scale = kTwo43 * pow13(t);
    const GeometrySpec g = critical_shock_geometry(t, a, u, out.eps, out.k);
    out.restricted = want_restricted && out.k / a < out.eps && out.eps < 1;
    out.c_eps = eplus(t, a, u, out.eps).c_eps;

    Json gj = geometry_json(g);
    gj["epsilon"] = out.eps;
    gj["k"] = out.k;
    gj["mu_a_t"] = center;
    gj["restricted"] = out.restricted;
    if (out.restricted) gj["restricted_disjoint"] = restricted_admissible_disjoint(g);
    ctx.doc["geometry"][tag] = gj;

    const Point E = g.points.at("E"), Ep = g.points.at("E+");
    const StartSet sp = StartSet::point(g.points.at("L+")), sm = StartSet::point(g.points.at("L-"));
    std::vector<Channel> ch{channel(sp, {E, Ep}), channel(sm, {E})};
    if (out.restricted) {
        ch.push_back(channel(sp, {Ep}, g.regions.at("R+")));
        ch.push_back(channel(sm, {E}, g.regions.at("R-")));
    }
    const StartSet zero = StartSet::points({g.points.at("L-"), g.points.at("L+")});
    const Rect dom = hull_of(ch);
    struct R {
        double xp = 0, xm = 0;
        bool cross = false;
    };
    const auto rs = farm<R>(ctx.N(), [&](std::size_t r) {
        const WeightField w(ctx.seed(r, tag), zero, dom);
        const auto v = sweep(w, std::span<const Channel>(ch));
        R o;
        o.xp = (v[0].values[0] - center) / scale;
        o.xm = (v[1].values[0] - center) / scale;
        if (out.restricted) o.cross = v[2].values[0] != v[0].values[1] || v[3].values[0] != v[1].values[0];
        return o;
    });
    for (const auto& r : rs) {
        out.xy.push_back({r.xp, r.xm});
        out.crossed += r.cross;
    }
    return out;
}

// Line (or half-line) to point: start points (-i, i), i in [i_lo, i_hi], ends E1, E2.
struct LineSample {
    Pairs xy;
    std::size_t at_edge = 0;
    std::size_t crossed = 0;
};

LineSample line_pairs(Ctx& ctx, double t, i64 i_lo, i64 i_hi, bool lower_edge_is_real, Point e1, Point e2,
                      double shift1, const std::vector<ForbiddenRegion>& regions, const std::string& tag) {
    std::vector<Point> pts;
    for (i64 i = i_lo; i <= i_hi; ++i) pts.push_back({-i, i});
    const StartSet start = StartSet::points(pts);
    std::vector<Channel> ch{channel(start, {e1, e2}, std::nullopt, true)};
    if (regions.size() == 2) {
        ch.push_back(channel(start, {e1}, regions[0]));
        ch.push_back(channel(start, {e2}, regions[1]));
    }
    const Rect dom = hull_of(ch);
    const double scale = pow13(t);
    struct R {
        double x1 = 0, x2 = 0;
        bool edge = false, cross = false;
    };
    const auto rs = farm<R>(ctx.N(), [&](std::size_t r) {
        const WeightField w(ctx.seed(r, tag), start, dom);
        const auto v = sweep(w, std::span<const Channel>(ch));
        R o;
        o.x1 = (v[0].values[0] - 4 * t) / scale + shift1;
        o.x2 = (v[0].values[1] - 4 * t) / scale;
        for (auto p : v[0].origins) {
            if (p.y == i_hi) o.edge = true;
            if (p.y == i_lo && !lower_edge_is_real) o.edge = true;
        }
        if (ch.size() == 3) o.cross = v[1].values[0] != v[0].values[0] || v[2].values[0] != v[0].values[1];
        return o;
    });
    LineSample out;
    for (const auto& r : rs) {
        out.xy.push_back({r.x1, r.x2});
        out.at_edge += r.edge;
        out.crossed += r.cross;
    }
    return out;
}

LineSample airy1_pairs(Ctx& ctx, double t, double a, double wk, bool restricted, const std::string& tag) {
    if (!(a > 0)) throw DomainError("airy1: a must be > 0");
    if (!(wk > 0)) throw DomainError("airy1: window.k must be > 0");
    const GeometrySpec g = line_geometry(LineKind::Airy1, a, 0, t, wk);
    ctx.doc["geometry"][tag] = geometry_json(g);
    const i64 A = ifloor(a * pow23(t)), W = ifloor(wk * pow23(t));
    std::vector<ForbiddenRegion> regs;
    if (restricted) regs = {g.regions.at("R1"), g.regions.at("R2")};
    return line_pairs(ctx, t, -W, A + W, false, g.points.at("E1"), g.points.at("E2"), 0.0, regs, tag);
}

struct TimelikeSample {
    Pairs xy;  // (X_tau, X_a)
};

TimelikeSample timelike_pairs(Ctx& ctx, double t, double a, double tau, const std::string& tag) {
    if (!(a > tau && tau > 0)) throw DomainError("timelike: need a > tau > 0");
    const double ta = t / a;
    const TimelikePoint p1 = timelike_points(tau, 0, ta), p2 = timelike_points(a, 0, ta);
    const Point e1{ifloor(tau * ta), ifloor(tau * ta)}, e2{ifloor(a * ta), ifloor(a * ta)};
    if (e1.x < 1) throw DomainError("timelike: tau t/a is below one lattice step");
    ctx.doc["geometry"][tag] = {{"P1", point_json(e1)}, {"P2", point_json(e2)}, {"t_a", ta}};
    const StartSet o = StartSet::point({0, 0});
    std::vector<Channel> ch{channel(o, {e1, e2})};
    const Rect dom = hull_of(ch);
    const auto rs = farm<std::pair<double, double>>(ctx.N(), [&](std::size_t r) {
        const WeightField w(ctx.seed(r, tag), o, dom);
        const auto v = sweep(w, std::span<const Channel>(ch));
        return std::pair<double, double>{(v[0].values[0] - p1.mu.center) / p1.mu.scale,
                                         (v[0].values[1] - p2.mu.center) / p2.mu.scale};
    });
    return {rs};
}

// TASEP mapping pair: values from Lhat+ and Lhat- at (M(0), t), with T = 4t.
Pairs lhat_pairs(Ctx& ctx, double t, double a, const std::string& tag) {
    const TasepMapConstants c = tasep_map_constants(4 * t, a, 0.0, 0.0);
    ctx.doc["geometry"][tag] = {{"Lhat+", point_json(c.lhat_plus)}, {"Lhat-", point_json(c.lhat_minus)},
                                {"end", point_json({c.M, c.t})}};
    std::vector<Channel> ch{channel(StartSet::point(c.lhat_plus), {{c.M, c.t}}),
                            channel(StartSet::point(c.lhat_minus), {{c.M, c.t}})};
    const StartSet zero = StartSet::points({c.lhat_minus, c.lhat_plus});
    const Rect dom = hull_of(ch);
    return farm<std::pair<double, double>>(ctx.N(), [&](std::size_t r) {
        const WeightField w(ctx.seed(r, tag), zero, dom);
        const auto v = sweep(w, std::span<const Channel>(ch));
        return std::pair<double, double>{v[0].values[0], v[1].values[0]};
    });
}

std::vector<double> delta_grid(const Params& P) {
    return linspace(0.0, P.num("delta_hi"), int(P.integer("delta_n")));
}

bool listed(const std::vector<double>& v, double a) { return std::find(v.begin(), v.end(), a) != v.end(); }

void fkg_hard(Ctx& ctx, const std::string& stat, const PairSummary& ps) {
    ctx.check("fkg violations " + stat, ps.fkg_violations, 0, "==", ps.fkg_violations == 0);
}

std::vector<double> a_grid(const Params& P) {
    auto v = P.vec("a");
    std::sort(v.begin(), v.end());
    return v;
}

}  // namespace

void critical_shock_lpp(Ctx& ctx) {
    const double t = ctx.P.num("t"), u = ctx.P.num("u");
    if (!(t >= 8)) throw DomainError("critical-shock-lpp: t must be >= 8");
    const auto as = a_grid(ctx.P), sa = ctx.P.vec("sandwich_a");
    for (double a : as)
        if (!(a > 0)) throw DomainError("critical-shock-lpp: a must be > 0");
    const auto sg = s_grid(ctx.P), dg = delta_grid(ctx.P);
    const Cdf F = gue_cdf();
    std::vector<GapResult> gaps;
    for (double a : as) {
        const std::string tag = tag_of("a", a);
        const CriticalSample cs = critical_pairs(ctx, t, a, u, ctx.P.flag("restricted"), tag);
        const PairSummary ps = pair_summary(ctx, "pair_" + tag, cs.xy);
        fkg_hard(ctx, "pair_" + tag, ps);
        gaps.push_back(ps.gap);

        std::vector<double> L, Lp, Lm;
        for (auto [p, m] : cs.xy) {
            L.push_back(std::max(p, m));
            Lp.push_back(p);
            Lm.push_back(m);
        }
        const Ecdf e(L), ep(Lp), em(Lm);
        const double phat = double(cs.crossed) / double(ctx.N());
        const bool hard = listed(sa, a);
        // floor: product of the empirical marginals, valid at every t.
        // The limit product sits above it by the finite-t offset of the
        // marginals and is only reported.
        std::vector<double> emp, lo, hi, se_lo, floor_v, se_floor;
        int below = 0, above = 0, below_limit = 0;
        for (double s : sg) {
            SandwichParams p;
            p.s = s;
            p.u = u;
            p.G1 = F;
            const double lower = product_limit_lpp(s, u, F);
            double upper = HUGE_VAL;
            if (cs.restricted) {
                p.eps = cs.eps;
                p.surrogate = phat;
                for (double d : dg) {
                    p.delta = d;
                    upper = std::min(upper, sandwich_bounds(BoundKind::LppScale, p).upper);
                }
            }
            emp.push_back(e(s));
            lo.push_back(lower);
            hi.push_back(std::min(upper, 1.0));
            se_lo.push_back(binomial_se(lower, ctx.N()));
            floor_v.push_back(ep(s) * em(s));
            se_floor.push_back(binomial_se(floor_v.back(), ctx.N()));
            if (emp.back() < floor_v.back() - 3 * se_floor.back()) ++below;
            if (emp.back() < lower - 3 * se_lo.back()) ++below_limit;
            if (cs.restricted && emp.back() > hi.back() + 3 * binomial_se(hi.back(), ctx.N())) ++above;
        }
        ctx.cdf_table("max_" + tag + "_floor", sg, emp, floor_v, se_floor);
        ctx.cdf_table("max_" + tag + "_lower", sg, emp, lo, se_lo);
        Json j;
        j["ks_product_limit"] = ks_distance(e, [&](double s) { return product_limit_lpp(s, u, F); });
        j["crossing_probability"] = phat;
        j["lower_misses"] = below;
        j["limit_lower_misses"] = below_limit;
        ctx.check("sandwich lower " + tag, below, 0, "==", below == 0, hard);
        ctx.check("limit product lower " + tag, below_limit, 0, "==", below_limit == 0, false);
        if (cs.restricted) {
            std::vector<double> se_hi;
            for (double h : hi) se_hi.push_back(binomial_se(h, ctx.N()));
            ctx.cdf_table("max_" + tag + "_upper", sg, emp, hi, se_hi);
            j["upper_misses"] = above;
            ctx.check("sandwich upper " + tag, above, 0, "==", above == 0, hard);
        } else {
            ctx.caveat("sandwich upper bound needs k/a < epsilon < 1 and restricted channels; skipped at " + tag);
            if (hard) ctx.check("sandwich upper " + tag + " available", 0, 1, "==", false);
        }
        ctx.stats()["max_" + tag] = j;
    }
    trend_check(ctx, "critical-shock", as, gaps, true);
}

void airy2_twopoint(Ctx& ctx) {
    const double t = ctx.P.num("t"), a = ctx.P.num("a"), u = ctx.P.num("u");
    if (!(t >= 8 && a > 0)) throw DomainError("airy2-twopoint: need t >= 8, a > 0");
    const double t23 = pow23(t);
    const Point ea{ifloor(t + (u / a + a) * t23), ifloor(t)};
    const Point eb{ifloor(t + u * t23 / a), ifloor(t + a * t23)};
    ctx.doc["geometry"]["EA"] = point_json(ea);
    ctx.doc["geometry"]["EB"] = point_json(eb);
    const double center = mu_a(t, a, u).center, scale = kTwo43 * pow13(t);
    const StartSet o = StartSet::point({0, 0});
    std::vector<Channel> ch{channel(o, {ea, eb})};
    const Rect dom = hull_of(ch);
    const Pairs xy = farm<std::pair<double, double>>(ctx.N(), [&](std::size_t r) {
        const WeightField w(ctx.seed(r), o, dom);
        const auto v = sweep(w, std::span<const Channel>(ch));
        return std::pair<double, double>{(v[0].values[0] - center) / scale, (v[0].values[1] - center) / scale};
    });
    const PairSummary ps = pair_summary(ctx, "pair", xy);
    fkg_hard(ctx, "pair", ps);

    std::vector<double> L;
    for (auto [p, q] : xy) L.push_back(std::max(p, q));
    const Ecdf e(L);
    const Cdf F = gue_cdf();
    const auto sg = s_grid(ctx.P), dg = delta_grid(ctx.P);
    const double eps = eps_schedule(a), k = k_schedule(a);
    const bool eps_ok = k / a < eps && eps < 1;
    std::vector<double> emp, lo, hi, se;
    int below = 0, above = 0;
    for (double s : sg) {
        SandwichParams p;
        p.s = s;
        p.u = u;
        p.G1 = F;
        p.eps = eps;
        double up = 1.0;
        if (eps_ok)
            for (double d : dg) {
                p.delta = d;
                up = std::min(up, sandwich_bounds(BoundKind::LppScale, p).upper);
            }
        emp.push_back(e(s));
        lo.push_back(product_limit_lpp(s, u, F));
        hi.push_back(up);
        se.push_back(binomial_se(lo.back(), ctx.N()));
        if (emp.back() < lo.back() - 3 * se.back()) ++below;
        if (emp.back() > up + 3 * binomial_se(up, ctx.N())) ++above;
    }
    ctx.cdf_table("max_lower", sg, emp, lo, se);
    ctx.cdf_table("max_upper", sg, emp, hi, se);
    ctx.stats()["max"] = {{"ks_product_limit", ks_distance(e, [&](double s) { return product_limit_lpp(s, u, F); })},
                          {"lower_misses", below},
                          {"upper_misses", above}};
    ctx.check("bound lower misses", below, 0, "==", below == 0, false);
    ctx.check("bound upper misses", above, 0, "==", above == 0, false);
    ctx.caveat("upper bound uses C e^{-ck} = 0");
}

void airy1_decoupling(Ctx& ctx) {
    const double t = ctx.P.num("t"), wk = ctx.P.num("window.k");
    if (!(t >= 8)) throw DomainError("airy1-decoupling: t must be >= 8");
    const auto as = a_grid(ctx.P);
    const Cdf G = goe_cdf();
    const double k = std::cbrt(0.25);
    const Cdf marg = [G, k](double s) { return G(k * s); };
    std::vector<GapResult> gaps;
    for (double a : as) {
        const std::string tag = tag_of("a", a);
        const LineSample ls = airy1_pairs(ctx, t, a, wk, ctx.P.flag("restricted"), tag);
        const PairSummary ps = pair_summary(ctx, "pair_" + tag, ls.xy);
        fkg_hard(ctx, "pair_" + tag, ps);
        gaps.push_back(ps.gap);
        ctx.check("maximizer origin at window edge " + tag, double(ls.at_edge), 0, "==", ls.at_edge == 0);
        const Ecdf2 e(ls.xy);
        Json& j = ctx.stats()["pair_" + tag];
        j["ks_marginal1"] = ks_distance(e.marginal1(), marg);
        j["ks_marginal2"] = ks_distance(e.marginal2(), marg);
        if (ctx.P.flag("restricted")) j["crossing_probability"] = double(ls.crossed) / double(ctx.N());
    }
    trend_check(ctx, "airy1", as, gaps, true);
}

void airy21_decoupling(Ctx& ctx) {
    const double t = ctx.P.num("t"), b = ctx.P.num("b"), wk = ctx.P.num("window.k");
    if (!(t >= 8 && wk > 0)) throw DomainError("airy21-decoupling: need t >= 8, window.k > 0");
    const auto as = a_grid(ctx.P);
    std::vector<GapResult> gaps;
    const double shift1 = kTwo43 * std::min(0.0, b) * std::min(0.0, b);
    for (double a : as) {
        if (!(a > 0)) throw DomainError("airy21-decoupling: a must be > 0");
        const std::string tag = tag_of("a", a);
        const GeometrySpec g = line_geometry(LineKind::Airy21, a, b, t, wk);
        ctx.doc["geometry"][tag] = geometry_json(g);
        const i64 top = ifloor((std::abs(b) + a) * pow23(t)) + ifloor(wk * pow23(t));
        const LineSample ls =
            line_pairs(ctx, t, 0, top, true, g.points.at("E1"), g.points.at("E2"), shift1, {}, tag);
        const PairSummary ps = pair_summary(ctx, "pair_" + tag, ls.xy);
        fkg_hard(ctx, "pair_" + tag, ps);
        gaps.push_back(ps.gap);
        ctx.check("maximizer origin at window edge " + tag, double(ls.at_edge), 0, "==", ls.at_edge == 0);
    }
    trend_check(ctx, "airy21", as, gaps, true);
}

void timelike_decoupling(Ctx& ctx) {
    const double t = ctx.P.num("t"), tau = ctx.P.num("tau");
    if (!(t >= 8)) throw DomainError("timelike-decoupling: t must be >= 8");
    const auto as = a_grid(ctx.P);
    for (double a : as)
        if (!(a > tau && tau > 0)) throw DomainError("timelike-decoupling: need a > tau > 0 for every a");
    const auto g = grid2(ctx.P), dg = delta_grid(ctx.P);
    const Cdf F = gue_cdf();
    std::vector<GapResult> gaps;
    for (double a : as) {
        const std::string tag = tag_of("a", a);
        const TimelikeSample ts = timelike_pairs(ctx, t, a, tau, tag);
        const PairSummary ps = pair_summary(ctx, "pair_" + tag, ts.xy);
        fkg_hard(ctx, "pair_" + tag, ps);
        gaps.push_back(ps.gap);

        // bounds on P(X_tau <= s, X_a <= zeta); the C e^{-ck} analogue is 0 here
        const Ecdf2 e(ts.xy);
        const auto joint = e.table(g, g);
        const double c = std::cbrt(a / (a - tau)), r = std::cbrt(a / tau);
        SandwichParams p;
        p.G1 = F;
        p.G2 = F;
        p.G0 = [F, r](double x) { return F(x * r); };
        p.c_eps = c;
        std::vector<double> lo(joint.size()), hi(joint.size()), se(joint.size());
        int below = 0, above = 0;
        for (std::size_t i = 0; i < g.size(); ++i)
            for (std::size_t j = 0; j < g.size(); ++j) {
                const std::size_t q = i * g.size() + j;
                p.s = g[j];   // zeta, the far point
                p.s2 = g[i];  // s, the near point
                double up = HUGE_VAL;
                Bounds b;
                for (double d : dg) {
                    p.delta = d;
                    b = sandwich_bounds(BoundKind::General, p);
                    up = std::min(up, b.upper);
                }
                lo[q] = b.lower;
                hi[q] = up;
                se[q] = binomial_se(b.lower, ctx.N());
                if (joint[q] < b.lower - 3 * se[q]) ++below;
                if (joint[q] > up + 3 * binomial_se(up, ctx.N())) ++above;
            }
        ctx.cdf2_table("joint_" + tag + "_lower", g, g, joint, lo, se);
        ctx.cdf2_table("joint_" + tag + "_upper", g, g, joint, hi, se);
        ctx.stats()["pair_" + tag]["bound_lower_misses"] = below;
        ctx.stats()["pair_" + tag]["bound_upper_misses"] = above;
        ctx.check("bound lower misses " + tag, below, 0, "==", below == 0, false);
        ctx.check("bound upper misses " + tag, above, 0, "==", above == 0, false);
    }
    ctx.caveat("timelike bounds are limit statements; finite-t misses are diagnostics");
    trend_check(ctx, "timelike", as, gaps, true);
}

void fkg_floor(Ctx& ctx) {
    const double t = ctx.P.num("t"), a = ctx.P.num("a"), tau = ctx.P.num("tau");
    if (!(t >= 8 && a > tau && tau > 0)) throw DomainError("fkg-floor: need t >= 8, a > tau > 0");
    std::vector<std::pair<std::string, Pairs>> sets;
    sets.push_back({"critical", critical_pairs(ctx, t, a, 0.0, false, "critical").xy});
    sets.push_back({"airy1", airy1_pairs(ctx, t, a, 4.0, false, "airy1").xy});
    sets.push_back({"timelike", timelike_pairs(ctx, t, a, tau, "timelike").xy});
    sets.push_back({"lhat", standardize(lhat_pairs(ctx, t, a, "lhat"))});
    int total = 0;
    for (const auto& [name, xy] : sets) {
        const PairSummary ps = pair_summary(ctx, name, xy);
        fkg_hard(ctx, name, ps);
        total += ps.fkg_violations;
    }
    ctx.stats()["total_violations"] = total;
}

}  // namespace lpplab::detail
