// Maximizer geometry and the small-scale statistics.

#include <algorithm>
#include <cmath>

#include "harness_ctx.hpp"
#include "lpplab/scalings.hpp"

namespace lpplab::detail {

namespace {

std::vector<double> sorted_positive(const Params& P, const char* key) {
    auto v = P.vec(key);
    for (double x : v)
        if (!(x > 0)) throw DomainError(std::string(key) + " values must be > 0");
    std::sort(v.begin(), v.end());
    return v;
}

// P(x >= k) per k, with the Laplace-smoothed log used for the decay fit.
struct Exceedance {
    std::vector<double> p, se, logp;
};

Exceedance exceedance(const std::vector<double>& x, const std::vector<double>& ks) {
    Exceedance e;
    const double n = double(x.size());
    for (double k : ks) {
        const double c = double(std::count_if(x.begin(), x.end(), [k](double v) { return v >= k; }));
        e.p.push_back(c / n);
        e.se.push_back(binomial_se(c / n, x.size()));
        e.logp.push_back(std::log((c + 0.5) / (n + 1)));
    }
    return e;
}

Exceedance exceedance_from(const std::vector<double>& p, std::size_t n) {
    Exceedance e;
    for (double v : p) {
        e.p.push_back(v);
        e.se.push_back(binomial_se(v, n));
        e.logp.push_back(std::log((v * double(n) + 0.5) / (double(n) + 1)));
    }
    return e;
}

void decay_checks(Ctx& ctx, const std::string& name, const std::vector<double>& ks, const Exceedance& e) {
    ctx.exceedance_table(name, ks, e.p, e.se);
    int ups = 0;
    for (std::size_t i = 0; i + 1 < e.p.size(); ++i) ups += e.p[i + 1] > e.p[i];
    const double slope = ls_slope(ks, e.logp);
    ctx.stats()[name] = {{"log_slope", slope}, {"increases", ups}};
    ctx.check(name + " exceedance increases in k", ups, 0, "==", ups == 0);
    ctx.check(name + " log-linear slope", slope, 0, "<", slope < 0);
}

double iqr(const Ecdf& e) { return e.quantile(0.75) - e.quantile(0.25); }

}  // namespace

void transversal(Ctx& ctx) {
    const double t = ctx.P.num("t");
    if (!(t >= 8)) throw DomainError("transversal: t must be >= 8");
    const auto ks = sorted_positive(ctx.P, "k");
    const Point end{ifloor(t), ifloor(t)};
    const StartSet o = StartSet::point({0, 0});
    const Rect dom{{0, 0}, end};
    const auto devs = farm<std::pair<double, double>>(ctx.N(), [&](std::size_t r) {
        const WeightField w(ctx.seed(r), o, dom);
        const LppResult res = last_passage(w, o, end, true);
        const PathStats st = path_stats(res, {0, 0}, end, t);
        return std::pair<double, double>{st.max_deviation, st.max_perp};
    });
    std::vector<double> dev, perp;
    for (auto [d, p] : devs) {
        dev.push_back(d);
        perp.push_back(p);
    }
    ctx.doc["geometry"]["end"] = point_json(end);
    decay_checks(ctx, "max_deviation", ks, exceedance(dev, ks));
    const Exceedance ep = exceedance(perp, ks);
    ctx.exceedance_table("max_perp", ks, ep.p, ep.se);
    ctx.stats()["max_perp"] = {{"log_slope", ls_slope(ks, ep.logp)}};
    const Ecdf e(dev);
    ctx.stats()["max_deviation"]["median"] = e.quantile(0.5);
}

void slow_decorrelation(Ctx& ctx) {
    const double t = ctx.P.num("t"), a = ctx.P.num("a"), u = ctx.P.num("u");
    if (!(t >= 8 && a > 0)) throw DomainError("slow-decorrelation: need t >= 8, a > 0");
    auto eps = ctx.P.vec("eps");
    for (double e : eps)
        if (!(e > 0 && e < 1)) throw DomainError("slow-decorrelation: eps values must be in (0,1)");
    std::sort(eps.begin(), eps.end(), std::greater<>());
    const int B = int(ctx.P.integer("bootstrap"));
    if (B < 2) throw DomainError("slow-decorrelation: bootstrap must be >= 2");

    const Point lp = l_plus(t, a), E = critical_end(t, a, u);
    std::vector<Point> ends{E};
    std::vector<double> mu;
    for (double e : eps) {
        const EPlus ep = eplus(t, a, u, e);
        ends.push_back(ep.point);
        mu.push_back(ep.mu.center);
        ctx.doc["geometry"][tag_of("E+ eps", e)] = point_json(ep.point);
    }
    ctx.doc["geometry"]["L+"] = point_json(lp);
    ctx.doc["geometry"]["E"] = point_json(E);
    const StartSet s = StartSet::point(lp);
    std::vector<Channel> ch{channel(s, ends)};
    const Rect dom = hull_of(ch);
    const auto rows = farm<std::vector<double>>(ctx.N(), [&](std::size_t r) {
        const WeightField w(ctx.seed(r), s, dom);
        const auto v = sweep(w, std::span<const Channel>(ch));
        std::vector<double> d;
        for (std::size_t i = 0; i < eps.size(); ++i)
            d.push_back((v[0].values[i + 1] + mu[i] - v[0].values[0]) / pow13(t));
        return d;
    });
    std::vector<double> q, se;
    for (std::size_t i = 0; i < eps.size(); ++i) {
        std::vector<double> x;
        for (const auto& r : rows) x.push_back(r[i]);
        const Ecdf e(x);
        q.push_back(iqr(e));
        se.push_back(bootstrap_se(x, iqr, B, ctx.seed(0, tag_of("bootstrap eps", eps[i]))));
        ctx.stats()[tag_of("eps", eps[i])] = {{"iqr", q.back()},
                                              {"iqr_se", se.back()},
                                              {"median", e.quantile(0.5)},
                                              {"iqr_over_eps13", q.back() / std::cbrt(eps[i])}};
    }
    for (std::size_t i = 0; i + 1 < eps.size(); ++i) {
        const double d = q[i + 1] - q[i], lim = 2 * std::sqrt(se[i] * se[i] + se[i + 1] * se[i + 1]);
        ctx.check("iqr(" + tag_of("eps", eps[i + 1]) + ") - iqr(" + tag_of("eps", eps[i]) + ")", d, lim, "<=",
                  d <= lim);
    }
}

void crossing(Ctx& ctx) {
    const double t = ctx.P.num("t"), a = ctx.P.num("a"), u = ctx.P.num("u");
    if (!(t >= 8 && a > 0)) throw DomainError("crossing: need t >= 8, a > 0");
    const auto ks = sorted_positive(ctx.P, "k");
    const double eps = ctx.P.opt("eplus.epsilon").value_or(eps_schedule(a));
    if (!(eps > 0 && eps < 1)) throw DomainError("crossing: epsilon must be in (0,1)");

    std::vector<GeometrySpec> gs;
    for (double k : ks) {
        gs.push_back(critical_shock_geometry(t, a, u, eps, k));
        const auto& g = gs.back();
        Json j;
        j["R+"] = {point_json(g.regions.at("R+").a), point_json(g.regions.at("R+").b)};
        j["R-"] = {point_json(g.regions.at("R-").a), point_json(g.regions.at("R-").b)};
        if (g.points.count("crossing")) j["crossing"] = point_json(g.points.at("crossing"));
        j["k_over_a_below_eps"] = k / a < eps;
        j["restricted_disjoint"] = restricted_admissible_disjoint(g);
        ctx.doc["geometry"][tag_of("k", k)] = j;
    }
    const GeometrySpec& g0 = gs.front();
    const Point lp = g0.points.at("L+"), lm = g0.points.at("L-"), E = g0.points.at("E"), Ep = g0.points.at("E+");
    ctx.doc["geometry"]["epsilon"] = eps;
    ctx.doc["geometry"]["L+"] = point_json(lp);
    ctx.doc["geometry"]["L-"] = point_json(lm);
    ctx.doc["geometry"]["E"] = point_json(E);
    ctx.doc["geometry"]["E+"] = point_json(Ep);

    const StartSet sp = StartSet::point(lp), sm = StartSet::point(lm);
    std::vector<Channel> ch{channel(sp, {Ep}), channel(sm, {E})};
    for (const auto& g : gs) {
        ch.push_back(channel(sp, {Ep}, g.regions.at("R+")));
        ch.push_back(channel(sm, {E}, g.regions.at("R-")));
    }
    const StartSet zero = StartSet::points({lm, lp});
    const Rect dom = hull_of(ch);
    struct R {
        std::vector<char> hit, differs;
    };
    const std::size_t nk = ks.size();
    const auto rs = farm<R>(ctx.N(), [&](std::size_t r) {
        const WeightField w(ctx.seed(r), zero, dom);
        const auto v = sweep(w, std::span<const Channel>(ch));
        const LppResult pp = last_passage(w, sp, Ep, true), pm = last_passage(w, sm, E, true);
        R o;
        for (std::size_t i = 0; i < nk; ++i) {
            const auto& rp = gs[i].regions.at("R+");
            const auto& rm = gs[i].regions.at("R-");
            const bool hp = std::any_of(pp.path->begin(), pp.path->end(), [&](Point q) { return rp.contains(q); });
            const bool hm = std::any_of(pm.path->begin(), pm.path->end(), [&](Point q) { return rm.contains(q); });
            const bool dp = v[2 + 2 * i].values[0] != v[0].values[0];
            const bool dm = v[3 + 2 * i].values[0] != v[1].values[0];
            o.hit.push_back(char(hp) | char(hm) << 1);
            o.differs.push_back(char(dp) | char(dm) << 1);
        }
        return o;
    });
    std::vector<double> pk_hit, pk_diff, se;
    std::size_t mismatches = 0;
    for (std::size_t i = 0; i < nk; ++i) {
        double h = 0, d = 0, hp = 0, hm = 0;
        for (const auto& r : rs) {
            h += r.hit[i] != 0;
            d += r.differs[i] != 0;
            hp += r.hit[i] & 1;
            hm += (r.hit[i] >> 1) & 1;
            mismatches += r.hit[i] != r.differs[i];
        }
        const double n = double(ctx.N());
        pk_hit.push_back(h / n);
        pk_diff.push_back(d / n);
        se.push_back(binomial_se(h / n, ctx.N()));
        ctx.stats()[tag_of("k", ks[i])] = {
            {"p_hit", h / n}, {"p_hit_plus", hp / n}, {"p_hit_minus", hm / n}, {"p_restricted_differs", d / n}};
    }
    ctx.check("hit vs restricted-differs mismatches", double(mismatches), 0, "==", mismatches == 0);
    decay_checks(ctx, "hit", ks, exceedance_from(pk_hit, ctx.N()));
    ctx.exceedance_table("restricted_differs", ks, pk_diff, se);
}

void localshift(Ctx& ctx) {
    auto Ks = ctx.P.vec("K");
    for (double k : Ks)
        if (!(k >= 1 && k == std::floor(k))) throw DomainError("localshift: K must be integers >= 1");
    std::sort(Ks.begin(), Ks.end());
    const double v = ctx.P.num("v"), gamma = ctx.P.num("gamma");
    if (!(gamma >= 0 && gamma <= 1.0 / 3.0)) throw DomainError("localshift: gamma outside [0,1/3]");
    std::vector<double> sd, sd_se;
    double last_mean = 0;
    for (double Kd : Ks) {
        const i64 K = i64(Kd);
        const i64 shift = ifloor(std::pow(Kd, gamma) * v);
        const Rect dom{{0, 0}, {K + std::max<i64>(shift, 0), K}};
        const StartSet o = StartSet::point({0, 0});
        const std::string tag = tag_of("K", Kd);
        const auto x = farm<double>(ctx.N(), [&](std::size_t r) {
            return local_shift_check(WeightField(ctx.seed(r, tag), o, dom), K, v, gamma);
        });
        double m = 0, q = 0;
        for (double y : x) m += y;
        m /= double(x.size());
        for (double y : x) q += (y - m) * (y - m);
        const double s = std::sqrt(q / double(x.size() > 1 ? x.size() - 1 : 1));
        sd.push_back(s);
        sd_se.push_back(s / std::sqrt(2.0 * double(std::max<std::size_t>(x.size() - 1, 1))));
        last_mean = m;
        ctx.stats()[tag] = {{"mean", m}, {"mean_se", s / std::sqrt(double(x.size()))}, {"sd", s}, {"shift", shift}};
    }
    for (std::size_t i = 0; i + 1 < sd.size(); ++i) {
        const double d = sd[i + 1] - sd[i];
        const double lim = 2 * std::sqrt(sd_se[i] * sd_se[i] + sd_se[i + 1] * sd_se[i + 1]);
        ctx.check("sd(" + tag_of("K", Ks[i + 1]) + ") - sd(" + tag_of("K", Ks[i]) + ")", d, lim, "<=", d <= lim);
    }
    const double tol = ctx.P.num("mean_tol");
    ctx.check("|mean| at " + tag_of("K", Ks.back()), std::abs(last_mean), tol, "<=", std::abs(last_mean) <= tol);
}

}  // namespace lpplab::detail
