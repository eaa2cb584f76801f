#include "lpplab/harness.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "harness_ctx.hpp"

namespace lpplab {

namespace {

using namespace detail;

struct Entry {
    CatalogEntry info;
    ExperimentFn fn;
    Json schema;
};

Json grid_keys(Json j) {
    j["s_lo"] = -4.0;
    j["s_hi"] = 4.0;
    j["s_n"] = 17;
    return j;
}

Json grid2_keys(Json j) {
    j["g2_lo"] = -5.0;
    j["g2_hi"] = 3.0;
    j["g2_n"] = 21;
    return j;
}

const std::vector<Entry>& entries() {
    static const std::vector<Entry> e = [] {
        std::vector<Entry> v;
        auto add = [&](const char* id, const char* summary, const char* ref, ExperimentFn fn, Json schema) {
            v.push_back({{id, summary, ref}, fn, std::move(schema)});
        };
        const Json none = Json::object();
        add("step-gue", "step TASEP particle near T/4, rescaled", "F_GUE(s)", step_gue,
            grid_keys({{"T", 1000.0}, {"u", 0.0}, {"ks_tol", 0.12}}));
        add("flat-goe", "flat TASEP with density rho", "F_GOE(2^{2/3} s)", flat_goe,
            grid_keys({{"T", 1000.0}, {"rho", 0.5}, {"u", 0.0}, {"ks_tol", 0.08}}));
        add("shock-gue2", "TASEP at the beta shock", "F_GUE((s-xi/rho1)/sigma1) F_GUE((s-xi/rho2)/sigma2)",
            shock_gue2, grid_keys({{"T", 1000.0}, {"beta", 0.5}, {"xi", 0.0}, {"ks_tol", 0.08}}));
        add("critical-shock-lpp", "LPP from {L+, L-} to E across a",
            "F_GUE(s) F_GUE(s - u/2^{4/3}) lower, eps/delta sandwich upper", critical_shock_lpp,
            grid2_keys(grid_keys({{"t", 1000.0},
                                  {"a", Json::array({1.0, 2.0, 4.0, 8.0})},
                                  {"u", 0.0},
                                  {"sandwich_a", Json::array({2.0, 4.0})},
                                  {"delta_hi", 4.0},
                                  {"delta_n", 81},
                                  {"restricted", true},
                                  {"scalings", {{"mu_a", nullptr}, {"eplus.epsilon", nullptr}, {"forbidden.k", nullptr}}}})));
        add("critical-shock-tasep", "TASEP with a T^{2/3} gap, against its LPP mapping",
            "F_GUE(s) F_GUE(s - u 2^{4/3}) lower, eps/delta sandwich upper", critical_shock_tasep,
            grid2_keys(grid_keys({{"T", 2000.0},
                                  {"a", 2.0},
                                  {"u", 0.0},
                                  {"delta_hi", 4.0},
                                  {"delta_n", 81},
                                  {"scalings", {{"eplus.epsilon", nullptr}}}})));
        add("shock-flat-goe2", "two-density TASEP at the shock", "F_GOE(2^{2/3}(s-xi/rho1)c1) F_GOE(2^{2/3}(s-xi/rho2)c2)",
            shock_flat_goe2,
            grid2_keys(grid_keys({{"T", 1000.0},
                                  {"rho1", 0.75},
                                  {"rho2", 0.25},
                                  {"xi", 0.0},
                                  {"ks_tol", 0.15},
                                  {"scalings", {{"nu", 0.9}}}})));
        add("airy2-twopoint", "two point-to-point times from the origin", "F_GUE(s) F_GUE(s - u/2^{4/3}) lower",
            airy2_twopoint,
            grid2_keys(grid_keys({{"t", 1000.0}, {"a", 2.0}, {"u", 0.0}, {"delta_hi", 4.0}, {"delta_n", 81}})));
        add("airy1-decoupling", "line-to-point times at E1, E2 across a", "F_GOE(2^{-2/3} s) marginals, product joint",
            airy1_decoupling,
            grid2_keys({{"t", 1000.0},
                        {"a", Json::array({1.0, 2.0, 4.0, 8.0})},
                        {"window.k", 4.0},
                        {"restricted", false}}));
        add("airy21-decoupling", "half-line-to-point times at E(b), E(|b|+a)", "product of marginals",
            airy21_decoupling,
            grid2_keys({{"t", 1000.0},
                        {"a", Json::array({1.0, 2.0, 4.0, 8.0})},
                        {"b", 0.0},
                        {"window.k", 4.0}}));
        add("timelike-decoupling", "times to (tau t, tau t) and (a t, a t) from the origin",
            "F_GUE(s) F_GUE(zeta) lower, a/(a-tau) sandwich upper", timelike_decoupling,
            grid2_keys({{"t", 1000.0},
                        {"tau", 0.5},
                        {"a", Json::array({1.0, 2.0, 4.0, 8.0})},
                        {"delta_hi", 4.0},
                        {"delta_n", 81}}));
        add("transversal", "maximizer deviation from the diagonal", "P(dev >= k t^{2/3}) <= C e^{-ck}", transversal,
            {{"t", 1000.0}, {"k", Json::array({0.5, 1.0, 1.5, 2.0})}});
        add("slow-decorrelation", "L(L+ -> E+) + mu^eps t - L(L+ -> E) over eps", "spread of order eps^{1/3}",
            slow_decorrelation,
            {{"t", 1000.0},
             {"a", 4.0},
             {"u", 0.0},
             {"eps", Json::array({0.4, 0.2, 0.1})},
             {"bootstrap", 200}});
        add("crossing", "maximizers hitting R+-(k); restricted vs unrestricted", "P(hit) <= C e^{-ck}", crossing,
            {{"t", 1000.0},
             {"a", 4.0},
             {"u", 0.0},
             {"k", Json::array({0.5, 1.0, 1.5, 2.0})},
             {"scalings", {{"eplus.epsilon", nullptr}}}});
        add("tasep-lpp-consistency", "TASEP x_n(T) against the LPP-induced law", "two-sample KS",
            tasep_lpp_consistency,
            {{"T", 100.0}, {"n", Json::array({0.0, 10.0, 25.0})}, {"ks_tol", 0.02}});
        add("density-profile", "averaged particle density", "(1-xi)/2 on step data; jump rho1-rho2", density_profile,
            {{"T", 2000.0},
             {"bin", 0.05},
             {"xi_lo", -0.9},
             {"xi_hi", 0.9},
             {"tol", 0.05},
             {"rho1", 0.75},
             {"rho2", 0.25},
             {"jump_tol", 0.1}});
        add("fkg-floor", "joint CDF against the product of marginals in four geometries",
            "joint >= product - 3 SE", fkg_floor, grid2_keys({{"t", 1000.0}, {"a", 2.0}, {"tau", 0.5}}));
        add("localshift", "(L(K+K^g v, K) - L(K, K) - 2 v K^g)/K^{1/3}", "concentrates at 0", localshift,
            {{"K", Json::array({250.0, 500.0, 1000.0, 2000.0})},
             {"v", 1.0},
             {"gamma", 1.0 / 3.0},
             {"mean_tol", 0.1}});
        return v;
    }();
    return e;
}

const Entry& find_entry(const std::string& id) {
    for (const auto& e : entries())
        if (e.info.id == id) return e;
    throw ConfigError("unknown experiment id: " + id);
}

// Type of a given value must match the schema default; null defaults take numbers.
void check_type(const std::string& key, const Json& def, const Json& val) {
    auto bad = [&](const char* want) { throw ConfigError("config key '" + key + "' must be " + want); };
    if (def.is_null()) {
        if (!val.is_null() && !val.is_number()) bad("a number");
    } else if (def.is_boolean()) {
        if (!val.is_boolean()) bad("a boolean");
    } else if (def.is_number_integer() || def.is_number_unsigned()) {
        if (!val.is_number_integer() && !val.is_number_unsigned()) bad("an integer");
    } else if (def.is_number()) {
        if (!val.is_number()) bad("a number");
    } else if (def.is_array()) {
        if (val.is_number()) return;
        if (!val.is_array() || val.empty()) bad("a nonempty array of numbers");
        for (const auto& x : val)
            if (!x.is_number()) bad("a nonempty array of numbers");
    } else if (def.is_string()) {
        if (!val.is_string()) bad("a string");
    }
}

void overlay(Json& into, const Json& schema, const Json& given, const std::string& prefix) {
    for (const auto& [k, val] : given.items()) {
        if (!schema.contains(k)) throw ConfigError("unknown config key: " + prefix + k);
        const Json& def = schema.at(k);
        if (def.is_object()) {
            if (!val.is_object()) throw ConfigError("config key '" + prefix + k + "' must be an object");
            overlay(into[k], def, val, prefix + k + ".");
            continue;
        }
        check_type(prefix + k, def, val);
        into[k] = (def.is_array() && val.is_number()) ? Json::array({val}) : val;
    }
}

std::string fmt_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

}  // namespace

const std::vector<CatalogEntry>& catalog() {
    static const std::vector<CatalogEntry> c = [] {
        std::vector<CatalogEntry> v;
        for (const auto& e : entries()) v.push_back(e.info);
        return v;
    }();
    return c;
}

Params::Params(Json schema, const Json& given) : v_(std::move(schema)) {
    if (!given.is_object()) throw ConfigError("config parameters must be an object");
    const Json def = v_;
    overlay(v_, def, given, "");
}

const Json& Params::at(const std::string& key) const {
    if (v_.contains(key)) return v_.at(key);
    if (v_.contains("scalings")) {
        const Json& sc = v_["scalings"];
        if (sc.contains(key)) return sc.at(key);
        if (key.rfind("scalings.", 0) == 0 && sc.contains(key.substr(9))) return sc.at(key.substr(9));
    }
    throw ConfigError("missing parameter: " + key);
}

double Params::num(const std::string& key) const {
    const Json& j = at(key);
    if (!j.is_number()) throw ConfigError("parameter '" + key + "' is not a number");
    return j.get<double>();
}

i64 Params::integer(const std::string& key) const {
    const Json& j = at(key);
    if (!j.is_number_integer() && !j.is_number_unsigned()) throw ConfigError("parameter '" + key + "' is not an integer");
    return j.get<i64>();
}

std::vector<double> Params::vec(const std::string& key) const {
    const Json& j = at(key);
    if (j.is_number()) return {j.get<double>()};
    std::vector<double> out;
    for (const auto& x : j) out.push_back(x.get<double>());
    return out;
}

bool Params::flag(const std::string& key) const {
    const Json& j = at(key);
    if (!j.is_boolean()) throw ConfigError("parameter '" + key + "' is not a boolean");
    return j.get<bool>();
}

std::optional<double> Params::opt(const std::string& key) const {
    const Json& j = at(key);
    if (j.is_null()) return std::nullopt;
    return j.get<double>();
}

ExperimentConfig make_config(const std::string& id, const Json& doc) {
    const Entry& e = find_entry(id);
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");
    ExperimentConfig cfg;
    cfg.id = id;
    Json rest = Json::object();
    for (const auto& [k, v] : doc.items()) {
        if (k == "experiment") {
            if (!v.is_string() || v.get<std::string>() != id)
                throw ConfigError("config names experiment '" + v.dump() + "' but '" + id + "' was requested");
        } else if (k == "seed") {
            if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<i64>() >= 0))
                throw ConfigError("seed must be a nonnegative integer");
            cfg.seed = v.get<std::uint64_t>();
        } else if (k == "replicas") {
            if (!v.is_number_integer() || v.get<i64>() < 1) throw ConfigError("replicas must be an integer >= 1");
            cfg.replicas = v.get<std::size_t>();
        } else if (k == "threads") {
            if (!v.is_number_integer() || v.get<i64>() < 0) throw ConfigError("threads must be an integer >= 0");
            cfg.threads = v.get<int>();
        } else {
            rest[k] = v;
        }
    }
    cfg.params = Params(e.schema, rest);
    return cfg;
}

ExperimentConfig load_config(const std::string& id, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    Json doc;
    try {
        doc = Json::parse(in);
    } catch (const Json::parse_error& ex) {
        throw ConfigError("config file " + path + ": " + ex.what());
    }
    return make_config(id, doc);
}

Json default_config(const std::string& id) {
    const Entry& e = find_entry(id);
    Json j;
    j["experiment"] = id;
    j["seed"] = ExperimentConfig{}.seed;
    j["replicas"] = ExperimentConfig{}.replicas;
    for (const auto& [k, v] : e.schema.items()) j[k] = v;
    return j;
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
    const Entry& e = find_entry(cfg.id);
    if (cfg.replicas < 1) throw ConfigError("replicas must be >= 1");
    if (cfg.threads > 0) omp_set_num_threads(cfg.threads);
    const auto t0 = std::chrono::steady_clock::now();

    Ctx ctx(cfg);
    ctx.doc["experiment"] = cfg.id;
    ctx.doc["reference"] = e.info.reference;
    Json echo;
    echo["seed"] = cfg.seed;
    echo["replicas"] = cfg.replicas;
    echo["params"] = cfg.params.values();
    ctx.doc["config"] = echo;
    ctx.doc["geometry"] = Json::object();
    ctx.doc["statistics"] = Json::object();
    ctx.doc["checks"] = Json::array();
    ctx.doc["caveats"] = Json::array();
    e.fn(ctx);
    ctx.doc["pass"] = ctx.pass;

    ExperimentReport rep;
    rep.doc = std::move(ctx.doc);
    rep.tables = std::move(ctx.tables);
    rep.pass = ctx.pass;
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    rep.threads = omp_get_max_threads();
    return rep;
}

std::string format_csv(const CsvTable& t) {
    std::ostringstream os;
    for (std::size_t i = 0; i < t.header.size(); ++i) os << (i ? "," : "") << t.header[i];
    os << '\n';
    for (const auto& r : t.rows) {
        for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << fmt_num(r[i]);
        os << '\n';
    }
    return os.str();
}

void write_outputs(const ExperimentReport& rep, const std::string& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    auto put = [&](const std::string& name, const std::string& body) {
        std::ofstream out(fs::path(dir) / name, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + (fs::path(dir) / name).string());
        out << body;
    };
    put("report.json", rep.doc.dump(2) + "\n");
    for (const auto& t : rep.tables) put(t.name, format_csv(t));
    Json timing;
    timing["seconds"] = rep.seconds;
    timing["threads"] = rep.threads;
    put("timing.json", timing.dump(2) + "\n");
}

namespace detail {

void Ctx::check(const std::string& name, double value, double limit, const std::string& rel, bool ok, bool hard) {
    Json c;
    c["name"] = name;
    c["value"] = value;
    c["limit"] = limit;
    c["relation"] = rel;
    c["pass"] = ok;
    c["hard"] = hard;
    doc["checks"].push_back(c);
    if (hard && !ok) pass = false;
}

void Ctx::caveat(const std::string& text) {
    for (const auto& c : doc["caveats"])
        if (c == text) return;
    doc["caveats"].push_back(text);
}

void Ctx::cdf_table(const std::string& stat, const std::vector<double>& s, const std::vector<double>& emp,
                    const std::vector<double>& ref, const std::vector<double>& se) {
    CsvTable t{"cdf_" + stat + ".csv", {"s", "empirical", "reference", "gap", "se"}, {}};
    for (std::size_t i = 0; i < s.size(); ++i) t.rows.push_back({s[i], emp[i], ref[i], emp[i] - ref[i], se[i]});
    tables.push_back(std::move(t));
}

void Ctx::cdf2_table(const std::string& stat, const std::vector<double>& g1, const std::vector<double>& g2,
                     const std::vector<double>& joint, const std::vector<double>& ref,
                     const std::vector<double>& se) {
    CsvTable t{"cdf_" + stat + ".csv", {"s", "s2", "empirical", "reference", "gap", "se"}, {}};
    for (std::size_t i = 0; i < g1.size(); ++i)
        for (std::size_t j = 0; j < g2.size(); ++j) {
            const std::size_t q = i * g2.size() + j;
            t.rows.push_back({g1[i], g2[j], joint[q], ref[q], joint[q] - ref[q], se[q]});
        }
    tables.push_back(std::move(t));
}

void Ctx::exceedance_table(const std::string& name, const std::vector<double>& k, const std::vector<double>& p,
                           const std::vector<double>& se) {
    CsvTable t{"exceedance_" + name + ".csv", {"k", "probability", "se"}, {}};
    for (std::size_t i = 0; i < k.size(); ++i) t.rows.push_back({k[i], p[i], se[i]});
    tables.push_back(std::move(t));
}

std::vector<double> s_grid(const Params& P) {
    return linspace(P.num("s_lo"), P.num("s_hi"), int(P.integer("s_n")));
}

std::vector<double> grid2(const Params& P) {
    return linspace(P.num("g2_lo"), P.num("g2_hi"), int(P.integer("g2_n")));
}

std::string tag_of(const char* name, double v) { return std::string(name) + "=" + fmt_num(v); }

PairSummary pair_summary(Ctx& ctx, const std::string& stat, const std::vector<std::pair<double, double>>& xy) {
    const auto g = grid2(ctx.P);
    const Ecdf2 e(xy);
    const auto joint = e.table(g, g);
    const Ecdf m1 = e.marginal1(), m2 = e.marginal2();
    std::vector<double> prod(joint.size()), se(joint.size());
    PairSummary out;
    out.worst_fkg = HUGE_VAL;
    for (std::size_t i = 0; i < g.size(); ++i)
        for (std::size_t j = 0; j < g.size(); ++j) {
            const std::size_t q = i * g.size() + j;
            prod[q] = m1(g[i]) * m2(g[j]);
            se[q] = binomial_se(prod[q], e.size());
            const double slack = joint[q] - prod[q] + 3 * se[q];
            out.worst_fkg = std::min(out.worst_fkg, slack);
            if (slack < 0) ++out.fkg_violations;
        }
    out.gap = decoupling_gap(joint, prod, e.size());
    ctx.cdf2_table(stat, g, g, joint, prod, se);
    Json j;
    j["gap_signed"] = out.gap.signed_sup;
    j["gap_abs"] = out.gap.abs_sup;
    j["gap_se"] = out.gap.se;
    j["gap_at"] = {g[out.gap.argmax / g.size()], g[out.gap.argmax % g.size()]};
    j["fkg_violations"] = out.fkg_violations;
    j["fkg_min_slack"] = out.worst_fkg;
    ctx.stats()[stat] = j;
    return out;
}

std::vector<std::pair<double, double>> standardize(std::vector<std::pair<double, double>> xy) {
    const double n = double(xy.size());
    double m1 = 0, m2 = 0;
    for (auto [a, b] : xy) {
        m1 += a;
        m2 += b;
    }
    m1 /= n;
    m2 /= n;
    double v1 = 0, v2 = 0;
    for (auto [a, b] : xy) {
        v1 += (a - m1) * (a - m1);
        v2 += (b - m2) * (b - m2);
    }
    const double s1 = v1 > 0 ? std::sqrt(v1 / n) : 1.0, s2 = v2 > 0 ? std::sqrt(v2 / n) : 1.0;
    for (auto& [a, b] : xy) {
        a = (a - m1) / s1;
        b = (b - m2) / s2;
    }
    return xy;
}

double compare_1d(Ctx& ctx, const std::string& stat, const std::vector<double>& x, const Cdf& ref, double tol,
                  bool hard) {
    const Ecdf e(x);
    const double ks = ks_distance(e, ref);
    const auto s = s_grid(ctx.P);
    std::vector<double> emp, rv, se;
    for (double v : s) {
        emp.push_back(e(v));
        rv.push_back(ref(v));
        se.push_back(binomial_se(emp.back(), e.size()));
    }
    ctx.cdf_table(stat, s, emp, rv, se);
    double m = 0, q = 0;
    for (double v : x) m += v;
    m /= double(x.size());
    for (double v : x) q += (v - m) * (v - m);
    Json j;
    j["ks"] = ks;
    j["mean"] = m;
    j["sd"] = std::sqrt(q / double(x.size()));
    j["median"] = e.quantile(0.5);
    ctx.stats()[stat] = j;
    ctx.check("ks " + stat, ks, tol, "<=", ks <= tol, hard);
    return ks;
}

i64 position_from_row(const std::vector<double>& L, i64 m_lo, i64 n, double T, bool& censored) {
    std::size_t c = 0;
    while (c < L.size() && L[c] <= T) ++c;
    censored = c == 0 || c == L.size();
    return m_lo + i64(c) - 1 - n;
}

std::vector<Point> row_ends(i64 n, i64 m_lo, i64 m_hi) {
    std::vector<Point> e;
    for (i64 m = m_lo; m <= m_hi; ++m) e.push_back({m, n});
    return e;
}

void trend_check(Ctx& ctx, const std::string& name, const std::vector<double>& a,
                 const std::vector<GapResult>& gaps, bool hard) {
    for (std::size_t i = 0; i + 1 < gaps.size(); ++i) {
        const double se = std::sqrt(gaps[i].se * gaps[i].se + gaps[i + 1].se * gaps[i + 1].se);
        const double d = gaps[i + 1].signed_sup - gaps[i].signed_sup;
        ctx.check(name + " gap(a=" + fmt_num(a[i + 1]) + ") - gap(a=" + fmt_num(a[i]) + ")", d, 2 * se, "<=",
                  d <= 2 * se, hard);
    }
}

double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = double(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxx > 0 ? sxy / sxx : 0.0;
}

Json point_json(Point p) { return Json::array({p.x, p.y}); }

Rect hull_of(const std::vector<Channel>& chans) {
    Rect r{{std::numeric_limits<i64>::max(), std::numeric_limits<i64>::max()},
           {std::numeric_limits<i64>::min(), std::numeric_limits<i64>::min()}};
    for (const auto& c : chans) {
        for (auto p : c.start.pts) {
            r.lo.x = std::min(r.lo.x, p.x);
            r.lo.y = std::min(r.lo.y, p.y);
        }
        for (auto p : c.ends) {
            r.hi.x = std::max(r.hi.x, p.x);
            r.hi.y = std::max(r.hi.y, p.y);
        }
    }
    if (r.empty()) r = {{0, 0}, {0, 0}};
    return r;
}

Channel channel(const StartSet& s, std::vector<Point> ends, std::optional<ForbiddenRegion> f, bool track) {
    if (ends.empty()) throw DomainError("channel without end points");
    Point corner = ends.front();
    for (auto p : ends) corner = {std::max(corner.x, p.x), std::max(corner.y, p.y)};
    Channel c{s.truncate(corner), f, std::move(ends), track};
    if (c.start.pts.empty()) throw NoAdmissiblePath("channel start set is empty below its end points");
    return c;
}

}  // namespace detail

}  // namespace lpplab
