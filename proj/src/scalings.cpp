#include "lpplab/scalings.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "lpplab/errors.hpp"

namespace lpplab {

namespace {

const double kTwo43 = std::cbrt(16.0);  // 2^{4/3}

void require(bool ok, const char* msg) {
    if (!ok) throw DomainError(msg);
}

Point diag_pt(i64 m) { return {-m, m}; }

}  // namespace

bool StartWindow::contains(Point p) const {
    if (p.x + p.y != center.x + center.y) return false;
    const i64 i = p.y - center.y;
    return i >= -half_width && i <= half_width;
}

ScalingSpec mu_sigma_pp(double eta, double ell) {
    require(eta > 0 && std::isfinite(eta), "mu_sigma_pp: eta must be > 0");
    require(ell > 0, "mu_sigma_pp: ell must be > 0");
    const double r = std::sqrt(eta);
    ScalingSpec s;
    s.center = (1 + r) * (1 + r) * ell;
    s.scale = std::pow(eta, -1.0 / 6.0) * std::pow(1 + r, 4.0 / 3.0) * pow13(ell);
    s.exponents = "t";
    return s;
}

ScalingSpec mu_a(double t, double a, double u) {
    require(a != 0, "mu_a: a must be nonzero");
    require(t > 0, "mu_a: t must be > 0");
    const double q = a + u / a;
    ScalingSpec s;
    s.center = 4 * t + 2 * pow23(t) * q - q * q * pow13(t) / 4;
    s.scale = kTwo43 * pow13(t);
    s.exponents = "t,t^2/3,t^1/3";
    return s;
}

Point critical_end(double t, double a, double u) {
    require(a != 0, "critical_end: a must be nonzero");
    return {ifloor(t + u * pow23(t) / a), ifloor(t)};
}

Point l_plus(double t, double a) { return {-ifloor(a * pow23(t)), 0}; }
Point l_minus(double t, double a) { return {0, -ifloor(a * pow23(t))}; }

EPlus eplus(double t, double a, double u, double eps) {
    require(a != 0, "eplus: a must be nonzero");
    require(eps >= 0 && eps <= 1, "eplus: epsilon outside [0,1]");
    const double q = u / a + a;
    const double t23 = pow23(t), t13 = pow13(t);
    EPlus e;
    e.point = {ifloor(t * (1 - eps) + t23 * (u / a - eps * q)), ifloor(t * (1 - eps))};
    e.mu.center = 4 * eps * t + 2 * eps * q * t23 - eps * q * q * t13 / 4;
    e.mu.scale = kTwo43 * t13;
    e.mu.exponents = "t,t^2/3,t^1/3";
    e.c_eps = eps < 1 ? std::pow(1 - eps, -1.0 / 3.0) : HUGE_VAL;
    return e;
}

double k_schedule(double a) {
    require(a > 0, "k_schedule: a must be > 0");
    return std::sqrt(a);
}

double eps_schedule(double a) {
    const double k = k_schedule(a);
    return std::min(2 / std::sqrt(a), (1 + k / a) / 2);
}

ShockParams shock_params_beta(double beta) {
    require(beta >= 0 && beta < 1, "shock_params: beta outside [0,1)");
    ShockParams p;
    p.kind = ShockKind::GueGue;
    p.rho1 = (1 - beta) / 2;
    p.rho2 = (1 + beta) / 2;
    const double c2 = std::cbrt(2.0);
    p.sigma1 = std::pow(1 + beta, 2.0 / 3.0) / (c2 * std::cbrt(1 - beta));
    p.sigma2 = std::pow(1 - beta, 2.0 / 3.0) / (c2 * std::cbrt(1 + beta));
    return p;
}

ShockParams shock_params_rho(double rho1, double rho2) {
    require(rho1 > 0 && rho1 < 1 && rho2 > 0 && rho2 < 1, "shock_params: densities outside (0,1)");
    require(rho1 >= rho2, "shock_params: need rho1 >= rho2");
    ShockParams p;
    p.kind = ShockKind::GoeGoe;
    p.rho1 = rho1;
    p.rho2 = rho2;
    p.c1 = std::pow(1 - rho1, -2.0 / 3.0) * std::cbrt(rho1);
    p.c2 = std::pow(1 - rho2, -2.0 / 3.0) * std::cbrt(rho2);
    return p;
}

TasepMapConstants tasep_map_constants(double T, double a, double u, double s) {
    require(a != 0, "tasep_map_constants: a must be nonzero");
    require(T >= 1, "tasep_map_constants: T must be >= 1");
    TasepMapConstants c;
    const double q = u / a + a;
    c.c1 = -q / 2;
    c.c2 = u / a;
    c.xi2 = q * q / 2 - s / std::cbrt(2.0);
    const double T23 = pow23(T), T13 = pow13(T);
    c.t = ifloor(T / 4 + c.c1 * T23);
    c.M = c.t + ifloor(c.c2 * T23 + c.xi2 * T13);
    const double t = static_cast<double>(c.t);
    const double four43 = std::pow(4.0, 4.0 / 3.0);
    const i64 h = ifloor(-a * (pow23(4 * t) - c.c1 * (2.0 / 3.0) * pow13(t) * four43));
    c.lhat_plus = {h, 0};
    c.lhat_minus = {0, h};
    c.threshold = 4 * t - c.c1 * pow23(t) * std::pow(4.0, 5.0 / 3.0) +
                  c.c1 * c.c1 * (2.0 / 3.0) * pow13(t) * std::pow(4.0, 7.0 / 3.0);
    return c;
}

double particle_number_exact(double T, double a, double u) {
    require(a != 0, "particle_number: a must be nonzero");
    const double q = a + u / a;
    return T / 4 - pow23(T) * q / 2 + pow13(T) * q * q / 4;
}

double particle_number_approx(double T, double beta, double u) {
    require(beta > 0 && beta < 1, "particle_number: beta outside (0,1)");
    const double xi = (u / 2) * (beta - 1) / beta;
    return T * (1 - beta) * (1 - beta) / 4 + xi * pow13(T);
}

TimelikePoint timelike_points(double x, double y, double t) {
    require(x > 0, "timelike_points: x must be > 0");
    require(t > 0, "timelike_points: t must be > 0");
    const double xt = x * t;
    TimelikePoint p;
    p.point = {ifloor(-y * pow23(xt)), 0};
    // signs follow the geometry of P -> (xt, xt), whose horizontal extent is
    // xt + y (xt)^{2/3}; this is what makes the centers add up through P2.
    p.mu.center = 4 * xt + 2 * y * pow23(xt) - y * y / 4 * pow13(xt);
    p.mu.scale = kTwo43 * pow13(xt);
    p.mu.exponents = "t,t^2/3,t^1/3";
    return p;
}

// Scale is the natural one of the segment, 2^{4/3} (tau t)^{1/3}.
TimelikePoint p2_point(double tau, double a, double u, double t) {
    require(tau > 0 && a > tau, "p2_point: need a > tau > 0");
    const double am13 = 1 / std::cbrt(a), a23 = pow23(a);
    TimelikePoint p;
    p.point = {ifloor(tau * t + u * pow23(t) * (tau * am13 - a23)), ifloor(tau * t + 1)};
    p.mu.center = 4 * tau * t + 2 * tau * pow23(t) * u * am13 - u * u * tau * pow13(t) / (4 * a23);
    p.mu.scale = kTwo43 * pow13(tau * t);
    p.mu.exponents = "t,t^2/3,t^1/3";
    return p;
}

namespace {

// E(k) = (floor(t - k t^{2/3}), floor(t + k t^{2/3})).
Point e_of(double k, double t) { return {ifloor(t - k * pow23(t)), ifloor(t + k * pow23(t))}; }

}  // namespace

ForbiddenRegion forbidden_segments(RegionKind kind, double k, const RegionParams& p) {
    require(k > 0, "forbidden_segments: k must be > 0");
    const double t = p.t, t23 = pow23(t);
    const i64 K = ifloor(k * t23);
    const Point e1{ifloor(t), ifloor(t)};
    ForbiddenRegion r;
    switch (kind) {
        case RegionKind::RPlus: {
            const Point ep = eplus(t, p.a, p.u, p.eps).point;
            r.a = {ifloor(-p.a * t23 + k * t23), 0};
            r.b = ep + Point{K, 0};
            break;
        }
        case RegionKind::RMinus: {
            r.a = {0, ifloor(-p.a * t23 + k * t23)};
            r.b = critical_end(t, p.a, p.u) + Point{0, K};
            break;
        }
        case RegionKind::R1: {
            const Point e3 = diag_pt(ifloor(p.a / 4 * t23));
            r.a = e3 + Point{-K, K};
            r.b = e3 + e1 + Point{-K, K};
            break;
        }
        case RegionKind::R2: {
            const Point e5 = diag_pt(ifloor(3 * p.a / 4 * t23));
            r.a = e5 + Point{K, -K};
            r.b = e5 + e1 + Point{K, -K};
            break;
        }
        case RegionKind::R3: {
            const double m = std::abs(p.b) + p.a / 5;
            r.a = diag_pt(ifloor(m * t23)) + Point{-K, K};
            r.b = e_of(m, t) + Point{-K, K};
            break;
        }
        case RegionKind::R4: {
            const double m = std::abs(p.b) + p.a;
            r.a = diag_pt(ifloor(m * t23)) + Point{K, -K};
            r.b = e_of(m, t) + Point{K, -K};
            break;
        }
        default:
            throw DomainError("forbidden_segments: unknown kind");
    }
    return r;
}

GeometrySpec critical_shock_geometry(double t, double a, double u, double eps, double k) {
    require(a > 0, "critical_shock_geometry: a must be > 0");
    GeometrySpec g;
    g.points["E"] = critical_end(t, a, u);
    g.points["E+"] = eplus(t, a, u, eps).point;
    g.points["L+"] = l_plus(t, a);
    g.points["L-"] = l_minus(t, a);
    RegionParams rp;
    rp.t = t;
    rp.a = a;
    rp.u = u;
    rp.eps = eps;
    const ForbiddenRegion rplus = forbidden_segments(RegionKind::RPlus, k, rp);
    const ForbiddenRegion rminus = forbidden_segments(RegionKind::RMinus, k, rp);
    g.regions["R+"] = rplus;
    g.regions["R-"] = rminus;

    // intersection of the two center lines
    const double x1 = rplus.a.x, y1 = rplus.a.y, dx1 = rplus.b.x - x1, dy1 = rplus.b.y - y1;
    const double x2 = rminus.a.x, y2 = rminus.a.y, dx2 = rminus.b.x - x2, dy2 = rminus.b.y - y2;
    const double den = dx1 * dy2 - dy1 * dx2;
    if (den != 0) {
        const double s = ((x2 - x1) * dy2 - (y2 - y1) * dx2) / den;
        g.points["crossing"] = {ifloor(x1 + s * dx1), ifloor(y1 + s * dy1)};
    }
    return g;
}

namespace {

// Cells of `box` on some up-right path from `from` to `to` avoiding `forb`.
std::vector<unsigned char> admissible(const Rect& box, Point from, Point to, const ForbiddenRegion& forb) {
    const i64 W = box.width(), H = box.height();
    std::vector<unsigned char> fwd(static_cast<std::size_t>(W * H), 0), out(fwd.size(), 0);
    auto idx = [&](i64 x, i64 y) { return static_cast<std::size_t>((y - box.lo.y) * W + (x - box.lo.x)); };
    if (!box.contains(from) || !box.contains(to) || forb.contains(from)) return out;
    for (i64 y = from.y; y <= to.y; ++y) {
        const auto iv = forb.row_interval(y);
        for (i64 x = from.x; x <= to.x; ++x) {
            if (x >= iv.first && x <= iv.second) continue;
            bool r = (x == from.x && y == from.y);
            if (!r && x > from.x && fwd[idx(x - 1, y)]) r = true;
            if (!r && y > from.y && fwd[idx(x, y - 1)]) r = true;
            fwd[idx(x, y)] = r;
        }
    }
    if (!fwd[idx(to.x, to.y)]) return out;
    for (i64 y = to.y; y >= from.y; --y) {
        for (i64 x = to.x; x >= from.x; --x) {
            if (!fwd[idx(x, y)]) continue;
            bool r = (x == to.x && y == to.y);
            if (!r && x < to.x && out[idx(x + 1, y)]) r = true;
            if (!r && y < to.y && out[idx(x, y + 1)]) r = true;
            out[idx(x, y)] = r;
        }
    }
    return out;
}

}  // namespace

bool restricted_admissible_disjoint(const GeometrySpec& g) {
    const Point lp = g.points.at("L+"), lm = g.points.at("L-");
    const Point ep = g.points.at("E+"), e = g.points.at("E");
    Rect box{{std::min(lp.x, lm.x), std::min(lp.y, lm.y)},
             {std::max(ep.x, e.x), std::max(ep.y, e.y)}};
    const auto A = admissible(box, lp, ep, g.regions.at("R+"));
    const auto B = admissible(box, lm, e, g.regions.at("R-"));
    for (std::size_t i = 0; i < A.size(); ++i)
        if (A[i] && B[i]) return false;
    return true;
}

GeometrySpec two_density_points(double rho1, double rho2, double xi, double s, double T, double nu) {
    require(rho1 < 1 && rho2 > 0 && rho1 >= rho2, "two_density_points: need 1 > rho1 >= rho2 > 0");
    require(T > 0, "two_density_points: T must be > 0");
    const double T13 = pow13(T);
    const double ex = (1 - rho1 - rho2 + rho1 * rho2) * T - (s - xi) * T13;
    const double ey = rho1 * rho2 * T + xi * T13;
    GeometrySpec g;
    g.points["E"] = {ifloor(ex), ifloor(ey)};
    g.points["S1"] = {ifloor((1 - rho1) * (rho1 - rho2) * T), ifloor(rho1 * (rho2 - rho1) * T)};
    g.points["S2"] = {ifloor((1 - rho2) * (rho2 - rho1) * T), ifloor((rho1 - rho2) * rho2 * T)};
    const double Tn = std::pow(T, nu);
    g.points["Erho2"] = {ifloor(ex - (1 - rho2) * (1 - rho2) * Tn), ifloor(ey - rho2 * rho2 * Tn)};
    return g;
}

GeometrySpec two_density_points_critical(double rho2, double a, double xi, double s, double T) {
    require(a > 0, "two_density_points_critical: a must be > 0");
    require(T > 0, "two_density_points_critical: T must be > 0");
    const double T13 = pow13(T), T23 = pow23(T);
    const double rho1 = rho2 + a / T13;
    require(rho2 > 0 && rho1 < 1, "two_density_points_critical: densities outside (0,1)");
    const double c2 = shock_params_rho(rho1, rho2).c2;
    const double ex = (1 - rho1 - rho2 + rho1 * rho2) * T - xi * T23 * (1 / (a * rho2) - 1 / a) - s * T13 / c2;
    const double ey = rho1 * rho2 * T + xi * T23 / a;
    GeometrySpec g;
    g.points["E"] = {ifloor(ex), ifloor(ey)};
    g.points["S1"] = {ifloor((1 - rho1) * (rho1 - rho2) * T), ifloor(rho1 * (rho2 - rho1) * T)};
    g.points["S2"] = {ifloor((1 - rho2) * (rho2 - rho1) * T), ifloor((rho1 - rho2) * rho2 * T)};
    const double off = T / std::sqrt(a);
    g.points["Erho2"] = {ifloor(ex - (1 - rho2) * (1 - rho2) * off), ifloor(ey - rho2 * rho2 * off)};
    return g;
}

GeometrySpec line_geometry(LineKind kind, double a, double b, double t, double k) {
    require(t >= 1, "line_geometry: t must be >= 1");
    require(k >= 0 && a >= 0, "line_geometry: a, k must be >= 0");
    const double t23 = pow23(t);
    const i64 K = ifloor(k * t23);
    RegionParams rp;
    rp.t = t;
    rp.a = a;
    rp.b = b;
    GeometrySpec g;
    switch (kind) {
        case LineKind::Airy1: {
            const Point e1{ifloor(t), ifloor(t)};
            const i64 A = ifloor(a * t23);
            g.points["E1"] = e1;
            g.points["E2"] = {ifloor(t) - A, ifloor(t) + A};
            g.points["E3"] = diag_pt(ifloor(a / 4 * t23));
            g.points["E4"] = g.points["E3"] + e1;
            g.points["E5"] = diag_pt(ifloor(3 * a / 4 * t23));
            g.points["E6"] = g.points["E5"] + e1;
            g.windows["F1"] = {{0, 0}, K};
            g.windows["F2"] = {diag_pt(A), K};
            if (a > 0) {
                g.regions["R1"] = forbidden_segments(RegionKind::R1, a / 10, rp);
                g.regions["R2"] = forbidden_segments(RegionKind::R2, a / 10, rp);
            }
            break;
        }
        case LineKind::Airy21: {
            const double m7 = std::abs(b) + a, m8 = std::abs(b) + a / 5;
            g.points["E1"] = e_of(b, t);
            g.points["E2"] = e_of(m7, t);
            g.points["E(|b|+a/5)"] = e_of(m8, t);
            g.points["E7"] = diag_pt(ifloor(m7 * t23));
            g.points["E8"] = diag_pt(ifloor(m8 * t23));
            g.windows["F3"] = {g.points["E7"], K};
            g.windows["F4"] = {g.points["E8"], ifloor(k / 2 * t23)};
            if (a > 0) {
                g.regions["R3"] = forbidden_segments(RegionKind::R3, a / 10, rp);
                g.regions["R4"] = forbidden_segments(RegionKind::R4, a / 10, rp);
            }
            break;
        }
        default:
            throw DomainError("line_geometry: unknown kind");
    }
    return g;
}

}  // namespace lpplab
