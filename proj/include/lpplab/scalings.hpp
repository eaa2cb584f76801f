#pragma once

#include <map>
#include <string>

#include "lpplab/lattice.hpp"
#include "lpplab/lpp.hpp"

namespace lpplab {

// center is the full mu*t expression, scale the sigma*t^{1/3} term.
struct ScalingSpec {
    double center = 0.0;
    double scale = 1.0;
    std::string exponents;  // powers of t present in `center`
};

// Lattice points on the line {(-k, k)}: center + i(-1, 1), |i| <= half_width.
struct StartWindow {
    Point center;
    i64 half_width = 0;
    bool contains(Point p) const;
};

struct GeometrySpec {
    std::map<std::string, Point> points;
    std::map<std::string, ForbiddenRegion> regions;
    std::map<std::string, StartWindow> windows;
};

ScalingSpec mu_sigma_pp(double eta, double ell = 1.0);
ScalingSpec mu_a(double t, double a, double u);

// E = (floor(t + u t^{2/3}/a), floor(t)); L+ = (-floor(a t^{2/3}), 0); L- its mirror.
Point critical_end(double t, double a, double u);
Point l_plus(double t, double a);
Point l_minus(double t, double a);

struct EPlus {
    Point point;
    ScalingSpec mu;   // center = mu^eps t; scale 2^{4/3} t^{1/3}, eps enters through G0
    double c_eps = 1.0;
};
EPlus eplus(double t, double a, double u, double eps);

// k(a) = sqrt(a); eps(a) = min(2/sqrt(a), (1 + k(a)/a)/2).
double k_schedule(double a);
double eps_schedule(double a);

enum class ShockKind { GueGue, GoeGoe };
struct ShockParams {
    ShockKind kind = ShockKind::GueGue;
    double rho1 = 0, rho2 = 0;
    double sigma1 = 0, sigma2 = 0;  // GueGue
    double c1 = 0, c2 = 0;          // GoeGoe
};
ShockParams shock_params_beta(double beta);
ShockParams shock_params_rho(double rho1, double rho2);

struct TasepMapConstants {
    double c1 = 0, c2 = 0, xi2 = 0;
    i64 t = 0;
    i64 M = 0;
    Point lhat_plus, lhat_minus;
    double threshold = 0;
};
TasepMapConstants tasep_map_constants(double T, double a, double u, double s);

// Particle number of the critical shock statement and its closed-form approximation.
double particle_number_exact(double T, double a, double u);
double particle_number_approx(double T, double beta, double u);

struct TimelikePoint {
    Point point;
    ScalingSpec mu;
};
TimelikePoint timelike_points(double x, double y, double t);
TimelikePoint p2_point(double tau, double a, double u, double t);

enum class RegionKind { RPlus, RMinus, R1, R2, R3, R4 };

struct RegionParams {
    double t = 1000;
    double a = 1;
    double u = 0;     // RPlus, RMinus
    double eps = 0.5; // RPlus
    double b = 0;     // R3, R4
};
ForbiddenRegion forbidden_segments(RegionKind kind, double k, const RegionParams& p);

// Points E, E+, L+-, R+-(k) and the crossing point of the two segment lines.
GeometrySpec critical_shock_geometry(double t, double a, double u, double eps, double k);

// Every lattice point admissible for the restricted L+ -> E+ problem is
// inadmissible for the restricted L- -> E problem. Exhaustive over the hull.
bool restricted_admissible_disjoint(const GeometrySpec& g);

GeometrySpec two_density_points(double rho1, double rho2, double xi, double s, double T, double nu);
// Critical variant: rho1 = rho2 + a T^{-1/3}, end point E~ and E^{rho2} = E~ - ((1-rho2)^2, rho2^2) T a^{-1/2}.
GeometrySpec two_density_points_critical(double rho2, double a, double xi, double s, double T);

enum class LineKind { Airy1, Airy21 };
// Windows use k; the regions use the fixed width a/10.
GeometrySpec line_geometry(LineKind kind, double a, double b, double t, double k);

}  // namespace lpplab
