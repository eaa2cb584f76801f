#pragma once

#include <functional>
#include <memory>
#include <vector>

namespace lpplab {

// Range-checked: x in [-40, 200].
double airy_ai(double x);
double airy_ai_prime(double x);

enum class Ensemble { GUE, GOE };

struct QuadRule {
    std::vector<double> nodes, weights;  // on [-1, 1]
};
QuadRule gauss_legendre(int n);

// Fredholm determinant on (s, inf), Nystrom with x = s + L (1+z)/(1-z).
class TwCdf {
public:
    static constexpr double kMin = -10.0, kMax = 8.0;
    static constexpr int kDefaultOrder = 48;

    explicit TwCdf(Ensemble e, int order = kDefaultOrder);

    double operator()(double s) const;  // throws OutOfRange outside [kMin, kMax]
    double clamped(double s) const;      // 0 below kMin, 1 above kMax
    Ensemble ensemble() const { return ens_; }
    int order() const { return static_cast<int>(rule_.nodes.size()); }

private:
    Ensemble ens_;
    QuadRule rule_;
};

// Cubic interpolation of TwCdf on a uniform grid; clamped outside the range.
class TwTable {
public:
    TwTable(Ensemble e, int order = TwCdf::kDefaultOrder, double step = 0.02);
    double operator()(double s) const;
    int order() const { return order_; }

private:
    double lo_, step_;
    int order_;
    std::vector<double> v_;
};

// Shared tables, built on first use.
const TwTable& tw_table(Ensemble e);
double tw_cdf(Ensemble e, double s);  // direct quadrature, range-checked

using Cdf = std::function<double(double)>;
Cdf gue_cdf();  // tabulated, clamped
Cdf goe_cdf();

// F(s) F(s - u 2^{4/3}) and F(s) F(s - u / 2^{4/3}).
double product_limit_tasep(double s, double u, const Cdf& F = gue_cdf());
double product_limit_lpp(double s, double u, const Cdf& F = gue_cdf());

enum class BoundKind { TasepScale, LppScale, General };

struct SandwichParams {
    double s = 0, s2 = 0;     // s2 only for General
    double u = 0;
    double delta = 0;
    double eps = 0.5;         // TasepScale, LppScale
    double c_eps = 1;         // General
    double surrogate = 0;     // stands in for C e^{-ck}, or psi for General (added 3x)
    Cdf G1, G2, G0;           // General; TasepScale, LppScale use F_GUE when empty
};

struct Bounds {
    double lower = 0, upper = 0;
};
Bounds sandwich_bounds(BoundKind kind, const SandwichParams& p);

double goe_shock_product(double s, double xi, double rho1, double rho2, const Cdf& F = goe_cdf());
double gue_shock_product(double s, double xi, double beta, const Cdf& F = gue_cdf());

}  // namespace lpplab
