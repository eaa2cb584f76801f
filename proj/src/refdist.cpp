#include "lpplab/refdist.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <string>

#include <Eigen/Dense>
#include <boost/math/special_functions/airy.hpp>

#include "lpplab/errors.hpp"
#include "lpplab/scalings.hpp"

namespace lpplab {

namespace {

constexpr double kAiLo = -40.0, kAiHi = 200.0;
constexpr double kMapL = 10.0;
// Ai(x) < 1e-300 past here; skipping Boost avoids its underflow path.
constexpr double kAiZero = 100.0;

double ai_raw(double x) { return x > kAiZero ? 0.0 : boost::math::airy_ai(x); }
double aip_raw(double x) { return x > kAiZero ? 0.0 : boost::math::airy_ai_prime(x); }

void check_ai(double x) {
    if (!(x >= kAiLo && x <= kAiHi)) throw OutOfRange("airy: x outside [-40, 200]: " + std::to_string(x));
}

}  // namespace

double airy_ai(double x) {
    check_ai(x);
    return ai_raw(x);
}

double airy_ai_prime(double x) {
    check_ai(x);
    return aip_raw(x);
}

QuadRule gauss_legendre(int n) {
    if (n < 1) throw DomainError("gauss_legendre: n must be >= 1");
    QuadRule q;
    q.nodes.resize(std::size_t(n));
    q.weights.resize(std::size_t(n));
    const double pi = std::acos(-1.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1, p1 = 0;
            for (int k = 1; k <= n; ++k) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * k - 1) * z * p1 - (k - 1.0) * p2) / k;
            }
            dp = n * (z * p0 - p1) / (z * z - 1);
            const double dz = p0 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        // recompute the derivative at the converged node
        double p0 = 1, p1 = 0;
        for (int k = 1; k <= n; ++k) {
            const double p2 = p1;
            p1 = p0;
            p0 = ((2.0 * k - 1) * z * p1 - (k - 1.0) * p2) / k;
        }
        dp = n * (z * p0 - p1) / (z * z - 1);
        const double w = 2 / ((1 - z * z) * dp * dp);
        q.nodes[std::size_t(i)] = -z;
        q.nodes[std::size_t(n - 1 - i)] = z;
        q.weights[std::size_t(i)] = w;
        q.weights[std::size_t(n - 1 - i)] = w;
    }
    return q;
}

TwCdf::TwCdf(Ensemble e, int order) : ens_(e), rule_(gauss_legendre(order)) {}

double TwCdf::operator()(double s) const {
    if (!(s >= kMin && s <= kMax)) throw OutOfRange("tw_cdf: s outside [-10, 8]: " + std::to_string(s));
    const std::size_t n = rule_.nodes.size();
    std::vector<double> x(n), sw(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double z = rule_.nodes[i];
        x[i] = s + kMapL * (1 + z) / (1 - z);
        sw[i] = std::sqrt(rule_.weights[i] * 2 * kMapL / ((1 - z) * (1 - z)));
    }
    Eigen::MatrixXd A(n, n);
    if (ens_ == Ensemble::GUE) {
        std::vector<double> ai(n), aip(n);
        for (std::size_t i = 0; i < n; ++i) {
            ai[i] = ai_raw(x[i]);
            aip[i] = aip_raw(x[i]);
        }
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                double k;
                if (i == j)
                    k = aip[i] * aip[i] - x[i] * ai[i] * ai[i];
                else
                    k = (ai[i] * aip[j] - aip[i] * ai[j]) / (x[i] - x[j]);
                A(Eigen::Index(i), Eigen::Index(j)) = double(i == j) - sw[i] * k * sw[j];
            }
    } else {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j <= i; ++j) {
                const double k = sw[i] * ai_raw((x[i] + x[j]) / 2) / 2 * sw[j];
                A(Eigen::Index(i), Eigen::Index(j)) = double(i == j) - k;
                A(Eigen::Index(j), Eigen::Index(i)) = double(i == j) - k;
            }
    }
    const double d = A.partialPivLu().determinant();
    return std::clamp(d, 0.0, 1.0);
}

double TwCdf::clamped(double s) const {
    if (s < kMin) return 0.0;
    if (s > kMax) return 1.0;
    return (*this)(s);
}

TwTable::TwTable(Ensemble e, int order, double step) : lo_(TwCdf::kMin), step_(step), order_(order) {
    if (!(step > 0)) throw DomainError("TwTable: step must be > 0");
    const TwCdf F(e, order);
    const int m = int(std::ceil((TwCdf::kMax - lo_) / step - 1e-9));
    v_.resize(std::size_t(m + 1));
    for (int i = 0; i <= m; ++i) v_[std::size_t(i)] = F(std::min(lo_ + i * step, TwCdf::kMax));
}

double TwTable::operator()(double s) const {
    if (std::isnan(s)) return s;
    const double hi = lo_ + step_ * double(v_.size() - 1);
    if (s <= lo_) return 0.0;
    if (s >= hi) return 1.0;
    const double r = (s - lo_) / step_;
    const long i = std::clamp(long(std::floor(r)) - 1, 0L, long(v_.size()) - 4);
    // Lagrange through 4 nodes i..i+3
    const double u = r - double(i);
    const double* f = &v_[std::size_t(i)];
    const double l0 = -(u - 1) * (u - 2) * (u - 3) / 6;
    const double l1 = u * (u - 2) * (u - 3) / 2;
    const double l2 = -u * (u - 1) * (u - 3) / 2;
    const double l3 = u * (u - 1) * (u - 2) / 6;
    return std::clamp(l0 * f[0] + l1 * f[1] + l2 * f[2] + l3 * f[3], 0.0, 1.0);
}

const TwTable& tw_table(Ensemble e) {
    static std::once_flag fg, fo;
    static std::unique_ptr<TwTable> g, o;
    if (e == Ensemble::GUE) {
        std::call_once(fg, [] { g = std::make_unique<TwTable>(Ensemble::GUE); });
        return *g;
    }
    std::call_once(fo, [] { o = std::make_unique<TwTable>(Ensemble::GOE); });
    return *o;
}

double tw_cdf(Ensemble e, double s) { return TwCdf(e)(s); }

Cdf gue_cdf() {
    const TwTable* t = &tw_table(Ensemble::GUE);
    return [t](double s) { return (*t)(s); };
}

Cdf goe_cdf() {
    const TwTable* t = &tw_table(Ensemble::GOE);
    return [t](double s) { return (*t)(s); };
}

double product_limit_tasep(double s, double u, const Cdf& F) { return F(s) * F(s - u * std::cbrt(16.0)); }

double product_limit_lpp(double s, double u, const Cdf& F) { return F(s) * F(s - u / std::cbrt(16.0)); }

Bounds sandwich_bounds(BoundKind kind, const SandwichParams& p) {
    if (!(p.delta >= 0)) throw DomainError("sandwich_bounds: delta must be >= 0");
    if (!(p.surrogate >= 0)) throw DomainError("sandwich_bounds: surrogate must be >= 0");
    Bounds b;
    if (kind == BoundKind::General) {
        if (!p.G1 || !p.G2 || !p.G0) throw DomainError("sandwich_bounds: General needs G1, G2, G0");
        if (!(p.c_eps > 0)) throw DomainError("sandwich_bounds: c_eps must be > 0");
        b.lower = p.G1(p.s) * p.G2(p.s2);
        b.upper = p.G1((p.s + p.delta) * p.c_eps) * p.G2(p.s2) + p.G0(-p.delta) + 3 * p.surrogate;
    } else {
        if (!(p.eps > 0 && p.eps < 1)) throw DomainError("sandwich_bounds: eps must be in (0,1)");
        const Cdf F = p.G1 ? p.G1 : gue_cdf();
        const double shift = kind == BoundKind::TasepScale ? p.u * std::cbrt(16.0) : p.u / std::cbrt(16.0);
        const double second = F(p.s - shift);
        b.lower = F(p.s) * second;
        b.upper = F((p.s + p.delta) / std::cbrt(1 - p.eps)) * second + F(-p.delta / std::cbrt(p.eps)) + p.surrogate;
    }
    b.upper = std::min(b.upper, 1.0);
    return b;
}

double goe_shock_product(double s, double xi, double rho1, double rho2, const Cdf& F) {
    const ShockParams sp = shock_params_rho(rho1, rho2);
    const double k = std::cbrt(4.0);
    return F(k * (s - xi / rho1) * sp.c1) * F(k * (s - xi / rho2) * sp.c2);
}

double gue_shock_product(double s, double xi, double beta, const Cdf& F) {
    const ShockParams sp = shock_params_beta(beta);
    return F((s - xi / sp.rho1) / sp.sigma1) * F((s - xi / sp.rho2) / sp.sigma2);
}

}  // namespace lpplab
