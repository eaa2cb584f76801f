#include "lpplab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lpplab/errors.hpp"

namespace lpplab {

Ecdf::Ecdf(std::vector<double> samples) : x_(std::move(samples)) {
    if (x_.empty()) throw DomainError("ecdf: empty sample");
    for (double v : x_)
        if (std::isnan(v)) throw DomainError("ecdf: NaN sample");
    std::sort(x_.begin(), x_.end());
}

double Ecdf::operator()(double s) const {
    return double(std::upper_bound(x_.begin(), x_.end(), s) - x_.begin()) / double(x_.size());
}

double Ecdf::below(double s) const {
    return double(std::lower_bound(x_.begin(), x_.end(), s) - x_.begin()) / double(x_.size());
}

double Ecdf::quantile(double p) const {
    if (!(p >= 0 && p <= 1)) throw DomainError("quantile: p outside [0,1]");
    const double h = p * double(x_.size() - 1);
    const auto i = std::size_t(std::floor(h));
    if (i + 1 >= x_.size()) return x_.back();
    return x_[i] + (h - double(i)) * (x_[i + 1] - x_[i]);
}

Ecdf2::Ecdf2(std::vector<std::pair<double, double>> pairs) : p_(std::move(pairs)) {
    if (p_.empty()) throw DomainError("ecdf2: empty sample");
    std::sort(p_.begin(), p_.end());
}

double Ecdf2::operator()(double s1, double s2) const {
    std::size_t c = 0;
    for (const auto& [a, b] : p_) {
        if (a > s1) break;
        if (b <= s2) ++c;
    }
    return double(c) / double(p_.size());
}

std::vector<double> Ecdf2::table(const std::vector<double>& g1, const std::vector<double>& g2) const {
    std::vector<double> out(g1.size() * g2.size());
    std::vector<double> ys;
    for (std::size_t i = 0; i < g1.size(); ++i) {
        ys.clear();
        for (const auto& [a, b] : p_) {
            if (a > g1[i]) break;
            ys.push_back(b);
        }
        std::sort(ys.begin(), ys.end());
        for (std::size_t j = 0; j < g2.size(); ++j) {
            const auto c = std::upper_bound(ys.begin(), ys.end(), g2[j]) - ys.begin();
            out[i * g2.size() + j] = double(c) / double(p_.size());
        }
    }
    return out;
}

Ecdf Ecdf2::marginal1() const {
    std::vector<double> v;
    v.reserve(p_.size());
    for (const auto& q : p_) v.push_back(q.first);
    return Ecdf(std::move(v));
}

Ecdf Ecdf2::marginal2() const {
    std::vector<double> v;
    v.reserve(p_.size());
    for (const auto& q : p_) v.push_back(q.second);
    return Ecdf(std::move(v));
}

double ks_distance(const Ecdf& e, const std::function<double(double)>& ref) {
    const auto& x = e.sorted();
    const double n = double(x.size());
    double d = 0;
    std::size_t i = 0;
    while (i < x.size()) {
        std::size_t j = i;
        while (j < x.size() && x[j] == x[i]) ++j;
        const double lo = double(i) / n, hi = double(j) / n;
        d = std::max(d, std::abs(hi - ref(x[i])));
        d = std::max(d, std::abs(lo - ref(std::nextafter(x[i], -HUGE_VAL))));
        i = j;
    }
    return d;
}

double two_sample_ks(const Ecdf& a, const Ecdf& b) {
    const auto& x = a.sorted();
    const auto& y = b.sorted();
    std::size_t i = 0, j = 0;
    double d = 0;
    while (i < x.size() || j < y.size()) {
        double v;
        if (j >= y.size() || (i < x.size() && x[i] <= y[j]))
            v = x[i];
        else
            v = y[j];
        while (i < x.size() && x[i] == v) ++i;
        while (j < y.size() && y[j] == v) ++j;
        d = std::max(d, std::abs(double(i) / double(x.size()) - double(j) / double(y.size())));
    }
    return d;
}

double binomial_se(double p, std::size_t n) {
    if (n == 0) throw DomainError("binomial_se: n = 0");
    return std::sqrt(std::max(p * (1 - p), 0.0) / double(n));
}

GapResult decoupling_gap(const std::vector<double>& joint, const std::vector<double>& product, std::size_t n) {
    if (joint.size() != product.size() || joint.empty()) throw DomainError("decoupling_gap: grid mismatch");
    GapResult g;
    g.signed_sup = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < joint.size(); ++i) {
        const double d = joint[i] - product[i];
        if (d > g.signed_sup) {
            g.signed_sup = d;
            g.argmax = i;
        }
        g.abs_sup = std::max(g.abs_sup, std::abs(d));
    }
    g.joint = joint[g.argmax];
    g.product = product[g.argmax];
    g.se = binomial_se(g.joint, n);
    return g;
}

GapResult decoupling_gap(const Ecdf2& e, const std::vector<double>& g1, const std::vector<double>& g2) {
    const auto joint = e.table(g1, g2);
    const Ecdf m1 = e.marginal1(), m2 = e.marginal2();
    std::vector<double> prod(joint.size());
    for (std::size_t i = 0; i < g1.size(); ++i)
        for (std::size_t j = 0; j < g2.size(); ++j) prod[i * g2.size() + j] = m1(g1[i]) * m2(g2[j]);
    return decoupling_gap(joint, prod, e.size());
}

double bootstrap_se(const std::vector<double>& x, const std::function<double(const Ecdf&)>& stat, int B,
                    const Seed& seed) {
    if (x.empty() || B < 2) throw DomainError("bootstrap_se: need samples and B >= 2");
    const StreamKey key = stream_key(seed, StreamDomain::Bootstrap);
    std::vector<double> res(x.size()), vals;
    for (int b = 0; b < B; ++b) {
        for (std::size_t i = 0; i < x.size(); ++i) {
            const std::uint64_t r = draw_u64(key, std::uint32_t(i), std::uint32_t(b));
            res[i] = x[std::size_t((unsigned __int128)r * x.size() >> 64)];
        }
        vals.push_back(stat(Ecdf(res)));
    }
    double m = 0;
    for (double v : vals) m += v;
    m /= B;
    double s = 0;
    for (double v : vals) s += (v - m) * (v - m);
    return std::sqrt(s / (B - 1));
}

std::vector<double> linspace(double a, double b, int n) {
    if (n < 1) throw DomainError("linspace: n < 1");
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) v[std::size_t(i)] = n == 1 ? a : a + (b - a) * double(i) / double(n - 1);
    return v;
}

}  // namespace lpplab
