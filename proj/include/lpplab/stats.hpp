#pragma once

#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include "lpplab/weights.hpp"

namespace lpplab {

class Ecdf {
public:
    explicit Ecdf(std::vector<double> samples);
    double operator()(double s) const;   // fraction <= s
    double below(double s) const;        // fraction < s
    std::size_t size() const { return x_.size(); }
    const std::vector<double>& sorted() const { return x_; }
    double quantile(double p) const;     // linear interpolation between order statistics

private:
    std::vector<double> x_;
};

class Ecdf2 {
public:
    explicit Ecdf2(std::vector<std::pair<double, double>> pairs);
    double operator()(double s1, double s2) const;
    std::size_t size() const { return p_.size(); }
    // Row-major table over g1 x g2 (g1 is the slow index).
    std::vector<double> table(const std::vector<double>& g1, const std::vector<double>& g2) const;
    Ecdf marginal1() const;
    Ecdf marginal2() const;

private:
    std::vector<std::pair<double, double>> p_;  // sorted by first
};

// sup_s |F_n(s) - F(s)|, taken at every sample point from both sides.
double ks_distance(const Ecdf& e, const std::function<double(double)>& ref);
double two_sample_ks(const Ecdf& a, const Ecdf& b);

double binomial_se(double p, std::size_t n);

struct GapResult {
    double signed_sup = 0;   // max (joint - product)
    double abs_sup = 0;      // max |joint - product|
    std::size_t argmax = 0;  // index of signed_sup
    double joint = 0, product = 0;
    double se = 0;           // binomial SE of the joint at argmax
};
GapResult decoupling_gap(const std::vector<double>& joint, const std::vector<double>& product, std::size_t n);
// Against the product of the pair's own marginals.
GapResult decoupling_gap(const Ecdf2& e, const std::vector<double>& g1, const std::vector<double>& g2);

// Bootstrap standard error of stat over resamples; deterministic in seed.
double bootstrap_se(const std::vector<double>& x, const std::function<double(const Ecdf&)>& stat, int B,
                    const Seed& seed);

std::vector<double> linspace(double a, double b, int n);

}  // namespace lpplab
