#pragma once

// `refdist eval` and `refdist table`, shared by lab and the standalone refdist tool.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "lpplab/errors.hpp"
#include "lpplab/refdist.hpp"
#include "lpplab/stats.hpp"

namespace lab_cli {

struct RefdistOpts {
    std::string ensemble = "gue";
    double s = 0;
    int order = lpplab::TwCdf::kDefaultOrder;
    std::string grid = "-8:6:141";
    std::string out = "-";
};

inline lpplab::Ensemble parse_ensemble(const std::string& e) {
    if (e == "gue" || e == "GUE") return lpplab::Ensemble::GUE;
    if (e == "goe" || e == "GOE") return lpplab::Ensemble::GOE;
    throw lpplab::ConfigError("unknown ensemble: " + e);
}

// "a:b:n" -> n points from a to b
inline std::vector<double> parse_grid(const std::string& g) {
    std::stringstream ss(g);
    std::string a, b, n;
    if (!std::getline(ss, a, ':') || !std::getline(ss, b, ':') || !std::getline(ss, n))
        throw lpplab::ConfigError("grid must be a:b:n, got " + g);
    return lpplab::linspace(std::stod(a), std::stod(b), std::stoi(n));
}

inline void add_refdist(CLI::App& app, std::shared_ptr<RefdistOpts> o, int& rc) {
    auto* ev = app.add_subcommand("eval", "evaluate F_GUE or F_GOE at one point");
    ev->add_option("--ensemble", o->ensemble, "gue or goe")->capture_default_str();
    ev->add_option("--s", o->s, "argument")->required();
    ev->add_option("--order", o->order, "quadrature order")->capture_default_str();
    ev->callback([o, &rc] {
        const lpplab::TwCdf F(parse_ensemble(o->ensemble), o->order);
        std::printf("%.15g\n", F(o->s));
        rc = 0;
    });

    auto* tb = app.add_subcommand("table", "tabulate the CDF on a grid as CSV (s,cdf,quad_order)");
    tb->add_option("--ensemble", o->ensemble, "gue or goe")->capture_default_str();
    tb->add_option("--grid", o->grid, "a:b:n")->capture_default_str();
    tb->add_option("--order", o->order, "quadrature order")->capture_default_str();
    tb->add_option("--out", o->out, "output file, - for stdout")->capture_default_str();
    tb->callback([o, &rc] {
        const lpplab::TwCdf F(parse_ensemble(o->ensemble), o->order);
        std::ostringstream os;
        os << "s,cdf,quad_order\n";
        char buf[64];
        for (double s : parse_grid(o->grid)) {
            std::snprintf(buf, sizeof buf, "%.10g,%.15g,%d\n", s, F(s), F.order());
            os << buf;
        }
        if (o->out == "-") {
            std::cout << os.str();
        } else {
            std::ofstream f(o->out);
            if (!f) throw std::runtime_error("cannot write " + o->out);
            f << os.str();
        }
        rc = 0;
    });
    app.require_subcommand(1);
}

}  // namespace lab_cli
