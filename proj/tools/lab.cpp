#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include <CLI11.hpp>

#include "lpplab/harness.hpp"
#include "refdist_cmd.hpp"

int main(int argc, char** argv) {
    CLI::App app{"lpplab experiment runner"};
    app.require_subcommand(1);
    int rc = 0;

    std::string id, config, out;
    std::uint64_t seed = 0;
    std::size_t replicas = 0;
    int threads = -1;
    bool quiet = false;
    auto* run = app.add_subcommand("run", "run one experiment; exit code 0 iff all checks pass");
    run->add_option("experiment", id, "experiment id (see `lab list`)")->required();
    run->add_option("--config", config, "JSON config file");
    run->add_option("--seed", seed, "seed root (overrides the config)");
    run->add_option("--replicas", replicas, "replica count (overrides the config)");
    run->add_option("--threads", threads, "OpenMP threads (0: default)");
    run->add_option("--out", out, "output directory (default out/<experiment>)");
    run->add_flag("--quiet", quiet, "only print the verdict");

    bool show_defaults = false;
    auto* list = app.add_subcommand("list", "print the experiment catalog");
    list->add_flag("--defaults", show_defaults, "also print each default config");

    auto* cfg = app.add_subcommand("config", "print the default config of an experiment");
    std::string cfg_id;
    cfg->add_option("experiment", cfg_id)->required();

    auto* rd = app.add_subcommand("refdist", "Tracy-Widom reference distributions");
    auto ro = std::make_shared<lab_cli::RefdistOpts>();
    lab_cli::add_refdist(*rd, ro, rc);

    run->callback([&] {
        lpplab::Json doc = lpplab::Json::object();
        if (!config.empty()) {
            std::ifstream in(config);
            if (!in) throw lpplab::ConfigError("cannot open config file: " + config);
            doc = lpplab::Json::parse(in);
        }
        if (run->count("--seed")) doc["seed"] = seed;
        if (run->count("--replicas")) doc["replicas"] = replicas;
        if (threads >= 0) doc["threads"] = threads;
        const auto c = lpplab::make_config(id, doc);
        const auto rep = lpplab::run_experiment(c);
        const std::string dir = out.empty() ? "out/" + id : out;
        lpplab::write_outputs(rep, dir);
        if (!quiet) {
            for (const auto& ch : rep.doc["checks"]) {
                std::printf("%-4s %-5s %s: %s %s %s\n", ch["pass"].get<bool>() ? "ok" : "FAIL",
                            ch["hard"].get<bool>() ? "hard" : "diag", ch["name"].get<std::string>().c_str(),
                            ch["value"].dump().c_str(), ch["relation"].get<std::string>().c_str(),
                            ch["limit"].dump().c_str());
            }
            for (const auto& cv : rep.doc["caveats"]) std::printf("note: %s\n", cv.get<std::string>().c_str());
        }
        std::printf("%s %s (%.1f s, %d threads) -> %s\n", id.c_str(), rep.pass ? "PASS" : "FAIL", rep.seconds,
                    rep.threads, dir.c_str());
        rc = rep.pass ? 0 : 1;
    });

    list->callback([&] {
        for (const auto& e : lpplab::catalog()) {
            std::printf("%-22s %s\n%-22s   reference: %s\n", e.id.c_str(), e.summary.c_str(), "", e.reference.c_str());
            if (show_defaults) std::printf("%s\n", lpplab::default_config(e.id).dump(2).c_str());
        }
    });

    cfg->callback([&] { std::printf("%s\n", lpplab::default_config(cfg_id).dump(2).c_str()); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const lpplab::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return rc;
}
