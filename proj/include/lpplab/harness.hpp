#pragma once

#include <cstdint>
#include <exception>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "lpplab/errors.hpp"
#include "lpplab/lattice.hpp"

namespace lpplab {

using Json = nlohmann::ordered_json;

struct CatalogEntry {
    std::string id;
    std::string summary;
    std::string reference;  // the limit law or bound the experiment is compared against
};
const std::vector<CatalogEntry>& catalog();

// Validated parameters: defaults from the experiment schema overlaid with the config file.
class Params {
public:
    Params() = default;
    Params(Json schema, const Json& given);

    double num(const std::string& key) const;
    i64 integer(const std::string& key) const;
    std::vector<double> vec(const std::string& key) const;
    bool flag(const std::string& key) const;
    std::optional<double> opt(const std::string& key) const;
    const Json& values() const { return v_; }

private:
    const Json& at(const std::string& key) const;
    Json v_;
};

struct ExperimentConfig {
    std::string id;
    std::uint64_t seed = 20240601;
    std::size_t replicas = 2000;
    int threads = 0;  // 0: OpenMP default
    Params params;
};

// Accepts the flat document (optionally with a nested "scalings" object of dotted keys).
ExperimentConfig make_config(const std::string& id, const Json& doc);
ExperimentConfig load_config(const std::string& id, const std::string& path);
Json default_config(const std::string& id);

struct CsvTable {
    std::string name;   // file name
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

struct ExperimentReport {
    Json doc;                      // report.json
    std::vector<CsvTable> tables;
    bool pass = true;
    double seconds = 0;            // wall clock, kept out of doc
    int threads = 0;
};

struct ReplicaError : std::runtime_error {
    ReplicaError(std::size_t i, const std::string& what)
        : std::runtime_error("replica " + std::to_string(i) + ": " + what), index(i) {}
    std::size_t index;
};

// Runs f(0..n-1) in parallel; results are stored by index. The error of the
// lowest failing index is rethrown as ReplicaError.
template <class R, class F>
std::vector<R> farm(std::size_t n, F&& f) {
    std::vector<R> out(n);
    std::vector<std::exception_ptr> err(n);
#pragma omp parallel for schedule(dynamic, 1)
    for (long long i = 0; i < (long long)n; ++i) {
        try {
            out[std::size_t(i)] = f(std::size_t(i));
        } catch (...) {
            err[std::size_t(i)] = std::current_exception();
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!err[i]) continue;
        try {
            std::rethrow_exception(err[i]);
        } catch (const std::exception& e) {
            throw ReplicaError(i, e.what());
        }
    }
    return out;
}

ExperimentReport run_experiment(const ExperimentConfig& cfg);
void write_outputs(const ExperimentReport& rep, const std::string& dir);
std::string format_csv(const CsvTable& t);

}  // namespace lpplab
