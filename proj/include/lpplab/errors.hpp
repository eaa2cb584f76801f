#pragma once

#include <stdexcept>
#include <string>

namespace lpplab {

struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct OutOfRange : std::out_of_range {
    using std::out_of_range::out_of_range;
};

struct NoAdmissiblePath : std::runtime_error {
    NoAdmissiblePath() : std::runtime_error("no admissible up-right path") {}
    using std::runtime_error::runtime_error;
};

struct MissingPath : std::logic_error {
    MissingPath() : std::logic_error("result carries no path") {}
};

struct BufferExhausted : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace lpplab
