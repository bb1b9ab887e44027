#pragma once

#include <stdexcept>
#include <string>

namespace xlayer {

/// Invalid configuration or scenario input. `field()` names the offending key.
class ConfigError : public std::invalid_argument {
public:
    ConfigError(std::string field, const std::string& what)
        : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// A model-level failure at run time (inconsistent evidence, cyclic routes, ...).
class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace xlayer
