#pragma once

#include <stdexcept>
#include <string>

namespace autopower {

/// Bad user input: malformed files, violated invariants, dangling references,
/// unknown ids. The CLI maps this to exit code 2.
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

/// Violated usage contract of a fitted model (dimension mismatch, untrained
/// component, singular system). The CLI maps this to exit code 1.
class ModelError : public std::runtime_error {
public:
    explicit ModelError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace autopower
