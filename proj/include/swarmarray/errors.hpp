// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace swarmarray {

// Conversion denominator vanished (A*Z0 + B + C*Z0^2 + D*Z0 == 0).
class DegenerateNetworkError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Mesh is too fine for the thin-wire kernel or too coarse for the frequency.
class MeshError : public std::invalid_argument {
public:
    MeshError(const std::string& what, std::string wire)
        : std::invalid_argument(what), wire_(std::move(wire)) {}
    const std::string& wire() const noexcept { return wire_; }

private:
    std::string wire_;
};

class ConditioningError : public std::runtime_error {
public:
    ConditioningError(const std::string& what, double condition)
        : std::runtime_error(what), condition_(condition) {}
    double condition_estimate() const noexcept { return condition_; }

private:
    double condition_;
};

class GeometryError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class AmbiguousPeakError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InfeasibleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ScenarioError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace swarmarray
