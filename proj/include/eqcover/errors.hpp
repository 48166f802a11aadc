#pragma once

#include <Eigen/Core>
#include <stdexcept>
#include <string>

namespace eqcover {

// Integration produced a non-finite state. Carries the failing time and state.
class IntegrationDiverged : public std::runtime_error {
public:
    IntegrationDiverged(double t, Eigen::VectorXd state, int step_index)
        : std::runtime_error("integration diverged at t=" + std::to_string(t) +
                             " (step " + std::to_string(step_index) + ")"),
          t(t), state(std::move(state)), step_index(step_index) {}

    double t;
    Eigen::VectorXd state;
    int step_index;
};

class DynamicsNaN : public std::runtime_error {
public:
    explicit DynamicsNaN(const std::string& what) : std::runtime_error(what) {}
};

class ModelSingular : public std::runtime_error {
public:
    explicit ModelSingular(const std::string& what) : std::runtime_error(what) {}
};

class NotStabilizable : public std::runtime_error {
public:
    explicit NotStabilizable(const std::string& what) : std::runtime_error(what) {}
};

class IllConditioned : public std::runtime_error {
public:
    explicit IllConditioned(const std::string& what) : std::runtime_error(what) {}
};

class EmptyDictionary : public std::runtime_error {
public:
    EmptyDictionary() : std::runtime_error("prediction requested from an empty dictionary") {}
};

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace eqcover
