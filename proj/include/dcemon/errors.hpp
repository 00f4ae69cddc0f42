#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace dcemon {

// Invalid physical parameters, violated preconditions, failed numerical guards.
class PhysicsError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A closed form evaluated outside the domain where it was derived.
class DomainError : public PhysicsError {
public:
    using PhysicsError::PhysicsError;
};

// Raised by the integrators; carries the simulation time at which the guard tripped.
class EvolutionError : public PhysicsError {
public:
    EvolutionError(const std::string& what, double time)
        : PhysicsError(what + " at t=" + std::to_string(time)), time_(time) {}
    double time() const noexcept { return time_; }

private:
    double time_;
};

class NormDriftError : public EvolutionError {
public:
    using EvolutionError::EvolutionError;
};

class TruncationError : public EvolutionError {
public:
    using EvolutionError::EvolutionError;
};

class ExtinctTrajectoryError : public EvolutionError {
public:
    using EvolutionError::EvolutionError;
};

// Configuration problems; each message is prefixed with the offending key path.
class ConfigError : public PhysicsError {
public:
    explicit ConfigError(std::vector<std::string> problems)
        : PhysicsError(join(problems)), problems_(std::move(problems)) {}
    const std::vector<std::string>& problems() const noexcept { return problems_; }

private:
    static std::string join(const std::vector<std::string>& items)
    {
        std::string out;
        for (const auto& item : items) {
            if (!out.empty())
                out += "; ";
            out += item;
        }
        return out;
    }
    std::vector<std::string> problems_;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace dcemon
