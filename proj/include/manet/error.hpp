#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace manet {

/// Base class for every error raised by the simulator.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid scenario or protocol parameters (config-level, exit code 2).
class ParameterError : public Error {
public:
    using Error::Error;
};

/// A bound evaluator was called outside the range its formula is stated for.
class PreconditionError : public ParameterError {
public:
    explicit PreconditionError(std::vector<std::string> violated);

    const std::vector<std::string>& violated() const noexcept { return violated_; }

private:
    std::vector<std::string> violated_;
};

/// Structurally broken input: bad activation schedules, bad traces, bad tables.
class MalformedInput : public Error {
public:
    using Error::Error;
};

/// Raised by the engine when an adversary produced an illegal move.
class MotionError : public Error {
public:
    using Error::Error;
};

}  // namespace manet
