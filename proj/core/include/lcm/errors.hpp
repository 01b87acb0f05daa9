#pragma once

#include <chrono>
#include <optional>
#include <stdexcept>
#include <string>

namespace lcmid {

enum class ErrorKind {
    invalid_model,
    not_strongly_connected,
    unsupported,
    precondition,
    missing_target,
    duplicate_target,
    no_path,
    model_unidentifiable,
    budget_exceeded,
};

const char* to_string(ErrorKind kind);

class AnalysisError : public std::runtime_error {
public:
    AnalysisError(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

// Wall-clock limit polled from long-running symbolic loops.
class Deadline {
public:
    using Clock = std::chrono::steady_clock;

    Deadline() = default;
    explicit Deadline(Clock::duration budget) : until_(Clock::now() + budget) {}

    static Deadline none() { return {}; }

    bool expired() const { return until_ && Clock::now() >= *until_; }

    void check() const {
        if (expired()) {
            throw AnalysisError(ErrorKind::budget_exceeded, "time budget exceeded");
        }
    }

private:
    std::optional<Clock::time_point> until_;
};

} // namespace lcmid
