#pragma once

#include <stdexcept>
#include <string>

namespace idg {

enum class ErrorKind {
    invalid_input,      // malformed or out-of-range arguments
    infeasible,         // (n, r, d, I_max) combination admits no valid instance
    capacity_exceeded,  // exact computation would blow the enumeration budget
    io,                 // file read/write or parse failure
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string message)
        : std::runtime_error(std::move(message)), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

    const char* kind_name() const noexcept {
        switch (kind_) {
            case ErrorKind::invalid_input: return "invalid_input";
            case ErrorKind::infeasible: return "infeasible";
            case ErrorKind::capacity_exceeded: return "capacity_exceeded";
            case ErrorKind::io: return "io";
        }
        return "unknown";
    }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
    throw Error(kind, message);
}

}  // namespace idg
