#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hopmem {

// Malformed input data (CSV/AMV1 streams). Carries the 1-based line number
// for text formats; 0 when the position is not line-oriented.
class IngestError : public std::runtime_error {
public:
    IngestError(std::size_t line, const std::string& what)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}

    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

// Rejection-sampled packing gave up; the requested set does not fit.
class CapacityError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A geometric precondition (e.g. disjoint balls) does not hold.
class PreconditionError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace hopmem
