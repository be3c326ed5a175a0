#pragma once

#include <stdexcept>
#include <string>

namespace qc {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Result cannot be certified at the available precision; rerun higher.
struct PrecisionError : Error {
    using Error::Error;
};

// A series truncation is too short for the requested operation.
struct TruncationError : Error {
    using Error::Error;
};

struct DomainError : Error {
    using Error::Error;
};

struct ConvergenceError : Error {
    using Error::Error;
};

// Internal identity failed; always a bug.
struct ConsistencyError : Error {
    using Error::Error;
};

struct IngestError : Error {
    IngestError(long line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line(line) {}
    long line;
};

}  // namespace qc
