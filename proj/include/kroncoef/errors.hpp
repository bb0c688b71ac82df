#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace kroncoef {

/// Requested n is outside the range a module supports.
class UnsupportedSizeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An iterative solver failed to reach its tolerance within its budget.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input data cannot support the requested computation (single-class
/// training set, zero variance, w_max == w_min, ...).
class DegenerateDataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A mathematical identity that must hold was violated; signals a bug,
/// not a user error. Maps to process exit code 2.
class InternalConsistencyError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// A cache file is corrupt (bad magic, truncation, inconsistent payload).
class CacheIntegrityError : public std::runtime_error {
public:
    CacheIntegrityError(const std::string& what, std::uint64_t offset)
        : std::runtime_error(what + " (at byte offset " + std::to_string(offset) + ")"),
          offset_(offset) {}
    std::uint64_t offset() const { return offset_; }

private:
    std::uint64_t offset_ = 0;
};

/// A cache file was written by an incompatible format version.
class CacheVersionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace kroncoef
