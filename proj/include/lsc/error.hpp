#ifndef LSC_ERROR_HPP
#define LSC_ERROR_HPP

#include <stdexcept>
#include <string>

namespace lsc {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid (n, m, k) or harness configuration.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Bad query input: zero-norm or non-finite rows, dimension mismatches.
class InputError : public Error {
 public:
  using Error::Error;
};

/// A vector or code that is not a member of the vector system.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Label map construction failures (duplicates, overfull maps).
class ConstructionError : public Error {
 public:
  using Error::Error;
};

enum class LoadErrorKind { kBadMagic, kBadVersion, kTruncated, kInvariant, kBadDtype, kIo };

inline const char* to_string(LoadErrorKind kind) {
  switch (kind) {
    case LoadErrorKind::kBadMagic: return "bad magic";
    case LoadErrorKind::kBadVersion: return "unsupported version";
    case LoadErrorKind::kTruncated: return "truncated stream";
    case LoadErrorKind::kInvariant: return "invariant violation";
    case LoadErrorKind::kBadDtype: return "unsupported dtype";
    case LoadErrorKind::kIo: return "i/o failure";
  }
  return "unknown";
}

class LoadError : public Error {
 public:
  LoadError(LoadErrorKind kind, const std::string& what)
      : Error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  LoadErrorKind kind() const noexcept { return kind_; }

 private:
  LoadErrorKind kind_;
};

}  // namespace lsc

#endif  // LSC_ERROR_HPP
