#pragma once

#include <stdexcept>
#include <string>

namespace harmcover {

enum class ErrorKind {
  Argument,
  Index,
  Precondition,
  Resolution,
  Coverage,
  Construction,
  Io,
  Internal,
};

/// Base class for every error raised by the library. The kind determines the
/// status code surfaced through the C API and the CLI exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

struct ArgumentError : Error {
  explicit ArgumentError(const std::string& w) : Error(ErrorKind::Argument, w) {}
};
struct IndexError : Error {
  explicit IndexError(const std::string& w) : Error(ErrorKind::Index, w) {}
};
/// A named mathematical assumption does not hold (e.g. missing subordinateness).
struct PreconditionError : Error {
  explicit PreconditionError(const std::string& w) : Error(ErrorKind::Precondition, w) {}
};
/// The discretization cannot resolve the request (grid too coarse, band overflow).
struct ResolutionError : Error {
  explicit ResolutionError(const std::string& w) : Error(ErrorKind::Resolution, w) {}
};
struct CoverageError : Error {
  explicit CoverageError(const std::string& w) : Error(ErrorKind::Coverage, w) {}
};
struct ConstructionError : Error {
  explicit ConstructionError(const std::string& w) : Error(ErrorKind::Construction, w) {}
};
struct IoError : Error {
  explicit IoError(const std::string& w) : Error(ErrorKind::Io, w) {}
};
struct InternalError : Error {
  explicit InternalError(const std::string& w) : Error(ErrorKind::Internal, w) {}
};

}  // namespace harmcover
