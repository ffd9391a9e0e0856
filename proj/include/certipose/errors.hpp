#ifndef CERTIPOSE_ERRORS_HPP
#define CERTIPOSE_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace certipose {

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct DisconnectedGraphError : Error {
  std::vector<std::vector<int>> components;
  explicit DisconnectedGraphError(std::vector<std::vector<int>> comps)
      : Error("pose graph is disconnected (" + std::to_string(comps.size()) +
              " components)"),
        components(std::move(comps)) {}
};

struct IndexOutOfRangeError : Error {
  using Error::Error;
};

struct LengthMismatchError : Error {
  using Error::Error;
};

struct OddLengthError : Error {
  using Error::Error;
};

struct DimensionMismatchError : Error {
  using Error::Error;
};

struct NotHermitianError : Error {
  using Error::Error;
};

struct EmptyNullSpaceError : Error {
  using Error::Error;
};

struct NotPsdInputError : Error {
  using Error::Error;
};

struct NoZeroEigenvalueError : Error {
  using Error::Error;
};

struct InconsistentModulusError : Error {
  using Error::Error;
};

struct ZeroModulusError : Error {
  using Error::Error;
};

struct UnboundedObjectiveError : Error {
  using Error::Error;
};

struct ZeroRotationEntryError : Error {
  using Error::Error;
};

struct NotAChainNodeError : Error {
  using Error::Error;
};

struct NonPositiveScaleError : Error {
  using Error::Error;
};

struct ParseError : Error {
  int line;
  ParseError(int line_no, const std::string& what)
      : Error("line " + std::to_string(line_no) + ": " + what), line(line_no) {}
};

struct DuplicateVertexError : Error {
  using Error::Error;
};

struct UnknownTagError : Error {
  using Error::Error;
};

// Raised when two independent construction routes that must agree diverge.
struct InternalError : Error {
  using Error::Error;
};

}  // namespace certipose

#endif
