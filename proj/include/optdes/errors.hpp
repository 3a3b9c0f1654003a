#ifndef OPTDES_ERRORS_HPP
#define OPTDES_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace optdes {

struct SingularDesign : std::runtime_error {
  explicit SingularDesign(const std::string& what) : std::runtime_error(what) {}
};

struct StepOutOfRange : std::runtime_error {
  explicit StepOutOfRange(const std::string& what) : std::runtime_error(what) {}
};

// Rank-one update would cross (or touch) singularity; the caller should
// refresh the state and re-evaluate.
struct NumericalBreakdown : std::runtime_error {
  explicit NumericalBreakdown(const std::string& what) : std::runtime_error(what) {}
};

// A mathematically guaranteed inequality failed by more than rounding noise.
struct NumericalAnomaly : std::runtime_error {
  explicit NumericalAnomaly(const std::string& what) : std::runtime_error(what) {}
};

struct NotSPD : std::runtime_error {
  explicit NotSPD(const std::string& what) : std::runtime_error(what) {}
};

struct RankDeficient : std::runtime_error {
  explicit RankDeficient(const std::string& what) : std::runtime_error(what) {}
};

struct SpanFailure : std::runtime_error {
  explicit SpanFailure(const std::string& what) : std::runtime_error(what) {}
};

struct SizeOverflow : std::runtime_error {
  explicit SizeOverflow(const std::string& what) : std::runtime_error(what) {}
};

struct NoRegularStart : std::runtime_error {
  explicit NoRegularStart(const std::string& what) : std::runtime_error(what) {}
};

struct ParseError : std::runtime_error {
  ParseError(const std::string& what, long line)
      : std::runtime_error(what + " (line " + std::to_string(line) + ")"), line(line) {}
  long line;
};

}  // namespace optdes

#endif  // OPTDES_ERRORS_HPP
