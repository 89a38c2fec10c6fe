#pragma once

#include <stdexcept>
#include <string>

namespace xauc {

/// Base class for all library errors. Audits fail loudly: degenerate
/// inputs raise one of the typed errors below instead of yielding NaN.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EmptyInput : Error {
  using Error::Error;
};

struct NonFiniteScore : Error {
  using Error::Error;
};

// One side of a positive/negative comparison is empty.
struct EmptyClass : Error {
  using Error::Error;
};

// A required (group, outcome) cell has no samples.
struct MissingCell : Error {
  using Error::Error;
};

struct MissingGroup : Error {
  using Error::Error;
};

struct LengthMismatch : Error {
  using Error::Error;
};

struct ScoreOutOfRange : Error {
  using Error::Error;
};

struct InsufficientSamples : Error {
  using Error::Error;
};

struct SingleClassData : Error {
  using Error::Error;
};

struct DimensionMismatch : Error {
  using Error::Error;
};

struct FileNotFound : Error {
  using Error::Error;
};

struct MissingColumn : Error {
  using Error::Error;
};

struct NonNumericFeature : Error {
  using Error::Error;
};

struct DegenerateSplit : Error {
  using Error::Error;
};

struct InfeasibleBounds : Error {
  using Error::Error;
};

}  // namespace xauc
