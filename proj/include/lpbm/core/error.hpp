#pragma once

#include <stdexcept>
#include <string>

namespace lpbm {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GeometryError : Error {
  using Error::Error;
};

struct SolverError : Error {
  using Error::Error;
};

struct MeasureError : Error {
  using Error::Error;
};

struct FunctionalError : Error {
  using Error::Error;
};

struct VerifyError : Error {
  using Error::Error;
};

// Schema or semantic problem in an experiment config. `field` is a
// dotted path such as "inequalities[0].functional.measure.family".
struct ConfigError : Error {
  ConfigError(std::string field_path, const std::string& what)
      : Error(field_path + ": " + what), field(std::move(field_path)) {}
  std::string field;
};

}  // namespace lpbm
