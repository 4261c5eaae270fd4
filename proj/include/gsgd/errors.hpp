#pragma once

#include <stdexcept>
#include <string>

namespace gsgd {

// Two broad families, matching the CLI exit-code contract:
// ConfigError (bad inputs / parameters / files, exit 1) and
// NumericalError (failures discovered while computing, exit 2).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BadParameter : ConfigError {
  using ConfigError::ConfigError;
};
struct DimensionMismatch : ConfigError {
  using ConfigError::ConfigError;
};
struct RankOutOfRange : ConfigError {
  using ConfigError::ConfigError;
};
struct BadK : ConfigError {
  using ConfigError::ConfigError;
};
struct BadRadius : ConfigError {
  using ConfigError::ConfigError;
};
struct GraphTooDense : ConfigError {
  using ConfigError::ConfigError;
};
struct MissingGraph : ConfigError {
  using ConfigError::ConfigError;
};
struct ParseError : ConfigError {
  using ConfigError::ConfigError;
};
struct EmptyDataset : ConfigError {
  using ConfigError::ConfigError;
};
struct EmptyComplement : ConfigError {
  using ConfigError::ConfigError;
};
struct ZeroMatrix : ConfigError {
  using ConfigError::ConfigError;
};

struct NonFinite : NumericalError {
  using NumericalError::NumericalError;
};
struct NotSymmetric : NumericalError {
  using NumericalError::NumericalError;
};
struct NotPositiveDefinite : NumericalError {
  using NumericalError::NumericalError;
};
struct DisconnectedAfterRetries : NumericalError {
  using NumericalError::NumericalError;
};

}  // namespace gsgd
