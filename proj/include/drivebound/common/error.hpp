#pragma once

#include <stdexcept>
#include <string>

namespace drivebound {

// Base class for all toolkit errors. The CLI maps subclasses to exit codes.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Formula text could not be parsed; carries a 1-based source position.
struct ParseError : Error {
  ParseError(const std::string& msg, int line, int col)
      : Error(msg + " (line " + std::to_string(line) + ", col " + std::to_string(col) + ")"),
        line(line),
        col(col) {}
  int line;
  int col;
};

// Robustness/Boolean evaluation failed (unbound parameter, empty window, ...).
struct EvalError : Error {
  using Error::Error;
};

// Malformed data on disk (CSV, JSON, corpus layout).
struct IoError : Error {
  using Error::Error;
};

// A referenced input path does not exist.
struct MissingInputError : IoError {
  using IoError::IoError;
};

// Invalid configuration or schema violation.
struct ConfigError : Error {
  using Error::Error;
};

// Parameter synthesis failed (no feasible endpoint, non-monotone template, ...).
struct MiningError : Error {
  using Error::Error;
};

// Classifier training failed (degenerate data, divergence, ...).
struct TrainError : Error {
  using Error::Error;
};

}  // namespace drivebound
