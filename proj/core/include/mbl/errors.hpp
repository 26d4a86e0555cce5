#ifndef MBL_ERRORS_HPP
#define MBL_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace mbl {

/// Malformed input file; row is the 1-based line number in the file.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string msg, long row)
      : std::runtime_error("row " + std::to_string(row) + ": " + msg), row_(row) {}
  long row() const { return row_; }

 private:
  long row_;
};

/// Invalid run configuration (bad design, too few observations, ...).
class ConfigError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Initialization recipe could not produce a starting point.
class InitializationError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A normal-matrix solve failed even after ridge repair; names the block.
class SingularSystemError : public std::runtime_error {
 public:
  SingularSystemError(std::string msg, std::string block)
      : std::runtime_error(msg + " (block " + block + ")"), block_(std::move(block)) {}
  const std::string& block() const { return block_; }

 private:
  std::string block_;
};

/// The scoring iteration diverged; carries the relative-difference trace.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(std::string msg, std::vector<double> trace)
      : std::runtime_error(std::move(msg)), trace_(std::move(trace)) {}
  const std::vector<double>& trace() const { return trace_; }

 private:
  std::vector<double> trace_;
};

}  // namespace mbl

#endif
