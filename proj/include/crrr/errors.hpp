#pragma once

#include <stdexcept>
#include <string>

namespace crrr {

// Error classes map one-to-one onto CLI exit codes.
enum class ErrorClass { config = 2, data = 3, convergence = 4, bootstrap = 5 };

class Error : public std::runtime_error {
 public:
  Error(ErrorClass cls, const std::string& what) : std::runtime_error(what), cls_(cls) {}
  ErrorClass error_class() const noexcept { return cls_; }

 private:
  ErrorClass cls_;
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& m) : Error(ErrorClass::config, m) {}
};
struct DomainError : Error {
  explicit DomainError(const std::string& m) : Error(ErrorClass::config, m) {}
};

struct DegenerateData : Error {
  explicit DegenerateData(const std::string& m) : Error(ErrorClass::data, m) {}
};
struct MissingColumn : Error {
  explicit MissingColumn(const std::string& m) : Error(ErrorClass::data, m) {}
};
struct ParseError : Error {
  ParseError(long row, const std::string& column, const std::string& m)
      : Error(ErrorClass::data, m), row(row), column(column) {}
  long row;
  std::string column;
};
struct EmptyAfterFiltering : Error {
  explicit EmptyAfterFiltering(const std::string& m) : Error(ErrorClass::data, m) {}
};
struct InsufficientData : Error {
  explicit InsufficientData(const std::string& m) : Error(ErrorClass::data, m) {}
};
struct InputMismatch : Error {
  explicit InputMismatch(const std::string& m) : Error(ErrorClass::data, m) {}
};
struct GroupTooSmall : Error {
  explicit GroupTooSmall(const std::string& m) : Error(ErrorClass::data, m) {}
};
struct TailDataError : Error {
  explicit TailDataError(const std::string& m) : Error(ErrorClass::data, m) {}
};

struct NonConvergence : Error {
  NonConvergence(const std::string& m, int iterations, double grad_norm)
      : Error(ErrorClass::convergence, m), iterations(iterations), grad_norm(grad_norm) {}
  int iterations;
  double grad_norm;
};
struct TailFitError : Error {
  explicit TailFitError(const std::string& m) : Error(ErrorClass::convergence, m) {}
};

struct DegenerateDraws : Error {
  explicit DegenerateDraws(const std::string& m) : Error(ErrorClass::bootstrap, m) {}
};
struct BootstrapFailure : Error {
  explicit BootstrapFailure(const std::string& m) : Error(ErrorClass::bootstrap, m) {}
};

}  // namespace crrr
