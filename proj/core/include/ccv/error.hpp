#pragma once

#include <stdexcept>
#include <string>

namespace ccv {

// Base of every error thrown by the library. The CLI maps ValidationFailure
// subclasses to exit status 1 and everything else to 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ValidationFailure : public Error {
 public:
  using Error::Error;
};

class UnknownTerm : public ValidationFailure {
 public:
  explicit UnknownTerm(const std::string& term)
      : ValidationFailure("unknown term: '" + term + "'"), term_(term) {}
  const std::string& term() const noexcept { return term_; }

 private:
  std::string term_;
};

class ParseError : public ValidationFailure {
 public:
  ParseError(std::size_t line, const std::string& what)
      : ValidationFailure("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class ValidationError : public ValidationFailure {
 public:
  using ValidationFailure::ValidationFailure;
};

class ConfigError : public ValidationFailure {
 public:
  using ValidationFailure::ValidationFailure;
};

class TooFewRecords : public Error {
 public:
  using Error::Error;
};

class TooFewDescriptions : public Error {
 public:
  using Error::Error;
};

class InvalidFraction : public Error {
 public:
  using Error::Error;
};

class InvalidK : public Error {
 public:
  using Error::Error;
};

class ProviderUnavailable : public Error {
 public:
  using Error::Error;
};

class EmptyTranslation : public Error {
 public:
  using Error::Error;
};

class BackendUnavailable : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class NonFiniteLoss : public Error {
 public:
  using Error::Error;
};

class EmptyDataset : public Error {
 public:
  using Error::Error;
};

class FormatVersionMismatch : public Error {
 public:
  using Error::Error;
};

class CorruptFile : public Error {
 public:
  using Error::Error;
};

class MixedProvenance : public Error {
 public:
  using Error::Error;
};

class LengthMismatch : public Error {
 public:
  using Error::Error;
};

class UnknownLabel : public Error {
 public:
  using Error::Error;
};

}  // namespace ccv
