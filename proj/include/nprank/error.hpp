#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace nprank {

// Every failure the library reports derives from Error. The CLI maps each
// category onto a distinct exit code (see ExitCode in pipeline.hpp).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text: CoNLL-U, dataset records, prediction files.
class ParseError : public Error {
 public:
  ParseError(std::string detail, std::size_t line, std::string source = {})
      : Error((source.empty() ? std::string("line ") : source + ":") + std::to_string(line) + ": " + detail),
        detail_(std::move(detail)),
        source_(std::move(source)),
        line_(line) {}

  const std::string& detail() const noexcept { return detail_; }
  const std::string& source() const noexcept { return source_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string detail_;
  std::string source_;
  std::size_t line_;
};

// Well-formed input that is semantically inconsistent (duplicate ids,
// unknown documents, nothing to score).
class DataError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Base for anything an embedding backend can raise.
class BackendError : public Error {
 public:
  using Error::Error;
};

// The backend could not be reached after all retries.
class TransportError : public BackendError {
 public:
  using BackendError::BackendError;
};

// The backend answered, but the answer breaks the embedding contract.
class ContractError : public BackendError {
 public:
  using BackendError::BackendError;
};

}  // namespace nprank
