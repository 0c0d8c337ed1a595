#pragma once

#include <stdexcept>
#include <string>

namespace spillscope {

// Root of every exception thrown by the library. Non-fatal problems are
// reported as diagnostics instead.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class UnknownRegister : public Error {
 public:
  explicit UnknownRegister(std::string token)
      : Error("unknown register '" + token + "'"), token_(std::move(token)) {}
  const std::string& token() const noexcept { return token_; }

 private:
  std::string token_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class NoFunctionsFound : public Error {
 public:
  using Error::Error;
};

class EmptyUnit : public Error {
 public:
  using Error::Error;
};

// metrics
class ZeroInstructions : public Error {
 public:
  using Error::Error;
};

class EmptyDomain : public Error {
 public:
  using Error::Error;
};

class AllExcluded : public Error {
 public:
  using Error::Error;
};

class EmptyCorpus : public Error {
 public:
  using Error::Error;
};

// corpus
class SchemaError : public Error {
 public:
  SchemaError(std::string field, const std::string& what)
      : Error(field.empty() ? what : field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class DuplicateApplication : public SchemaError {
 public:
  DuplicateApplication(std::string field, const std::string& name)
      : SchemaError(std::move(field), "duplicate application '" + name + "'") {}
};

// reporting
class UnsupportedFormat : public Error {
 public:
  using Error::Error;
};

}  // namespace spillscope
