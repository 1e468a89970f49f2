#pragma once

#include <stdexcept>
#include <string>

namespace geogan {

class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class InvalidArgument : public Error {
  using Error::Error;
};

/// Tensor/layer shape violations; the message names the offending layer or op.
class ShapeError : public Error {
  using Error::Error;
};

class ParseError : public Error {
public:
  ParseError(const std::string& what, long line)
      : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
  long line() const { return line_; }

private:
  long line_ = 0;
};

class VersionError : public Error {
  using Error::Error;
};

class NoSceneError : public Error {
  using Error::Error;
};

class DuplicateIdError : public Error {
  using Error::Error;
};

class IoError : public Error {
  using Error::Error;
};

/// Non-finite value detected; carries the component that produced it.
class NumericalError : public Error {
public:
  NumericalError(const std::string& component, const std::string& what)
      : Error(component + ": " + what), component_(component) {}
  const std::string& component() const { return component_; }

private:
  std::string component_;
};

}  // namespace geogan
