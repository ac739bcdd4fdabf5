#pragma once

#include <stdexcept>
#include <string>

namespace hopd {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class LevelMismatch : public Error {
public:
  LevelMismatch(int a, int b)
      : Error("level mismatch: " + std::to_string(a) + " vs " + std::to_string(b)) {}
};

class InvalidArgument : public Error {
public:
  using Error::Error;
};

class OverflowError : public Error {
public:
  using Error::Error;
};

class UnsupportedConfiguration : public Error {
public:
  using Error::Error;
};

class CoordinatesUnavailable : public Error {
public:
  using Error::Error;
};

class MissingAngle : public Error {
public:
  using Error::Error;
};

class GuardExceeded : public Error {
public:
  using Error::Error;
};

class ParseError : public Error {
public:
  using Error::Error;
};

} // namespace hopd
