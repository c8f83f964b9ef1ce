#pragma once

#include <cstddef>
#include <exception>
#include <optional>
#include <sstream>
#include <string>
#include <utility>

namespace vekua {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

// Base of every error raised by the library. Stages may prepend context while
// the exception propagates, so the message is kept mutable.
class Error : public std::exception {
 public:
  explicit Error(std::string message) : message_(std::move(message)) {}

  const char* what() const noexcept override { return message_.c_str(); }

  const std::optional<Point>& point() const noexcept { return point_; }

  void set_point(Point p) {
    if (point_) return;
    point_ = p;
    std::ostringstream os;
    os << message_ << " at (" << p.x << ", " << p.y << ")";
    message_ = os.str();
  }

  void add_context(const std::string& context) { message_ = context + ": " + message_; }

 private:
  std::string message_;
  std::optional<Point> point_;
};

class DegenerateElement : public Error {
 public:
  using Error::Error;
};

class SyntaxError : public Error {
 public:
  SyntaxError(std::string message, std::size_t offset)
      : Error(message + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class UnknownIdentifier : public SyntaxError {
 public:
  UnknownIdentifier(const std::string& name, std::size_t offset)
      : SyntaxError("unknown identifier '" + name + "'", offset), name_(name) {}
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

// Evaluation failure of a coefficient or solution expression.
class EvalError : public Error {
 public:
  using Error::Error;
};

class DomainError : public EvalError {
 public:
  using EvalError::EvalError;
};

class NonPositiveLeadingCoefficient : public Error {
 public:
  using Error::Error;
};

class NotElliptic : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace vekua
