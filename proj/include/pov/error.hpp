#pragma once

#include <stdexcept>
#include <string>

namespace pov {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

class AmbiguousContactError : public Error {
 public:
  AmbiguousContactError(std::string first, std::string second)
      : Error("ambiguous contact: '" + first + "' and '" + second + "' both occur in the message"),
        first_(std::move(first)),
        second_(std::move(second)) {}

  const std::string& first() const { return first_; }
  const std::string& second() const { return second_; }

 private:
  std::string first_;
  std::string second_;
};

}  // namespace pov
