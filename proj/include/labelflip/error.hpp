#pragma once

#include <stdexcept>
#include <string>

namespace labelflip {

/// Base class of every exception thrown by the library.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input data: unreadable files, bad cells, invalid labels.
class dataset_error : public error {
 public:
  using error::error;
};

/// A model could not be fitted or was used with incompatible input.
class model_error : public error {
 public:
  using error::error;
};

/// Attack parameters that violate their preconditions.
class attack_error : public error {
 public:
  using error::error;
};

/// Invalid experiment configuration. `field()` names the offending key.
class config_error : public error {
 public:
  config_error(std::string field, const std::string &what)
      : error(field + ": " + what), field_(std::move(field)) {}

  const std::string &field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace labelflip
