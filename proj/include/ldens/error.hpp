#pragma once

#include <stdexcept>
#include <string>

namespace ldens {

/// Runtime failure (bad data, violated precondition).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid user-supplied configuration: bad key, missing file, out-of-range value.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace ldens
