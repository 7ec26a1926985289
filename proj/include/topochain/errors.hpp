#pragma once

#include <stdexcept>
#include <string>

namespace topochain {

/// Bad user input or malformed configuration. CLI exit status 2.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numerically undefined request: gapless invariant, singular solve,
/// out-of-gap probe energy, under-sampled trace. CLI exit status 3.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Failed file emission. CLI exit status 4.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace topochain
