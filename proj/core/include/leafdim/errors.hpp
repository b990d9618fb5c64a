#pragma once

#include <stdexcept>
#include <string>

namespace leafdim {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// systems
struct NotUnimodular : Error {
  using Error::Error;
};
struct UnsupportedDimension : Error {
  using Error::Error;
};
struct ComplexSpectrum : Error {
  using Error::Error;
};
struct NoUnstableDirection : Error {
  using Error::Error;
};
struct MultipleUnstable : Error {
  using Error::Error;
};

// covers
struct Infeasible : Error {
  using Error::Error;
};

// umetric
struct DegeneratePlaque : Error {
  using Error::Error;
};

// io / cli
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace leafdim
