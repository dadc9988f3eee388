#pragma once

#include <stdexcept>

namespace dmst {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// 64-bit exponent or coefficient bookkeeping left the representable range.
struct OverflowError : Error {
  using Error::Error;
};

struct NotDivisibleError : Error {
  using Error::Error;
};

struct DivisorHasExteriorPartError : Error {
  using Error::Error;
};

struct NotHomogeneousError : Error {
  using Error::Error;
};

struct ZeroPolynomialError : Error {
  using Error::Error;
};

// A closed form produced a negative exponent with a nonzero coefficient;
// signals a transcription bug, never swallowed.
struct NegativeExponentError : Error {
  using Error::Error;
};

struct NotInSpanError : Error {
  using Error::Error;
};

struct AmbiguousBasisError : Error {
  using Error::Error;
};

struct ParseError : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

}  // namespace dmst
