#pragma once

#include <stdexcept>
#include <string>

namespace gspin {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Not enough significant digits left to decide the answer.
struct PrecisionExhausted : Error {
  using Error::Error;
};

struct MixedField : Error {
  using Error::Error;
};

struct SearchExhausted : Error {
  using Error::Error;
};

// An enumeration would exceed its configured budget.
struct TooLarge : Error {
  using Error::Error;
};

struct NotMaximal : Error {
  using Error::Error;
};

struct NotContained : Error {
  using Error::Error;
};

struct DimensionTooSmall : Error {
  using Error::Error;
};

struct BadDelta : Error {
  using Error::Error;
};

struct SlopeNotZero : Error {
  using Error::Error;
};

struct NotIsoclinic : Error {
  using Error::Error;
};

struct ChainOverflow : Error {
  using Error::Error;
};

struct Degenerate : Error {
  using Error::Error;
};

struct NotVertex : Error {
  using Error::Error;
};

struct InputError : Error {
  using Error::Error;
};

}  // namespace gspin
