#pragma once

#include <stdexcept>
#include <string>

namespace dirac {

/// Base of every error raised by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Operands live on different variable counts, coordinate charts or fibre dimensions.
struct DimensionMismatch : Error {
  using Error::Error;
};

/// An index argument outside its valid range.
struct IndexOutOfRange : Error {
  using Error::Error;
};

/// Rational-mode and Gaussian-mode values were combined, or a Gaussian-only operation ran in rational mode.
struct FieldModeError : Error {
  using Error::Error;
};

/// Malformed polynomial text. `column` is 1-based within the offending string.
struct ParseError : Error {
  ParseError(const std::string &msg, std::size_t col) : Error(msg), column(col) {}
  std::size_t column;
};

/// Invalid argument values such as t = 0 for a covector rescale.
struct InvalidArgument : Error {
  using Error::Error;
};

/// A frame that was declared Lagrangian or isotropic is not.
struct NotLagrangian : Error {
  using Error::Error;
};

struct ProductNotGenericallyLagrangian : Error {
  using Error::Error;
};

struct StretchRankDefect : Error {
  using Error::Error;
};

struct ShiftRankDefect : Error {
  using Error::Error;
};

/// A distribution frame whose generic rank differs from the declared rank.
struct RankDefect : Error {
  using Error::Error;
};

/// Fibre dependence survived normal-form reduction during a pushforward.
struct NotProjectable : Error {
  NotProjectable(const std::string &msg, std::string coeff) : Error(msg), coefficient(std::move(coeff)) {}
  std::string coefficient;
};

/// The witness frame E does not satisfy E ∩ TX = F.
struct NotAdapted : Error {
  using Error::Error;
};

/// A diamond distribution is not spanned by constant coordinate directions.
struct NotCoordinateSpanned : Error {
  NotCoordinateSpanned(const std::string &msg, std::string gen) : Error(msg), generator(std::move(gen)) {}
  std::string generator;
};

} // namespace dirac
