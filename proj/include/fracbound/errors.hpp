#pragma once

#include <stdexcept>
#include <string>

namespace fracbound {

enum class Errc {
  OddN,
  BadDimension,
  NonpositiveL,
  NonfiniteSymbol,
  OverflowOrder,
  NegativeAmplitude,
  NegativeCoupling,
  NonpositiveR,
  ShapeMismatch,
  NegativeValue,
  ParseError,
  UnsupportedExponent,
  DivergentAtZero,
  UnresolvedWindow,
  QuadratureUnresolved,
  NotSymmetric,
  NegativeEntry,
  NotPSD,
  NonIntegerL,
  TruncationUnresolved,
  TheoremNotApplicable,
  RhsInfinite,
  WrongRegime,
  UnresolvedDilation,
  NotCompactlySupported,
  EmptySuite,
  ZeroInput,
  TooLarge,
  ExponentOutOfRange,
  EmptyFactorizationFamily,
  ConfigInvalid,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

}  // namespace fracbound
