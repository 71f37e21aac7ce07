#include "fracbound/errors.hpp"

namespace fracbound {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::OddN: return "OddN";
    case Errc::BadDimension: return "BadDimension";
    case Errc::NonpositiveL: return "NonpositiveL";
    case Errc::NonfiniteSymbol: return "NonfiniteSymbol";
    case Errc::OverflowOrder: return "OverflowOrder";
    case Errc::NegativeAmplitude: return "NegativeAmplitude";
    case Errc::NegativeCoupling: return "NegativeCoupling";
    case Errc::NonpositiveR: return "NonpositiveR";
    case Errc::ShapeMismatch: return "ShapeMismatch";
    case Errc::NegativeValue: return "NegativeValue";
    case Errc::ParseError: return "ParseError";
    case Errc::UnsupportedExponent: return "UnsupportedExponent";
    case Errc::DivergentAtZero: return "DivergentAtZero";
    case Errc::UnresolvedWindow: return "UnresolvedWindow";
    case Errc::QuadratureUnresolved: return "QuadratureUnresolved";
    case Errc::NotSymmetric: return "NotSymmetric";
    case Errc::NegativeEntry: return "NegativeEntry";
    case Errc::NotPSD: return "NotPSD";
    case Errc::NonIntegerL: return "NonIntegerL";
    case Errc::TruncationUnresolved: return "TruncationUnresolved";
    case Errc::TheoremNotApplicable: return "TheoremNotApplicable";
    case Errc::RhsInfinite: return "RhsInfinite";
    case Errc::WrongRegime: return "WrongRegime";
    case Errc::UnresolvedDilation: return "UnresolvedDilation";
    case Errc::NotCompactlySupported: return "NotCompactlySupported";
    case Errc::EmptySuite: return "EmptySuite";
    case Errc::ZeroInput: return "ZeroInput";
    case Errc::TooLarge: return "TooLarge";
    case Errc::ExponentOutOfRange: return "ExponentOutOfRange";
    case Errc::EmptyFactorizationFamily: return "EmptyFactorizationFamily";
    case Errc::ConfigInvalid: return "ConfigInvalid";
  }
  return "Unknown";
}

}  // namespace fracbound
