#include "mchit/error.hpp"

namespace mchit {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::ParseError: return "ParseError";
    case Errc::NotStochastic: return "NotStochastic";
    case Errc::NotIrreducible: return "NotIrreducible";
    case Errc::Periodic: return "Periodic";
    case Errc::InvalidParameter: return "InvalidParameter";
    case Errc::SingularSystem: return "SingularSystem";
    case Errc::DegenerateMass: return "DegenerateMass";
    case Errc::CompounderHasMassAtZero: return "CompounderHasMassAtZero";
    case Errc::TruncationCap: return "TruncationCap";
    case Errc::NonMonotoneSeparation: return "NonMonotoneSeparation";
    case Errc::NotDecreasing: return "NotDecreasing";
    case Errc::NegativeSurvival: return "NegativeSurvival";
    case Errc::KacMismatch: return "KacMismatch";
    case Errc::DivergentMgf: return "DivergentMgf";
    case Errc::DegenerateStay: return "DegenerateStay";
    case Errc::NonTermination: return "NonTermination";
    case Errc::NegativeQ: return "NegativeQ";
    case Errc::PathCap: return "PathCap";
  }
  return "UnknownError";
}

}  // namespace mchit
