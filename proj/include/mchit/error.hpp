#pragma once

#include <stdexcept>
#include <string>

namespace mchit {

// Every failure mode the library distinguishes. Grouped by how the CLI maps
// them to exit codes: parse (2), validation of inputs (3), numeric
// diagnostics that indicate an internal inconsistency or an ill-behaved
// computation (4).
enum class Errc {
  // input / validation
  ParseError,
  NotStochastic,
  NotIrreducible,
  Periodic,
  InvalidParameter,
  // numeric diagnostics
  SingularSystem,
  DegenerateMass,
  CompounderHasMassAtZero,
  TruncationCap,
  NonMonotoneSeparation,
  NotDecreasing,
  NegativeSurvival,
  KacMismatch,
  DivergentMgf,
  DegenerateStay,
  NonTermination,
  NegativeQ,
  PathCap,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what),
        code_(code) {}

  Errc code() const { return code_; }

  bool is_parse() const { return code_ == Errc::ParseError; }
  bool is_validation() const {
    return code_ == Errc::NotStochastic || code_ == Errc::NotIrreducible ||
           code_ == Errc::Periodic || code_ == Errc::InvalidParameter;
  }

 private:
  Errc code_;
};

}  // namespace mchit
