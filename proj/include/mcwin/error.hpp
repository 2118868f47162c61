#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mcwin {

/// Failure categories raised by the library. The CLI maps each one to an exit code.
enum class ErrorCode {
  InvalidParams,        ///< a SystemParams / TrialConfig invariant is violated
  Domain,               ///< argument outside an operation's domain (t <= 0, t1 > t2, ...)
  SymbolTooShort,       ///< closed-form denominator is not positive
  DegenerateWindow,     ///< closed form or search produced an empty interval
  NoFiniteQhat,         ///< SID numerator not positive, mSINAR can never reach 1
  GainPole,             ///< Q <= 2 alpha1^2 in the noise-inflation factor
  InfiniteSir,          ///< all interference fractions are zero
  InfiniteSinar,        ///< SINAR / mSINAR denominator is zero
  EnumerationTooLarge,  ///< 2^L enumeration refused, use Monte Carlo instead
  Config,               ///< malformed experiment configuration
  Io,                   ///< file system failure
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::Domain: return "DomainError";
    case ErrorCode::SymbolTooShort: return "SymbolTooShort";
    case ErrorCode::DegenerateWindow: return "DegenerateWindow";
    case ErrorCode::NoFiniteQhat: return "NoFiniteQhat";
    case ErrorCode::GainPole: return "GainPole";
    case ErrorCode::InfiniteSir: return "InfiniteSir";
    case ErrorCode::InfiniteSinar: return "InfiniteSinar";
    case ErrorCode::EnumerationTooLarge: return "EnumerationTooLarge";
    case ErrorCode::Config: return "ConfigError";
    case ErrorCode::Io: return "IoError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace mcwin
