#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace otto {

/// Failure of a numerical kernel or of a physical precondition that depends on
/// computed values. Carries a machine-readable kind so the CLI can map it to an
/// exit status without parsing the message.
class NumericalError : public std::runtime_error {
 public:
  enum class Kind {
    magnitude_overflow,
    branch_cut,
    spectral_failure,
    singular_system,
    no_isolated_fixed_point,
    adiabat_integration_failure,
    no_thermal_state,
    degenerate_basis,
    invalid_argument,
  };

  NumericalError(Kind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

constexpr std::string_view to_string(NumericalError::Kind kind) {
  switch (kind) {
    case NumericalError::Kind::magnitude_overflow: return "magnitude overflow";
    case NumericalError::Kind::branch_cut: return "branch-cut degeneracy";
    case NumericalError::Kind::spectral_failure: return "spectral failure";
    case NumericalError::Kind::singular_system: return "singular system";
    case NumericalError::Kind::no_isolated_fixed_point: return "no isolated fixed point";
    case NumericalError::Kind::adiabat_integration_failure: return "adiabat integration failure";
    case NumericalError::Kind::no_thermal_state: return "no unique thermal state";
    case NumericalError::Kind::degenerate_basis: return "degenerate basis";
    case NumericalError::Kind::invalid_argument: return "invalid argument";
  }
  return "unknown";
}

}  // namespace otto
