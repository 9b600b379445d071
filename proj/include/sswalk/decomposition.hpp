// Numerical verification of the operator identities relating split-step
// walks to products of ordinary walk steps.
//
// Each verifier builds a finite, enumerated set of candidate right-hand sides
// (factor orderings, conjugators, basis relabelings, wave-plate corrections),
// measures the spectral-norm residual of every candidate, and reports which
// forms hold. Identities between walk propagators are exact, so the global
// phase is fixed; the optical-scheme identities are compared up to a global
// phase.

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sswalk/operators.hpp"

namespace sswalk {

enum class ClaimId {
  kCyclicProperty,
  kDecomposition1d,
  kDecomposition2d,
  kQPlateIdentity,
  kSingleQPlateScheme,
};

std::string_view claim_name(ClaimId id);
/// Inverse of claim_name; throws std::invalid_argument for unknown names.
ClaimId parse_claim(std::string_view name);

inline constexpr double kIdentityTolerance = 1e-12;

struct CandidateResidual {
  std::string form;
  double residual = 0.0;
};

struct IdentityReport {
  ClaimId claim = ClaimId::kCyclicProperty;
  double theta1 = 0.0;
  double theta2 = 0.0;
  std::vector<int> dims;
  double tolerance = kIdentityTolerance;
  /// Every candidate form that was tried, in enumeration order.
  std::vector<CandidateResidual> candidates;
  /// Forms whose residual is within tolerance, joined by " | ". Empty
  /// optional iff nothing matched.
  std::optional<std::string> matched_form;
  /// Smallest residual over all candidates.
  double residual = 0.0;

  [[nodiscard]] bool passed() const noexcept { return matched_form.has_value(); }
  /// True if the named form is among the matches.
  [[nodiscard]] bool matches(std::string_view form) const;
  [[nodiscard]] std::optional<double> residual_of(std::string_view form) const;
};

/// Z-bar(theta) = S (1 (x) C_theta) against S Z(theta) S^dagger.
IdentityReport verify_cyclic_property(CoinAngle theta, int n, double tolerance = kIdentityTolerance);

/// Double-shift SSQW against Z(theta2) Z(theta1) and Z(theta1) Z(theta2).
IdentityReport verify_1d_decomposition(CoinAngle theta1, CoinAngle theta2, int n,
                                       double tolerance = kIdentityTolerance);

/// Z_2D against the product of the axis-2 double-shift walk with coins
/// (0, theta1) and the axis-1 double-shift walk with coins (theta2, theta1),
/// in both factor orders and under conjugation by 1, S1, S2, S3 and their
/// inverses.
IdentityReport verify_2d_decomposition(CoinAngle theta1, CoinAngle theta2, int n1, int n2,
                                       double tolerance = kIdentityTolerance);

/// qplate(1/2, pi/2 - theta) against -i (1 (x) sx) [cos(theta) S + i sin(theta) (1 (x) sx)],
/// allowing one fixed coin-basis change and a global phase. theta in [-pi/2, pi/2].
IdentityReport verify_qplate_identity(CoinAngle theta, int n, double tolerance = kIdentityTolerance);

/// (1 (x) C~_theta1) qplate(1/2, pi/2 - theta2) against Z_ss(theta1, theta2),
/// searching polarization mappings, an optional wave-plate correction between
/// the coin and the q-plate, and a fixed frame change, up to global phase.
/// The uncorrected forms are always reported alongside.
IdentityReport verify_single_qplate_scheme(CoinAngle theta1, CoinAngle theta2, int n,
                                           double tolerance = kIdentityTolerance);

/// Dispatch on claim id; n2 is used only by the 2D claim.
IdentityReport verify_claim(ClaimId claim, double theta1, double theta2, int n, int n2,
                            double tolerance = kIdentityTolerance);

}  // namespace sswalk
