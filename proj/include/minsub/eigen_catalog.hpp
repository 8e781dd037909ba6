#pragma once

#include <optional>
#include <string>
#include <vector>

#include "minsub/lie_spaces.hpp"
#include "minsub/operators.hpp"

namespace minsub {

/// What a parameter condition is needed for.
enum class ConditionRole {
  Eigen,   // needed for the function to be a (lambda, mu)-eigenfunction
  Fiber,   // needed for a non-empty fibre over 0 with 0 a regular value
  Report,  // recorded for information only
};

struct Condition {
  std::string name;  // e.g. "(b,b) != 0"
  ConditionRole role = ConditionRole::Report;
  bool holds = false;
  double value = 0.0;  // modulus of the quantity the condition constrains
};

struct EigenSpec {
  SpaceId space;
  QuadTraceFn fn;
  ComplexVector a;
  std::optional<ComplexVector> b;
  /// One value, or two for SU*(2n)/Sp(n) where the value is resolved by fitting.
  std::vector<double> lambda_candidates;
  double expected_mu = 0.0;
  bool eigen_conditions_met = false;
  bool fiber_conditions_met = false;
  std::vector<Condition> conditions;

  /// First violated condition of the given role, formatted for users; empty if none.
  std::string violation(ConditionRole role) const;
};

/// trace(a a^t x x^t) on SL(n,R)/SO(n). Requires n >= 3 and a != 0.
EigenSpec make_slr(int n, const ComplexVector& a);
/// trace(a a^t x x^t) on Sp(n,R)/U(n). Requires n >= 2, a in C^{2n}, a != 0.
EigenSpec make_spr(int n, const ComplexVector& a);
/// trace(a b^t z J z^t) on SO*(2n)/U(n). Requires a, b linearly independent.
EigenSpec make_sostar(int n, const ComplexVector& a, const ComplexVector& b);
/// trace(a b^t z J z^t) on SU*(2n)/Sp(n). Requires a, b linearly independent.
EigenSpec make_sustar(int n, const ComplexVector& a, const ComplexVector& b);

/// Dispatches on the (non-compact) space family. b is ignored for the
/// single-parameter families and required for the others.
EigenSpec make_spec(const SpaceId& space, const ComplexVector& a,
                    const std::optional<ComplexVector>& b);

struct DualExpectation {
  SpaceId space;                      // the compact dual
  std::vector<double> lambda_candidates;  // negated non-compact candidates
  double mu = 0.0;
};

DualExpectation dual_expectations(const EigenSpec& spec);

/// Tabulated (lambda, mu) for the compact spaces SU(n)/SO(n), Sp(n)/U(n),
/// SO(2n)/U(n) and SU(2n)/Sp(n).
std::pair<double, double> compact_table_values(const SpaceId& compact);

/// Real and imaginary parts of a linearly independent over R.
bool real_parts_independent(const ComplexVector& a, double tol = kDefaultRankTol);
/// a and b linearly independent over C.
bool complex_independent(const ComplexVector& a, const ComplexVector& b,
                         double tol = kDefaultRankTol);

}  // namespace minsub
