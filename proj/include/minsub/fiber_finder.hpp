#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "minsub/eigen_catalog.hpp"

namespace minsub {

inline constexpr double kFiberPhiTol = 1e-10;
inline constexpr double kRegularityTol = 1e-6;
inline constexpr double kMaxJacobianCondition = 1e8;

struct FiberPoint {
  GroupPoint point;
  double phi_abs = 0.0;
  double regularity_margin = 0.0;
};

/// bilinear(B x^t b, x^t a), which equals +eval for symmetric B and -eval
/// for skew B. Zero exactly on the fibre over 0.
Complex zero_test(const EigenSpec& spec, const GroupPoint& x);

struct Regularity {
  bool regular = false;
  double margin = 0.0;    // max_Z |trace(M Z^*)| over the Lie algebra basis
  double m_norm = 0.0;    // Frobenius norm of M
};

/// M = B x^t A x with A the part of a b^t matching the symmetry of B. Since
/// every basis element is Hermitian or anti-Hermitian, |trace(M Z^*)| is half
/// the modulus of the derivative of phi along Z. Regular iff margin > tol |M|.
Regularity is_regular(const EigenSpec& spec, const GroupPoint& x, double tol = kRegularityTol);

/// A real symmetric s with s u = v. Throws ParameterError for u = 0.
RealMatrix symmetric_mapping(const RealVector& u, const RealVector& v);

/// Group element x in Sp(n,R) with x^t a isotropic, built from the shear and
/// dilation subgroups. branch is 1 when the lower block of the sheared
/// imaginary part vanishes and 2 otherwise.
struct SprZeroTransform {
  RealMatrix x;
  int branch = 0;
  bool swapped = false;  // true when the upper block of Re a vanished
};
SprZeroTransform spr_zero_transform(int n, const ComplexVector& a);

/// Explicit zero of the eigenfunction. SL: x = (y^{-1})^t with y built from
/// Re a, Im a and greedy standard basis vectors; Sp: spr_zero_transform;
/// SO* and SU*: the identity. Requires spec.fiber_conditions_met.
FiberPoint constructive_zero(const EigenSpec& spec);

/// Builds a certified FiberPoint from a matrix, or nullopt if any of the
/// fibre, membership and regularity checks fail.
std::optional<FiberPoint> certify(const EigenSpec& spec, const ComplexMatrix& x,
                                  Complex level = 0.0);

/// Derivatives of phi along basis_p at x, as the 2 x p real matrix with rows
/// Re and Im. Its row space is the normal space of the level set in p.
RealMatrix level_jacobian(const EigenSpec& spec, const ComplexMatrix& x);

struct NewtonOptions {
  double target = 1e-13;   // stop once |phi - level| is below this
  double accept = kFiberPhiTol;
  int max_iterations = 30;
};

/// Newton projection onto {phi = level} using minimum-norm steps in the
/// normal directions of p. nullopt on a singular Jacobian or divergence.
std::optional<ComplexMatrix> newton_correct(const EigenSpec& spec, ComplexMatrix x,
                                            Complex level = 0.0, const NewtonOptions& opt = {});

struct NumericZeroResult {
  std::optional<FiberPoint> point;
  int iterations = 0;
  double final_phi_abs = 0.0;
  double jacobian_condition = 0.0;
  std::string failure;
};

/// Gradient descent on |phi|^2 with retraction x <- x exp(-eta grad), from
/// random_point(seed), followed by 2x2 Newton polish.
NumericZeroResult numeric_zero_attempt(const EigenSpec& spec, std::uint64_t seed,
                                       int max_iterations = 500);
/// As numeric_zero_attempt but throws ConvergenceError on failure.
FiberPoint numeric_zero(const EigenSpec& spec, std::uint64_t seed, int max_iterations = 500);

struct WalkOptions {
  int max_halvings = 10;
  Complex level = 0.0;
};

/// Random tangent steps x <- x exp(h T), T a unit vector of p annihilated by
/// d phi, each followed by Newton correction and certification. Returns one
/// point per step (the start is not repeated).
std::vector<FiberPoint> fiber_walk(const EigenSpec& spec, const FiberPoint& start, int steps,
                                   double step_size, std::uint64_t seed,
                                   const WalkOptions& opt = {});

/// CSV: step, flattened matrix (re, im interleaved, row-major), phi_abs, regularity_margin.
void write_fiber_csv(std::ostream& out, const std::vector<FiberPoint>& samples);
/// One JSON object per line with keys step, matrix, phi_abs, regularity_margin.
void write_fiber_jsonl(std::ostream& out, const std::vector<FiberPoint>& samples);

}  // namespace minsub
