#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "minsub/matrix_core.hpp"

namespace minsub {

/// The four non-compact symmetric spaces G/K and their compact duals U/K.
enum class Family {
  SlrSo,     // SL(n,R)/SO(n)
  SprU,      // Sp(n,R)/U(n)
  SostarU,   // SO*(2n)/U(n)
  SustarSp,  // SU*(2n)/Sp(n)
  SuSo,      // SU(n)/SO(n)
  SpU,       // Sp(n)/U(n)
  So2nU,     // SO(2n)/U(n)
  Su2nSp,    // SU(2n)/Sp(n)
};

struct SpaceId {
  Family family = Family::SlrSo;
  int n = 3;

  /// Size of the matrices realising the group: n for SL/SU, 2n otherwise.
  int ambient_size() const;
  bool compact() const;
  /// Parses "slr-so:3", "spr-u:2", "sostar-u:3", "sustar-sp:2", "su-so:3",
  /// "sp-u:2", "so2n-u:3", "su2n-sp:2". Throws ParameterError.
  static SpaceId parse(std::string_view text);
  std::string to_string() const;

  friend bool operator==(const SpaceId&, const SpaceId&) = default;
};

/// Throws ParameterError when n is out of range for the family.
void validate_space(const SpaceId& id);

/// The compact dual of a non-compact space and vice versa.
SpaceId dual_space(const SpaceId& id);

/// Real dimension of the isometry group G (or U).
int group_dimension(const SpaceId& id);

struct SymmetricSpaceDescriptor {
  SpaceId id;
  int ambient_size = 0;
  std::vector<ComplexMatrix> basis_k;  // orthonormal basis of the isotropy algebra
  std::vector<ComplexMatrix> basis_p;  // orthonormal basis of its complement

  /// basis_k followed by basis_p.
  std::vector<ComplexMatrix> full_basis() const;
};

struct GroupPoint {
  SpaceId space;
  ComplexMatrix matrix;
  double membership_residual = 0.0;
};

/// Builds and validates the Cartan bases. Compact duals use basis_k and
/// i * basis_p of the non-compact sibling.
SymmetricSpaceDescriptor build_descriptor(const SpaceId& id);

/// Cached, immutable descriptor for repeated use.
const SymmetricSpaceDescriptor& descriptor(const SpaceId& id);

/// Sum of Frobenius norms of the residuals of the group's defining equations,
/// plus |det - 1| and the imaginary-part norm where applicable.
double membership_residual(const SpaceId& id, const ComplexMatrix& x);

/// Residual of the linearised defining equations at the identity.
double algebra_residual(const SpaceId& id, const ComplexMatrix& z);

/// exp(P) exp(K) with independent N(0, scale^2) coefficients over basis_p and
/// basis_k. Deterministic in seed. Throws ConvergenceError if the sampled
/// point fails the 1e-9 membership check.
GroupPoint random_point(const SpaceId& id, std::uint64_t seed, double scale = 0.5);

inline constexpr double kMembershipTol = 1e-9;

struct CartanReport {
  bool ok = true;
  double max_orthonormality = 0.0;
  double max_bracket = 0.0;
  double max_normality = 0.0;
  double max_algebra = 0.0;
  std::vector<std::string> failures;
};

/// Orthonormality of basis_k u basis_p, bracket relations [k,k] in k,
/// [k,p] in p, [p,p] in k, normality Z Z^* = Z^* Z and the linearised
/// group equations, all against tol.
CartanReport validate_cartan(const SymmetricSpaceDescriptor& d, double tol = 1e-12);

/// Deterministic 64-bit seed mixing (splitmix64 finaliser) for per-item seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace minsub
