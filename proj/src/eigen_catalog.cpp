#include "minsub/eigen_catalog.hpp"

#include <cmath>

#include "minsub/errors.hpp"

namespace minsub {

namespace {

constexpr double kConditionTol = 1e-10;

void require_size(const ComplexVector& v, int m, const char* name) {
  if (v.size() != m) {
    throw ParameterError(std::string(name) + " must have " + std::to_string(m) + " entries, got " +
                         std::to_string(v.size()));
  }
}

Condition vanishing(std::string name, ConditionRole role, Complex value, double scale) {
  return {std::move(name), role, std::abs(value) <= kConditionTol * std::max(scale, 1e-300),
          std::abs(value)};
}

EigenSpec finish(EigenSpec spec) {
  spec.eigen_conditions_met = true;
  spec.fiber_conditions_met = true;
  for (const auto& c : spec.conditions) {
    if (c.holds) continue;
    if (c.role == ConditionRole::Eigen) spec.eigen_conditions_met = false;
    if (c.role == ConditionRole::Eigen || c.role == ConditionRole::Fiber) {
      spec.fiber_conditions_met = false;
    }
  }
  return spec;
}

EigenSpec make_single(const SpaceId& space, const ComplexVector& a, double lambda, double mu) {
  validate_space(space);
  const int m = space.ambient_size();
  require_size(a, m, "a");
  if (a.norm() == 0.0) throw ParameterError("a = 0: the parameter vector must be non-zero");
  EigenSpec spec{space,
                 QuadTraceFn::outer(a, a, ComplexMatrix::Identity(m, m), Symmetry::Symmetric),
                 a,
                 std::nullopt,
                 {lambda},
                 mu,
                 false,
                 false,
                 {}};
  spec.conditions.push_back({"Re a, Im a linearly independent", ConditionRole::Fiber,
                             real_parts_independent(a), 0.0});
  return finish(std::move(spec));
}

EigenSpec make_pair_spec(const SpaceId& space, const ComplexVector& a, const ComplexVector& b,
                         std::vector<double> lambdas, double mu) {
  validate_space(space);
  const int m = space.ambient_size();
  require_size(a, m, "a");
  require_size(b, m, "b");
  if (!complex_independent(a, b)) {
    throw ParameterError("a, b linearly dependent: the parameters must be linearly independent");
  }
  return EigenSpec{space,
                   QuadTraceFn::outer(a, b, symplectic_j(space.n), Symmetry::Skew),
                   a,
                   b,
                   std::move(lambdas),
                   mu,
                   false,
                   false,
                   {}};
}

}  // namespace

std::string EigenSpec::violation(ConditionRole role) const {
  for (const auto& c : conditions) {
    if (c.holds) continue;
    if (c.role == role || (role == ConditionRole::Fiber && c.role == ConditionRole::Eigen)) {
      const char* what = c.role == ConditionRole::Eigen ? "the eigenfunction condition"
                                                        : "the fibre regularity condition";
      return "condition '" + c.name + "' fails (|value| = " + std::to_string(c.value) +
             "), violating " + what;
    }
  }
  return {};
}

bool real_parts_independent(const ComplexVector& a, double tol) {
  ComplexMatrix m(a.size(), 2);
  m.col(0) = a.real().cast<Complex>();
  m.col(1) = a.imag().cast<Complex>();
  return numerical_rank(m, tol) == 2;
}

bool complex_independent(const ComplexVector& a, const ComplexVector& b, double tol) {
  if (a.size() != b.size()) throw DimensionError("complex_independent: dimension mismatch");
  ComplexMatrix m(a.size(), 2);
  m.col(0) = a;
  m.col(1) = b;
  return numerical_rank(m, tol) == 2;
}

EigenSpec make_slr(int n, const ComplexVector& a) {
  const double nn = n;
  return make_single({Family::SlrSo, n}, a, 2.0 * (nn * nn + nn - 2.0) / nn, 4.0 * (nn - 1.0) / nn);
}

EigenSpec make_spr(int n, const ComplexVector& a) {
  return make_single({Family::SprU, n}, a, 2.0 * (n + 1.0), 2.0);
}

EigenSpec make_sostar(int n, const ComplexVector& a, const ComplexVector& b) {
  const SpaceId space{Family::SostarU, n};
  EigenSpec spec = make_pair_spec(space, a, b, {2.0 * (n - 1.0)}, 1.0);
  const Complex aa = bilinear(a, a);
  const Complex ab = bilinear(a, b);
  const Complex bb = bilinear(b, b);
  const double na = a.squaredNorm();
  const double nb = b.squaredNorm();
  const double nab = std::sqrt(na * nb);
  spec.conditions.push_back(
      vanishing("(a,a)(b,b) - (a,b)^2 = 0", ConditionRole::Eigen, aa * bb - ab * ab, na * nb));
  spec.conditions.push_back(
      vanishing("(a,a)(b,b) - (a,b) = 0", ConditionRole::Report, aa * bb - ab, std::max(na * nb, nab)));
  spec.conditions.push_back(vanishing("(a,a) = 0", ConditionRole::Fiber, aa, na));
  spec.conditions.push_back(vanishing("(a,b) = 0", ConditionRole::Fiber, ab, nab));
  const ComplexVector ja = symplectic_j(n) * a;
  spec.conditions.push_back(vanishing("(J a, b) = 0", ConditionRole::Fiber, bilinear(ja, b), nab));
  Condition bb_nonzero = vanishing("(b,b) != 0", ConditionRole::Fiber, bb, nb);
  bb_nonzero.holds = !bb_nonzero.holds;
  spec.conditions.push_back(bb_nonzero);
  return finish(std::move(spec));
}

EigenSpec make_sustar(int n, const ComplexVector& a, const ComplexVector& b) {
  const SpaceId space{Family::SustarSp, n};
  const double nn = n;
  EigenSpec spec = make_pair_spec(
      space, a, b, {2.0 * (nn * nn - nn - 1.0) / nn, 2.0 * (2.0 * nn * nn - nn - 1.0) / nn},
      2.0 * (nn - 1.0) / nn);
  const ComplexVector ja = symplectic_j(n) * a.conjugate();
  spec.conditions.push_back(vanishing("<J conj(a), b> = 0", ConditionRole::Fiber, hermitian(ja, b),
                                      a.norm() * b.norm()));
  return finish(std::move(spec));
}

EigenSpec make_spec(const SpaceId& space, const ComplexVector& a,
                    const std::optional<ComplexVector>& b) {
  auto need_b = [&]() -> const ComplexVector& {
    if (!b) throw ParameterError("space " + space.to_string() + " requires the parameter b");
    return *b;
  };
  switch (space.family) {
    case Family::SlrSo: return make_slr(space.n, a);
    case Family::SprU: return make_spr(space.n, a);
    case Family::SostarU: return make_sostar(space.n, a, need_b());
    case Family::SustarSp: return make_sustar(space.n, a, need_b());
    default:
      throw ParameterError("eigenfunctions are catalogued on the non-compact spaces; got " +
                           space.to_string());
  }
}

DualExpectation dual_expectations(const EigenSpec& spec) {
  DualExpectation d{dual_space(spec.space), {}, -spec.expected_mu};
  for (double l : spec.lambda_candidates) d.lambda_candidates.push_back(-l);
  return d;
}

std::pair<double, double> compact_table_values(const SpaceId& compact) {
  const double n = compact.n;
  switch (compact.family) {
    case Family::SuSo: return {-2.0 * (n * n + n - 2.0) / n, -4.0 * (n - 1.0) / n};
    case Family::SpU: return {-2.0 * (n + 1.0), -2.0};
    case Family::So2nU: return {-2.0 * (n - 1.0), -1.0};
    case Family::Su2nSp: return {-2.0 * (2.0 * n * n - n - 1.0) / n, -2.0 * (n - 1.0) / n};
    default:
      throw ParameterError("compact_table_values: " + compact.to_string() + " is not compact");
  }
}

}  // namespace minsub
