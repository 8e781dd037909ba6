#pragma once

#include <functional>
#include <span>
#include <vector>

#include "minsub/matrix_core.hpp"

namespace minsub {

enum class Symmetry { Symmetric, Skew };

/// x |-> trace(A x B x^t) with B symmetric or skew-symmetric.
class QuadTraceFn {
 public:
  /// Throws DimensionError on non-square or mismatched A, B and
  /// ParameterError if B does not have the declared symmetry (to 1e-12).
  QuadTraceFn(ComplexMatrix a, ComplexMatrix b, Symmetry symmetry);

  /// A = u v^t.
  static QuadTraceFn outer(const ComplexVector& u, const ComplexVector& v, ComplexMatrix b,
                           Symmetry symmetry);

  const ComplexMatrix& a() const { return a_; }
  const ComplexMatrix& b() const { return b_; }
  Symmetry symmetry() const { return symmetry_; }
  int size() const { return static_cast<int>(a_.rows()); }
  /// (A + A^t)/2 or (A - A^t)/2 matching the symmetry of B; the function
  /// depends on A only through this part.
  ComplexMatrix effective_a() const;

 private:
  ComplexMatrix a_;
  ComplexMatrix b_;
  Symmetry symmetry_;
};

using MatrixFunction = std::function<Complex(const ComplexMatrix&)>;

Complex eval(const QuadTraceFn& f, const ComplexMatrix& x);

/// d/ds f(x exp(sZ)) at s = 0, in closed form.
Complex first_derivative(const QuadTraceFn& f, const ComplexMatrix& x, const ComplexMatrix& z);

/// d^2/ds^2 f(x exp(sZ)) at s = 0, in closed form.
Complex second_derivative(const QuadTraceFn& f, const ComplexMatrix& x, const ComplexMatrix& z);

/// Tension field sum_Z Z^2(f) over an orthonormal basis of the Lie algebra
/// whose elements are normal matrices (so that nabla_Z Z = 0).
Complex tau(const QuadTraceFn& f, std::span<const ComplexMatrix> basis, const ComplexMatrix& x);

/// Conformality operator sum_Z Z(f) Z(g).
Complex kappa(const QuadTraceFn& f, const QuadTraceFn& g, std::span<const ComplexMatrix> basis,
              const ComplexMatrix& x);

inline constexpr double kOracleStep1 = 1e-5;
inline constexpr double kOracleStep2 = 1e-3;

/// Centered finite difference of s |-> f(x exp(sZ)) at s = 0: two-point
/// stencil for order 1, five-point stencil for order 2.
Complex derivative_oracle(const MatrixFunction& f, const ComplexMatrix& x, const ComplexMatrix& z,
                          int order, double h);

/// Oracle versions of tau and kappa for arbitrary functions.
Complex tau_oracle(const MatrixFunction& f, std::span<const ComplexMatrix> basis,
                   const ComplexMatrix& x, double h = kOracleStep2);
Complex kappa_oracle(const MatrixFunction& f, const MatrixFunction& g,
                     std::span<const ComplexMatrix> basis, const ComplexMatrix& x,
                     double h = kOracleStep1);

/// Wraps a QuadTraceFn as a plain matrix function.
MatrixFunction as_function(const QuadTraceFn& f);

}  // namespace minsub
