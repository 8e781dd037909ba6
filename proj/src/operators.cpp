#include "minsub/operators.hpp"

#include <utility>

#include "minsub/errors.hpp"

namespace minsub {

namespace {

void check_point(const QuadTraceFn& f, const ComplexMatrix& x, const char* what) {
  if (x.rows() != f.size() || x.cols() != f.size()) {
    throw DimensionError(std::string(what) + ": point size does not match the function");
  }
}

void check_direction(const QuadTraceFn& f, const ComplexMatrix& z, const char* what) {
  if (z.rows() != f.size() || z.cols() != f.size()) {
    throw DimensionError(std::string(what) + ": direction size does not match the function");
  }
}

}  // namespace

QuadTraceFn::QuadTraceFn(ComplexMatrix a, ComplexMatrix b, Symmetry symmetry)
    : a_(std::move(a)), b_(std::move(b)), symmetry_(symmetry) {
  if (a_.rows() != a_.cols() || b_.rows() != b_.cols() || a_.rows() != b_.rows()) {
    throw DimensionError("QuadTraceFn: A and B must be square and of equal size");
  }
  const ComplexMatrix defect =
      symmetry_ == Symmetry::Symmetric ? ComplexMatrix(b_ - b_.transpose())
                                       : ComplexMatrix(b_ + b_.transpose());
  if (max_abs(defect) > 1e-12 * std::max(1.0, max_abs(b_))) {
    throw ParameterError(symmetry_ == Symmetry::Symmetric ? "QuadTraceFn: B is not symmetric"
                                                          : "QuadTraceFn: B is not skew-symmetric");
  }
}

QuadTraceFn QuadTraceFn::outer(const ComplexVector& u, const ComplexVector& v, ComplexMatrix b,
                               Symmetry symmetry) {
  if (u.size() != v.size()) throw DimensionError("QuadTraceFn::outer: dimension mismatch");
  return QuadTraceFn(u * v.transpose(), std::move(b), symmetry);
}

ComplexMatrix QuadTraceFn::effective_a() const {
  return symmetry_ == Symmetry::Symmetric ? ComplexMatrix(0.5 * (a_ + a_.transpose()))
                                          : ComplexMatrix(0.5 * (a_ - a_.transpose()));
}

Complex eval(const QuadTraceFn& f, const ComplexMatrix& x) {
  check_point(f, x, "eval");
  return (f.a() * x * f.b() * x.transpose()).trace();
}

Complex first_derivative(const QuadTraceFn& f, const ComplexMatrix& x, const ComplexMatrix& z) {
  check_point(f, x, "first_derivative");
  check_direction(f, z, "first_derivative");
  const ComplexMatrix ax = f.a() * x;
  const ComplexMatrix xt = x.transpose();
  return (ax * z * f.b() * xt).trace() + (ax * f.b() * z.transpose() * xt).trace();
}

Complex second_derivative(const QuadTraceFn& f, const ComplexMatrix& x, const ComplexMatrix& z) {
  check_point(f, x, "second_derivative");
  check_direction(f, z, "second_derivative");
  const ComplexMatrix ax = f.a() * x;
  const ComplexMatrix xt = x.transpose();
  const ComplexMatrix zt = z.transpose();
  return (ax * z * z * f.b() * xt).trace() + 2.0 * (ax * z * f.b() * zt * xt).trace() +
         (ax * f.b() * zt * zt * xt).trace();
}

Complex tau(const QuadTraceFn& f, std::span<const ComplexMatrix> basis, const ComplexMatrix& x) {
  Complex sum = 0.0;
  for (const auto& z : basis) sum += second_derivative(f, x, z);
  return sum;
}

Complex kappa(const QuadTraceFn& f, const QuadTraceFn& g, std::span<const ComplexMatrix> basis,
              const ComplexMatrix& x) {
  if (f.size() != g.size()) throw DimensionError("kappa: functions of different sizes");
  Complex sum = 0.0;
  for (const auto& z : basis) sum += first_derivative(f, x, z) * first_derivative(g, x, z);
  return sum;
}

Complex derivative_oracle(const MatrixFunction& f, const ComplexMatrix& x, const ComplexMatrix& z,
                          int order, double h) {
  if (!(h > 0.0)) throw ParameterError("derivative_oracle: h must be positive");
  if (x.cols() != z.rows() || z.rows() != z.cols()) {
    throw DimensionError("derivative_oracle: size mismatch");
  }
  auto at = [&](double s) { return f(x * mat_exp(s * z)); };
  switch (order) {
    case 1:
      return (at(h) - at(-h)) / (2.0 * h);
    case 2:
      return (-at(2 * h) + 16.0 * at(h) - 30.0 * at(0.0) + 16.0 * at(-h) - at(-2 * h)) /
             (12.0 * h * h);
    default:
      throw ParameterError("derivative_oracle: order must be 1 or 2");
  }
}

Complex tau_oracle(const MatrixFunction& f, std::span<const ComplexMatrix> basis,
                   const ComplexMatrix& x, double h) {
  Complex sum = 0.0;
  for (const auto& z : basis) sum += derivative_oracle(f, x, z, 2, h);
  return sum;
}

Complex kappa_oracle(const MatrixFunction& f, const MatrixFunction& g,
                     std::span<const ComplexMatrix> basis, const ComplexMatrix& x, double h) {
  Complex sum = 0.0;
  for (const auto& z : basis) {
    sum += derivative_oracle(f, x, z, 1, h) * derivative_oracle(g, x, z, 1, h);
  }
  return sum;
}

MatrixFunction as_function(const QuadTraceFn& f) {
  return [f](const ComplexMatrix& x) { return eval(f, x); };
}

}  // namespace minsub
