#include "minsub/fiber_finder.hpp"

#include <cmath>
#include <random>

#include "minsub/errors.hpp"

namespace minsub {

namespace {

const ComplexVector& b_param(const EigenSpec& spec) { return spec.b ? *spec.b : spec.a; }

ComplexMatrix combine(const std::vector<ComplexMatrix>& basis, const RealVector& coeffs) {
  ComplexMatrix out = ComplexMatrix::Zero(basis.front().rows(), basis.front().cols());
  for (std::size_t k = 0; k < basis.size(); ++k) out += coeffs(static_cast<Eigen::Index>(k)) * basis[k];
  return out;
}

double condition_2x2(const Eigen::Matrix2d& g) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(g);
  const double lo = es.eigenvalues()(0);
  const double hi = es.eigenvalues()(1);
  if (!(lo > 0.0)) return std::numeric_limits<double>::infinity();
  return hi / lo;
}

// Minimum-norm solution of R delta = -r in the row space of R, or nullopt if
// the 2x2 system R R^t is too badly conditioned.
std::optional<RealVector> min_norm_step(const RealMatrix& r, Complex residual, double* cond_out) {
  const Eigen::Matrix2d gram = r * r.transpose();
  const double cond = condition_2x2(gram);
  if (cond_out) *cond_out = cond;
  if (!(cond <= kMaxJacobianCondition)) return std::nullopt;
  const Eigen::Vector2d rhs(-residual.real(), -residual.imag());
  const Eigen::Vector2d alpha = gram.inverse() * rhs;
  return RealVector(r.transpose() * alpha);
}

constexpr double kMaxNewtonStep = 10.0;

RealMatrix real_identity(int n) { return RealMatrix::Identity(n, n); }

// Columns v_1..v_k followed by greedily chosen standard basis vectors.
RealMatrix extend_to_basis(const std::vector<RealVector>& vs, int n) {
  RealMatrix y(n, 0);
  auto try_add = [&](const RealVector& v) {
    RealMatrix candidate(n, y.cols() + 1);
    candidate << y, v;
    if (numerical_rank(candidate.cast<Complex>(), kDefaultRankTol) == candidate.cols()) {
      y = std::move(candidate);
      return true;
    }
    return false;
  };
  for (const auto& v : vs) {
    if (!try_add(v)) throw ParameterError("extend_to_basis: vectors are linearly dependent");
  }
  for (int j = 0; j < n && y.cols() < n; ++j) try_add(real_identity(n).col(j));
  return y;
}

}  // namespace

Complex zero_test(const EigenSpec& spec, const GroupPoint& x) {
  const ComplexMatrix& m = x.matrix;
  if (m.rows() != spec.fn.size() || m.cols() != spec.fn.size()) {
    throw DimensionError("zero_test: point size does not match the eigenfunction");
  }
  const ComplexMatrix xt = m.transpose();
  return bilinear(spec.fn.b() * xt * b_param(spec), xt * spec.a);
}

Regularity is_regular(const EigenSpec& spec, const GroupPoint& x, double tol) {
  const auto& d = descriptor(spec.space);
  const ComplexMatrix& m = x.matrix;
  const ComplexMatrix big_m = spec.fn.b() * m.transpose() * spec.fn.effective_a() * m;
  Regularity reg;
  reg.m_norm = big_m.norm();
  for (const auto& z : d.basis_k) reg.margin = std::max(reg.margin, std::abs(hermitian_trace(big_m, z)));
  for (const auto& z : d.basis_p) reg.margin = std::max(reg.margin, std::abs(hermitian_trace(big_m, z)));
  reg.regular = reg.margin > tol * reg.m_norm;
  return reg;
}

RealMatrix symmetric_mapping(const RealVector& u, const RealVector& v) {
  if (u.size() != v.size()) throw DimensionError("symmetric_mapping: dimension mismatch");
  const double nu = u.norm();
  const double nv = v.norm();
  const auto n = u.size();
  if (nu == 0.0) throw ParameterError("symmetric_mapping: u must be non-zero");
  if (nv == 0.0) return RealMatrix::Zero(n, n);
  const RealVector uh = u / nu;
  const RealVector vh = v / nv;
  RealMatrix s;
  if ((uh + vh).norm() <= 1e-12) {
    s = -RealMatrix::Identity(n, n);
  } else {
    const RealVector w = (uh + vh) / std::sqrt(2.0 + 2.0 * vh.dot(uh));
    s = -RealMatrix::Identity(n, n) + 2.0 * w * w.transpose();
  }
  return (nv / nu) * s;
}

SprZeroTransform spr_zero_transform(int n, const ComplexVector& a) {
  if (a.size() != 2 * n) throw DimensionError("spr_zero_transform: a must lie in C^{2n}");
  RealVector b = a.real();
  RealVector c = a.imag();
  const RealMatrix id = real_identity(n);
  const RealMatrix zero = RealMatrix::Zero(n, n);
  auto blocks = [&](const RealMatrix& p, const RealMatrix& q, const RealMatrix& r,
                    const RealMatrix& s) {
    RealMatrix out(2 * n, 2 * n);
    out << p, q, r, s;
    return out;
  };

  SprZeroTransform result;
  RealMatrix t = real_identity(2 * n);
  if (b.head(n).norm() <= 1e-14 * b.norm()) {
    // J is symplectic and swaps the blocks: J b = (b2, -b1).
    t = blocks(zero, id, -id, zero);
    result.swapped = true;
    b = t * b;
    c = t * c;
  }
  const RealVector b1 = b.head(n);
  if (b1.norm() == 0.0) throw ParameterError("spr_zero_transform: Re a must be non-zero");

  const RealMatrix s1 = symmetric_mapping(b1, -RealVector(b.tail(n)));
  const RealMatrix shear_lower = blocks(id, zero, s1, id);
  t = shear_lower * t;
  const RealVector c1 = c.head(n);
  const RealVector c3 = s1 * c1 + c.tail(n);

  if (c3.norm() <= 1e-12 * std::max(c.norm(), 1.0)) {
    const RealMatrix v = extend_to_basis({b1, c1}, n);
    const RealMatrix d1 = blocks(v.inverse(), zero, zero, v.transpose());
    t = d1 * t;
    result.branch = 1;
  } else {
    const RealMatrix s2 = symmetric_mapping(c3, -c1);
    const RealMatrix shear_upper = blocks(id, s2, zero, id);
    const double lambda = std::sqrt(c3.norm() / b1.norm());
    const RealMatrix d2 = blocks(lambda * id, zero, zero, id / lambda);
    t = d2 * shear_upper * t;
    result.branch = 2;
  }
  result.x = t.transpose();
  return result;
}

std::optional<FiberPoint> certify(const EigenSpec& spec, const ComplexMatrix& x, Complex level) {
  FiberPoint fp{{spec.space, x, membership_residual(spec.space, x)}, 0.0, 0.0};
  fp.phi_abs = std::abs(eval(spec.fn, x) - level);
  if (!(fp.phi_abs <= kFiberPhiTol) || !(fp.point.membership_residual <= kMembershipTol)) {
    return std::nullopt;
  }
  const Regularity reg = is_regular(spec, fp.point);
  if (!reg.regular) return std::nullopt;
  fp.regularity_margin = reg.margin;
  return fp;
}

FiberPoint constructive_zero(const EigenSpec& spec) {
  if (!spec.fiber_conditions_met) {
    throw ParameterError("constructive_zero: " + spec.violation(ConditionRole::Fiber));
  }
  const int n = spec.space.n;
  ComplexMatrix x;
  switch (spec.space.family) {
    case Family::SlrSo: {
      RealMatrix y = extend_to_basis({spec.a.real(), spec.a.imag()}, n);
      // n >= 3, so the last column is one of the adjoined standard vectors.
      y.col(n - 1) /= y.determinant();
      x = y.inverse().transpose().cast<Complex>();
      break;
    }
    case Family::SprU:
      x = spr_zero_transform(n, spec.a).x.cast<Complex>();
      break;
    case Family::SostarU:
    case Family::SustarSp:
      x = ComplexMatrix::Identity(2 * n, 2 * n);
      break;
    default:
      throw ParameterError("constructive_zero: unsupported space " + spec.space.to_string());
  }
  auto fp = certify(spec, x);
  if (!fp) {
    throw ConvergenceError("constructive_zero: the constructed point failed certification (|phi| = " +
                           std::to_string(std::abs(eval(spec.fn, x))) + ")");
  }
  return *fp;
}

RealMatrix level_jacobian(const EigenSpec& spec, const ComplexMatrix& x) {
  const auto& basis = descriptor(spec.space).basis_p;
  RealMatrix r(2, static_cast<Eigen::Index>(basis.size()));
  for (std::size_t k = 0; k < basis.size(); ++k) {
    const Complex c = first_derivative(spec.fn, x, basis[k]);
    r(0, static_cast<Eigen::Index>(k)) = c.real();
    r(1, static_cast<Eigen::Index>(k)) = c.imag();
  }
  return r;
}

std::optional<ComplexMatrix> newton_correct(const EigenSpec& spec, ComplexMatrix x, Complex level,
                                            const NewtonOptions& opt) {
  const auto& basis = descriptor(spec.space).basis_p;
  Complex residual = eval(spec.fn, x) - level;
  double best = std::abs(residual);
  int stalled = 0;
  for (int it = 0; it < opt.max_iterations && std::abs(residual) > opt.target; ++it) {
    const auto step = min_norm_step(level_jacobian(spec, x), residual, nullptr);
    if (!step || !(step->norm() <= kMaxNewtonStep)) return std::nullopt;
    x = x * mat_exp(combine(basis, *step));
    residual = eval(spec.fn, x) - level;
    const double r = std::abs(residual);
    if (!std::isfinite(r) || r > 1e3 * std::max(best, 1.0)) return std::nullopt;
    if (r < best) {
      best = r;
      stalled = 0;
    } else if (++stalled >= 3) {
      break;
    }
  }
  if (!(std::abs(residual) <= opt.accept)) return std::nullopt;
  return x;
}

NumericZeroResult numeric_zero_attempt(const EigenSpec& spec, std::uint64_t seed,
                                       int max_iterations) {
  const auto& basis = descriptor(spec.space).basis_p;
  NumericZeroResult res;
  ComplexMatrix x = random_point(spec.space, seed).matrix;
  Complex phi = eval(spec.fn, x);
  const double switch_tol = std::max(1e-3 * std::abs(phi), 1e-8);

  // Descent on f = |phi|^2 with a Polyak step f / |grad f|^2 and backtracking.
  for (; res.iterations < max_iterations && std::abs(phi) > switch_tol; ++res.iterations) {
    const RealMatrix r = level_jacobian(spec, x);
    // Z(f) = 2 Re(conj(phi) Z(phi)) = 2 (Re phi Re c + Im phi Im c).
    const RealVector grad = 2.0 * (phi.real() * r.row(0) + phi.imag() * r.row(1)).transpose();
    const double g2 = grad.squaredNorm();
    if (!(g2 > 0.0)) break;
    const double f = std::norm(phi);
    double eta = f / g2;
    bool moved = false;
    for (int k = 0; k < 30; ++k, eta *= 0.5) {
      const ComplexMatrix trial = x * mat_exp(combine(basis, -eta * grad));
      const Complex trial_phi = eval(spec.fn, trial);
      if (std::norm(trial_phi) < f - 1e-4 * eta * g2) {
        x = trial;
        phi = trial_phi;
        moved = true;
        break;
      }
    }
    if (!moved) break;
  }

  // Newton polish.
  for (int it = 0; it < 30 && std::abs(phi) > 1e-13; ++it) {
    const auto step = min_norm_step(level_jacobian(spec, x), phi, &res.jacobian_condition);
    if (!step) break;
    x = x * mat_exp(combine(basis, *step));
    phi = eval(spec.fn, x);
  }
  if (res.jacobian_condition == 0.0) {
    Eigen::Matrix2d g = level_jacobian(spec, x) * level_jacobian(spec, x).transpose();
    res.jacobian_condition = condition_2x2(g);
  }
  res.final_phi_abs = std::abs(phi);
  if (!(res.jacobian_condition <= kMaxJacobianCondition)) {
    res.failure = "Jacobian of (Re phi, Im phi) is singular (condition " +
                  std::to_string(res.jacobian_condition) + ") at |phi| = " +
                  std::to_string(res.final_phi_abs);
    return res;
  }
  res.point = certify(spec, x);
  if (!res.point) {
    res.failure = "did not reach a certified fibre point (|phi| = " +
                  std::to_string(res.final_phi_abs) + ")";
  }
  return res;
}

FiberPoint numeric_zero(const EigenSpec& spec, std::uint64_t seed, int max_iterations) {
  NumericZeroResult res = numeric_zero_attempt(spec, seed, max_iterations);
  if (!res.point) throw ConvergenceError("numeric_zero: " + res.failure);
  return *res.point;
}

std::vector<FiberPoint> fiber_walk(const EigenSpec& spec, const FiberPoint& start, int steps,
                                   double step_size, std::uint64_t seed, const WalkOptions& opt) {
  if (steps < 0) throw ParameterError("fiber_walk: steps must be non-negative");
  if (!(step_size >= 0.0)) throw ParameterError("fiber_walk: step_size must be non-negative");
  const auto& basis = descriptor(spec.space).basis_p;
  const auto p = static_cast<Eigen::Index>(basis.size());
  if (steps > 0 && p <= 2) {
    throw ParameterError("fiber_walk: the fibre of " + spec.space.to_string() + " is zero-dimensional");
  }
  std::vector<FiberPoint> out;
  out.reserve(static_cast<std::size_t>(steps));
  ComplexMatrix x = start.point.matrix;

  for (int step = 0; step < steps; ++step) {
    std::mt19937_64 rng(mix_seed(seed, static_cast<std::uint64_t>(step)));
    std::normal_distribution<double> normal(0.0, 1.0);
    RealVector t(p);
    for (Eigen::Index k = 0; k < p; ++k) t(k) = normal(rng);

    // Remove the normal directions (row space of the Jacobian).
    const RealMatrix r = level_jacobian(spec, x);
    Eigen::HouseholderQR<RealMatrix> qr(r.transpose());
    const RealMatrix q = qr.householderQ() * RealMatrix::Identity(p, 2);
    t -= q * (q.transpose() * t);
    if (!(t.norm() > 1e-12)) throw ConvergenceError("fiber_walk: degenerate tangent sample");
    t /= t.norm();

    double h = step_size;
    std::optional<FiberPoint> next;
    for (int attempt = 0; attempt <= opt.max_halvings && !next; ++attempt, h *= 0.5) {
      const ComplexMatrix trial = x * mat_exp(combine(basis, h * t));
      if (auto corrected = newton_correct(spec, trial, opt.level)) {
        next = certify(spec, *corrected, opt.level);
      }
    }
    if (!next) {
      throw ConvergenceError("fiber_walk: Newton correction failed at step " + std::to_string(step));
    }
    x = next->point.matrix;
    out.push_back(std::move(*next));
  }
  return out;
}

void write_fiber_csv(std::ostream& out, const std::vector<FiberPoint>& samples) {
  if (samples.empty()) return;
  const auto m = samples.front().point.matrix.rows();
  out << "step";
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j) out << ",x" << i << j << "_re,x" << i << j << "_im";
  out << ",phi_abs,regularity_margin\n";
  for (std::size_t s = 0; s < samples.size(); ++s) {
    const auto& x = samples[s].point.matrix;
    out << s;
    for (Eigen::Index i = 0; i < m; ++i)
      for (Eigen::Index j = 0; j < m; ++j)
        out << ',' << format_real(x(i, j).real()) << ',' << format_real(x(i, j).imag());
    out << ',' << format_real(samples[s].phi_abs) << ',' << format_real(samples[s].regularity_margin)
        << '\n';
  }
}

void write_fiber_jsonl(std::ostream& out, const std::vector<FiberPoint>& samples) {
  for (std::size_t s = 0; s < samples.size(); ++s) {
    nlohmann::json j;
    j["step"] = s;
    j["matrix"] = to_json(samples[s].point.matrix);
    j["phi_abs"] = samples[s].phi_abs;
    j["regularity_margin"] = samples[s].regularity_margin;
    out << j.dump() << '\n';
  }
}

}  // namespace minsub
