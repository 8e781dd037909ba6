#include "minsub/geometry_verify.hpp"

#include <algorithm>
#include <cmath>

#include "minsub/errors.hpp"

namespace minsub {

namespace {

double median(std::vector<double> v) {
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  double m = v[mid];
  if (v.size() % 2 == 0) {
    m = 0.5 * (m + *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid)));
  }
  return m;
}

std::vector<ComplexMatrix> sample_points(const SpaceId& id, int count, std::uint64_t seed) {
  std::vector<ComplexMatrix> pts;
  pts.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    pts.push_back(random_point(id, mix_seed(seed, static_cast<std::uint64_t>(i))).matrix);
  }
  return pts;
}

ComplexMatrix combine(const std::vector<ComplexMatrix>& basis, const RealVector& coeffs) {
  ComplexMatrix out = ComplexMatrix::Zero(basis.front().rows(), basis.front().cols());
  for (std::size_t k = 0; k < basis.size(); ++k) out += coeffs(static_cast<Eigen::Index>(k)) * basis[k];
  return out;
}

}  // namespace

nlohmann::json to_json(const VerificationReport& r) {
  nlohmann::json j;
  j["space"] = r.space.to_string();
  j["n"] = r.space.n;
  nlohmann::json params;
  params["a"] = format_complex_list(r.a);
  if (r.b) params["b"] = format_complex_list(*r.b);
  j["params"] = params;
  j["points"] = r.points_tested;
  j["points_fitted"] = r.points_fitted;
  j["max_tau_residual"] = r.max_tau_residual;
  j["max_kappa_residual"] = r.max_kappa_residual;
  j["fitted_lambda"] = r.fitted_lambda;
  j["fitted_mu"] = r.fitted_mu;
  j["resolved_lambda"] = r.resolved_lambda;
  j["expected_mu"] = r.expected_mu;
  if (r.dual_fitted) {
    j["dual_lambda"] = r.dual_fitted->first;
    j["dual_mu"] = r.dual_fitted->second;
  } else {
    j["dual_lambda"] = nullptr;
    j["dual_mu"] = nullptr;
  }
  j["regular_count"] = r.regular_points;
  j["mean_curvature"] = r.mean_curvature_norms;
  j["seed"] = r.seed;
  return j;
}

SweepFit fit_eigenvalues(const QuadTraceFn& f, const std::vector<ComplexMatrix>& basis,
                         const std::vector<ComplexMatrix>& points) {
  std::vector<double> lambdas;
  std::vector<double> mus;
  for (const auto& x : points) {
    const Complex phi = eval(f, x);
    if (std::abs(phi) <= kFitPhiFloor) continue;
    lambdas.push_back((tau(f, basis, x) / phi).real());
    mus.push_back((kappa(f, f, basis, x) / (phi * phi)).real());
  }
  if (lambdas.empty()) {
    throw ConvergenceError("fit_eigenvalues: every sample lies near the zero set; resample with a new seed");
  }
  return {median(lambdas), median(mus), static_cast<int>(lambdas.size())};
}

VerificationReport eigen_sweep(const EigenSpec& spec, int num_points, std::uint64_t seed) {
  if (num_points < 1) throw ParameterError("eigen_sweep: num_points must be at least 1");
  const auto basis = descriptor(spec.space).full_basis();
  const auto pts = sample_points(spec.space, num_points, seed);
  const SweepFit fit = fit_eigenvalues(spec.fn, basis, pts);

  VerificationReport r;
  r.space = spec.space;
  r.a = spec.a;
  r.b = spec.b;
  r.seed = seed;
  r.points_tested = num_points;
  r.points_fitted = fit.points_fitted;
  r.fitted_lambda = fit.lambda;
  r.fitted_mu = fit.mu;
  r.expected_mu = spec.expected_mu;
  r.resolved_lambda = *std::min_element(
      spec.lambda_candidates.begin(), spec.lambda_candidates.end(),
      [&](double p, double q) { return std::abs(p - fit.lambda) < std::abs(q - fit.lambda); });

  for (const auto& x : pts) {
    const Complex phi = eval(spec.fn, x);
    const Complex lp = r.resolved_lambda * phi;
    const Complex mp = spec.expected_mu * phi * phi;
    r.max_tau_residual =
        std::max(r.max_tau_residual, std::abs(tau(spec.fn, basis, x) - lp) / (1.0 + std::abs(lp)));
    r.max_kappa_residual = std::max(
        r.max_kappa_residual, std::abs(kappa(spec.fn, spec.fn, basis, x) - mp) / (1.0 + std::abs(mp)));
  }
  return r;
}

std::pair<double, double> duality_sweep(const EigenSpec& spec, int num_points, std::uint64_t seed) {
  if (num_points < 1) throw ParameterError("duality_sweep: num_points must be at least 1");
  const SpaceId dual = dual_space(spec.space);
  const SweepFit fit =
      fit_eigenvalues(spec.fn, descriptor(dual).full_basis(), sample_points(dual, num_points, seed));
  return {fit.lambda, fit.mu};
}

RegularValueReport regular_value_report(const EigenSpec& spec,
                                        const std::vector<FiberPoint>& samples, double tol) {
  if (samples.empty()) throw ParameterError("regular_value_report: no samples");
  if (spec.fn.effective_a().norm() == 0.0) {
    throw ParameterError("regular_value_report: the function vanishes identically");
  }
  RegularValueReport rep;
  rep.total = static_cast<int>(samples.size());
  rep.min_margin_ratio = std::numeric_limits<double>::infinity();
  for (int i = 0; i < rep.total; ++i) {
    const Regularity reg = is_regular(spec, samples[static_cast<std::size_t>(i)].point, tol);
    const double ratio = reg.m_norm > 0.0 ? reg.margin / reg.m_norm : 0.0;
    rep.min_margin_ratio = std::min(rep.min_margin_ratio, ratio);
    if (reg.regular) {
      ++rep.regular;
    } else {
      rep.failing.push_back(i);
    }
  }
  return rep;
}

double mean_curvature_estimate(const EigenSpec& spec, const FiberPoint& p, double h, Complex level) {
  if (!(h > 0.0)) throw ParameterError("mean_curvature_estimate: h must be positive");
  const auto& basis = descriptor(spec.space).basis_p;
  const auto dim = static_cast<Eigen::Index>(basis.size());
  const ComplexMatrix& x = p.point.matrix;

  const RealMatrix r = level_jacobian(spec, x);
  Eigen::HouseholderQR<RealMatrix> qr(r.transpose());
  const RealMatrix q = qr.householderQ() * RealMatrix::Identity(dim, dim);
  const RealMatrix normal = q.leftCols(2);
  const Eigen::Matrix2d jac = r * normal;
  if (std::abs(jac.determinant()) <= 1e-12 * jac.squaredNorm()) {
    throw ConvergenceError("mean_curvature_estimate: point is critical");
  }
  const Eigen::Matrix2d jac_inv = jac.inverse();

  // Normal offset alpha with phi(x exp(s T + N alpha)) = level, by chord Newton.
  auto normal_offset = [&](const RealVector& t, double s) {
    Eigen::Vector2d alpha = Eigen::Vector2d::Zero();
    double best = std::numeric_limits<double>::infinity();
    Eigen::Vector2d best_alpha = alpha;
    for (int it = 0; it < 60; ++it) {
      const RealVector v = s * t + normal * alpha;
      const Complex res = eval(spec.fn, x * mat_exp(combine(basis, v))) - level;
      const double ares = std::abs(res);
      if (ares < best) {
        best = ares;
        best_alpha = alpha;
      } else if (it > 5 && ares >= best) {
        break;
      }
      if (ares == 0.0) break;
      alpha -= jac_inv * Eigen::Vector2d(res.real(), res.imag());
    }
    if (!(best <= 1e-11 * std::max(1.0, std::abs(level)))) {
      throw ConvergenceError("mean_curvature_estimate: normal correction did not converge");
    }
    return best_alpha;
  };

  Eigen::Vector2d acc = Eigen::Vector2d::Zero();
  for (Eigen::Index i = 2; i < dim; ++i) {
    const RealVector t = q.col(i);
    acc += (normal_offset(t, h) + normal_offset(t, -h)) / (h * h);
  }
  return acc.norm();
}

FiberPoint level_point(const EigenSpec& spec, Complex level) {
  FiberPoint start = constructive_zero(spec);
  if (level == Complex(0.0)) return start;
  ComplexMatrix x = start.point.matrix;
  constexpr int kStages = 10;
  for (int k = 1; k <= kStages; ++k) {
    const Complex target = level * (static_cast<double>(k) / kStages);
    auto next = newton_correct(spec, x, target);
    if (!next) throw ConvergenceError("level_point: Newton continuation failed");
    x = *next;
  }
  auto fp = certify(spec, x, level);
  if (!fp) throw ConvergenceError("level_point: continuation end point failed certification");
  return *fp;
}

GroupPoint sl3_chart(double u, double v, double w) {
  if (!(u > 0.0)) throw ParameterError("sl3_chart: u must be positive");
  ComplexMatrix x = ComplexMatrix::Zero(3, 3);
  x(0, 0) = u;
  x(1, 1) = u;
  x(2, 0) = v;
  x(2, 1) = w;
  x(2, 2) = 1.0 / (u * u);
  const SpaceId id{Family::SlrSo, 3};
  return {id, x, membership_residual(id, x)};
}

Sl3Coordinates sl3_canonical(const GroupPoint& point) {
  const ComplexMatrix& m = point.matrix;
  if (m.rows() != 3 || m.cols() != 3) throw DimensionError("sl3_canonical: expected a 3x3 matrix");
  if (m.imag().norm() > 1e-8) throw ParameterError("sl3_canonical: point is not real");
  const RealMatrix x = m.real();
  const Eigen::Vector3d r1 = x.row(0).transpose();
  const Eigen::Vector3d r2 = x.row(1).transpose();
  const Complex phi = Complex(r1.squaredNorm() - r2.squaredNorm(), 2.0 * r1.dot(r2));
  if (std::abs(phi) > 1e-8 * std::max(1.0, r1.squaredNorm())) {
    throw ParameterError("sl3_canonical: point is off the fibre of a = (1, i, 0)");
  }
  const double u = r1.norm();
  const Eigen::Vector3d y1 = r1 / u;
  const Eigen::Vector3d y2 = r2 / u;
  const Eigen::Vector3d y3 = y1.cross(y2);
  Eigen::Matrix3d y;
  y << y1, y2, y3;
  const Eigen::Matrix3d xt = x * y;
  const double off = std::abs(xt(0, 1)) + std::abs(xt(0, 2)) + std::abs(xt(1, 0)) +
                     std::abs(xt(1, 2)) + std::abs(xt(1, 1) - u) + std::abs(xt(2, 2) - 1.0 / (u * u));
  if (off > 1e-8 * std::max(1.0, xt.norm())) {
    throw ParameterError("sl3_canonical: representative does not have the canonical form");
  }
  return {u, xt(2, 0), xt(2, 1)};
}

}  // namespace minsub
