#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include <json.hpp>

#include "minsub/fiber_finder.hpp"

namespace minsub {

/// Points with |phi| at or below this are skipped when fitting ratios.
inline constexpr double kFitPhiFloor = 1e-6;

struct VerificationReport {
  SpaceId space;
  ComplexVector a;
  std::optional<ComplexVector> b;
  int points_tested = 0;
  int points_fitted = 0;
  double max_tau_residual = 0.0;    // max |tau - lambda phi| / (1 + |lambda phi|)
  double max_kappa_residual = 0.0;  // max |kappa - mu phi^2| / (1 + |mu phi^2|)
  double fitted_lambda = 0.0;
  double fitted_mu = 0.0;
  double resolved_lambda = 0.0;     // catalog candidate closest to fitted_lambda
  double expected_mu = 0.0;
  std::optional<std::pair<double, double>> dual_fitted;
  int regular_points = 0;
  std::vector<double> mean_curvature_norms;
  std::uint64_t seed = 0;
};

nlohmann::json to_json(const VerificationReport& report);

struct SweepFit {
  double lambda = 0.0;
  double mu = 0.0;
  int points_fitted = 0;
};

/// Median fit of tau/phi and kappa/phi^2 for f at the given points using
/// the orthonormal basis of the ambient Lie algebra. Throws ConvergenceError
/// if no point has |phi| > kFitPhiFloor.
SweepFit fit_eigenvalues(const QuadTraceFn& f, const std::vector<ComplexMatrix>& basis,
                         const std::vector<ComplexMatrix>& points);

/// Residuals at num_points random group points, with lambda resolved to the
/// nearest catalog candidate.
VerificationReport eigen_sweep(const EigenSpec& spec, int num_points, std::uint64_t seed);

/// Fitted (lambda, mu) of the same function on random points of the compact
/// dual, using the basis k u i p.
std::pair<double, double> duality_sweep(const EigenSpec& spec, int num_points, std::uint64_t seed);

struct RegularValueReport {
  int total = 0;
  int regular = 0;
  double min_margin_ratio = 0.0;  // min over samples of margin / |M|
  std::vector<int> failing;       // indices of samples failing is_regular
  bool all_regular() const { return total > 0 && regular == total; }
};

/// Throws ParameterError for an empty sample list or a function that
/// vanishes identically.
RegularValueReport regular_value_report(const EigenSpec& spec,
                                        const std::vector<FiberPoint>& samples,
                                        double tol = kRegularityTol);

/// Norm of the mean curvature vector (trace of the second fundamental form)
/// of the level set {phi = level} through p, from symmetric second
/// differences of geodesic-like curves in normal coordinates at p.
/// Throws ConvergenceError if the normal correction fails.
double mean_curvature_estimate(const EigenSpec& spec, const FiberPoint& p, double h,
                               Complex level = 0.0);

/// A certified point on {phi = level} reached from the constructive zero by
/// Newton projection. Throws ConvergenceError on failure.
FiberPoint level_point(const EigenSpec& spec, Complex level);

/// Rows (u,0,0), (0,u,0), (v,w,u^-2). Throws ParameterError for u <= 0.
GroupPoint sl3_chart(double u, double v, double w);

struct Sl3Coordinates {
  double u = 0.0;
  double v = 0.0;
  double w = 0.0;
};

/// Canonical coset representative of a point on the fibre of
/// trace(a a^t x x^t), a = (1, i, 0). Throws ParameterError off the fibre.
Sl3Coordinates sl3_canonical(const GroupPoint& x);

}  // namespace minsub
