#pragma once

#include <complex>
#include <string>
#include <string_view>

#include <Eigen/Dense>
#include <json.hpp>

namespace minsub {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline constexpr double kDefaultRankTol = 1e-10;
inline constexpr double kDefaultExpTol = 1e-13;

/// Standard complex bilinear form sum_i u_i v_i (no conjugation).
Complex bilinear(const ComplexVector& u, const ComplexVector& v);

/// Hermitian inner product sum_i u_i conj(v_i).
Complex hermitian(const ComplexVector& u, const ComplexVector& v);

/// Real Euclidean inner product Re trace(Z W^*) on complex matrices.
double frobenius_inner(const ComplexMatrix& z, const ComplexMatrix& w);

/// trace(M Z^*). Vanishes iff M is orthogonal to both Z and iZ.
Complex hermitian_trace(const ComplexMatrix& m, const ComplexMatrix& z);

// Canonical generators. Indices are zero-based; r < s for X and Y.
ComplexMatrix unit_e(int n, int i, int j);
ComplexMatrix unit_d(int n, int t);
ComplexMatrix sym_x(int n, int r, int s);
ComplexMatrix skew_y(int n, int r, int s);
/// Traceless diagonal (D_0 + ... + D_{t-1} - t D_t) / sqrt(t(t+1)), 1 <= t <= n-1.
ComplexMatrix traceless_h(int n, int t);
/// The 2n x 2n standard skew form [[0, I], [-I, 0]].
ComplexMatrix symplectic_j(int n);

/// Block matrix [[a, b], [c, d]] from four equally sized square blocks.
ComplexMatrix block2(const ComplexMatrix& a, const ComplexMatrix& b,
                     const ComplexMatrix& c, const ComplexMatrix& d);

/// Matrix exponential. Backed by Eigen's scaling-and-squaring Pade
/// implementation, which is accurate to working precision; `tol` is the
/// accuracy the caller relies on and only guards against non-finite output.
ComplexMatrix mat_exp(const ComplexMatrix& z, double tol = kDefaultExpTol);

/// Number of singular values above tol * (largest singular value).
int numerical_rank(const ComplexMatrix& m, double tol = kDefaultRankTol);

/// Largest entrywise modulus; used for scale-relative tolerances.
double max_abs(const ComplexMatrix& m);

bool all_finite(const ComplexMatrix& m);

// Text and JSON encodings. A complex scalar is written as "re+imi" / "re-imi",
// e.g. "1-2i"; a matrix is a row-major array of rows of such strings.
/// Shortest round-trip decimal form of a double.
std::string format_real(double x);
std::string format_complex(Complex z);
Complex parse_complex(std::string_view text);
/// Comma separated list of complex scalars, e.g. "1+2i,0,3-1i".
ComplexVector parse_complex_list(std::string_view text);
std::string format_complex_list(const ComplexVector& v);

nlohmann::json to_json(const ComplexMatrix& m);
nlohmann::json to_json(const ComplexVector& v);
ComplexMatrix matrix_from_json(const nlohmann::json& j);
ComplexVector vector_from_json(const nlohmann::json& j);

}  // namespace minsub
