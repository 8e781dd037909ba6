#include "minsub/matrix_core.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

#include "minsub/errors.hpp"

namespace minsub {

namespace {

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    std::ostringstream os;
    os << what << ": shape mismatch " << a.rows() << "x" << a.cols() << " vs " << b.rows() << "x"
       << b.cols();
    throw DimensionError(os.str());
  }
}

void require_index(int n, int i, const char* what) {
  if (n < 1 || i < 0 || i >= n) {
    throw DimensionError(std::string(what) + ": index out of range");
  }
}

std::string format_double(double x) {
  if (x == 0.0) x = 0.0;  // drop the sign of negative zero
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view s, std::string_view whole) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw ParameterError("cannot parse complex scalar '" + std::string(whole) + "'");
  }
  return v;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

Complex bilinear(const ComplexVector& u, const ComplexVector& v) {
  if (u.size() != v.size()) throw DimensionError("bilinear: dimension mismatch");
  return (u.array() * v.array()).sum();
}

Complex hermitian(const ComplexVector& u, const ComplexVector& v) {
  if (u.size() != v.size()) throw DimensionError("hermitian: dimension mismatch");
  return (u.array() * v.array().conjugate()).sum();
}

double frobenius_inner(const ComplexMatrix& z, const ComplexMatrix& w) {
  require_same_shape(z, w, "frobenius_inner");
  // Re trace(Z W^*) = Re sum_ij Z_ij conj(W_ij)
  return (z.array() * w.array().conjugate()).sum().real();
}

Complex hermitian_trace(const ComplexMatrix& m, const ComplexMatrix& z) {
  require_same_shape(m, z, "hermitian_trace");
  return (m.array() * z.array().conjugate()).sum();
}

ComplexMatrix unit_e(int n, int i, int j) {
  require_index(n, i, "unit_e");
  require_index(n, j, "unit_e");
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  m(i, j) = 1.0;
  return m;
}

ComplexMatrix unit_d(int n, int t) { return unit_e(n, t, t); }

ComplexMatrix sym_x(int n, int r, int s) {
  if (r >= s) throw DimensionError("sym_x: requires r < s");
  return (unit_e(n, r, s) + unit_e(n, s, r)) / std::sqrt(2.0);
}

ComplexMatrix skew_y(int n, int r, int s) {
  if (r >= s) throw DimensionError("skew_y: requires r < s");
  return (unit_e(n, r, s) - unit_e(n, s, r)) / std::sqrt(2.0);
}

ComplexMatrix traceless_h(int n, int t) {
  if (t < 1 || t >= n) throw DimensionError("traceless_h: index out of range");
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  for (int k = 0; k < t; ++k) m(k, k) = 1.0;
  m(t, t) = -static_cast<double>(t);
  return m / std::sqrt(static_cast<double>(t) * (t + 1));
}

ComplexMatrix symplectic_j(int n) {
  if (n < 1) throw DimensionError("symplectic_j: n must be positive");
  ComplexMatrix z = ComplexMatrix::Zero(n, n);
  ComplexMatrix id = ComplexMatrix::Identity(n, n);
  return block2(z, id, -id, z);
}

ComplexMatrix block2(const ComplexMatrix& a, const ComplexMatrix& b, const ComplexMatrix& c,
                     const ComplexMatrix& d) {
  const auto n = a.rows();
  if (a.cols() != n || b.rows() != n || b.cols() != n || c.rows() != n || c.cols() != n ||
      d.rows() != n || d.cols() != n) {
    throw DimensionError("block2: blocks must be equally sized squares");
  }
  ComplexMatrix m(2 * n, 2 * n);
  m << a, b, c, d;
  return m;
}

ComplexMatrix mat_exp(const ComplexMatrix& z, double tol) {
  if (z.rows() != z.cols()) throw DimensionError("mat_exp: non-square input");
  if (z.size() == 0) return z;
  ComplexMatrix e = z.exp();
  if (!all_finite(e) || !(tol > 0.0)) {
    throw ConvergenceError("mat_exp: non-finite result");
  }
  return e;
}

int numerical_rank(const ComplexMatrix& m, double tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > tol * sv(0)) ++rank;
  }
  return rank;
}

double max_abs(const ComplexMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

bool all_finite(const ComplexMatrix& m) {
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    const Complex z = m.data()[i];
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

std::string format_real(double x) { return format_double(x); }

std::string format_complex(Complex z) {
  const double im = z.imag() == 0.0 ? 0.0 : z.imag();
  std::string out = format_double(z.real());
  if (std::signbit(im)) {
    out += '-';
    out += format_double(-im);
  } else {
    out += '+';
    out += format_double(im);
  }
  out += 'i';
  return out;
}

Complex parse_complex(std::string_view text) {
  const std::string_view s = trim(text);
  if (s.empty()) throw ParameterError("cannot parse empty complex scalar");
  if (s.back() != 'i') return {parse_double(s, text), 0.0};

  const std::string_view body = s.substr(0, s.size() - 1);
  // Split at the last sign that is not a leading sign and not an exponent sign.
  std::size_t split = std::string_view::npos;
  for (std::size_t k = body.size(); k-- > 1;) {
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  auto imag_of = [&](std::string_view t) -> double {
    if (t.empty() || t == "+") return 1.0;
    if (t == "-") return -1.0;
    return parse_double(t, text);
  };
  if (split == std::string_view::npos) return {0.0, imag_of(body)};
  return {parse_double(body.substr(0, split), text), imag_of(body.substr(split))};
}

ComplexVector parse_complex_list(std::string_view text) {
  std::vector<Complex> items;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(',', start);
    if (end == std::string_view::npos) end = text.size();
    items.push_back(parse_complex(text.substr(start, end - start)));
    start = end + 1;
  }
  ComplexVector v(static_cast<Eigen::Index>(items.size()));
  for (std::size_t k = 0; k < items.size(); ++k) v(static_cast<Eigen::Index>(k)) = items[k];
  return v;
}

std::string format_complex_list(const ComplexVector& v) {
  std::string out;
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    if (k) out += ',';
    out += format_complex(v(k));
  }
  return out;
}

nlohmann::json to_json(const ComplexMatrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(format_complex(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

nlohmann::json to_json(const ComplexVector& v) {
  nlohmann::json out = nlohmann::json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) out.push_back(format_complex(v(k)));
  return out;
}

namespace {
Complex scalar_from_json(const nlohmann::json& j) {
  if (j.is_string()) return parse_complex(j.get<std::string>());
  if (j.is_number()) return {j.get<double>(), 0.0};
  throw ParameterError("expected a complex scalar string or a number");
}
}  // namespace

ComplexMatrix matrix_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) {
    throw ParameterError("matrix JSON must be a non-empty array of rows");
  }
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  ComplexMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw DimensionError("matrix JSON rows have unequal length");
    }
    for (Eigen::Index c = 0; c < cols; ++c) m(i, c) = scalar_from_json(row[static_cast<std::size_t>(c)]);
  }
  return m;
}

ComplexVector vector_from_json(const nlohmann::json& j) {
  if (j.is_string()) return parse_complex_list(j.get<std::string>());
  if (!j.is_array()) throw ParameterError("vector JSON must be an array or a comma separated string");
  ComplexVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t k = 0; k < j.size(); ++k) v(static_cast<Eigen::Index>(k)) = scalar_from_json(j[k]);
  return v;
}

}  // namespace minsub
