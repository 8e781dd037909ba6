#include "minsub/lie_spaces.hpp"

#include <array>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <sstream>
#include <utility>

#include "minsub/errors.hpp"

namespace minsub {

namespace {

struct FamilyName {
  Family family;
  std::string_view name;
};

constexpr std::array<FamilyName, 8> kFamilyNames{{
    {Family::SlrSo, "slr-so"},
    {Family::SprU, "spr-u"},
    {Family::SostarU, "sostar-u"},
    {Family::SustarSp, "sustar-sp"},
    {Family::SuSo, "su-so"},
    {Family::SpU, "sp-u"},
    {Family::So2nU, "so2n-u"},
    {Family::Su2nSp, "su2n-sp"},
}};

Family noncompact_family(Family f) {
  switch (f) {
    case Family::SuSo: return Family::SlrSo;
    case Family::SpU: return Family::SprU;
    case Family::So2nU: return Family::SostarU;
    case Family::Su2nSp: return Family::SustarSp;
    default: return f;
  }
}

using Basis = std::vector<ComplexMatrix>;

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
const Complex kI{0.0, 1.0};

template <typename F>
void for_pairs(int n, F&& f) {
  for (int r = 0; r < n; ++r)
    for (int s = r + 1; s < n; ++s) f(r, s);
}

// Elements of the form (1/sqrt 2) [[a, b], [c, d]].
ComplexMatrix hb(const ComplexMatrix& a, const ComplexMatrix& b, const ComplexMatrix& c,
                 const ComplexMatrix& d) {
  return kInvSqrt2 * block2(a, b, c, d);
}

// u(n) embedded as [[A, B], [-B, A]], A real skew, B real symmetric. Shared by
// Sp(n,R) and SO*(2n).
Basis unitary_block_k(int n) {
  const ComplexMatrix z = ComplexMatrix::Zero(n, n);
  Basis k;
  for_pairs(n, [&](int r, int s) { k.push_back(hb(skew_y(n, r, s), z, z, skew_y(n, r, s))); });
  for_pairs(n, [&](int r, int s) { k.push_back(hb(z, sym_x(n, r, s), -sym_x(n, r, s), z)); });
  for (int t = 0; t < n; ++t) k.push_back(hb(z, unit_d(n, t), -unit_d(n, t), z));
  return k;
}

std::pair<Basis, Basis> noncompact_bases(const SpaceId& id) {
  const int n = id.n;
  const ComplexMatrix z = ComplexMatrix::Zero(n, n);
  Basis k, p;
  switch (noncompact_family(id.family)) {
    case Family::SlrSo: {
      // so(n) and real symmetric traceless matrices.
      for_pairs(n, [&](int r, int s) { k.push_back(skew_y(n, r, s)); });
      for_pairs(n, [&](int r, int s) { p.push_back(sym_x(n, r, s)); });
      for (int t = 1; t < n; ++t) p.push_back(traceless_h(n, t));
      break;
    }
    case Family::SprU: {
      // p = [[S1, S2], [S2, -S1]] with S1, S2 real symmetric.
      k = unitary_block_k(n);
      for_pairs(n, [&](int r, int s) { p.push_back(hb(sym_x(n, r, s), z, z, -sym_x(n, r, s))); });
      for_pairs(n, [&](int r, int s) { p.push_back(hb(z, sym_x(n, r, s), sym_x(n, r, s), z)); });
      for (int t = 0; t < n; ++t) p.push_back(hb(unit_d(n, t), z, z, -unit_d(n, t)));
      for (int t = 0; t < n; ++t) p.push_back(hb(z, unit_d(n, t), unit_d(n, t), z));
      break;
    }
    case Family::SostarU: {
      // p = i [[A, B], [B, -A]] with A, B real skew.
      k = unitary_block_k(n);
      for_pairs(n, [&](int r, int s) {
        p.push_back(kI * hb(skew_y(n, r, s), z, z, -skew_y(n, r, s)));
      });
      for_pairs(n, [&](int r, int s) { p.push_back(kI * hb(z, skew_y(n, r, s), skew_y(n, r, s), z)); });
      break;
    }
    case Family::SustarSp: {
      // Both parts have the quaternionic shape [[Z, W], [-conj W, conj Z]].
      // sp(n): Z anti-Hermitian, W complex symmetric.
      for_pairs(n, [&](int r, int s) { k.push_back(hb(skew_y(n, r, s), z, z, skew_y(n, r, s))); });
      for_pairs(n, [&](int r, int s) {
        k.push_back(hb(kI * sym_x(n, r, s), z, z, -kI * sym_x(n, r, s)));
      });
      for (int t = 0; t < n; ++t) k.push_back(hb(kI * unit_d(n, t), z, z, -kI * unit_d(n, t)));
      for_pairs(n, [&](int r, int s) { k.push_back(hb(z, sym_x(n, r, s), -sym_x(n, r, s), z)); });
      for (int t = 0; t < n; ++t) k.push_back(hb(z, unit_d(n, t), -unit_d(n, t), z));
      for_pairs(n, [&](int r, int s) {
        k.push_back(hb(z, kI * sym_x(n, r, s), kI * sym_x(n, r, s), z));
      });
      for (int t = 0; t < n; ++t) k.push_back(hb(z, kI * unit_d(n, t), kI * unit_d(n, t), z));
      // p: Z Hermitian with Re trace Z = 0, W complex skew.
      for_pairs(n, [&](int r, int s) { p.push_back(hb(sym_x(n, r, s), z, z, sym_x(n, r, s))); });
      for_pairs(n, [&](int r, int s) {
        p.push_back(hb(kI * skew_y(n, r, s), z, z, -kI * skew_y(n, r, s)));
      });
      for (int t = 1; t < n; ++t) p.push_back(hb(traceless_h(n, t), z, z, traceless_h(n, t)));
      for_pairs(n, [&](int r, int s) { p.push_back(hb(z, skew_y(n, r, s), -skew_y(n, r, s), z)); });
      for_pairs(n, [&](int r, int s) {
        p.push_back(hb(z, kI * skew_y(n, r, s), kI * skew_y(n, r, s), z));
      });
      break;
    }
    default:
      throw ParameterError("noncompact_bases: unexpected family");
  }
  return {std::move(k), std::move(p)};
}

double imag_norm(const ComplexMatrix& x) { return x.imag().norm(); }

double det_residual(const ComplexMatrix& x) { return std::abs(x.determinant() - Complex(1.0)); }

}  // namespace

int SpaceId::ambient_size() const {
  return (family == Family::SlrSo || family == Family::SuSo) ? n : 2 * n;
}

bool SpaceId::compact() const { return noncompact_family(family) != family; }

SpaceId SpaceId::parse(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw ParameterError("space id '" + std::string(text) + "' must look like 'slr-so:3'");
  }
  const std::string_view name = text.substr(0, colon);
  const std::string num(text.substr(colon + 1));
  SpaceId id;
  bool found = false;
  for (const auto& fn : kFamilyNames) {
    if (fn.name == name) {
      id.family = fn.family;
      found = true;
    }
  }
  if (!found) throw ParameterError("unknown space family '" + std::string(name) + "'");
  std::size_t used = 0;
  try {
    id.n = std::stoi(num, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != num.size()) {
    throw ParameterError("space id '" + std::string(text) + "' has an invalid n");
  }
  validate_space(id);
  return id;
}

std::string SpaceId::to_string() const {
  for (const auto& fn : kFamilyNames) {
    if (fn.family == family) return std::string(fn.name) + ":" + std::to_string(n);
  }
  return "unknown:" + std::to_string(n);
}

void validate_space(const SpaceId& id) {
  const Family f = noncompact_family(id.family);
  const int min_n = f == Family::SlrSo ? 3 : 2;
  if (id.n < min_n) {
    throw ParameterError("space " + id.to_string() + " requires n >= " + std::to_string(min_n));
  }
}

SpaceId dual_space(const SpaceId& id) {
  SpaceId d = id;
  switch (id.family) {
    case Family::SlrSo: d.family = Family::SuSo; break;
    case Family::SprU: d.family = Family::SpU; break;
    case Family::SostarU: d.family = Family::So2nU; break;
    case Family::SustarSp: d.family = Family::Su2nSp; break;
    default: d.family = noncompact_family(id.family); break;
  }
  return d;
}

int group_dimension(const SpaceId& id) {
  const int n = id.n;
  switch (noncompact_family(id.family)) {
    case Family::SlrSo: return n * n - 1;
    case Family::SprU: return 2 * n * n + n;
    case Family::SostarU: return 2 * n * n - n;
    case Family::SustarSp: return 4 * n * n - 1;
    default: return 0;
  }
}

std::vector<ComplexMatrix> SymmetricSpaceDescriptor::full_basis() const {
  std::vector<ComplexMatrix> all = basis_k;
  all.insert(all.end(), basis_p.begin(), basis_p.end());
  return all;
}

SymmetricSpaceDescriptor build_descriptor(const SpaceId& id) {
  validate_space(id);
  auto [k, p] = noncompact_bases(id);
  if (id.compact()) {
    for (auto& z : p) z *= kI;
  }
  SymmetricSpaceDescriptor d{id, id.ambient_size(), std::move(k), std::move(p)};
  const CartanReport report = validate_cartan(d);
  if (!report.ok) {
    throw Error("build_descriptor(" + id.to_string() + "): " + report.failures.front());
  }
  return d;
}

const SymmetricSpaceDescriptor& descriptor(const SpaceId& id) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::unique_ptr<SymmetricSpaceDescriptor>> cache;
  const std::pair<int, int> key{static_cast<int>(id.family), id.n};
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(key);
  if (it == cache.end()) {
    it = cache.emplace(key, std::make_unique<SymmetricSpaceDescriptor>(build_descriptor(id))).first;
  }
  return *it->second;
}

double membership_residual(const SpaceId& id, const ComplexMatrix& x) {
  const int m = id.ambient_size();
  if (x.rows() != m || x.cols() != m) {
    throw DimensionError("membership_residual: expected " + std::to_string(m) + "x" +
                         std::to_string(m) + " matrix for " + id.to_string());
  }
  const ComplexMatrix eye = ComplexMatrix::Identity(m, m);
  switch (id.family) {
    case Family::SlrSo:
      return imag_norm(x) + det_residual(x);
    case Family::SprU: {
      const ComplexMatrix j = symplectic_j(id.n);
      return imag_norm(x) + (x * j * x.transpose() - j).norm();
    }
    case Family::SostarU: {
      const ComplexMatrix j = symplectic_j(id.n);
      return (x * x.transpose() - eye).norm() + (x.conjugate() * j * x.transpose() - j).norm() +
             det_residual(x);
    }
    case Family::SustarSp: {
      const ComplexMatrix j = symplectic_j(id.n);
      return (x * j - j * x.conjugate()).norm() + det_residual(x);
    }
    case Family::SuSo:
    case Family::Su2nSp:
      return (x * x.adjoint() - eye).norm() + det_residual(x);
    case Family::SpU: {
      const ComplexMatrix j = symplectic_j(id.n);
      return (x * x.adjoint() - eye).norm() + (x * j * x.transpose() - j).norm();
    }
    case Family::So2nU:
      return imag_norm(x) + (x * x.transpose() - eye).norm() + det_residual(x);
  }
  return 0.0;
}

double algebra_residual(const SpaceId& id, const ComplexMatrix& z) {
  const int m = id.ambient_size();
  if (z.rows() != m || z.cols() != m) throw DimensionError("algebra_residual: size mismatch");
  const double tr = std::abs(z.trace());
  switch (id.family) {
    case Family::SlrSo:
      return imag_norm(z) + tr;
    case Family::SprU: {
      const ComplexMatrix j = symplectic_j(id.n);
      return imag_norm(z) + (z * j + j * z.transpose()).norm();
    }
    case Family::SostarU: {
      const ComplexMatrix j = symplectic_j(id.n);
      return (z + z.transpose()).norm() + (z.conjugate() * j + j * z.transpose()).norm();
    }
    case Family::SustarSp: {
      const ComplexMatrix j = symplectic_j(id.n);
      return (z * j - j * z.conjugate()).norm() + tr;
    }
    case Family::SuSo:
    case Family::Su2nSp:
      return (z + z.adjoint()).norm() + tr;
    case Family::SpU: {
      const ComplexMatrix j = symplectic_j(id.n);
      return (z + z.adjoint()).norm() + (z * j + j * z.transpose()).norm();
    }
    case Family::So2nU:
      return imag_norm(z) + (z + z.transpose()).norm();
  }
  return 0.0;
}

GroupPoint random_point(const SpaceId& id, std::uint64_t seed, double scale) {
  if (!(scale > 0.0)) throw ParameterError("random_point: scale must be positive");
  const auto& d = descriptor(id);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, scale);
  const int m = d.ambient_size;
  ComplexMatrix p = ComplexMatrix::Zero(m, m);
  ComplexMatrix k = ComplexMatrix::Zero(m, m);
  for (const auto& z : d.basis_p) p += normal(rng) * z;
  for (const auto& z : d.basis_k) k += normal(rng) * z;
  GroupPoint point{id, mat_exp(p) * mat_exp(k), 0.0};
  point.membership_residual = membership_residual(id, point.matrix);
  if (!(point.membership_residual <= kMembershipTol)) {
    throw ConvergenceError("random_point: membership residual " +
                           std::to_string(point.membership_residual) + " exceeds tolerance");
  }
  return point;
}

CartanReport validate_cartan(const SymmetricSpaceDescriptor& d, double tol) {
  CartanReport rep;
  auto fail = [&](const std::string& msg) {
    rep.ok = false;
    rep.failures.push_back(msg);
  };
  auto label = [&](std::size_t idx) {
    const std::size_t nk = d.basis_k.size();
    std::ostringstream os;
    if (idx < nk) os << "basis_k[" << idx << "]";
    else os << "basis_p[" << idx - nk << "]";
    return os.str();
  };

  const auto all = d.full_basis();
  const std::size_t nk = d.basis_k.size();

  if (static_cast<int>(all.size()) != group_dimension(d.id)) {
    fail("dimension: " + std::to_string(all.size()) + " basis elements, expected " +
         std::to_string(group_dimension(d.id)));
  }
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (all[i].rows() != d.ambient_size || all[i].cols() != d.ambient_size) {
      fail("shape: " + label(i) + " has the wrong size");
      return rep;
    }
  }

  for (std::size_t i = 0; i < all.size(); ++i) {
    for (std::size_t j = i; j < all.size(); ++j) {
      const double g = frobenius_inner(all[i], all[j]);
      const double err = std::abs(g - (i == j ? 1.0 : 0.0));
      rep.max_orthonormality = std::max(rep.max_orthonormality, err);
      if (err > tol) {
        std::ostringstream os;
        os << "orthonormality: <" << label(i) << ", " << label(j) << "> = " << g;
        fail(os.str());
      }
    }
  }

  // Residual of c after removing its component in span(part).
  auto off_span = [](const ComplexMatrix& c, const std::vector<ComplexMatrix>& part) {
    ComplexMatrix r = c;
    for (const auto& z : part) r -= frobenius_inner(c, z) * z;
    return r.norm();
  };
  for (std::size_t i = 0; i < all.size(); ++i) {
    for (std::size_t j = i + 1; j < all.size(); ++j) {
      const bool ik = i < nk;
      const bool jk = j < nk;
      const ComplexMatrix c = all[i] * all[j] - all[j] * all[i];
      // [k,k] and [p,p] land in k; [k,p] lands in p.
      const auto& target = (ik == jk) ? d.basis_k : d.basis_p;
      const double err = off_span(c, target);
      rep.max_bracket = std::max(rep.max_bracket, err);
      if (err > tol) {
        std::ostringstream os;
        os << "bracket: [" << label(i) << ", " << label(j) << "] leaves "
           << (ik == jk ? "basis_k" : "basis_p") << " by " << err;
        fail(os.str());
      }
    }
  }

  for (std::size_t i = 0; i < all.size(); ++i) {
    const ComplexMatrix& z = all[i];
    const double nerr = (z * z.adjoint() - z.adjoint() * z).norm();
    rep.max_normality = std::max(rep.max_normality, nerr);
    if (nerr > tol) fail("normality: " + label(i) + " is not normal");
    const double aerr = algebra_residual(d.id, z);
    rep.max_algebra = std::max(rep.max_algebra, aerr);
    if (aerr > tol) fail("algebra: " + label(i) + " violates the linearised group equations");
  }
  return rep;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace minsub
