#include <gtest/gtest.h>

#include "minsub/errors.hpp"
#include "minsub/lie_spaces.hpp"

using namespace minsub;

namespace {

std::vector<SpaceId> all_spaces() {
  std::vector<SpaceId> out;
  for (auto f : {Family::SlrSo, Family::SuSo})
    for (int n : {3, 4, 5}) out.push_back({f, n});
  for (auto f : {Family::SprU, Family::SostarU, Family::SustarSp, Family::SpU, Family::So2nU, Family::Su2nSp})
    for (int n : {2, 3}) out.push_back({f, n});
  return out;
}

int expected_p_dim(const SpaceId& id) {
  const int n = id.n;
  switch (id.family) {
    case Family::SlrSo:
    case Family::SuSo: return (n - 1) * (n + 2) / 2;
    case Family::SprU:
    case Family::SpU: return n * (n + 1);
    case Family::SostarU:
    case Family::So2nU: return n * (n - 1);
    case Family::SustarSp:
    case Family::Su2nSp: return (n - 1) * (2 * n + 1);
  }
  return -1;
}

}  // namespace

TEST(LieSpaces, CartanBasesValidate) {
  for (const auto& id : all_spaces()) {
    const auto& d = descriptor(id);
    const CartanReport rep = validate_cartan(d);
    EXPECT_TRUE(rep.ok) << id.to_string() << ": " << (rep.failures.empty() ? "" : rep.failures.front());
    EXPECT_EQ(static_cast<int>(d.basis_k.size() + d.basis_p.size()), group_dimension(id)) << id.to_string();
    EXPECT_EQ(static_cast<int>(d.basis_p.size()), expected_p_dim(id)) << id.to_string();
  }
}

TEST(LieSpaces, GroupDimensions) {
  EXPECT_EQ(group_dimension({Family::SlrSo, 3}), 8);
  EXPECT_EQ(group_dimension({Family::SprU, 2}), 10);
  EXPECT_EQ(group_dimension({Family::SostarU, 3}), 15);
  EXPECT_EQ(group_dimension({Family::SustarSp, 2}), 15);
}

TEST(LieSpaces, ValidatorCatchesBrokenBasis) {
  SymmetricSpaceDescriptor d = build_descriptor({Family::SprU, 2});
  d.basis_p[0] *= 1.1;
  const CartanReport rep = validate_cartan(d);
  EXPECT_FALSE(rep.ok);
  ASSERT_FALSE(rep.failures.empty());
  EXPECT_NE(rep.failures.front().find("orthonormality"), std::string::npos);

  SymmetricSpaceDescriptor swapped = build_descriptor({Family::SlrSo, 3});
  std::swap(swapped.basis_k[0], swapped.basis_p[0]);
  EXPECT_FALSE(validate_cartan(swapped).ok);
}

TEST(LieSpaces, ExponentialsOfBasisAreGroupElements) {
  for (const auto& id : all_spaces()) {
    for (const auto& z : descriptor(id).full_basis()) {
      EXPECT_LT(membership_residual(id, mat_exp(0.7 * z)), 1e-12) << id.to_string();
      EXPECT_LT(algebra_residual(id, z), 1e-14) << id.to_string();
    }
  }
}

TEST(LieSpaces, RandomPointsAreMembersAndDeterministic) {
  for (const auto& id : all_spaces()) {
    const GroupPoint p = random_point(id, 42);
    EXPECT_LE(p.membership_residual, kMembershipTol) << id.to_string();
    EXPECT_EQ(random_point(id, 42).matrix, p.matrix);
    EXPECT_GT((random_point(id, 43).matrix - p.matrix).norm(), 1e-3);
  }
}

TEST(LieSpaces, MembershipRejectsNonMembers) {
  const SpaceId slr{Family::SlrSo, 3};
  EXPECT_GT(membership_residual(slr, 2.0 * ComplexMatrix::Identity(3, 3)), 1.0);
  const SpaceId spr{Family::SprU, 2};
  ComplexMatrix x = ComplexMatrix::Identity(4, 4);
  x(0, 1) = 1.0;
  EXPECT_GT(membership_residual(spr, x), 0.5);
  EXPECT_LT(membership_residual({Family::SostarU, 2}, ComplexMatrix::Identity(4, 4)), 1e-15);
}

TEST(LieSpaces, ParseAndFormat) {
  const SpaceId id = SpaceId::parse("sustar-sp:3");
  EXPECT_EQ(id.family, Family::SustarSp);
  EXPECT_EQ(id.n, 3);
  EXPECT_EQ(id.ambient_size(), 6);
  EXPECT_EQ(id.to_string(), "sustar-sp:3");
  for (const auto& s : all_spaces()) EXPECT_EQ(SpaceId::parse(s.to_string()), s);
  EXPECT_THROW(SpaceId::parse("slr-so"), ParameterError);
  EXPECT_THROW(SpaceId::parse("foo:3"), ParameterError);
  EXPECT_THROW(SpaceId::parse("slr-so:2"), ParameterError);
  EXPECT_THROW(SpaceId::parse("spr-u:1"), ParameterError);
  EXPECT_THROW(SpaceId::parse("spr-u:2x"), ParameterError);
}

TEST(LieSpaces, DualityIsAnInvolution) {
  for (const auto& id : all_spaces()) {
    const SpaceId d = dual_space(id);
    EXPECT_NE(d.compact(), id.compact());
    EXPECT_EQ(dual_space(d), id);
    EXPECT_EQ(group_dimension(d), group_dimension(id));
  }
}

TEST(LieSpaces, CompactDualUsesRotatedComplement) {
  const auto& nc = descriptor({Family::SlrSo, 3});
  const auto& c = descriptor({Family::SuSo, 3});
  ASSERT_EQ(nc.basis_p.size(), c.basis_p.size());
  for (std::size_t i = 0; i < nc.basis_p.size(); ++i)
    EXPECT_LT((c.basis_p[i] - Complex(0, 1) * nc.basis_p[i]).norm(), 1e-15);
}

TEST(LieSpaces, SeedMixingSpreadsStreams) {
  EXPECT_NE(mix_seed(0, 0), mix_seed(0, 1));
  EXPECT_NE(mix_seed(1, 0), mix_seed(0, 1));
  EXPECT_EQ(mix_seed(7, 3), mix_seed(7, 3));
}
