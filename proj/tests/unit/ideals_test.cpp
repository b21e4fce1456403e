#include "qflat/ideals.hpp"

#include <random>

#include "gtest/gtest.h"
#include "oracles.hpp"
#include "qflat/lattice.hpp"

namespace qflat {

namespace {

Rational r(long n, long d = 1) {
  Rational x(n, d);
  x.canonicalize();
  return x;
}

FractionalIdeal I(long n, long d = 1) { return FractionalIdeal(r(n, d)); }

LocalData anisotropic(int t, int nu, int kappa = 0) {
  LocalData l;
  l.p = kappa ? 2 : 3;
  l.t = t;
  l.nu = nu;
  l.kappa = kappa;
  return l;
}

}  // namespace

class IdealsTest : public ::testing::Test {
 protected:
  Invariants six_ = invariants(QuadraticSpace::identity(6));
  Invariants eight_ = invariants(QuadraticSpace::identity(8));
};

TEST_F(IdealsTest, FieldDiscriminant) {
  EXPECT_EQ(field_discriminant(Integer(1)), I(1));
  EXPECT_EQ(field_discriminant(Integer(-1)), I(4));
  EXPECT_EQ(field_discriminant(Integer(5)), I(5));
  EXPECT_EQ(field_discriminant(Integer(-3)), I(3));
  EXPECT_EQ(field_discriminant(Integer(2)), I(8));
  EXPECT_EQ(field_discriminant(Integer(-6)), I(24));
}

TEST_F(IdealsTest, DiscriminantIdeal) {
  EXPECT_EQ(discriminant_ideal(six_), I(4));
  EXPECT_EQ(discriminant_ideal(eight_), I(1));
  for (long q : {1, 2, 3, 5, 6, 7}) {
    EXPECT_EQ(discriminant_ideal(complement_invariants(eight_, r(q)).inv), I(2 * q));
  }
  for (long q : {5, 13, 17}) EXPECT_EQ(discriminant_ideal(complement_invariants(six_, r(q)).inv), I(8 * q));
  for (long q : {2, 3, 7, 11}) EXPECT_EQ(discriminant_ideal(complement_invariants(six_, r(q)).inv), I(2 * q));
}

TEST_F(IdealsTest, BOfQ) {
  for (long q : {5, 13, 17, 29}) EXPECT_EQ(b_of_q(six_, r(q)), I(1));
  for (long q : {2, 3, 7, 11, 19}) EXPECT_EQ(b_of_q(six_, r(q)), I(2));
  for (long q : {1, 2, 3, 5, 6, 7, 10, 11, 30}) EXPECT_EQ(b_of_q(eight_, r(q)), I(1));
  EXPECT_EQ(b_of_q(six_, r(4)), I(2) * b_of_q(six_, r(1)));
  EXPECT_THROW(b_of_q(six_, r(-1)), NotRepresentedError);
  EXPECT_THROW(b_of_q(invariants(QuadraticSpace::identity(3)), r(7)), NotRepresentedError);
}

TEST_F(IdealsTest, DiscriminantDataSatisfiesChainRule) {
  for (long q : {1, 2, 3, 5, 6, 7, 10, 14}) {
    const DiscriminantData d = discriminant_data(six_, r(q));
    EXPECT_EQ(I(2 * q) * d.disc_v, d.b_q * d.b_q * d.disc_w);
    EXPECT_EQ(d.disc_v, d.b_q.pow(2) * d.disc_w / I(2 * q));
  }
}

TEST_F(IdealsTest, ScalingLaw) {
  EXPECT_TRUE(b_scaling_check(six_, r(5), r(3)));
  EXPECT_TRUE(b_scaling_check(eight_, r(1), r(2)));
  EXPECT_TRUE(b_scaling_check(six_, r(7), r(1)));
  EXPECT_TRUE(b_scaling_check(six_, r(3), r(2, 3)));
}

TEST_F(IdealsTest, SectionIdeal) {
  const SectionReport half = section_ideal(six_, r(3), I(1));
  EXPECT_EQ(half.index_ideal, I(2));
  EXPECT_FALSE(half.maximal);
  EXPECT_FALSE(half.maximal_by_discriminants);
  const SectionReport integral = section_ideal(six_, r(3), I(2));
  EXPECT_EQ(integral.index_ideal, I(1));
  EXPECT_TRUE(integral.maximal);
  EXPECT_TRUE(integral.maximal_by_discriminants);
  const SectionReport eight = section_ideal(eight_, r(6), I(1));
  EXPECT_TRUE(eight.maximal);
  EXPECT_THROW(section_ideal(six_, r(5), I(2)), ContractViolation);
}

TEST_F(IdealsTest, LocalDiscExponent) {
  EXPECT_EQ(local_disc_exponent(r(4), Integer(3)), 0);
  EXPECT_EQ(local_disc_exponent(r(2), Integer(3)), 1);
  EXPECT_EQ(local_disc_exponent(r(3), Integer(3)), 1);
  EXPECT_EQ(local_disc_exponent(r(5), Integer(2)), 1);
  EXPECT_EQ(local_disc_exponent(r(-1), Integer(2)), 2);
  EXPECT_EQ(local_disc_exponent(r(3), Integer(2)), 2);
  EXPECT_EQ(local_disc_exponent(r(2), Integer(2)), 3);
  EXPECT_EQ(local_disc_exponent(r(-6), Integer(2)), 3);
}

TEST_F(IdealsTest, LambdaExamples) {
  EXPECT_EQ(lambda_p_anisotropic(anisotropic(4, 0)), 0);
  LocalData binary = anisotropic(2, 0);
  binary.xi_delta = SquareClass::kRamified;
  binary.ord_delta = 1;
  binary.disc_delta = 1;
  EXPECT_EQ(lambda_p_anisotropic(binary), 0);
  EXPECT_EQ(lambda_p_anisotropic(anisotropic(1, 2)), 1);
  EXPECT_THROW(lambda_p_anisotropic(anisotropic(1, -1)), ArithmeticError);
  EXPECT_THROW(lambda_p_anisotropic(anisotropic(1, 1)), ArithmeticError);
}

TEST_F(IdealsTest, DiscriminantTableExamples) {
  EXPECT_EQ(local_disc_tables(anisotropic(4, 0)).disc_v, 2);
  EXPECT_EQ(local_disc_tables(anisotropic(4, 0, 1)).disc_w, 3);
  EXPECT_EQ(local_disc_tables(anisotropic(4, 1, 1)).disc_w, 2);
  LocalData ternary = anisotropic(3, 1, 1);
  EXPECT_EQ(local_disc_tables(ternary).disc_w, 3);
  EXPECT_THROW(local_disc_tables(anisotropic(1, 0)), ArithmeticError);
}

// Wherever a random space is anisotropic at p, the exponent table, the
// discriminant tables and the global ideals must agree, and the table value
// for [L~/L] must equal the discriminant of an explicitly built maximal lattice.
TEST_F(IdealsTest, LocalTablesAgreeWithGlobalIdeals) {
  std::mt19937_64 rng(41);
  int checked = 0;
  for (int i = 0; i < 150; ++i) {
    const std::size_t n = 2 + i % 3;
    const QuadraticSpace s(testing::random_definite_gram(rng, n, 6));
    const Invariants inv = invariants(s);
    const RationalVector h = testing::random_nonzero_vector(rng, n, 5);
    const Rational q = s.value(h);
    const DiscriminantData data = discriminant_data(inv, q);
    const FractionalIdeal constructive(maximal_lattice(s).disc());
    EXPECT_EQ(constructive, data.disc_v);
    for (const Integer& p : bad_primes(s)) {
      const LocalData l = local_data(inv, q, p);
      if (l.t != static_cast<int>(n) || l.nu < 0) continue;
      ++checked;
      EXPECT_EQ(data.b_q.ord(p), lambda_p_anisotropic(l)) << "p=" << p;
      const LocalDiscriminants tables = local_disc_tables(l);
      EXPECT_EQ(tables.disc_v, data.disc_v.ord(p));
      EXPECT_EQ(tables.disc_w, data.disc_w.ord(p));
      EXPECT_EQ(2 * lambda_p_anisotropic(l), (I(2) * FractionalIdeal(q) * data.disc_v / data.disc_w).ord(p));
    }
  }
  EXPECT_GT(checked, 50);
}

}  // namespace qflat
