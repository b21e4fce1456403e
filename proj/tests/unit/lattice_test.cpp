#include "qflat/lattice.hpp"

#include <atomic>
#include <random>

#include "gtest/gtest.h"
#include "oracles.hpp"

namespace qflat {

namespace {

Rational r(long n, long d = 1) {
  Rational x(n, d);
  x.canonicalize();
  return x;
}

FractionalIdeal I(long n, long d = 1) { return FractionalIdeal(r(n, d)); }

IntegerMatrix random_nonsingular(std::mt19937_64& rng, std::size_t n, int height) {
  std::uniform_int_distribution<int> d(-height, height);
  while (true) {
    IntegerMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m(i, j) = d(rng);
    if (determinant(m) != 0) return m;
  }
}

}  // namespace

class LatticeTest : public ::testing::Test {
 protected:
  static const ZLattice& six() {
    static const ZLattice l = maximal_lattice(QuadraticSpace::identity(6));
    return l;
  }
  static const ZLattice& eight() {
    static const ZLattice l = maximal_lattice(QuadraticSpace::identity(8));
    return l;
  }
};

TEST_F(LatticeTest, Construction) {
  const ZLattice z = ZLattice::standard(QuadraticSpace::identity(3));
  EXPECT_EQ(z.rank(), 3u);
  EXPECT_TRUE(z.is_integral());
  EXPECT_EQ(z.disc(), r(8));
  EXPECT_THROW(ZLattice(QuadraticSpace::identity(2), RationalMatrix(2, 2, {r(1), r(2), r(2), r(4)})), LatticeError);
  const ZLattice half(QuadraticSpace::identity(2), RationalMatrix(2, 2, {r(1, 2), r(0), r(0), r(1)}));
  EXPECT_FALSE(half.is_integral());
}

TEST_F(LatticeTest, Dual) {
  const ZLattice z = ZLattice::standard(QuadraticSpace::identity(4));
  const ZLattice d = dual(z);
  EXPECT_EQ(d, ZLattice(QuadraticSpace::identity(4), RationalMatrix::identity(4).scaled(r(1, 2))));
  EXPECT_EQ(dual(eight()), eight());
  EXPECT_EQ(index_ideal(dual(six()), six()), I(4));
}

TEST_F(LatticeTest, DualIsAnInvolution) {
  std::mt19937_64 rng(43);
  for (int i = 0; i < 40; ++i) {
    const std::size_t n = 2 + i % 4;
    const QuadraticSpace s(testing::random_definite_gram(rng, n, 6));
    const RationalMatrix basis = to_rational(random_nonsingular(rng, n, 4)).scaled(r(1, 1 + i % 3));
    const ZLattice l(s, basis);
    EXPECT_EQ(dual(dual(l)), l);
  }
}

TEST_F(LatticeTest, IndexIdeal) {
  EXPECT_EQ(index_ideal(six(), six()), I(1));
  EXPECT_EQ(index_ideal(six(), ZLattice::standard(QuadraticSpace::identity(6))), I(4));
  EXPECT_EQ(index_ideal(eight(), ZLattice::standard(QuadraticSpace::identity(8))), I(16));
  EXPECT_EQ(index_ideal(ZLattice::standard(QuadraticSpace::identity(8)), eight()), I(1, 16));
  const ZLattice z2 = ZLattice::standard(QuadraticSpace::identity(2));
  const ZLattice line(QuadraticSpace::identity(2), RationalMatrix(1, 2, {r(1), r(0)}));
  EXPECT_THROW(index_ideal(z2, line), LatticeError);
}

TEST_F(LatticeTest, SmithNormalForm) {
  EXPECT_EQ(smith_normal_form(IntegerMatrix::identity(3)), ElementaryDivisors(3, r(1)));
  EXPECT_EQ(smith_normal_form(IntegerMatrix(2, 2, {Integer(2), Integer(0), Integer(0), Integer(3)})),
            (ElementaryDivisors{r(1), r(6)}));
  EXPECT_EQ(smith_normal_form(IntegerMatrix(2, 2, {Integer(2), Integer(1), Integer(0), Integer(2)})),
            (ElementaryDivisors{r(1), r(4)}));
  EXPECT_THROW(smith_normal_form(IntegerMatrix(2, 2, {Integer(1), Integer(2), Integer(2), Integer(4)})), LatticeError);
}

TEST_F(LatticeTest, SmithNormalFormDeterminantIdentity) {
  std::mt19937_64 rng(47);
  for (int i = 0; i < 200; ++i) {
    const IntegerMatrix t = random_nonsingular(rng, 1 + i % 6, 9);
    const ElementaryDivisors e = smith_normal_form(t);
    Rational prod = 1;
    for (std::size_t k = 0; k < e.size(); ++k) {
      prod *= e[k];
      if (k > 0) EXPECT_EQ(e[k].get_num() % e[k - 1].get_num(), 0);
    }
    EXPECT_EQ(prod, r(1) * abs(determinant(t)));
  }
}

TEST_F(LatticeTest, ElementaryDivisorsMultiplyToIndex) {
  const ZLattice z = ZLattice::standard(QuadraticSpace::identity(6));
  const ElementaryDivisors e = elementary_divisors(six(), z);
  Rational prod = 1;
  for (const Rational& x : e) prod *= x;
  EXPECT_EQ(FractionalIdeal(prod), index_ideal(six(), z));
}

TEST_F(LatticeTest, MaximalLattices) {
  EXPECT_EQ(six().disc(), r(4));
  EXPECT_EQ(FractionalIdeal(eight().disc()), I(1));
  EXPECT_TRUE(six().is_integral());
  EXPECT_TRUE(non_maximal_primes(six()).empty());
  EXPECT_TRUE(non_maximal_primes(eight()).empty());
  EXPECT_FALSE(find_enlargement(six(), Integer(2)).has_value());
  const ZLattice hyp = maximal_lattice(QuadraticSpace(RationalMatrix(2, 2, {r(0), r(1, 2), r(1, 2), r(0)})));
  EXPECT_EQ(FractionalIdeal(hyp.disc()), I(1));
  EXPECT_EQ(hyp, ZLattice::standard(hyp.ambient()));
}

TEST_F(LatticeTest, PrimaryEnlargement) {
  const ZLattice z5 = ZLattice::standard(QuadraticSpace::identity(5));
  EXPECT_EQ(p_maximal_enlarge(z5, Integer(3)), z5);
  const ZLattice e = p_maximal_enlarge(ZLattice::standard(QuadraticSpace::identity(8)), Integer(2));
  EXPECT_EQ(FractionalIdeal(e.disc()), I(1));
  const ZLattice s = p_maximal_enlarge(ZLattice::standard(QuadraticSpace::identity(6)), Integer(2));
  EXPECT_EQ(FractionalIdeal(s.disc()), I(4));
  EXPECT_THROW(p_maximal_enlarge(dual(z5), Integer(2)), LatticeError);
}

TEST_F(LatticeTest, MaximalDiscriminantMatchesFormula) {
  std::mt19937_64 rng(53);
  for (int i = 0; i < 60; ++i) {
    const QuadraticSpace s(testing::random_definite_gram(rng, 1 + i % 5, 6));
    const ZLattice l = maximal_lattice(s);
    EXPECT_TRUE(l.is_integral());
    EXPECT_TRUE(non_maximal_primes(l).empty());
    EXPECT_EQ(FractionalIdeal(l.disc()), discriminant_ideal(invariants(s)));
  }
}

// [L~/L] = [M/L]^2 [M~/M] and [L~/M~] = [M/L] for integral L ⊆ M, [M/L] ⊆ Z
// with equality iff L = M, and discriminants multiply over orthogonal sums.
TEST_F(LatticeTest, ChainIdentities) {
  std::mt19937_64 rng(59);
  for (int i = 0; i < 40; ++i) {
    const std::size_t n = 2 + i % 4;
    const QuadraticSpace s(testing::random_definite_gram(rng, n, 6));
    const ZLattice m = maximal_lattice(s);
    const IntegerMatrix t = random_nonsingular(rng, n, 3);
    const ZLattice l(s, to_rational(t) * m.basis());
    const FractionalIdeal ml = index_ideal(m, l);
    EXPECT_TRUE(ml.is_integral());
    EXPECT_EQ(ml.is_unit(), l == m);
    EXPECT_EQ(FractionalIdeal(l.disc()), ml * ml * FractionalIdeal(m.disc()));
    EXPECT_EQ(index_ideal(dual(l), dual(m)), ml);
    const ZLattice sum = orthogonal_sum(l, m);
    EXPECT_EQ(FractionalIdeal(sum.disc()), FractionalIdeal(l.disc()) * FractionalIdeal(m.disc()));
  }
}

TEST_F(LatticeTest, IntersectHyperplane) {
  const ZLattice z3 = ZLattice::standard(QuadraticSpace::identity(3));
  const ZLattice w = intersect_hyperplane(z3, {r(0), r(0), r(1)});
  EXPECT_EQ(w.rank(), 2u);
  EXPECT_EQ(w.gram(), RationalMatrix::identity(2));
  EXPECT_TRUE(w.contains({r(1), r(0), r(0)}));
  EXPECT_TRUE(w.contains({r(0), r(1), r(0)}));
  const ZLattice hyp = ZLattice::standard(QuadraticSpace(RationalMatrix(2, 2, {r(0), r(1, 2), r(1, 2), r(0)})));
  EXPECT_THROW(intersect_hyperplane(hyp, {r(1), r(0)}), std::domain_error);
}

TEST_F(LatticeTest, PhiHL) {
  const ZLattice z3 = ZLattice::standard(QuadraticSpace::identity(3));
  EXPECT_EQ(phi_h_L({r(2), r(4), r(0)}, z3), I(2));
  EXPECT_EQ(phi_h_L({r(4), r(8), r(0)}, z3), I(4));
  for (long q : {1, 2, 3, 5, 6, 7}) {
    for (const IntegerVector& x : enumerate_vectors(eight(), r(q))) {
      ASSERT_EQ(phi_h_L(eight().vector(x), eight()), I(1, 2)) << "q=" << q;
    }
  }
  for (long q : {5, 13}) {
    for (const IntegerVector& x : enumerate_vectors(six(), r(q))) {
      ASSERT_EQ(phi_h_L(six().vector(x), six()), I(1, 2)) << "q=" << q;
    }
  }
}

TEST_F(LatticeTest, EnumerationMatchesThetaSeries) {
  for (int n = 1; n <= 6; ++n) {
    const ZLattice z = ZLattice::standard(QuadraticSpace::identity(n));
    const auto theta = testing::theta_power(n, 10);
    for (int q = 1; q <= 10; ++q) {
      EXPECT_EQ(static_cast<std::int64_t>(enumerate_vectors(z, r(q)).size()), theta[q]) << "n=" << n << " q=" << q;
    }
  }
}

TEST_F(LatticeTest, EnumerationBasics) {
  const ZLattice z2 = ZLattice::standard(QuadraticSpace::identity(2));
  const auto v = enumerate_vectors(z2, r(1));
  ASSERT_EQ(v.size(), 4u);
  EXPECT_TRUE(std::is_sorted(v.begin(), v.end()));
  EXPECT_EQ(enumerate_vectors(eight(), r(1)).size(), 240u);
  EXPECT_EQ(enumerate_vectors(eight(), r(2)).size(), 2160u);
  const ZLattice hyp = ZLattice::standard(QuadraticSpace(RationalMatrix(2, 2, {r(0), r(1, 2), r(1, 2), r(0)})));
  EXPECT_THROW(enumerate_vectors(hyp, r(1)), std::domain_error);
}

TEST_F(LatticeTest, EnumerationSignCanonicalAndThreads) {
  const ShortVectorEnumerator e(eight());
  for (bool canonical : {false, true}) {
    for (unsigned threads : {1u, 3u}) {
      std::atomic<std::uint64_t> count{0};
      e.for_each(r(2), canonical, threads, [&](unsigned, const std::int64_t*, std::int64_t) { ++count; });
      EXPECT_EQ(count.load(), canonical ? 1200u : 2400u);
    }
  }
}

TEST_F(LatticeTest, SixSquaresNormThreeSplitsByPhi) {
  bool integral = false, half = false;
  for (const IntegerVector& x : enumerate_vectors(six(), r(3))) {
    const FractionalIdeal phi = phi_h_L(six().vector(x), six());
    integral = integral || phi == I(1);
    half = half || phi == I(1, 2);
  }
  EXPECT_TRUE(integral);
  EXPECT_TRUE(half);
}

TEST_F(LatticeTest, VerifySectionFormula) {
  for (long q : {3, 5, 7}) {
    const auto vectors = enumerate_vectors(six(), r(q));
    for (std::size_t i = 0; i < vectors.size(); i += 37) {
      const SectionVerification v = verify_section_formula(six(), six().vector(vectors[i]));
      EXPECT_TRUE(v.match);
      EXPECT_EQ(v.formula, v.oracle);
      EXPECT_EQ(v.oracle, v.two_phi_hl == I(2) ? I(1) : b_of_q(invariants(six().ambient()), r(q)));
    }
  }
  std::mt19937_64 rng(61);
  for (int i = 0; i < 20; ++i) {
    const QuadraticSpace s(testing::random_definite_gram(rng, 4, 6));
    EXPECT_TRUE(verify_section_formula(s, testing::random_nonzero_vector(rng, 4, 5)).match);
  }
}

TEST_F(LatticeTest, Sweep) {
  SweepOptions options;
  const SweepSummary six_summary = sweep_sections(six(), {r(3), r(5), r(7)}, options);
  EXPECT_TRUE(six_summary.all_match);
  EXPECT_GT(six_summary.full_route_checks, 0u);
  std::uint64_t total = 0;
  for (const SweepClass& c : six_summary.classes) total += c.count;
  EXPECT_EQ(total, six_summary.vectors);
  EXPECT_EQ(six_summary.vectors, enumerate_vectors(six(), r(3)).size() + enumerate_vectors(six(), r(5)).size() +
                                     enumerate_vectors(six(), r(7)).size());
  options.per_h_full = true;
  options.threads = 2;
  const SweepSummary full = sweep_sections(six(), {r(3)}, options);
  EXPECT_TRUE(full.all_match);
  EXPECT_GE(full.full_route_checks, enumerate_vectors(six(), r(3)).size() / 2);
}

}  // namespace qflat
