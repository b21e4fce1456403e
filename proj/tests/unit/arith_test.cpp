#include "qflat/arith.hpp"

#include <random>

#include "gtest/gtest.h"
#include "oracles.hpp"

namespace qflat {

class ArithTest : public ::testing::Test {
 protected:
  static Rational r(long n, long d = 1) {
    Rational x(n, d);
    x.canonicalize();
    return x;
  }
  static Place at(long p) { return Place::prime(Integer(p)); }
};

TEST_F(ArithTest, Valuation) {
  EXPECT_EQ(valuation(r(12), Integer(2)), 2);
  EXPECT_EQ(valuation(r(3, 4), Integer(2)), -2);
  EXPECT_EQ(valuation(r(1), Integer(97)), 0);
  EXPECT_THROW(valuation(r(0), Integer(2)), ArithmeticError);
}

TEST_F(ArithTest, ValuationIsAdditive) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<long> d(-500, 500), den(1, 300);
  for (int i = 0; i < 500; ++i) {
    long a = d(rng), b = d(rng);
    if (a == 0 || b == 0) continue;
    const Rational x = r(a, den(rng)), y = r(b, den(rng));
    for (long p : {2, 3, 5, 7}) {
      Rational xy = x * y;
      EXPECT_EQ(valuation(xy, Integer(p)), valuation(x, Integer(p)) + valuation(y, Integer(p)));
    }
  }
}

TEST_F(ArithTest, SquarefreePart) {
  EXPECT_EQ(squarefree_part(r(12)), 3);
  EXPECT_EQ(squarefree_part(r(-8, 9)), -2);
  EXPECT_EQ(squarefree_part(r(1, 6)), 6);
  EXPECT_TRUE(is_rational_square(r(4, 9)));
  EXPECT_FALSE(is_rational_square(r(-4)));
}

TEST_F(ArithTest, XiExamples) {
  EXPECT_EQ(xi(r(-1), Integer(5)), SquareClass::kSquare);
  EXPECT_EQ(xi(r(-1), Integer(3)), SquareClass::kUnramified);
  EXPECT_EQ(xi(r(5), Integer(2)), SquareClass::kUnramified);
  EXPECT_EQ(xi(r(4), Integer(7)), SquareClass::kSquare);
  EXPECT_EQ(xi(r(3), Integer(3)), SquareClass::kRamified);
  EXPECT_EQ(xi(r(-1), Integer(2)), SquareClass::kRamified);
  EXPECT_EQ(xi(r(-7), Integer(2)), SquareClass::kSquare);
}

TEST_F(ArithTest, XiMatchesBruteForce) {
  for (long b = -60; b <= 60; ++b) {
    if (b == 0) continue;
    for (long p : {2, 3, 5, 7, 11}) {
      EXPECT_EQ(to_int(xi(r(b), Integer(p))), testing::xi_bruteforce(b, p)) << "b=" << b << " p=" << p;
    }
  }
}

TEST_F(ArithTest, XiDependsOnSquareClass) {
  for (long b : {-15, -3, -1, 2, 3, 5, 6, 7, 10}) {
    for (long c : {2, 3, 5, 7}) {
      for (long p : {2, 3, 5, 7}) {
        EXPECT_EQ(xi(r(b * c * c), Integer(p)), xi(r(b), Integer(p)));
        EXPECT_EQ(xi(r(b, c * c), Integer(p)), xi(r(b), Integer(p)));
      }
    }
  }
}

TEST_F(ArithTest, HilbertExamples) {
  EXPECT_EQ(hilbert(r(-1), r(-1), Place::infinity()), -1);
  EXPECT_EQ(hilbert(r(-1), r(-1), at(2)), -1);
  EXPECT_EQ(hilbert(r(-1), r(-1), at(3)), 1);
  for (long b : {-7, 2, 3, 12})
    for (long p : {2, 3, 5}) EXPECT_EQ(hilbert(r(1), r(b), at(p)), 1);
}

TEST_F(ArithTest, HilbertMatchesBruteForce) {
  for (long a = -12; a <= 12; ++a) {
    for (long b = -12; b <= 12; ++b) {
      if (a == 0 || b == 0) continue;
      for (long p : {2, 3}) {
        EXPECT_EQ(hilbert(r(a), r(b), at(p)), testing::hilbert_bruteforce(a, b, p))
            << "(" << a << "," << b << ")_" << p;
      }
    }
  }
  for (long a : {-10, -5, -2, -1, 2, 5, 10})
    for (long b : {-5, -3, 3, 5, 15})
      EXPECT_EQ(hilbert(r(a), r(b), at(5)), testing::hilbert_bruteforce(a, b, 5));
}

TEST_F(ArithTest, HilbertSymmetricAndBimultiplicative) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<long> d(-40, 40);
  for (int i = 0; i < 300; ++i) {
    long a = d(rng), b = d(rng), c = d(rng);
    if (a == 0 || b == 0 || c == 0) continue;
    for (long p : {2, 3, 5, 7}) {
      EXPECT_EQ(hilbert(r(a), r(b), at(p)), hilbert(r(b), r(a), at(p)));
      EXPECT_EQ(hilbert(r(a * c), r(b), at(p)), hilbert(r(a), r(b), at(p)) * hilbert(r(c), r(b), at(p)));
    }
  }
}

TEST_F(ArithTest, HilbertReciprocity) {
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<long> d(-2000, 2000), den(1, 50);
  for (int i = 0; i < 300; ++i) {
    long a = d(rng), b = d(rng);
    if (a == 0 || b == 0) continue;
    const Rational x = r(a, den(rng)), y = r(b, den(rng));
    int product = hilbert(x, y, Place::infinity());
    std::vector<Integer> primes = prime_support(x);
    for (const Integer& p : prime_support(y)) primes.push_back(p);
    primes.push_back(2);
    std::sort(primes.begin(), primes.end());
    primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
    for (const Integer& p : primes) product *= hilbert(x, y, Place::prime(p));
    EXPECT_EQ(product, 1) << to_string(x) << " " << to_string(y);
  }
}

TEST_F(ArithTest, IdealOperations) {
  const FractionalIdeal a(r(2, 3)), b(r(6));
  EXPECT_EQ(a.intersect(b), FractionalIdeal(r(6)));
  EXPECT_EQ(a.sum(b), FractionalIdeal(r(2, 3)));
  EXPECT_EQ(a * b, FractionalIdeal(r(4)));
  EXPECT_EQ(b / a, FractionalIdeal(r(9)));
  EXPECT_EQ(FractionalIdeal(r(-3)), FractionalIdeal(r(3)));
  EXPECT_EQ(FractionalIdeal(r(4, 9)).sqrt_exact(), FractionalIdeal(r(2, 3)));
  EXPECT_THROW(FractionalIdeal(r(2)).sqrt_exact(), NonSquareIdealError);
  EXPECT_TRUE(b.is_contained_in(a));
  EXPECT_FALSE(a.is_contained_in(b));
  EXPECT_EQ(FractionalIdeal::prime_power(Integer(2), -3), FractionalIdeal(r(1, 8)));
  EXPECT_THROW(FractionalIdeal(r(0)), ArithmeticError);
}

TEST_F(ArithTest, IdealValuationsAreComponentwise) {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<long> d(1, 720);
  for (int i = 0; i < 200; ++i) {
    const FractionalIdeal x(r(d(rng), d(rng))), y(r(d(rng), d(rng)));
    for (long p : {2, 3, 5, 7}) {
      const Integer pp(p);
      EXPECT_EQ((x * y).ord(pp), x.ord(pp) + y.ord(pp));
      EXPECT_EQ(x.intersect(y).ord(pp), std::max(x.ord(pp), y.ord(pp)));
      EXPECT_EQ(x.sum(y).ord(pp), std::min(x.ord(pp), y.ord(pp)));
    }
  }
}

TEST_F(ArithTest, ParseRational) {
  EXPECT_EQ(parse_rational("3/6"), r(1, 2));
  EXPECT_EQ(parse_rational("-7"), r(-7));
  EXPECT_THROW(parse_rational("1.5"), std::invalid_argument);
  EXPECT_THROW(parse_rational("1/0"), std::invalid_argument);
  EXPECT_EQ(to_string(r(-4, 6)), "-2/3");
}

TEST_F(ArithTest, PlaceOrdering) {
  EXPECT_LT(at(2), at(3));
  EXPECT_LT(at(97), Place::infinity());
  EXPECT_EQ(Place::infinity().to_string(), "inf");
}

}  // namespace qflat
