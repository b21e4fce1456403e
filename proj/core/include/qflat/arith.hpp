#pragma once

// Exact rational and p-adic primitives over Q: valuations, square classes,
// Hilbert symbols and fractional Z-ideals.

#include <gmpxx.h>

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qflat {

using Integer = mpz_class;
using Rational = mpq_class;

/// A place of Q: a rational prime or the real place.
class Place {
 public:
  static Place infinity() { return Place(); }
  static Place prime(Integer p);

  bool is_infinite() const { return infinite_; }
  const Integer& prime() const;

  friend bool operator==(const Place& a, const Place& b) {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.p_ == b.p_);
  }
  friend bool operator!=(const Place& a, const Place& b) { return !(a == b); }
  // Primes ascending, the real place last.
  friend bool operator<(const Place& a, const Place& b) {
    if (a.infinite_ || b.infinite_) return !a.infinite_ && b.infinite_;
    return a.p_ < b.p_;
  }

  std::string to_string() const;

 private:
  Place() : infinite_(true) {}
  bool infinite_;
  Integer p_;
};

/// The three-valued square-class symbol of b at a finite place.
enum class SquareClass : int {
  kRamified = 0,     // Q_p(sqrt b) is a ramified quadratic extension
  kSquare = 1,       // b is a square in Q_p
  kUnramified = -1,  // Q_p(sqrt b) is the unramified quadratic extension
};

inline int to_int(SquareClass s) { return static_cast<int>(s); }

class ArithmeticError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

int valuation(const Integer& x, const Integer& p);
int valuation(const Rational& x, const Integer& p);

/// Unit part u of x = p^valuation(x) * u.
Rational unit_part(const Rational& x, const Integer& p);

bool is_prime(const Integer& n);
/// Prime factorization of |n| (n != 0), primes ascending.
std::map<Integer, int> factorize(const Integer& n);
/// Distinct primes dividing numerator or denominator of x.
std::vector<Integer> prime_support(const Rational& x);

/// Signed squarefree integer in the square class of x (x != 0).
Integer squarefree_part(const Rational& x);
bool is_rational_square(const Rational& x);

int legendre(const Integer& a, const Integer& p);
/// Some r with r^2 = a mod p; requires p odd prime, a a nonzero residue.
Integer sqrt_mod_prime(const Integer& a, const Integer& p);

SquareClass xi(const Rational& b, const Integer& p);
int hilbert(const Rational& a, const Rational& b, const Place& v);

/// A nonzero fractional ideal of Z, stored as its positive generator.
class FractionalIdeal {
 public:
  FractionalIdeal() : gen_(1) {}
  explicit FractionalIdeal(const Rational& generator);
  static FractionalIdeal unit() { return FractionalIdeal(); }
  static FractionalIdeal prime_power(const Integer& p, int e);

  const Rational& generator() const { return gen_; }
  int ord(const Integer& p) const { return valuation(gen_, p); }
  bool is_integral() const { return gen_.get_den() == 1; }
  bool is_unit() const { return gen_ == 1; }
  /// this ⊆ other as subsets of Q.
  bool is_contained_in(const FractionalIdeal& other) const;
  std::vector<Integer> primes() const { return prime_support(gen_); }

  FractionalIdeal operator*(const FractionalIdeal& o) const;
  FractionalIdeal operator/(const FractionalIdeal& o) const;
  FractionalIdeal pow(int e) const;
  /// I + J, generated by the gcd.
  FractionalIdeal sum(const FractionalIdeal& o) const;
  /// I ∩ J, generated by the lcm.
  FractionalIdeal intersect(const FractionalIdeal& o) const;
  /// The ideal J with J^2 = I; throws NonSquareIdealError if some ord_p is odd.
  FractionalIdeal sqrt_exact() const;

  friend bool operator==(const FractionalIdeal& a, const FractionalIdeal& b) { return a.gen_ == b.gen_; }
  friend bool operator!=(const FractionalIdeal& a, const FractionalIdeal& b) { return !(a == b); }

  std::string to_string() const;

 private:
  Rational gen_;
};

class NonSquareIdealError : public ArithmeticError {
 public:
  using ArithmeticError::ArithmeticError;
};

/// Parses "a", "-a" or "a/b"; rejects decimals and zero denominators.
Rational parse_rational(std::string_view text);
/// Canonical "num/den" form.
std::string to_string(const Rational& x);
std::string to_string(const Integer& x);

}  // namespace qflat
