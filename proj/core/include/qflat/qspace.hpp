#pragma once

// Nondegenerate quadratic spaces over Q and their classifying invariants.

#include <map>
#include <optional>
#include <set>
#include <vector>

#include "qflat/arith.hpp"
#include "qflat/matrix.hpp"

namespace qflat {

class QuadraticSpaceError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// (V, φ) with φ(x, y) = x^T gram y.
class QuadraticSpace {
 public:
  /// Throws QuadraticSpaceError unless gram is square, symmetric and nonsingular.
  explicit QuadraticSpace(RationalMatrix gram);

  static QuadraticSpace identity(std::size_t n);
  static QuadraticSpace diagonal(const std::vector<Rational>& entries);

  std::size_t dim() const { return gram_.rows(); }
  const RationalMatrix& gram() const { return gram_; }
  Rational value(const RationalVector& x) const { return bilinear(gram_, x, x); }
  Rational pairing(const RationalVector& x, const RationalVector& y) const { return bilinear(gram_, x, y); }
  Rational det() const { return determinant(gram_); }

  friend bool operator==(const QuadraticSpace& a, const QuadraticSpace& b) { return a.gram_ == b.gram_; }

 private:
  RationalMatrix gram_;
};

/// (n, d, ram, s_inf): dimension, squarefree discriminant (d = 1 means K = Q),
/// ramified places of the characteristic quaternion algebra, real index.
struct Invariants {
  int n = 0;
  Integer d = 1;
  std::set<Place> ram;
  int s_inf = 0;

  friend bool operator==(const Invariants& a, const Invariants& b) {
    return a.n == b.n && a.d == b.d && a.ram == b.ram && a.s_inf == b.s_inf;
  }
  friend bool operator!=(const Invariants& a, const Invariants& b) { return !(a == b); }

  bool ramified_at(const Place& v) const { return ram.count(v) != 0; }
  /// Product of the finite ramified primes.
  Integer finite_ram_product() const;
  /// δ up to rational squares (the stored d).
  Rational delta_class() const { return Rational(d); }
};

/// Anisotropic dimension of a local space, 0..4.
class CoreDimension {
 public:
  explicit CoreDimension(int t);
  int value() const { return t_; }
  friend bool operator==(CoreDimension a, CoreDimension b) { return a.t_ == b.t_; }

 private:
  int t_;
};

/// Local isometry data of a diagonal form at a prime: dimension, determinant
/// class and Hasse invariant ∏_{i<j} (a_i, a_j)_p.
struct LocalForm {
  int dim = 0;
  Rational det = 1;
  int hasse = 1;
};

LocalForm local_form(const std::vector<Rational>& diagonal, const Integer& p);
/// Whether a local form with these invariants represents zero nontrivially.
bool is_isotropic(const LocalForm& f, const Integer& p);

/// The anisotropic core reached by splitting off hyperbolic planes.
struct LocalCore {
  CoreDimension t{0};
  LocalForm core;  // invariants of the core itself
};

LocalCore local_core(const std::vector<Rational>& diagonal, const Integer& p);

std::vector<Rational> diagonalize(const QuadraticSpace& space);

struct Discriminant {
  Rational delta;  // (-1)^{n(n-1)/2} det
  Integer d;       // squarefree part of delta
};
Discriminant discriminant(const QuadraticSpace& space);

struct Signature {
  int positive = 0;
  int negative = 0;
  int s_inf() const { return positive - negative; }
};
Signature signature(const QuadraticSpace& space);

CoreDimension core_dimension_local(const QuadraticSpace& space, const Integer& p);

/// Primes outside which the space is unimodular with trivial Hasse invariant.
std::vector<Integer> bad_primes(const QuadraticSpace& space);

/// Whether the characteristic algebra is split at a real index (s mod 8 rule).
bool real_algebra_split(int s_inf);

/// Ramified places of the characteristic quaternion algebra, read from core
/// dimensions (and the binary core's Hilbert symbol when t = 2).
std::set<Place> characteristic_algebra(const QuadraticSpace& space);

/// Independent route: the Clifford/Witt invariant of a diagonal form computed
/// from its Hasse invariant with the dimension-mod-8 correction. +1 split, -1 division.
int clifford_invariant(const std::vector<Rational>& diagonal, const Place& v);

Invariants invariants(const QuadraticSpace& space);
/// Per-prime core dimensions over bad_primes(space), for auditing.
std::map<Integer, int> core_dimensions(const QuadraticSpace& space);

bool is_isomorphic(const QuadraticSpace& a, const QuadraticSpace& b);

/// Three-condition test for q ∈ φ[V] when dim V = 3.
bool represents_ternary(const QuadraticSpace& space, const Rational& q);

/// q ∈ φ[V] via local isotropy of φ ⊥ <-q> at every relevant place.
bool represents(const QuadraticSpace& space, const Rational& q);

/// q ∈ φ[V] decided from the invariant tuple alone.
bool represented_by_invariants(const Invariants& inv, const Rational& q);

/// Local core dimension read back from the invariant tuple at a prime.
CoreDimension core_dimension_from_invariants(const Invariants& inv, const Integer& p);

}  // namespace qflat
