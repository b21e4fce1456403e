#pragma once

// Z-lattices in rational quadratic spaces: duals, index ideals, maximal
// enlargement, hyperplane sections and exact short-vector enumeration.

#include <cstdint>
#include <functional>
#include <optional>

#include "qflat/ideals.hpp"
#include "qflat/matrix.hpp"

namespace qflat {

class LatticeError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A lattice spanned by the rows of `basis` inside `ambient`.
class ZLattice {
 public:
  ZLattice(QuadraticSpace ambient, RationalMatrix basis);
  static ZLattice standard(const QuadraticSpace& space);

  const QuadraticSpace& ambient() const { return ambient_; }
  const RationalMatrix& basis() const { return basis_; }
  std::size_t rank() const { return basis_.rows(); }
  /// basis · gram · basis^T
  const RationalMatrix& gram() const { return gram_; }
  /// φ[L] ⊆ Z: integral diagonal and half-integral off-diagonal Gram entries.
  bool is_integral() const;
  /// det(2 · gram); equals [L~/L] for an integral lattice.
  Rational disc() const { return determinant(gram_.scaled(Rational(2))); }

  /// Coordinates of x in the basis; nullopt if x is outside the rational span.
  std::optional<RationalVector> coordinates(const RationalVector& x) const;
  bool contains(const RationalVector& x) const;
  RationalVector vector(const IntegerVector& coords) const;

  /// Same lattice (equal Hermite forms over a common denominator).
  bool operator==(const ZLattice& o) const;

 private:
  QuadraticSpace ambient_;
  RationalMatrix basis_;
  RationalMatrix gram_;
};

/// Lattice spanned by rows of basis, put in Hermite normal form.
ZLattice lattice_from_generators(const QuadraticSpace& ambient, const RationalMatrix& generators);

/// L~ = {x in span L : 2φ(x, L) ⊆ Z}, basis (2·gram)^{-1}·basis.
ZLattice dual(const ZLattice& l);

/// T with l.basis = T · m.basis; throws LatticeError on a span mismatch.
RationalMatrix change_of_basis(const ZLattice& m, const ZLattice& l);

/// [M/L] = det(T)Z for L = T·M. Integral when L ⊆ M, and then [M/L] = [M : L]Z.
FractionalIdeal index_ideal(const ZLattice& m, const ZLattice& l);

/// Elementary divisors ε_1 | ε_2 | ... of L relative to M (positive rationals).
using ElementaryDivisors = std::vector<Rational>;
ElementaryDivisors elementary_divisors(const ZLattice& m, const ZLattice& l);

/// Invariant factors of a full-rank square integer matrix; throws on rank deficiency.
ElementaryDivisors smith_normal_form(const IntegerMatrix& t);

/// L ⊥ M in the orthogonal sum of the ambient spaces.
ZLattice orthogonal_sum(const ZLattice& l, const ZLattice& m);

/// Some x ∈ p^{-1}L \ L with L + Zx integral, if one exists.
std::optional<RationalVector> find_enlargement(const ZLattice& l, const Integer& p);

/// L' ⊇ L integral with [L'/L] a power of p, admitting no further enlargement at p.
ZLattice p_maximal_enlarge(const ZLattice& l, const Integer& p);

/// Enlarges an integral lattice at every prime of det(2·gram).
ZLattice maximal_enlargement(const ZLattice& l);

/// Primes at which an integral lattice still has an enlargement (empty iff maximal).
std::vector<Integer> non_maximal_primes(const ZLattice& l);

/// A maximal lattice containing D·Z^n for the least D making D·Z^n integral.
ZLattice maximal_lattice(const QuadraticSpace& space);

/// L ∩ (Qh)^⊥; throws if φ[h] = 0.
ZLattice intersect_hyperplane(const ZLattice& l, const RationalVector& h);

/// φ(h, L) as a fractional ideal; throws if h ⊥ L.
FractionalIdeal phi_h_L(const RationalVector& h, const ZLattice& l);

/// Exact Fincke-Pohst enumeration in fixed-width integers on the integral form
/// A = s·gram (s the least common denominator).
class ShortVectorEnumerator {
 public:
  explicit ShortVectorEnumerator(const ZLattice& l);

  std::size_t rank() const { return k_; }
  /// Integer Gram matrix A = scale() · gram.
  const std::vector<std::int64_t>& scaled_gram() const { return a_; }
  const Integer& scale() const { return scale_; }

  /// Calls visit(x, x^T A x) for every nonzero x with φ[x] <= bound. With
  /// sign_canonical only one of ±x is reported (the last nonzero coordinate
  /// positive). The top-level coordinate range is split over `threads` workers,
  /// each calling visit with its own worker index.
  using Visitor = std::function<void(unsigned worker, const std::int64_t* x, std::int64_t norm)>;
  void for_each(const Rational& bound, bool sign_canonical, unsigned threads, const Visitor& visit) const;

 private:
  std::size_t k_;
  Integer scale_;
  std::vector<std::int64_t> a_;      // k×k
  std::vector<__int128> minors_;     // Δ_0 .. Δ_k
  std::vector<__int128> w_;          // w[l*k + j], j > l
};

/// All x with φ[x] = q in lexicographic coordinate order. Positive definite only.
std::vector<IntegerVector> enumerate_vectors(const ZLattice& l, const Rational& q);

/// Threads requested through QFLAT_THREADS (default 1).
unsigned configured_threads();

struct SectionVerification {
  Rational q;
  FractionalIdeal two_phi_hl;
  FractionalIdeal formula;  // b(q)(2φ(h,L))^{-1}
  FractionalIdeal oracle;   // [M/L∩W] with M a maximal enlargement of L∩W
  FractionalIdeal disc_l;   // [L~/L] of the given lattice
  FractionalIdeal disc_m;   // [M~/M] of the constructed M
  bool match = false;
};

/// Constructive check of the section formula for a maximal lattice L and h ∈ V.
SectionVerification verify_section_formula(const ZLattice& l_max, const RationalVector& h);
SectionVerification verify_section_formula(const QuadraticSpace& space, const RationalVector& h);

struct SweepOptions {
  bool sign_canonical = true;
  /// Run the full enlargement route for every h instead of only the first few per class.
  bool per_h_full = false;
  std::size_t full_checks_per_class = 2;
  unsigned threads = 1;
};

struct SweepClass {
  Rational q;
  FractionalIdeal two_phi_hl;
  FractionalIdeal formula;
  FractionalIdeal oracle;
  std::uint64_t count = 0;  // vectors, counting ±h separately
  bool match = false;
};

struct SweepSummary {
  std::vector<SweepClass> classes;  // sorted by (q, two_phi, oracle)
  std::uint64_t vectors = 0;
  std::uint64_t full_route_checks = 0;
  bool all_match = true;
};

/// Verifies [M/L∩W] = b(q)(2φ(h,L))^{-1} for every h ∈ L with φ[h] in `qs`.
/// Per h the oracle index is [M/L∩W]^2 = [(L∩W)~/(L∩W)][M~/M]^{-1}, with [M~/M]
/// taken from an explicit maximal enlargement of the first section for each q;
/// the first few h of every class also run the full enlargement.
SweepSummary sweep_sections(const ZLattice& l_max, const std::vector<Rational>& qs, const SweepOptions& options);

}  // namespace qflat
