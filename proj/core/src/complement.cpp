#include "qflat/complement.hpp"

namespace qflat {

namespace {

int mod8(int s) { return ((s % 8) + 8) % 8; }

bool is_local_norm(const Rational& field_class, const Rational& x, const Integer& p) {
  return hilbert(field_class, x, Place::prime(p)) == 1;
}

// Finite-place rows for n even (> 2), K = Q(sqrt δ).
bool even_split(const Rational& delta, const Rational& q, bool divides_db, const Integer& p) {
  const bool square = xi(delta, p) == SquareClass::kSquare;
  if (square) return !divides_db;
  const bool norm = is_local_norm(delta, q, p);
  return divides_db ? !norm : norm;
}

// Finite-place rows for n odd, K = Q(sqrt δq).
bool odd_split(int n, const Rational& delta, const Rational& q, bool divides_db, const Integer& p) {
  const Rational dq = delta * q;
  const bool square = xi(dq, p) == SquareClass::kSquare;
  if (!divides_db) return square || is_local_norm(dq, delta, p);
  // n = 3: representability already forces ξ(δq) != 1 at p | D_B.
  if (n > 3 && square) return false;
  return !is_local_norm(dq, delta, p);
}

bool real_split(int n, int s, const Rational& q) {
  const int r = mod8(s);
  if (n % 2 == 0) return q > 0 ? (r == 0 || r == 2) : (r == 0 || r == 6);
  return q > 0 ? (r == 1 || r == 3) : (r == 1 || r == 7);
}

}  // namespace

ComplementInvariants complement_invariants(const Invariants& inv_v, const Rational& q) {
  if (inv_v.n < 2) throw QuadraticSpaceError("complement_invariants: dimension must be at least 2");
  if (q == 0) throw QuadraticSpaceError("complement_invariants: q must be nonzero");
  const int n = inv_v.n;
  const Rational delta = inv_v.delta_class();

  ComplementInvariants out;
  out.formal = !represented_by_invariants(inv_v, q);
  out.inv.n = n - 1;
  out.inv.d = squarefree_part((n - 1) % 2 ? Rational(-delta * q) : Rational(delta * q));
  out.inv.s_inf = inv_v.s_inf + (q > 0 ? -1 : 1);
  if (n == 2) return out;

  std::set<Integer> candidates{Integer(2)};
  for (const Integer& p : prime_support(delta)) candidates.insert(p);
  for (const Integer& p : prime_support(q)) candidates.insert(p);
  for (const Place& v : inv_v.ram)
    if (!v.is_infinite()) candidates.insert(v.prime());

  for (const Integer& p : candidates) {
    const bool divides_db = inv_v.ramified_at(Place::prime(p));
    const bool split = n % 2 == 0 ? even_split(delta, q, divides_db, p) : odd_split(n, delta, q, divides_db, p);
    if (!split) out.inv.ram.insert(Place::prime(p));
  }
  if (!real_split(n, inv_v.s_inf, q)) out.inv.ram.insert(Place::infinity());
  return out;
}

RationalMatrix complement_basis(const QuadraticSpace& space, const RationalVector& h) {
  const std::size_t n = space.dim();
  if (h.size() != n) throw QuadraticSpaceError("complement: vector has wrong length");
  if (space.value(h) == 0) throw QuadraticSpaceError("complement: h must be anisotropic (φ[h] != 0)");
  const RationalVector a = mat_vec(space.gram(), h);
  std::size_t pivot = 0;
  while (a[pivot] == 0) ++pivot;
  RationalMatrix basis(n - 1, n);
  std::size_t r = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i == pivot) continue;
    basis(r, i) = 1;
    basis(r, pivot) = -a[i] / a[pivot];
    ++r;
  }
  return basis;
}

QuadraticSpace complement_space(const QuadraticSpace& space, const RationalVector& h) {
  const RationalMatrix b = complement_basis(space, h);
  return QuadraticSpace(b * space.gram() * b.transpose());
}

}  // namespace qflat
