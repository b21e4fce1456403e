#include "qflat/qspace.hpp"

#include <algorithm>

namespace qflat {

QuadraticSpace::QuadraticSpace(RationalMatrix gram) : gram_(std::move(gram)) {
  if (gram_.rows() == 0) throw QuadraticSpaceError("quadratic space: empty Gram matrix");
  if (!gram_.is_square()) throw QuadraticSpaceError("quadratic space: Gram matrix is not square");
  if (!is_symmetric(gram_)) throw QuadraticSpaceError("quadratic space: Gram matrix is not symmetric");
  if (determinant(gram_) == 0) throw QuadraticSpaceError("quadratic space: degenerate form");
}

QuadraticSpace QuadraticSpace::identity(std::size_t n) { return QuadraticSpace(RationalMatrix::identity(n)); }

QuadraticSpace QuadraticSpace::diagonal(const std::vector<Rational>& entries) {
  RationalMatrix g(entries.size(), entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) g(i, i) = entries[i];
  return QuadraticSpace(std::move(g));
}

Integer Invariants::finite_ram_product() const {
  Integer e = 1;
  for (const Place& v : ram)
    if (!v.is_infinite()) e *= v.prime();
  return e;
}

CoreDimension::CoreDimension(int t) : t_(t) {
  if (t < 0 || t > 4) throw QuadraticSpaceError("core dimension out of range: " + std::to_string(t));
}

LocalForm local_form(const std::vector<Rational>& diagonal, const Integer& p) {
  LocalForm f;
  f.dim = static_cast<int>(diagonal.size());
  const Place v = Place::prime(p);
  for (std::size_t i = 0; i < diagonal.size(); ++i) {
    f.det *= diagonal[i];
    for (std::size_t j = i + 1; j < diagonal.size(); ++j) f.hasse *= hilbert(diagonal[i], diagonal[j], v);
  }
  return f;
}

bool is_isotropic(const LocalForm& f, const Integer& p) {
  const Place v = Place::prime(p);
  switch (f.dim) {
    case 0:
    case 1:
      return false;
    case 2:
      return xi(-f.det, p) == SquareClass::kSquare;
    case 3:
      return hilbert(-1, -f.det, v) == f.hasse;
    case 4:
      return xi(f.det, p) != SquareClass::kSquare || f.hasse == hilbert(-1, -1, v);
    default:
      return true;
  }
}

LocalCore local_core(const std::vector<Rational>& diagonal, const Integer& p) {
  LocalForm f = local_form(diagonal, p);
  const Place v = Place::prime(p);
  while (f.dim >= 2 && is_isotropic(f, p)) {
    // f = H ⊥ f' with H = <1, -1>: det f' = -det f, hasse f = hasse f' · (-1, det f').
    f.dim -= 2;
    f.det = -f.det;
    f.hasse *= hilbert(-1, f.det, v);
  }
  if (f.dim == 0) {
    f.det = 1;
    f.hasse = 1;
  }
  return LocalCore{CoreDimension(f.dim), f};
}

std::vector<Rational> diagonalize(const QuadraticSpace& space) {
  RationalMatrix a = space.gram();
  const std::size_t n = a.rows();
  std::vector<Rational> out;
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (a(k, k) == 0) {
      std::size_t piv = k + 1;
      while (piv < n && a(piv, piv) == 0) ++piv;
      if (piv < n) {
        a.swap_rows(k, piv);
        a.swap_cols(k, piv);
      } else {
        std::size_t j = k + 1;
        while (j < n && a(k, j) == 0) ++j;
        if (j == n) throw QuadraticSpaceError("diagonalize: degenerate form");
        // e_k <- e_k + e_j; the new diagonal entry is 2 a(k, j) != 0.
        for (std::size_t c = 0; c < n; ++c) a(k, c) += a(j, c);
        for (std::size_t r = 0; r < n; ++r) a(r, k) += a(r, j);
      }
    }
    const Rational pivot = a(k, k);
    out.push_back(pivot);
    for (std::size_t i = k + 1; i < n; ++i) {
      if (a(i, k) == 0) continue;
      // Congruence: row_i -= f row_k, then col_i -= f col_k.
      Rational f = a(i, k) / pivot;
      for (std::size_t j = 0; j < n; ++j) a(i, j) -= f * a(k, j);
      for (std::size_t j = 0; j < n; ++j) a(j, i) -= f * a(j, k);
    }
  }
  return out;
}

Discriminant discriminant(const QuadraticSpace& space) {
  const std::size_t n = space.dim();
  Rational delta = space.det();
  if ((n * (n - 1) / 2) % 2) delta = -delta;
  return Discriminant{delta, squarefree_part(delta)};
}

Signature signature(const QuadraticSpace& space) {
  Signature s;
  for (const Rational& a : diagonalize(space)) (sgn(a) > 0 ? s.positive : s.negative)++;
  return s;
}

namespace {

std::vector<Integer> bad_primes_of(const std::vector<Rational>& diagonal) {
  std::set<Integer> ps{Integer(2)};
  for (const Rational& a : diagonal)
    for (const Integer& p : prime_support(a)) ps.insert(p);
  return {ps.begin(), ps.end()};
}

bool local_division(const std::vector<Rational>& diagonal, const Integer& p) {
  const int n = static_cast<int>(diagonal.size());
  if (n == 1) return false;
  LocalCore c = local_core(diagonal, p);
  const int t = c.t.value();
  if (n % 2 == 1) return t == 3;
  if (t == 2) return c.core.hasse == -1;  // Clifford algebra of <a, b> is (a, b)
  return t == 4;
}

}  // namespace

CoreDimension core_dimension_local(const QuadraticSpace& space, const Integer& p) {
  return local_core(diagonalize(space), p).t;
}

std::vector<Integer> bad_primes(const QuadraticSpace& space) { return bad_primes_of(diagonalize(space)); }

bool real_algebra_split(int s_inf) {
  int r = ((s_inf % 8) + 8) % 8;
  return r == 0 || r == 1 || r == 2 || r == 7;
}

std::set<Place> characteristic_algebra(const QuadraticSpace& space) {
  const std::vector<Rational> diag = diagonalize(space);
  std::set<Place> ram;
  if (diag.size() == 1) return ram;
  for (const Integer& p : bad_primes_of(diag))
    if (local_division(diag, p)) ram.insert(Place::prime(p));
  int s = 0;
  for (const Rational& a : diag) s += sgn(a) > 0 ? 1 : -1;
  if (!real_algebra_split(s)) ram.insert(Place::infinity());
  return ram;
}

int clifford_invariant(const std::vector<Rational>& diagonal, const Place& v) {
  const std::size_t n = diagonal.size();
  if (n == 1) return 1;
  Rational det = 1;
  int s = 1;
  for (std::size_t i = 0; i < n; ++i) {
    det *= diagonal[i];
    for (std::size_t j = i + 1; j < n; ++j) s *= hilbert(diagonal[i], diagonal[j], v);
  }
  switch (n % 8) {
    case 1:
    case 2:
      return s;
    case 3:
    case 4:
      return s * hilbert(-1, -det, v);
    case 5:
    case 6:
      return s * hilbert(-1, -1, v);
    default:
      return s * hilbert(-1, det, v);
  }
}

Invariants invariants(const QuadraticSpace& space) {
  Invariants inv;
  inv.n = static_cast<int>(space.dim());
  inv.d = discriminant(space).d;
  inv.ram = characteristic_algebra(space);
  inv.s_inf = signature(space).s_inf();
  return inv;
}

std::map<Integer, int> core_dimensions(const QuadraticSpace& space) {
  const std::vector<Rational> diag = diagonalize(space);
  std::map<Integer, int> out;
  for (const Integer& p : bad_primes_of(diag)) out[p] = local_core(diag, p).t.value();
  return out;
}

bool is_isomorphic(const QuadraticSpace& a, const QuadraticSpace& b) { return invariants(a) == invariants(b); }

bool represents_ternary(const QuadraticSpace& space, const Rational& q) {
  if (space.dim() != 3) throw QuadraticSpaceError("represents_ternary: dimension must be 3");
  if (q == 0) throw QuadraticSpaceError("represents_ternary: q must be nonzero");
  const Signature sig = signature(space);
  if (sig.positive == 3 && q < 0) return false;
  if (sig.negative == 3 && q > 0) return false;
  const Rational dq = discriminant(space).delta * q;
  for (const Place& v : characteristic_algebra(space)) {
    if (v.is_infinite()) continue;
    if (xi(dq, v.prime()) == SquareClass::kSquare) return false;
  }
  return true;
}

bool represents(const QuadraticSpace& space, const Rational& q) {
  if (q == 0) throw QuadraticSpaceError("represents: q must be nonzero");
  std::vector<Rational> diag = diagonalize(space);
  if (diag.size() == 1) return is_rational_square(q / diag[0]);
  diag.push_back(-q);
  bool pos = false, neg = false;
  for (const Rational& a : diag) (sgn(a) > 0 ? pos : neg) = true;
  if (!(pos && neg)) return false;
  for (const Integer& p : bad_primes_of(diag))
    if (!is_isotropic(local_form(diag, p), p)) return false;
  return true;
}

bool represented_by_invariants(const Invariants& inv, const Rational& q) {
  if (q == 0) throw QuadraticSpaceError("represented_by_invariants: q must be nonzero");
  if (inv.n == 1) return squarefree_part(q) == inv.d;
  if (inv.s_inf == inv.n && q < 0) return false;
  if (inv.s_inf == -inv.n && q > 0) return false;
  if (inv.n >= 4) return true;
  const Rational delta = inv.delta_class();
  if (inv.n == 3) {
    for (const Place& v : inv.ram)
      if (!v.is_infinite() && xi(delta * q, v.prime()) == SquareClass::kSquare) return false;
    return true;
  }
  // n == 2: <a, b> represents q at p iff (δ, q)_p equals the local Clifford invariant.
  std::set<Integer> ps{Integer(2)};
  for (const Integer& p : prime_support(delta * q)) ps.insert(p);
  for (const Place& v : inv.ram)
    if (!v.is_infinite()) ps.insert(v.prime());
  for (const Integer& p : ps) {
    const int c = inv.ramified_at(Place::prime(p)) ? -1 : 1;
    if (hilbert(delta, q, Place::prime(p)) != c) return false;
  }
  return true;
}

CoreDimension core_dimension_from_invariants(const Invariants& inv, const Integer& p) {
  const bool division = inv.ramified_at(Place::prime(p));
  if (inv.n % 2 == 1) return CoreDimension(division ? 3 : 1);
  if (xi(inv.delta_class(), p) != SquareClass::kSquare) return CoreDimension(2);
  return CoreDimension(division ? 4 : 0);
}

}  // namespace qflat
