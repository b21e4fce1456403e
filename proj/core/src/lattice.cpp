#include "qflat/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <mutex>
#include <thread>
#include <tuple>

namespace qflat {

// ---------------------------------------------------------------------------
// ZLattice

ZLattice::ZLattice(QuadraticSpace ambient, RationalMatrix basis)
    : ambient_(std::move(ambient)), basis_(std::move(basis)) {
  if (basis_.rows() == 0) throw LatticeError("lattice: empty basis");
  if (basis_.cols() != ambient_.dim()) throw LatticeError("lattice: basis vectors have the wrong length");
  if (qflat::rank(basis_) != basis_.rows()) throw LatticeError("lattice: basis rows are linearly dependent");
  // B G B^T over a common denominator.
  const Integer db = common_denominator(basis_), dg = common_denominator(ambient_.gram());
  const IntegerMatrix b = to_integer(basis_.scaled(Rational(db)));
  const IntegerMatrix g = to_integer(ambient_.gram().scaled(Rational(dg)));
  const IntegerMatrix bg = b * g;
  const Rational inv = Rational(1) / Rational(db * db * dg);
  const std::size_t k = basis_.rows(), n = basis_.cols();
  gram_ = RationalMatrix(k, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i; j < k; ++j) {
      Integer v = 0;
      for (std::size_t t = 0; t < n; ++t) v += bg(i, t) * b(j, t);
      gram_(i, j) = gram_(j, i) = Rational(v) * inv;
    }
}

ZLattice ZLattice::standard(const QuadraticSpace& space) {
  return ZLattice(space, RationalMatrix::identity(space.dim()));
}

bool ZLattice::is_integral() const {
  for (std::size_t i = 0; i < gram_.rows(); ++i) {
    if (gram_(i, i).get_den() != 1) return false;
    for (std::size_t j = i + 1; j < gram_.cols(); ++j)
      if (Rational(2 * gram_(i, j)).get_den() != 1) return false;
  }
  return true;
}

std::optional<RationalVector> ZLattice::coordinates(const RationalVector& x) const {
  if (x.size() != basis_.cols()) throw LatticeError("lattice: vector has the wrong length");
  const RationalMatrix bt = basis_.transpose();
  const RationalMatrix inv = inverse(basis_ * bt);
  RationalMatrix row(1, x.size(), x);
  const RationalMatrix c = row * bt * inv;
  if (c * basis_ != row) return std::nullopt;
  return c.row(0);
}

bool ZLattice::contains(const RationalVector& x) const {
  const auto c = coordinates(x);
  if (!c) return false;
  return std::all_of(c->begin(), c->end(), [](const Rational& v) { return v.get_den() == 1; });
}

RationalVector ZLattice::vector(const IntegerVector& coords) const {
  if (coords.size() != rank()) throw LatticeError("lattice: coordinate vector has the wrong length");
  RationalVector out(basis_.cols(), Rational(0));
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (coords[i] == 0) continue;
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += coords[i] * basis_(i, j);
  }
  return out;
}

namespace {

IntegerMatrix scaled_to_integer(const RationalMatrix& m, const Integer& d) { return to_integer(m.scaled(Rational(d))); }

Integer lcm_integer(const Integer& a, const Integer& b) {
  Integer r;
  mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

}  // namespace

bool ZLattice::operator==(const ZLattice& o) const {
  if (basis_.cols() != o.basis_.cols() || rank() != o.rank()) return false;
  const Integer d = lcm_integer(common_denominator(basis_), common_denominator(o.basis_));
  return hermite_normal_form(scaled_to_integer(basis_, d)) == hermite_normal_form(scaled_to_integer(o.basis_, d));
}

ZLattice lattice_from_generators(const QuadraticSpace& ambient, const RationalMatrix& generators) {
  const Integer d = common_denominator(generators);
  const IntegerMatrix h = hermite_normal_form(scaled_to_integer(generators, d));
  return ZLattice(ambient, to_rational(h).scaled(Rational(1) / Rational(d)));
}

ZLattice dual(const ZLattice& l) {
  const Rational det = l.disc();
  if (det == 0) throw LatticeError("dual: the form is degenerate on the lattice");
  return ZLattice(l.ambient(), inverse(l.gram().scaled(Rational(2))) * l.basis());
}

RationalMatrix change_of_basis(const ZLattice& m, const ZLattice& l) {
  if (m.rank() != l.rank() || m.basis().cols() != l.basis().cols()) {
    throw LatticeError("index: lattices do not span the same space");
  }
  const RationalMatrix mt = m.basis().transpose();
  const RationalMatrix t = l.basis() * mt * inverse(m.basis() * mt);
  if (t * m.basis() != l.basis()) throw LatticeError("index: lattices do not span the same space");
  return t;
}

FractionalIdeal index_ideal(const ZLattice& m, const ZLattice& l) {
  const std::size_t k = m.rank(), n = m.basis().cols();
  if (l.rank() != k || l.basis().cols() != n) throw LatticeError("index: lattices do not span the same space");
  RationalMatrix stacked(2 * k, n);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      stacked(i, j) = m.basis()(i, j);
      stacked(k + i, j) = l.basis()(i, j);
    }
  if (rank(stacked) != k) throw LatticeError("index: lattices do not span the same space");
  // det T = det(L_S) / det(M_S) for any k columns S on which M is nonsingular.
  std::vector<std::size_t> cols;
  for (std::size_t j = 0; j < n && cols.size() < k; ++j) {
    cols.push_back(j);
    RationalMatrix sub(k, cols.size());
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t c = 0; c < cols.size(); ++c) sub(i, c) = m.basis()(i, cols[c]);
    if (rank(sub) < cols.size()) cols.pop_back();
  }
  RationalMatrix ms(k, k), ls(k, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t c = 0; c < k; ++c) {
      ms(i, c) = m.basis()(i, cols[c]);
      ls(i, c) = l.basis()(i, cols[c]);
    }
  return FractionalIdeal(abs(determinant(ls) / determinant(ms)));
}

ElementaryDivisors smith_normal_form(const IntegerMatrix& t) {
  if (!t.is_square()) throw LatticeError("smith normal form: matrix is not square");
  const std::vector<Integer> inv = smith_invariants(t);
  if (inv.size() != t.rows()) throw LatticeError("smith normal form: matrix is rank deficient");
  return ElementaryDivisors(inv.begin(), inv.end());
}

ElementaryDivisors elementary_divisors(const ZLattice& m, const ZLattice& l) {
  const RationalMatrix t = change_of_basis(m, l);
  const Integer d = common_denominator(t);
  ElementaryDivisors e = smith_normal_form(scaled_to_integer(t, d));
  for (Rational& x : e) x /= d;
  return e;
}

ZLattice orthogonal_sum(const ZLattice& l, const ZLattice& m) {
  const std::size_t n1 = l.ambient().dim(), n2 = m.ambient().dim();
  RationalMatrix g(n1 + n2, n1 + n2);
  for (std::size_t i = 0; i < n1; ++i)
    for (std::size_t j = 0; j < n1; ++j) g(i, j) = l.ambient().gram()(i, j);
  for (std::size_t i = 0; i < n2; ++i)
    for (std::size_t j = 0; j < n2; ++j) g(n1 + i, n1 + j) = m.ambient().gram()(i, j);
  RationalMatrix b(l.rank() + m.rank(), n1 + n2);
  for (std::size_t i = 0; i < l.rank(); ++i)
    for (std::size_t j = 0; j < n1; ++j) b(i, j) = l.basis()(i, j);
  for (std::size_t i = 0; i < m.rank(); ++i)
    for (std::size_t j = 0; j < n2; ++j) b(l.rank() + i, n1 + j) = m.basis()(i, j);
  return ZLattice(QuadraticSpace(std::move(g)), std::move(b));
}

// ---------------------------------------------------------------------------
// Enlargement

namespace {

Integer mod_p(const Integer& x, const Integer& p) {
  Integer r = x % p;
  if (r < 0) r += p;
  return r;
}

Integer inverse_mod(const Integer& a, const Integer& p) {
  Integer r;
  if (mpz_invert(r.get_mpz_t(), Integer(mod_p(a, p)).get_mpz_t(), p.get_mpz_t()) == 0) {
    throw ArithmeticError("inverse_mod: not invertible");
  }
  return r;
}

// Basis of {c in F_p^k : A c = 0} for symmetric A, entries reduced into [0, p).
std::vector<IntegerVector> radical_mod_p(const IntegerMatrix& a, const Integer& p) {
  const std::size_t k = a.rows();
  IntegerMatrix m(k, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) m(i, j) = mod_p(a(i, j), p);
  std::vector<std::size_t> pivot_cols;
  std::size_t r = 0;
  for (std::size_t c = 0; c < k && r < k; ++c) {
    std::size_t piv = r;
    while (piv < k && m(piv, c) == 0) ++piv;
    if (piv == k) continue;
    m.swap_rows(r, piv);
    const Integer inv = inverse_mod(m(r, c), p);
    for (std::size_t j = 0; j < k; ++j) m(r, j) = mod_p(m(r, j) * inv, p);
    for (std::size_t i = 0; i < k; ++i) {
      if (i == r || m(i, c) == 0) continue;
      const Integer f = m(i, c);
      for (std::size_t j = 0; j < k; ++j) m(i, j) = mod_p(m(i, j) - f * m(r, j), p);
    }
    pivot_cols.push_back(c);
    ++r;
  }
  std::vector<IntegerVector> out;
  std::vector<bool> is_pivot(k, false);
  for (std::size_t c : pivot_cols) is_pivot[c] = true;
  for (std::size_t free = 0; free < k; ++free) {
    if (is_pivot[free]) continue;
    IntegerVector v(k, Integer(0));
    v[free] = 1;
    for (std::size_t i = 0; i < pivot_cols.size(); ++i) v[pivot_cols[i]] = mod_p(-m(i, free), p);
    out.push_back(std::move(v));
  }
  return out;
}

// N(c) = c^T A c / 2 = φ[c] for coordinates c.
Integer half_norm(const IntegerMatrix& a, const IntegerVector& c) {
  Integer s = 0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] == 0) continue;
    Integer row = 0;
    for (std::size_t j = 0; j < c.size(); ++j) row += a(i, j) * c[j];
    s += c[i] * row;
  }
  return s / 2;
}

IntegerVector combine(const std::vector<IntegerVector>& rad, const IntegerVector& y, const Integer& p) {
  IntegerVector c(rad[0].size(), Integer(0));
  for (std::size_t i = 0; i < rad.size(); ++i) {
    if (y[i] == 0) continue;
    for (std::size_t j = 0; j < c.size(); ++j) c[j] += y[i] * rad[i][j];
  }
  for (Integer& x : c) x = mod_p(x, p);
  return c;
}

// A nonzero y with y^T Q y = 0 over F_p (p odd), if one exists.
std::optional<IntegerVector> isotropic_mod_p(IntegerMatrix q, const Integer& p) {
  const std::size_t s = q.rows();
  IntegerMatrix basis = IntegerMatrix::identity(s);  // rows: the current basis in y-coordinates
  auto add_row = [&](IntegerMatrix& m, std::size_t dst, std::size_t src, const Integer& f) {
    for (std::size_t j = 0; j < m.cols(); ++j) m(dst, j) = mod_p(m(dst, j) + f * m(src, j), p);
  };
  auto add_col = [&](IntegerMatrix& m, std::size_t dst, std::size_t src, const Integer& f) {
    for (std::size_t i = 0; i < m.rows(); ++i) m(i, dst) = mod_p(m(i, dst) + f * m(i, src), p);
  };
  std::vector<Integer> diag;
  for (std::size_t k = 0; k < s; ++k) {
    if (q(k, k) == 0) {
      std::size_t piv = k + 1;
      while (piv < s && q(piv, piv) == 0) ++piv;
      if (piv < s) {
        q.swap_rows(k, piv);
        q.swap_cols(k, piv);
        basis.swap_rows(k, piv);
      } else {
        std::size_t j = k + 1;
        while (j < s && q(k, j) == 0) ++j;
        if (j == s) return basis.row(k);  // e_k is in the radical of Q
        add_row(q, k, j, Integer(1));
        add_col(q, k, j, Integer(1));
        add_row(basis, k, j, Integer(1));
        if (q(k, k) == 0) return basis.row(j);  // unreachable for odd p
      }
    }
    const Integer inv = inverse_mod(q(k, k), p);
    for (std::size_t i = k + 1; i < s; ++i) {
      if (q(i, k) == 0) continue;
      const Integer f = mod_p(-q(i, k) * inv, p);
      add_row(q, i, k, f);
      add_col(q, i, k, f);
      add_row(basis, i, k, f);
    }
    diag.push_back(q(k, k));
  }
  auto vec = [&](const Integer& x, const Integer& y, const Integer& z) {
    IntegerVector v(s, Integer(0));
    for (std::size_t j = 0; j < s; ++j) {
      v[j] = x * basis(0, j) + y * basis(1, j);
      if (s > 2) v[j] += z * basis(2, j);
      v[j] = mod_p(v[j], p);
    }
    return v;
  };
  if (s < 2) return std::nullopt;
  if (s == 2) {
    // d0 x^2 + d1 = 0
    const Integer t = mod_p(-diag[1] * inverse_mod(diag[0], p), p);
    if (legendre(t, p) != 1) return std::nullopt;
    return vec(sqrt_mod_prime(t, p), Integer(1), Integer(0));
  }
  // d0 x^2 + d1 y^2 + d2 = 0 always has a solution over F_p.
  const Integer inv1 = inverse_mod(diag[1], p);
  for (Integer x = 0; x < p; ++x) {
    const Integer t = mod_p((-diag[2] - diag[0] * x * x) * inv1, p);
    if (t == 0) return vec(x, Integer(0), Integer(1));
    if (legendre(t, p) == 1) return vec(x, sqrt_mod_prime(t, p), Integer(1));
  }
  throw std::logic_error("isotropic_mod_p: no solution of a ternary equation");
}

IntegerMatrix doubled_gram(const ZLattice& l) {
  if (!l.is_integral()) throw LatticeError("enlargement: lattice is not integral");
  return to_integer(l.gram().scaled(Rational(2)));
}

// Coordinates c (mod p) with c/p adjoinable to L, or nullopt.
std::optional<IntegerVector> enlargement_coords(const IntegerMatrix& a, const Integer& p) {
  const std::vector<IntegerVector> rad = radical_mod_p(a, p);
  if (rad.empty()) return std::nullopt;
  const Integer p2 = p * p;
  if (p == 2) {
    const std::size_t s = rad.size();
    if (s > 24) throw LatticeError("enlargement: radical too large for a 2-adic sweep");
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << s); ++mask) {
      IntegerVector y(s, Integer(0));
      for (std::size_t i = 0; i < s; ++i) y[i] = (mask >> i) & 1;
      IntegerVector c = combine(rad, y, p);
      if (mod_p(half_norm(a, c), p2) == 0) return c;
    }
    return std::nullopt;
  }
  const std::size_t s = rad.size();
  const Integer inv2 = inverse_mod(Integer(2), p);
  IntegerMatrix q(s, s);
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t j = i; j < s; ++j) {
      Integer b = 0;
      for (std::size_t u = 0; u < a.rows(); ++u) {
        if (rad[i][u] == 0) continue;
        for (std::size_t v = 0; v < a.rows(); ++v) b += rad[i][u] * a(u, v) * rad[j][v];
      }
      if (mod_p(b, p) != 0) throw std::logic_error("enlargement: radical vectors are not orthogonal mod p");
      q(i, j) = q(j, i) = mod_p(Integer(b / p) * inv2, p);
    }
  const auto y = isotropic_mod_p(q, p);
  if (!y) return std::nullopt;
  IntegerVector c = combine(rad, *y, p);
  if (mod_p(half_norm(a, c), p2) != 0) throw std::logic_error("enlargement: isotropic vector fails the norm test");
  return c;
}

ZLattice adjoin(const ZLattice& l, const IntegerVector& c, const Integer& p) {
  const std::size_t k = l.rank();
  IntegerMatrix gens(k + 1, k);
  for (std::size_t i = 0; i < k; ++i) gens(i, i) = p;
  for (std::size_t j = 0; j < k; ++j) gens(k, j) = c[j];
  const IntegerMatrix h = hermite_normal_form(gens);
  const RationalMatrix t = to_rational(h).scaled(Rational(1) / Rational(p));
  return ZLattice(l.ambient(), t * l.basis());
}

Integer disc_integer(const ZLattice& l) {
  const Rational d = l.disc();
  if (d.get_den() != 1) throw LatticeError("lattice: det(2·gram) is not an integer");
  return abs(d.get_num());
}

}  // namespace

std::optional<RationalVector> find_enlargement(const ZLattice& l, const Integer& p) {
  const auto c = enlargement_coords(doubled_gram(l), p);
  if (!c) return std::nullopt;
  RationalVector x = l.vector(*c);
  for (Rational& v : x) v /= p;
  return x;
}

ZLattice p_maximal_enlarge(const ZLattice& l, const Integer& p) {
  if (!is_prime(p)) throw ArithmeticError("p_maximal_enlarge: " + p.get_str() + " is not prime");
  ZLattice cur = l;
  IntegerMatrix a = doubled_gram(cur);
  while (auto c = enlargement_coords(a, p)) {
    cur = adjoin(cur, *c, p);
    a = doubled_gram(cur);
  }
  return cur;
}

ZLattice maximal_enlargement(const ZLattice& l) {
  const Integer d = disc_integer(l);
  if (d == 0) throw LatticeError("maximal_enlargement: degenerate form");
  ZLattice cur = l;
  for (const auto& [p, e] : factorize(d)) {
    if (e >= 2) cur = p_maximal_enlarge(cur, p);  // an index-p step divides det by p^2
  }
  return cur;
}

std::vector<Integer> non_maximal_primes(const ZLattice& l) {
  const IntegerMatrix a = doubled_gram(l);
  std::vector<Integer> out;
  for (const auto& [p, e] : factorize(disc_integer(l)))
    if (e >= 2 && enlargement_coords(a, p)) out.push_back(p);
  return out;
}

ZLattice maximal_lattice(const QuadraticSpace& space) {
  const RationalMatrix& g = space.gram();
  Integer den = 1;
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = i; j < g.cols(); ++j) {
      const Rational x = i == j ? g(i, j) : Rational(2 * g(i, j));
      den = lcm_integer(den, x.get_den());
    }
  Integer scale = 1;
  for (const auto& [p, e] : factorize(den))
    for (int i = 0; i < (e + 1) / 2; ++i) scale *= p;
  const ZLattice start(space, RationalMatrix::identity(space.dim()).scaled(Rational(scale)));
  return maximal_enlargement(start);
}

ZLattice intersect_hyperplane(const ZLattice& l, const RationalVector& h) {
  if (l.ambient().value(h) == 0) throw LatticeError("intersect_hyperplane: φ[h] = 0");
  const RationalVector gh = mat_vec(l.ambient().gram(), h);
  RationalVector a(l.rank());
  for (std::size_t i = 0; i < l.rank(); ++i) {
    const RationalVector b = l.basis().row(i);
    for (std::size_t j = 0; j < b.size(); ++j) a[i] += b[j] * gh[j];
  }
  Integer d = 1;
  for (const Rational& x : a) d = lcm_integer(d, x.get_den());
  IntegerVector ai(a.size());
  bool nonzero = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ai[i] = Integer(a[i] * d);
    nonzero = nonzero || ai[i] != 0;
  }
  if (!nonzero) throw LatticeError("intersect_hyperplane: h is orthogonal to the lattice");
  return ZLattice(l.ambient(), to_rational(integer_kernel(ai)) * l.basis());
}

FractionalIdeal phi_h_L(const RationalVector& h, const ZLattice& l) {
  const RationalVector gh = mat_vec(l.ambient().gram(), h);
  std::optional<FractionalIdeal> acc;
  for (std::size_t i = 0; i < l.rank(); ++i) {
    Rational v = 0;
    for (std::size_t j = 0; j < gh.size(); ++j) v += l.basis()(i, j) * gh[j];
    if (v == 0) continue;
    const FractionalIdeal term(v);
    acc = acc ? acc->sum(term) : term;
  }
  if (!acc) throw LatticeError("phi_h_L: h is orthogonal to the lattice");
  return *acc;
}

// ---------------------------------------------------------------------------
// Enumeration

namespace {

constexpr std::int64_t kFixedLimit = std::int64_t{1} << 40;

std::int64_t checked_int64(const Integer& x, const char* what) {
  if (abs(x) >= kFixedLimit) throw LatticeError(std::string("enumeration: ") + what + " exceeds fixed-width range");
  return x.get_si();
}

__int128 isqrt128(__int128 n) {
  if (n <= 0) return 0;
  auto r = static_cast<__int128>(std::sqrt(static_cast<long double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

__int128 floor_div(__int128 a, __int128 b) {
  __int128 q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

__int128 ceil_div(__int128 a, __int128 b) { return -floor_div(-a, b); }

}  // namespace

ShortVectorEnumerator::ShortVectorEnumerator(const ZLattice& l) : k_(l.rank()) {
  scale_ = common_denominator(l.gram());
  const IntegerMatrix a = to_integer(l.gram().scaled(Rational(scale_)));
  a_.resize(k_ * k_);
  for (std::size_t i = 0; i < k_; ++i)
    for (std::size_t j = 0; j < k_; ++j) a_[i * k_ + j] = checked_int64(a(i, j), "Gram entry");

  // Fraction-free elimination: after i steps, m(i, j) is w_ij and m(i, i) is Δ_{i+1}.
  IntegerMatrix m = a;
  std::vector<Integer> minors{Integer(1)};
  w_.assign(k_ * k_, 0);
  for (std::size_t i = 0; i < k_; ++i) {
    if (m(i, i) <= 0) throw LatticeError("enumeration: form is not positive definite");
    minors.push_back(m(i, i));
    for (std::size_t j = i + 1; j < k_; ++j) w_[i * k_ + j] = checked_int64(m(i, j), "elimination entry");
    for (std::size_t r = i + 1; r < k_; ++r)
      for (std::size_t c = i + 1; c < k_; ++c) m(r, c) = (m(i, i) * m(r, c) - m(r, i) * m(i, c)) / minors[i];
  }
  for (const Integer& d : minors) minors_.push_back(checked_int64(d, "leading minor"));
}

void ShortVectorEnumerator::for_each(const Rational& bound, bool sign_canonical, unsigned threads,
                                     const Visitor& visit) const {
  if (bound < 0) return;
  const Rational scaled_bound = bound * scale_;
  const Integer t_big = scaled_bound.get_num() / scaled_bound.get_den();
  const __int128 t = checked_int64(t_big, "norm bound");
  const std::size_t k = k_;
  threads = std::max(1u, threads);

  auto run = [&](unsigned worker) {
    std::vector<std::int64_t> x(k, 0);
    std::vector<__int128> s(k + 1, 0);  // s[i] = Δ_i R_i
    std::vector<__int128> hi(k, 0);
    std::vector<bool> higher_zero(k + 1, true);

    // Sets the admissible range at level i; returns false if empty.
    auto setup = [&](std::size_t i, std::int64_t& lo_out) -> bool {
      const __int128 di = minors_[i], di1 = minors_[i + 1];
      const __int128 n = di * (di1 * t - s[i + 1]);
      if (n < 0) return false;
      const __int128 m = isqrt128(n);
      __int128 w = 0;
      for (std::size_t j = i + 1; j < k; ++j) w += static_cast<__int128>(w_[i * k + j]) * x[j];
      __int128 lo = ceil_div(-m - w, di1);
      __int128 up = floor_div(m - w, di1);
      if (sign_canonical && higher_zero[i + 1] && lo < 0) lo = 0;
      if (lo > up) return false;
      lo_out = static_cast<std::int64_t>(lo);
      hi[i] = up;
      return true;
    };
    auto z_of = [&](std::size_t i) {
      __int128 z = static_cast<__int128>(minors_[i + 1]) * x[i];
      for (std::size_t j = i + 1; j < k; ++j) z += static_cast<__int128>(w_[i * k + j]) * x[j];
      return z;
    };
    auto descend = [&](std::size_t i) {
      const __int128 z = z_of(i);
      s[i] = (z * z + static_cast<__int128>(minors_[i]) * s[i + 1]) / minors_[i + 1];
      higher_zero[i] = higher_zero[i + 1] && x[i] == 0;
    };

    std::int64_t lo = 0;
    const std::size_t top = k - 1;
    if (!setup(top, lo)) return;
    const __int128 top_hi = hi[top];
    // Worker w takes top-level values lo + w, lo + w + threads, ...
    for (__int128 xt = lo + worker; xt <= top_hi; xt += threads) {
      x[top] = static_cast<std::int64_t>(xt);
      descend(top);
      std::size_t i = top;
      // Depth-first over levels top-1 .. 0.
      while (true) {
        if (i == 0) {
          if (!higher_zero[0]) visit(worker, x.data(), static_cast<std::int64_t>(s[0]));
          // advance at level 0 or climb
        } else {
          std::int64_t l0;
          if (setup(i - 1, l0)) {
            --i;
            x[i] = l0;
            descend(i);
            continue;
          }
        }
        // Next value at level i, climbing while exhausted.
        while (i < top && x[i] >= hi[i]) ++i;
        if (i == top) break;
        ++x[i];
        descend(i);
      }
    }
  };

  if (threads == 1) {
    run(0);
    return;
  }
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < threads; ++w) pool.emplace_back(run, w);
  for (auto& th : pool) th.join();
}

std::vector<IntegerVector> enumerate_vectors(const ZLattice& l, const Rational& q) {
  if (q <= 0) throw LatticeError("enumerate_vectors: q must be positive");
  const ShortVectorEnumerator e(l);
  const Rational target = q * e.scale();
  std::vector<IntegerVector> out;
  if (target.get_den() != 1) return out;
  const std::int64_t t = target.get_num().get_si();
  std::mutex mu;
  e.for_each(q, false, 1, [&](unsigned, const std::int64_t* x, std::int64_t norm) {
    if (norm != t) return;
    IntegerVector v(e.rank());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = Integer(static_cast<long>(x[i]));
    std::lock_guard<std::mutex> lock(mu);
    out.push_back(std::move(v));
  });
  std::sort(out.begin(), out.end());
  return out;
}

unsigned configured_threads() {
  const char* env = std::getenv("QFLAT_THREADS");
  if (!env || !*env) return 1;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (*end != '\0' || v < 1) return 1;
  return static_cast<unsigned>(std::min<long>(v, 256));
}

// ---------------------------------------------------------------------------
// Section verification

namespace {

SectionVerification verify_with(const ZLattice& l_max, const Invariants& inv, const RationalVector& h) {
  SectionVerification r;
  r.q = l_max.ambient().value(h);
  const ZLattice section = intersect_hyperplane(l_max, h);
  const ZLattice m = maximal_enlargement(section);
  r.oracle = index_ideal(m, section);
  r.disc_l = FractionalIdeal(l_max.disc());
  r.disc_m = FractionalIdeal(m.disc());
  r.two_phi_hl = FractionalIdeal(Rational(2)) * phi_h_L(h, l_max);
  r.formula = b_of_q(inv, r.q) / r.two_phi_hl;
  r.match = r.formula == r.oracle;
  return r;
}

}  // namespace

SectionVerification verify_section_formula(const ZLattice& l_max, const RationalVector& h) {
  return verify_with(l_max, invariants(l_max.ambient()), h);
}

SectionVerification verify_section_formula(const QuadraticSpace& space, const RationalVector& h) {
  return verify_section_formula(maximal_lattice(space), h);
}

namespace {

std::int64_t gcd64(std::int64_t a, std::int64_t b) {
  a = a < 0 ? -a : a;
  b = b < 0 ? -b : b;
  while (b) {
    const std::int64_t t = a % b;
    a = b;
    b = t;
  }
  return a;
}

// det(A_K) for K = ker(a) ⊂ Z^k, with A_K the Gram matrix of a kernel basis.
__int128 section_det(const std::int64_t* a_mat, std::size_t k, const std::int64_t* x) {
  constexpr std::size_t kMax = 16;
  std::int64_t a[kMax];
  std::int64_t u[kMax][kMax] = {};  // columns of a unimodular U with a·U = (g, 0, ..., 0)
  for (std::size_t i = 0; i < k; ++i) {
    std::int64_t v = 0;
    for (std::size_t j = 0; j < k; ++j) v += a_mat[i * k + j] * x[j];
    a[i] = v;
    u[i][i] = 1;
  }
  for (std::size_t j = 1; j < k; ++j) {
    while (a[j] != 0) {
      const std::int64_t qt = a[0] / a[j];
      a[0] -= qt * a[j];
      for (std::size_t r = 0; r < k; ++r) u[r][0] -= qt * u[r][j];
      std::swap(a[0], a[j]);
      for (std::size_t r = 0; r < k; ++r) std::swap(u[r][0], u[r][j]);
    }
  }
  // A_K = U_K^T A U_K over columns 1..k-1.
  const std::size_t n = k - 1;
  __int128 au[kMax][kMax];
  for (std::size_t r = 0; r < k; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      __int128 v = 0;
      for (std::size_t t = 0; t < k; ++t) v += static_cast<__int128>(a_mat[r * k + t]) * u[t][c + 1];
      au[r][c] = v;
    }
  __int128 m[kMax][kMax];
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      __int128 v = 0;
      for (std::size_t t = 0; t < k; ++t) v += u[t][r + 1] * au[t][c];
      m[r][c] = v;
    }
  // Bareiss; A_K is positive definite so no pivoting is needed.
  __int128 prev = 1;
  for (std::size_t p = 0; p < n; ++p) {
    if (m[p][p] == 0) throw std::logic_error("section_det: zero pivot in a definite form");
    for (std::size_t r = p + 1; r < n; ++r)
      for (std::size_t c = p + 1; c < n; ++c) m[r][c] = (m[p][p] * m[r][c] - m[r][p] * m[p][c]) / prev;
    prev = m[p][p];
  }
  return n == 0 ? 1 : prev;
}

using ClassKey = std::tuple<std::int64_t, std::int64_t, __int128>;  // (s·q, gcd, det A_K)

struct WorkerState {
  std::map<ClassKey, std::uint64_t> counts;
  std::map<std::pair<std::int64_t, std::int64_t>, std::vector<std::vector<std::int64_t>>> samples;
  std::uint64_t full_checks = 0;
  std::uint64_t full_failures = 0;
};

void keep_smallest(std::vector<std::vector<std::int64_t>>& v, std::vector<std::int64_t> x, std::size_t limit) {
  if (limit == 0) return;
  if (v.size() == limit && !(x < v.back())) return;
  v.insert(std::upper_bound(v.begin(), v.end(), x), std::move(x));
  if (v.size() > limit) v.pop_back();
}

Integer from_int128(__int128 v) {
  const bool neg = v < 0;
  unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
  Integer r = static_cast<unsigned long>(static_cast<std::uint64_t>(u >> 64));
  r <<= 64;
  r += static_cast<unsigned long>(static_cast<std::uint64_t>(u));
  return neg ? Integer(-r) : r;
}

}  // namespace

SweepSummary sweep_sections(const ZLattice& l_max, const std::vector<Rational>& qs, const SweepOptions& options) {
  const Invariants inv = invariants(l_max.ambient());
  const ShortVectorEnumerator e(l_max);
  const std::size_t k = e.rank();
  if (k < 2 || k > 16) throw LatticeError("sweep_sections: rank must be between 2 and 16");
  const Integer& s = e.scale();

  std::map<std::int64_t, Rational> targets;  // s·q -> q
  Rational bound = 0;
  for (const Rational& q : qs) {
    if (q <= 0) throw LatticeError("sweep_sections: q must be positive");
    const Rational t = q * s;
    if (t.get_den() != 1) continue;
    targets[checked_int64(t.get_num(), "norm target")] = q;
    bound = std::max(bound, q);
  }
  SweepSummary summary;
  if (targets.empty()) return summary;
  std::vector<char> wanted(static_cast<std::size_t>(targets.rbegin()->first) + 1, 0);
  for (const auto& [t, q] : targets) wanted[static_cast<std::size_t>(t)] = 1;

  const unsigned threads = std::max(1u, options.threads);
  std::vector<WorkerState> states(threads);
  const std::int64_t* a = e.scaled_gram().data();
  const std::size_t sample_limit = options.full_checks_per_class;
  std::mutex error_mu;

  e.for_each(bound, options.sign_canonical, threads, [&](unsigned w, const std::int64_t* x, std::int64_t norm) {
    if (norm >= static_cast<std::int64_t>(wanted.size()) || !wanted[static_cast<std::size_t>(norm)]) return;
    WorkerState& st = states[w];
    std::int64_t g = 0;
    for (std::size_t i = 0; i < k; ++i) {
      std::int64_t v = 0;
      for (std::size_t j = 0; j < k; ++j) v += a[i * k + j] * x[j];
      g = gcd64(g, v);
    }
    const __int128 det = section_det(a, k, x);
    st.counts[{norm, g, det}] += options.sign_canonical ? 2 : 1;
    std::vector<std::int64_t> xv(x, x + k);
    if (options.per_h_full) {
      IntegerVector c(k);
      for (std::size_t i = 0; i < k; ++i) c[i] = Integer(static_cast<long>(x[i]));
      const SectionVerification v = verify_with(l_max, inv, l_max.vector(c));
      ++st.full_checks;
      if (!v.match) ++st.full_failures;
    }
    keep_smallest(st.samples[{norm, g}], std::move(xv), std::max<std::size_t>(sample_limit, 1));
  });

  // Deterministic merge.
  std::map<ClassKey, std::uint64_t> counts;
  std::map<std::pair<std::int64_t, std::int64_t>, std::vector<std::vector<std::int64_t>>> samples;
  for (WorkerState& st : states) {
    for (const auto& [key, c] : st.counts) counts[key] += c;
    for (auto& [key, vs] : st.samples)
      for (auto& v : vs) keep_smallest(samples[key], v, std::max<std::size_t>(sample_limit, 1));
    summary.full_route_checks += st.full_checks;
    if (st.full_failures) summary.all_match = false;
  }

  auto to_vector = [&](const std::vector<std::int64_t>& xs) {
    IntegerVector c(k);
    for (std::size_t i = 0; i < k; ++i) c[i] = Integer(static_cast<long>(xs[i]));
    return l_max.vector(c);
  };

  // [M~/M] per q from an explicit maximal enlargement of the smallest section.
  std::map<std::int64_t, FractionalIdeal> disc_m;
  for (const auto& [key, vs] : samples) {
    if (disc_m.count(key.first)) continue;
    const ZLattice section = intersect_hyperplane(l_max, to_vector(vs.front()));
    disc_m.emplace(key.first, FractionalIdeal(maximal_enlargement(section).disc()));
  }

  // Full route on the retained samples of every (q, gcd) class.
  std::map<std::pair<std::int64_t, std::int64_t>, FractionalIdeal> sample_oracle;
  for (const auto& [key, vs] : samples) {
    for (std::size_t i = 0; i < vs.size() && i < sample_limit; ++i) {
      const SectionVerification v = verify_with(l_max, inv, to_vector(vs[i]));
      ++summary.full_route_checks;
      if (!v.match || v.disc_m != disc_m.at(key.first)) summary.all_match = false;
      auto [it, fresh] = sample_oracle.emplace(key, v.oracle);
      if (!fresh && it->second != v.oracle) summary.all_match = false;
    }
  }

  const Rational two_over_s = Rational(2) / Rational(s);
  Rational section_scale = 1;
  for (std::size_t i = 0; i + 1 < k; ++i) section_scale *= two_over_s;
  for (const auto& [key, count] : counts) {
    const auto& [t, g, det] = key;
    SweepClass c;
    c.q = targets.at(t);
    c.two_phi_hl = FractionalIdeal(two_over_s * Rational(Integer(static_cast<long>(g))));
    c.formula = b_of_q(inv, c.q) / c.two_phi_hl;
    const FractionalIdeal disc_section(section_scale * Rational(from_int128(det)));
    try {
      c.oracle = (disc_section / disc_m.at(t)).sqrt_exact();
      c.match = c.oracle == c.formula;
    } catch (const NonSquareIdealError&) {
      c.oracle = disc_section / disc_m.at(t);
      c.match = false;
    }
    const auto so = sample_oracle.find({t, g});
    if (so != sample_oracle.end() && so->second != c.oracle) c.match = false;
    c.count = count;
    summary.vectors += count;
    summary.all_match = summary.all_match && c.match;
    summary.classes.push_back(std::move(c));
  }
  // Classes that agree in every reported field are merged.
  std::vector<SweepClass> merged;
  for (SweepClass& c : summary.classes) {
    if (!merged.empty()) {
      SweepClass& b = merged.back();
      if (b.q == c.q && b.two_phi_hl == c.two_phi_hl && b.oracle == c.oracle && b.match == c.match) {
        b.count += c.count;
        continue;
      }
    }
    merged.push_back(std::move(c));
  }
  summary.classes = std::move(merged);
  return summary;
}

}  // namespace qflat
