#include "qflat/matrix.hpp"

#include <algorithm>

namespace qflat {

namespace {

// Each row scaled by the lcm of its denominators; returns the product of the scales.
Integer clear_row_denominators(const RationalMatrix& m, IntegerMatrix& out) {
  out = IntegerMatrix(m.rows(), m.cols());
  Integer total = 1;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Integer d = 1;
    for (std::size_t j = 0; j < m.cols(); ++j) mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), m(i, j).get_den_mpz_t());
    for (std::size_t j = 0; j < m.cols(); ++j) {
      Integer v = d / m(i, j).get_den();
      out(i, j) = v * m(i, j).get_num();
    }
    total *= d;
  }
  return total;
}

}  // namespace

Rational determinant(const RationalMatrix& m_in) {
  if (!m_in.is_square()) throw LinearAlgebraError("determinant of non-square matrix");
  IntegerMatrix m;
  const Integer scale = clear_row_denominators(m_in, m);
  Rational det(determinant(m), scale);
  det.canonicalize();
  return det;
}

Integer determinant(const IntegerMatrix& m_in) {
  if (!m_in.is_square()) throw LinearAlgebraError("determinant of non-square matrix");
  // Bareiss fraction-free elimination.
  IntegerMatrix m = m_in;
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  Integer prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m(k, k) == 0) {
      std::size_t piv = k + 1;
      while (piv < n && m(piv, k) == 0) ++piv;
      if (piv == n) return 0;
      m.swap_rows(piv, k);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        Integer v = m(i, j) * m(k, k) - m(i, k) * m(k, j);
        mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
        m(i, j) = v;
      }
      m(i, k) = 0;
    }
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

std::size_t rank(const RationalMatrix& m_in) {
  IntegerMatrix m;
  clear_row_denominators(m_in, m);
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t piv = r;
    while (piv < m.rows() && m(piv, c) == 0) ++piv;
    if (piv == m.rows()) continue;
    m.swap_rows(piv, r);
    for (std::size_t i = r + 1; i < m.rows(); ++i) {
      if (m(i, c) == 0) continue;
      const Integer a = m(r, c), b = m(i, c);
      Integer g = 0;
      for (std::size_t j = c; j < m.cols(); ++j) {
        m(i, j) = a * m(i, j) - b * m(r, j);
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), m(i, j).get_mpz_t());
      }
      if (g > 1)
        for (std::size_t j = c; j < m.cols(); ++j) mpz_divexact(m(i, j).get_mpz_t(), m(i, j).get_mpz_t(), g.get_mpz_t());
    }
    ++r;
  }
  return r;
}

RationalMatrix inverse(const RationalMatrix& m_in) {
  if (!m_in.is_square()) throw LinearAlgebraError("inverse of non-square matrix");
  const std::size_t n = m_in.rows();
  RationalMatrix m = m_in;
  RationalMatrix inv = RationalMatrix::identity(n);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && m(piv, c) == 0) ++piv;
    if (piv == n) throw LinearAlgebraError("inverse of singular matrix");
    m.swap_rows(piv, c);
    inv.swap_rows(piv, c);
    Rational d = m(c, c);
    for (std::size_t j = 0; j < n; ++j) {
      m(c, j) /= d;
      inv(c, j) /= d;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || m(r, c) == 0) continue;
      Rational f = m(r, c);
      for (std::size_t j = 0; j < n; ++j) {
        m(r, j) -= f * m(c, j);
        inv(r, j) -= f * inv(c, j);
      }
    }
  }
  return inv;
}

bool is_symmetric(const RationalMatrix& m) {
  if (!m.is_square()) return false;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i + 1; j < m.cols(); ++j)
      if (m(i, j) != m(j, i)) return false;
  return true;
}

RationalMatrix to_rational(const IntegerMatrix& m) {
  RationalMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = Rational(m(i, j));
  return out;
}

Integer common_denominator(const RationalMatrix& m) {
  Integer d = 1;
  for (const auto& x : m.data()) mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), x.get_den_mpz_t());
  return d;
}

IntegerMatrix to_integer(const RationalMatrix& m) {
  IntegerMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (m(i, j).get_den() != 1) throw LinearAlgebraError("to_integer: non-integral entry");
      out(i, j) = m(i, j).get_num();
    }
  return out;
}

RationalVector mat_vec(const RationalMatrix& m, const RationalVector& v) {
  if (m.cols() != v.size()) throw LinearAlgebraError("mat_vec: shape mismatch");
  RationalVector out(m.rows(), Rational(0));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out[i] += m(i, j) * v[j];
  return out;
}

Rational bilinear(const RationalMatrix& m, const RationalVector& x, const RationalVector& y) {
  RationalVector my = mat_vec(m, y);
  Rational s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * my[i];
  return s;
}

IntegerMatrix hermite_normal_form(const IntegerMatrix& m_in) {
  IntegerMatrix m = m_in;
  const std::size_t rows = m.rows(), cols = m.cols();
  std::size_t r = 0;
  Integer g, s, t, a, b;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    // Fold every lower row into row r with extended gcd steps.
    for (std::size_t i = r + 1; i < rows; ++i) {
      if (m(i, c) == 0) continue;
      if (m(r, c) == 0) {
        m.swap_rows(r, i);
        continue;
      }
      mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), m(r, c).get_mpz_t(), m(i, c).get_mpz_t());
      a = m(r, c) / g;
      b = m(i, c) / g;
      for (std::size_t j = c; j < cols; ++j) {
        Integer top = s * m(r, j) + t * m(i, j);
        Integer bottom = a * m(i, j) - b * m(r, j);
        m(r, j) = top;
        m(i, j) = bottom;
      }
    }
    if (m(r, c) == 0) continue;
    if (m(r, c) < 0)
      for (std::size_t j = c; j < cols; ++j) m(r, j) = -m(r, j);
    for (std::size_t i = 0; i < r; ++i) {
      Integer q;
      mpz_fdiv_q(q.get_mpz_t(), m(i, c).get_mpz_t(), m(r, c).get_mpz_t());
      if (q == 0) continue;
      for (std::size_t j = c; j < cols; ++j) m(i, j) -= q * m(r, j);
    }
    ++r;
  }
  IntegerMatrix out(r, cols);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < cols; ++j) out(i, j) = m(i, j);
  return out;
}

IntegerMatrix integer_kernel(const IntegerVector& a) {
  const std::size_t k = a.size();
  // Column operations on [a; I] drive a to (g, 0, ..., 0); the transformed
  // identity columns 1..k-1 then span the kernel.
  IntegerMatrix u = IntegerMatrix::identity(k);
  IntegerVector v = a;
  std::size_t lead = k;
  for (std::size_t i = 0; i < k; ++i)
    if (v[i] != 0) {
      lead = i;
      break;
    }
  if (lead == k) return u;  // a == 0: everything is in the kernel
  if (lead != 0) {
    std::swap(v[0], v[lead]);
    u.swap_cols(0, lead);
  }
  Integer g, s, t;
  for (std::size_t i = 1; i < k; ++i) {
    if (v[i] == 0) continue;
    mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), v[0].get_mpz_t(), v[i].get_mpz_t());
    Integer x = v[0] / g, y = v[i] / g;
    // new col0 = s*col0 + t*coli; new coli = -y*col0 + x*coli (determinant 1).
    for (std::size_t r = 0; r < k; ++r) {
      Integer c0 = u(r, 0), ci = u(r, i);
      u(r, 0) = s * c0 + t * ci;
      u(r, i) = x * ci - y * c0;
    }
    v[0] = g;
    v[i] = 0;
  }
  IntegerMatrix ker(k - 1, k);
  for (std::size_t c = 1; c < k; ++c)
    for (std::size_t r = 0; r < k; ++r) ker(c - 1, r) = u(r, c);
  IntegerMatrix h = hermite_normal_form(ker);
  return h;
}

std::vector<Integer> smith_invariants(const IntegerMatrix& m_in) {
  IntegerMatrix m = m_in;
  const std::size_t rows = m.rows(), cols = m.cols();
  std::vector<Integer> out;
  std::size_t t = 0;
  while (t < rows && t < cols) {
    // Pivot: smallest nonzero |entry| in the remaining block.
    std::size_t pr = rows, pc = cols;
    for (std::size_t i = t; i < rows; ++i)
      for (std::size_t j = t; j < cols; ++j)
        if (m(i, j) != 0 && (pr == rows || abs(m(i, j)) < abs(m(pr, pc)))) {
          pr = i;
          pc = j;
        }
    if (pr == rows) break;
    m.swap_rows(t, pr);
    m.swap_cols(t, pc);
    bool clean = false;
    while (!clean) {
      clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (m(i, t) == 0) continue;
        Integer q;
        mpz_fdiv_q(q.get_mpz_t(), m(i, t).get_mpz_t(), m(t, t).get_mpz_t());
        for (std::size_t j = t; j < cols; ++j) m(i, j) -= q * m(t, j);
        if (m(i, t) != 0) {
          m.swap_rows(t, i);
          clean = false;
        }
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (m(t, j) == 0) continue;
        Integer q;
        mpz_fdiv_q(q.get_mpz_t(), m(t, j).get_mpz_t(), m(t, t).get_mpz_t());
        for (std::size_t i = t; i < rows; ++i) m(i, j) -= q * m(i, t);
        if (m(t, j) != 0) {
          m.swap_cols(t, j);
          clean = false;
        }
      }
      if (!clean) continue;
      // Divisibility: fold any entry not divisible by the pivot into row t.
      for (std::size_t i = t + 1; i < rows && clean; ++i)
        for (std::size_t j = t + 1; j < cols; ++j)
          if (!mpz_divisible_p(m(i, j).get_mpz_t(), m(t, t).get_mpz_t())) {
            for (std::size_t c = t; c < cols; ++c) m(t, c) += m(i, c);
            clean = false;
            break;
          }
    }
    out.push_back(abs(m(t, t)));
    ++t;
  }
  return out;
}

}  // namespace qflat
