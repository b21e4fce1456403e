#pragma once

// Brute-force references used only by the tests. None of these call the
// formula layer of the library they check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "qflat/lattice.hpp"

namespace qflat::testing {

inline std::int64_t mod_pow(std::int64_t p, int k) {
  std::int64_t r = 1;
  while (k-- > 0) r *= p;
  return r;
}

inline std::int64_t vp(std::int64_t x, std::int64_t p) {
  if (x == 0) return 64;
  std::int64_t v = 0;
  while (x % p == 0) {
    x /= p;
    ++v;
  }
  return v;
}

/// Removes square factors p^2 so that every coefficient has ord_p <= 1.
inline std::vector<std::int64_t> normalize_coefficients(std::vector<std::int64_t> c, std::int64_t p) {
  for (auto& a : c)
    while (a % (p * p) == 0) a /= p * p;
  return c;
}

/// Whether Σ c_i x_i^2 has a nontrivial zero over Q_p, for nonzero integer c_i.
/// After normalizing ord_p(c_i) <= 1, a primitive p-adic zero has gradient
/// valuation δ <= 1 (p odd) or <= 2 (p = 2), and a primitive x with
/// f(x) ≡ 0 mod p^{2δ+1}, δ = v(∇f(x)), lifts by Hensel. So a search modulo
/// p^3 (resp. 2^5) decides isotropy exactly.
inline bool isotropic_bruteforce(std::vector<std::int64_t> c, std::int64_t p) {
  c = normalize_coefficients(c, p);
  const int k = p == 2 ? 5 : 3;
  const std::int64_t mod = mod_pow(p, k);
  const std::size_t n = c.size();
  std::vector<std::int64_t> x(n, 0);
  while (true) {
    std::size_t i = 0;
    while (i < n && ++x[i] == mod) x[i++] = 0;
    if (i == n) return false;
    bool primitive = false;
    for (std::int64_t v : x) primitive = primitive || v % p != 0;
    if (!primitive) continue;
    std::int64_t f = 0, delta = 64;
    for (std::size_t j = 0; j < n; ++j) {
      f = (f + (c[j] % mod + mod) % mod * (x[j] * x[j] % mod)) % mod;
      const std::int64_t g = 2 * c[j] * x[j];
      delta = std::min(delta, vp(g % mod == 0 ? 0 : g, p));
    }
    if (2 * delta + 1 > k) continue;
    if (f % mod_pow(p, static_cast<int>(2 * delta + 1)) == 0) return true;
  }
}

/// (a, b)_p from the definition: 1 iff a x^2 + b y^2 = z^2 is isotropic.
inline int hilbert_bruteforce(std::int64_t a, std::int64_t b, std::int64_t p) {
  return isotropic_bruteforce({a, b, -1}, p) ? 1 : -1;
}

/// Whether b is a square in Q_p, by searching roots modulo p (odd) or 8.
inline bool is_padic_square_bruteforce(std::int64_t b, std::int64_t p) {
  if (b == 0) return true;
  const std::int64_t v = vp(b, p);
  if (v % 2) return false;
  std::int64_t u = b / mod_pow(p, static_cast<int>(v));
  const std::int64_t mod = p == 2 ? 8 : p;
  u = (u % mod + mod) % mod;
  for (std::int64_t x = 1; x < mod; ++x)
    if (x % p != 0 && x * x % mod == u) return true;
  return false;
}

/// ξ_p(b) from the definitions: square, unramified (b times the unramified
/// nonsquare unit class is a square), or ramified.
inline int xi_bruteforce(std::int64_t b, std::int64_t p) {
  if (is_padic_square_bruteforce(b, p)) return 1;
  std::int64_t nonsquare = 5;
  if (p != 2) {
    for (nonsquare = 2; is_padic_square_bruteforce(nonsquare, p); ++nonsquare) {
    }
  }
  return is_padic_square_bruteforce(b * nonsquare, p) ? -1 : 0;
}

/// Coefficient of x^q in (Σ_k x^{k^2})^n by direct convolution.
inline std::vector<std::int64_t> theta_power(int n, int max_q) {
  std::vector<std::int64_t> base(max_q + 1, 0);
  for (int k = -max_q; k <= max_q; ++k)
    if (k * k <= max_q) base[k * k]++;
  std::vector<std::int64_t> acc(max_q + 1, 0);
  acc[0] = 1;
  for (int i = 0; i < n; ++i) {
    std::vector<std::int64_t> next(max_q + 1, 0);
    for (int a = 0; a <= max_q; ++a)
      for (int b = 0; a + b <= max_q; ++b) next[a + b] += acc[a] * base[b];
    acc = next;
  }
  return acc;
}

/// Whether some integer x in [-box, box]^n satisfies f(x) = q w^2 for an integer w != 0.
inline bool represents_by_search(const std::vector<std::int64_t>& diag, std::int64_t q, int box) {
  const std::size_t n = diag.size();
  std::vector<std::int64_t> x(n, -box);
  while (true) {
    std::int64_t f = 0;
    for (std::size_t i = 0; i < n; ++i) f += diag[i] * x[i] * x[i];
    if (f != 0 && f % q == 0 && f / q > 0) {
      const auto w = static_cast<std::int64_t>(std::sqrt(static_cast<double>(f / q)));
      for (std::int64_t c = std::max<std::int64_t>(w - 1, 1); c <= w + 1; ++c)
        if (c * c * q == f) return true;
    }
    std::size_t i = 0;
    while (i < n && ++x[i] > box) x[i++] = -box;
    if (i == n) return false;
  }
}

/// Random positive definite Gram matrix of dimension n, entries a/b with |a|, b <= height.
/// Rows are drawn one at a time and redrawn until the new leading minor is positive.
inline RationalMatrix random_definite_gram(std::mt19937_64& rng, std::size_t n, int height) {
  std::uniform_int_distribution<int> num(-height, height), den(1, height);
  auto draw = [&] {
    Rational v(num(rng), den(rng));
    v.canonicalize();
    return v;
  };
  RationalMatrix g(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    while (true) {
      for (std::size_t j = 0; j < k; ++j) g(k, j) = g(j, k) = draw();
      g(k, k) = abs(draw());
      RationalMatrix m(k + 1, k + 1);
      for (std::size_t i = 0; i <= k; ++i)
        for (std::size_t j = 0; j <= k; ++j) m(i, j) = g(i, j);
      if (determinant(m) > 0) break;
    }
  }
  return g;
}

inline RationalVector random_nonzero_vector(std::mt19937_64& rng, std::size_t n, int height) {
  std::uniform_int_distribution<int> d(-height, height);
  while (true) {
    RationalVector h(n);
    bool nonzero = false;
    for (auto& x : h) {
      x = d(rng);
      nonzero = nonzero || x != 0;
    }
    if (nonzero) return h;
  }
}

inline std::vector<std::int64_t> small_primes() { return {2, 3, 5, 7, 11, 13}; }

}  // namespace qflat::testing
