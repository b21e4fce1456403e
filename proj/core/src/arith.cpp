#include "qflat/arith.hpp"

#include <algorithm>
#include <cctype>

namespace qflat {

Place Place::prime(Integer p) {
  if (p < 2 || !is_prime(p)) throw ArithmeticError("place: " + p.get_str() + " is not prime");
  Place place;
  place.infinite_ = false;
  place.p_ = std::move(p);
  return place;
}

const Integer& Place::prime() const {
  if (infinite_) throw ArithmeticError("place: the real place has no prime");
  return p_;
}

std::string Place::to_string() const { return infinite_ ? "inf" : p_.get_str(); }

int valuation(const Integer& x, const Integer& p) {
  if (x == 0) throw ArithmeticError("valuation of zero");
  if (p < 2) throw ArithmeticError("valuation: bad prime " + p.get_str());
  Integer rest;
  return static_cast<int>(mpz_remove(rest.get_mpz_t(), x.get_mpz_t(), p.get_mpz_t()));
}

int valuation(const Rational& x, const Integer& p) {
  if (x == 0) throw ArithmeticError("valuation of zero");
  return valuation(Integer(x.get_num()), p) - valuation(Integer(x.get_den()), p);
}

Rational unit_part(const Rational& x, const Integer& p) {
  if (x == 0) throw ArithmeticError("unit part of zero");
  Integer num, den;
  mpz_remove(num.get_mpz_t(), x.get_num_mpz_t(), p.get_mpz_t());
  mpz_remove(den.get_mpz_t(), x.get_den_mpz_t(), p.get_mpz_t());
  Rational u(num, den);
  u.canonicalize();
  return u;
}

bool is_prime(const Integer& n) {
  if (n < 2) return false;
  return mpz_probab_prime_p(n.get_mpz_t(), 40) != 0;
}

namespace {

Integer pollard_brent(const Integer& n) {
  if (mpz_even_p(n.get_mpz_t())) return 2;
  for (unsigned long c = 1;; ++c) {
    Integer y = 2, x, q = 1, g = 1, ys, tmp;
    unsigned long r = 1;
    auto step = [&](Integer& v) {
      v = v * v + c;
      mpz_mod(v.get_mpz_t(), v.get_mpz_t(), n.get_mpz_t());
    };
    const unsigned long m = 64;
    do {
      x = y;
      for (unsigned long i = 0; i < r; ++i) step(y);
      unsigned long k = 0;
      do {
        ys = y;
        for (unsigned long i = 0; i < std::min(m, r - k); ++i) {
          step(y);
          tmp = abs(x - y);
          q = (q * tmp) % n;
        }
        mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
        k += m;
      } while (k < r && g == 1);
      r *= 2;
    } while (g == 1);
    if (g == n) {
      do {
        step(ys);
        tmp = abs(x - ys);
        mpz_gcd(g.get_mpz_t(), tmp.get_mpz_t(), n.get_mpz_t());
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void factor_into(Integer n, std::map<Integer, int>& out) {
  static constexpr unsigned long kSmall[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47};
  for (unsigned long p : kSmall) {
    while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
      n /= p;
      ++out[Integer(p)];
    }
  }
  if (n == 1) return;
  if (is_prime(n)) {
    ++out[n];
    return;
  }
  Integer d = pollard_brent(n);
  factor_into(d, out);
  factor_into(n / d, out);
}

}  // namespace

std::map<Integer, int> factorize(const Integer& n) {
  if (n == 0) throw ArithmeticError("factorize: zero");
  std::map<Integer, int> out;
  factor_into(abs(n), out);
  return out;
}

std::vector<Integer> prime_support(const Rational& x) {
  if (x == 0) throw ArithmeticError("prime support of zero");
  std::map<Integer, int> f = factorize(Integer(x.get_num()));
  for (const auto& [p, e] : factorize(Integer(x.get_den()))) f[p] += e;
  std::vector<Integer> out;
  for (const auto& [p, e] : f) out.push_back(p);
  return out;
}

Integer squarefree_part(const Rational& x) {
  if (x == 0) throw ArithmeticError("squarefree part of zero");
  Integer n = x.get_num() * x.get_den();
  Integer out = sgn(n) < 0 ? -1 : 1;
  for (const auto& [p, e] : factorize(n)) {
    if (e % 2) out *= p;
  }
  return out;
}

bool is_rational_square(const Rational& x) {
  if (x < 0) return false;
  return mpz_perfect_square_p(x.get_num_mpz_t()) && mpz_perfect_square_p(x.get_den_mpz_t());
}

int legendre(const Integer& a, const Integer& p) { return mpz_legendre(a.get_mpz_t(), p.get_mpz_t()); }

Integer sqrt_mod_prime(const Integer& a_in, const Integer& p) {
  Integer a = a_in % p;
  if (a < 0) a += p;
  if (a == 0) return 0;
  if (legendre(a, p) != 1) throw ArithmeticError("sqrt_mod_prime: non-residue");
  // Tonelli-Shanks.
  Integer q = p - 1;
  unsigned long s = 0;
  while (mpz_even_p(q.get_mpz_t())) {
    q /= 2;
    ++s;
  }
  Integer z = 2;
  while (legendre(z, p) != -1) ++z;
  Integer m_c, c, t, r, e;
  mpz_powm(c.get_mpz_t(), z.get_mpz_t(), q.get_mpz_t(), p.get_mpz_t());
  mpz_powm(t.get_mpz_t(), a.get_mpz_t(), q.get_mpz_t(), p.get_mpz_t());
  e = (q + 1) / 2;
  mpz_powm(r.get_mpz_t(), a.get_mpz_t(), e.get_mpz_t(), p.get_mpz_t());
  unsigned long m = s;
  while (t != 1) {
    unsigned long i = 0;
    Integer tt = t;
    while (tt != 1) {
      tt = tt * tt % p;
      ++i;
    }
    Integer b = c;
    for (unsigned long j = 0; j + i + 1 < m; ++j) b = b * b % p;
    r = r * b % p;
    c = b * b % p;
    t = t * c % p;
    m = i;
  }
  return r;
}

SquareClass xi(const Rational& b, const Integer& p) {
  if (b == 0) throw ArithmeticError("xi of zero");
  // b and num*den share a square class.
  Integer n = b.get_num() * b.get_den();
  int e = valuation(n, p);
  if (e % 2) return SquareClass::kRamified;
  Integer u;
  mpz_remove(u.get_mpz_t(), n.get_mpz_t(), p.get_mpz_t());
  if (p == 2) {
    Integer r = u % 8;
    if (r < 0) r += 8;
    if (r == 1) return SquareClass::kSquare;
    if (r == 5) return SquareClass::kUnramified;
    return SquareClass::kRamified;
  }
  return legendre(u, p) == 1 ? SquareClass::kSquare : SquareClass::kUnramified;
}

namespace {

// (u mod 8) for odd u.
unsigned mod8(const Integer& u) {
  Integer r = u % 8;
  if (r < 0) r += 8;
  return static_cast<unsigned>(r.get_ui());
}

}  // namespace

int hilbert(const Rational& a, const Rational& b, const Place& v) {
  if (a == 0 || b == 0) throw ArithmeticError("hilbert symbol of zero");
  Integer A = a.get_num() * a.get_den();
  Integer B = b.get_num() * b.get_den();
  if (v.is_infinite()) return (A < 0 && B < 0) ? -1 : 1;
  const Integer& p = v.prime();
  Integer u, w;
  int alpha = static_cast<int>(mpz_remove(u.get_mpz_t(), A.get_mpz_t(), p.get_mpz_t()));
  int beta = static_cast<int>(mpz_remove(w.get_mpz_t(), B.get_mpz_t(), p.get_mpz_t()));
  if (p == 2) {
    unsigned ur = mod8(u), wr = mod8(w);
    unsigned eps_u = ((ur - 1) / 2) & 1u, eps_w = ((wr - 1) / 2) & 1u;
    unsigned om_u = ((ur * ur - 1) / 8) & 1u, om_w = ((wr * wr - 1) / 8) & 1u;
    unsigned exponent = eps_u * eps_w + (alpha & 1) * om_w + (beta & 1) * om_u;
    return (exponent & 1u) ? -1 : 1;
  }
  int sign = 1;
  Integer pm = p % 4;
  if ((alpha & 1) && (beta & 1) && pm == 3) sign = -sign;
  if (beta & 1) sign *= legendre(u, p);
  if (alpha & 1) sign *= legendre(w, p);
  return sign;
}

FractionalIdeal::FractionalIdeal(const Rational& generator) : gen_(abs(generator)) {
  if (gen_ == 0) throw ArithmeticError("fractional ideal: zero generator");
  gen_.canonicalize();
}

FractionalIdeal FractionalIdeal::prime_power(const Integer& p, int e) {
  Integer pe;
  mpz_pow_ui(pe.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(e < 0 ? -e : e));
  return FractionalIdeal(e >= 0 ? Rational(pe) : Rational(1, 1) / Rational(pe));
}

bool FractionalIdeal::is_contained_in(const FractionalIdeal& other) const {
  Rational ratio = gen_ / other.gen_;
  return ratio.get_den() == 1;
}

FractionalIdeal FractionalIdeal::operator*(const FractionalIdeal& o) const {
  return FractionalIdeal(Rational(gen_ * o.gen_));
}

FractionalIdeal FractionalIdeal::operator/(const FractionalIdeal& o) const {
  return FractionalIdeal(Rational(gen_ / o.gen_));
}

FractionalIdeal FractionalIdeal::pow(int e) const {
  Integer num, den;
  unsigned long k = static_cast<unsigned long>(e < 0 ? -e : e);
  mpz_pow_ui(num.get_mpz_t(), gen_.get_num_mpz_t(), k);
  mpz_pow_ui(den.get_mpz_t(), gen_.get_den_mpz_t(), k);
  return e >= 0 ? FractionalIdeal(Rational(num, den)) : FractionalIdeal(Rational(den, num));
}

FractionalIdeal FractionalIdeal::sum(const FractionalIdeal& o) const {
  Integer num, den;
  mpz_gcd(num.get_mpz_t(), gen_.get_num_mpz_t(), o.gen_.get_num_mpz_t());
  mpz_lcm(den.get_mpz_t(), gen_.get_den_mpz_t(), o.gen_.get_den_mpz_t());
  return FractionalIdeal(Rational(num, den));
}

FractionalIdeal FractionalIdeal::intersect(const FractionalIdeal& o) const {
  Integer num, den;
  mpz_lcm(num.get_mpz_t(), gen_.get_num_mpz_t(), o.gen_.get_num_mpz_t());
  mpz_gcd(den.get_mpz_t(), gen_.get_den_mpz_t(), o.gen_.get_den_mpz_t());
  return FractionalIdeal(Rational(num, den));
}

FractionalIdeal FractionalIdeal::sqrt_exact() const {
  if (!mpz_perfect_square_p(gen_.get_num_mpz_t()) || !mpz_perfect_square_p(gen_.get_den_mpz_t())) {
    throw NonSquareIdealError("ideal " + to_string() + " is not a square");
  }
  Integer num, den;
  mpz_sqrt(num.get_mpz_t(), gen_.get_num_mpz_t());
  mpz_sqrt(den.get_mpz_t(), gen_.get_den_mpz_t());
  return FractionalIdeal(Rational(num, den));
}

std::string FractionalIdeal::to_string() const { return qflat::to_string(gen_); }

Rational parse_rational(std::string_view text) {
  auto fail = [&]() -> Rational {
    throw std::invalid_argument("not a rational number: '" + std::string(text) + "'");
  };
  std::string s;
  for (char ch : text) {
    if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
  }
  if (s.empty()) return fail();
  auto valid_int = [](std::string_view part) {
    size_t i = 0;
    if (i < part.size() && (part[i] == '-' || part[i] == '+')) ++i;
    if (i == part.size()) return false;
    for (; i < part.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(part[i]))) return false;
    }
    return true;
  };
  size_t slash = s.find('/');
  std::string num = s.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!valid_int(num) || !valid_int(den) || den[0] == '-' || den[0] == '+') return fail();
  if (num[0] == '+') num.erase(0, 1);
  Integer n(num, 10), d(den, 10);
  if (d == 0) return fail();
  Rational r(n, d);
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& x) { return x.get_num().get_str() + "/" + x.get_den().get_str(); }

std::string to_string(const Integer& x) { return x.get_str(); }

}  // namespace qflat
