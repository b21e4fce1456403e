#include "qflat/ideals.hpp"

namespace qflat {

FractionalIdeal field_discriminant(const Integer& d) {
  if (d == 1) return FractionalIdeal::unit();
  Integer r = d % 4;
  if (r < 0) r += 4;
  const Integer a = abs(d);
  return FractionalIdeal(Rational(r == 1 ? a : Integer(4 * a)));
}

FractionalIdeal discriminant_ideal(const Invariants& inv) {
  if (inv.n % 2 == 0) {
    const FractionalIdeal dk = field_discriminant(inv.d);
    Integer e1 = 1;
    for (const Place& v : inv.ram)
      if (!v.is_infinite() && dk.ord(v.prime()) == 0) e1 *= v.prime();
    return dk * FractionalIdeal(Rational(e1)).pow(2);
  }
  const FractionalIdeal a(Rational(abs(inv.d)));
  const FractionalIdeal e(Rational(inv.finite_ram_product()));
  const FractionalIdeal two(Rational(2));
  return (two / a * e.pow(2)).intersect(two * a);
}

DiscriminantData discriminant_data(const Invariants& inv_v, const Rational& q) {
  if (!represented_by_invariants(inv_v, q)) {
    throw NotRepresentedError("q = " + to_string(q) + " is not represented by the space");
  }
  DiscriminantData out{discriminant_ideal(inv_v), FractionalIdeal(), FractionalIdeal(), {}};
  out.inv_w = complement_invariants(inv_v, q).inv;
  out.disc_w = discriminant_ideal(out.inv_w);
  const FractionalIdeal square = FractionalIdeal(Rational(2 * q)) * out.disc_v / out.disc_w;
  try {
    out.b_q = square.sqrt_exact();
  } catch (const NonSquareIdealError&) {
    throw ImplementationFault("2q[L~/L][M~/M]^-1 = " + square.to_string() + " is not a square for represented q = " +
                              to_string(q));
  }
  return out;
}

FractionalIdeal b_of_q(const Invariants& inv_v, const Rational& q) { return discriminant_data(inv_v, q).b_q; }

bool b_scaling_check(const Invariants& inv_v, const Rational& q, const Rational& c) {
  if (c == 0) throw ArithmeticError("b_scaling_check: c must be nonzero");
  return b_of_q(inv_v, c * c * q) == FractionalIdeal(c) * b_of_q(inv_v, q);
}

SectionReport section_ideal(const Invariants& inv_v, const Rational& q, const FractionalIdeal& two_phi_hl) {
  SectionReport r{FractionalIdeal(), two_phi_hl, discriminant_data(inv_v, q), false, false};
  if (!r.data.b_q.is_contained_in(two_phi_hl)) {
    throw ContractViolation("b(q) = " + r.data.b_q.to_string() + " is not contained in 2φ(h,L) = " +
                            two_phi_hl.to_string());
  }
  r.index_ideal = r.data.b_q / two_phi_hl;
  r.maximal = r.index_ideal.is_unit();
  const FractionalIdeal lhs = FractionalIdeal(q) / two_phi_hl.pow(2);
  const FractionalIdeal rhs = r.data.disc_w / (FractionalIdeal(Rational(2)) * r.data.disc_v);
  r.maximal_by_discriminants = lhs == rhs;
  return r;
}

int local_disc_exponent(const Rational& b, const Integer& p) {
  switch (xi(b, p)) {
    case SquareClass::kSquare:
      return 0;
    case SquareClass::kUnramified:
      return 1;
    case SquareClass::kRamified:
      break;
  }
  if (p != 2) return 1;
  const Integer s = squarefree_part(b);
  return mpz_even_p(s.get_mpz_t()) ? 3 : 2;
}

LocalData local_data(const Invariants& inv_v, const Rational& q, const Integer& p) {
  LocalData l;
  l.p = p;
  l.t = core_dimension_from_invariants(inv_v, p).value();
  l.nu = valuation(q, p);
  l.kappa = p == 2 ? 1 : 0;
  const Rational delta = inv_v.delta_class();
  l.ord_delta = valuation(delta, p);
  l.xi_delta = xi(delta, p);
  l.xi_delta_q = xi(delta * q, p);
  l.disc_delta = local_disc_exponent(delta, p);
  l.disc_delta_q = local_disc_exponent(delta * q, p);
  return l;
}

namespace {

[[noreturn]] void inconsistent(const LocalData& l, const char* what) {
  throw ArithmeticError(std::string("inconsistent local data at p = ") + l.p.get_str() + ": " + what);
}

int half_exact(const LocalData& l, int x) {
  if (x % 2) inconsistent(l, "odd exponent where an even one is required");
  return x / 2;
}

int floor_half(int x) { return x >= 0 ? x / 2 : -((-x + 1) / 2); }

}  // namespace

int lambda_p_anisotropic(const LocalData& l) {
  if (l.nu < 0) inconsistent(l, "q must be p-integral");
  if (l.ord_delta < 0 || l.ord_delta > 1) inconsistent(l, "δ must be normalized to ord 0 or 1");
  switch (l.t) {
    case 1:
      return l.kappa + half_exact(l, l.nu + l.ord_delta);
    case 2:
      if (l.xi_delta == SquareClass::kSquare) inconsistent(l, "t = 2 needs a nonsquare δ");
      return floor_half(l.nu + l.disc_delta);
    case 3: {
      const int ord_dq = l.nu + l.ord_delta;
      if (ord_dq % 2) return half_exact(l, l.nu - l.ord_delta + 1);
      if (l.xi_delta_q == SquareClass::kRamified) {
        return l.kappa + 1 + half_exact(l, l.nu - l.ord_delta - l.disc_delta_q);
      }
      if (l.xi_delta_q == SquareClass::kUnramified) return l.kappa + ord_dq / 2;
      inconsistent(l, "q is not represented by the anisotropic ternary core");
    }
    case 4:
      return floor_half(l.nu + 1);
    default:
      inconsistent(l, "core dimension must be 1..4");
  }
}

LocalDiscriminants local_disc_tables(const LocalData& l) {
  const bool nu_even = l.nu % 2 == 0;
  const int k = l.kappa;
  LocalDiscriminants out;
  switch (l.t) {
    case 2:
      if (l.ord_delta == 1) {
        out.disc_v = 2 * k + 1;
        out.disc_w = nu_even ? k + 1 : k;
      } else if (l.xi_delta == SquareClass::kRamified) {
        out.disc_v = l.disc_delta;
        out.disc_w = nu_even ? k : k + 1;
      } else if (l.xi_delta == SquareClass::kUnramified) {
        out.disc_v = nu_even ? 0 : 2;
        out.disc_w = nu_even ? k : k + 1;
      } else {
        inconsistent(l, "t = 2 needs a nonsquare δ");
      }
      return out;
    case 3: {
      out.disc_v = l.ord_delta == 1 ? k + 1 : k + 2;
      const int ord_dq = l.nu + l.ord_delta;
      if (ord_dq % 2) {
        out.disc_w = 2 * k + 1;
      } else if (l.xi_delta_q == SquareClass::kRamified) {
        out.disc_w = l.disc_delta_q;
      } else if (l.xi_delta_q == SquareClass::kUnramified) {
        out.disc_w = l.ord_delta == 1 ? 0 : 2;
      } else {
        inconsistent(l, "q is not represented by the anisotropic ternary core");
      }
      return out;
    }
    case 4:
      out.disc_v = 2;
      out.disc_w = nu_even ? k + 2 : k + 1;
      return out;
    default:
      inconsistent(l, "tables cover 2 <= t <= 4");
  }
}

}  // namespace qflat
