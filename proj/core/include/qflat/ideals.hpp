#pragma once

// Discriminant ideals of maximal lattices, the ideal b(q) with
// 2q[L~/L] = b(q)^2 [M~/M], and the section index [M/L∩W] = b(q)(2φ(h,L))^{-1}.

#include <utility>

#include "qflat/complement.hpp"

namespace qflat {

class NotRepresentedError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// 2q[L~/L][M~/M]^{-1} failed to be a square although q is represented.
class ImplementationFault : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class ContractViolation : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// D_{K/Q} for K = Q(sqrt d), d squarefree; Z when d = 1.
FractionalIdeal field_discriminant(const Integer& d);

/// [L~/L] for any Z-maximal lattice L of a space with these invariants.
FractionalIdeal discriminant_ideal(const Invariants& inv);

struct DiscriminantData {
  FractionalIdeal disc_v;  // [L~/L]
  FractionalIdeal disc_w;  // [M~/M]
  FractionalIdeal b_q;     // b(q)
  Invariants inv_w;
};

/// Throws NotRepresentedError if q ∉ φ[V].
DiscriminantData discriminant_data(const Invariants& inv_v, const Rational& q);
FractionalIdeal b_of_q(const Invariants& inv_v, const Rational& q);

/// b(c^2 q) == |c| b(q).
bool b_scaling_check(const Invariants& inv_v, const Rational& q, const Rational& c);

struct SectionReport {
  FractionalIdeal index_ideal;  // [M/L∩W]
  FractionalIdeal two_phi_hl;   // 2φ(h, L)
  DiscriminantData data;
  bool maximal = false;
  /// The same verdict via q(2φ(h,L))^{-2} = [M~/M](2[L~/L])^{-1}.
  bool maximal_by_discriminants = false;
};

/// Throws ContractViolation unless b(q) ⊆ 2φ(h, L).
SectionReport section_ideal(const Invariants& inv_v, const Rational& q, const FractionalIdeal& two_phi_hl);

/// Local data of (V, q) at a prime, with δ normalized to a squarefree representative.
struct LocalData {
  Integer p;
  int t = 0;          // core dimension of V at p
  int nu = 0;         // ord_p q
  int kappa = 0;      // ord_p 2
  int ord_delta = 0;  // 0 or 1
  SquareClass xi_delta = SquareClass::kSquare;
  SquareClass xi_delta_q = SquareClass::kSquare;
  int disc_delta = 0;    // ord_p D of Q_p(sqrt δ); 1 when unramified
  int disc_delta_q = 0;  // ord_p D of Q_p(sqrt δq); 1 when unramified
};

LocalData local_data(const Invariants& inv_v, const Rational& q, const Integer& p);

/// The exponent ord_p of the discriminant of Q_p(sqrt b): 0 if b is a square,
/// 1 if unramified, otherwise the ramified conductor exponent.
int local_disc_exponent(const Rational& b, const Integer& p);

/// λ_p(q) on an anisotropic local space (1 <= t <= 4), from the exponent table.
int lambda_p_anisotropic(const LocalData& local);

struct LocalDiscriminants {
  int disc_v = 0;  // ord_p [L~/L]
  int disc_w = 0;  // ord_p [M~/M]
};

/// Lookup tables for the local discriminant ideals of an anisotropic V (2 <= t <= 4)
/// and of the complement of a represented q.
LocalDiscriminants local_disc_tables(const LocalData& local);

}  // namespace qflat
