#pragma once

// Invariants of the orthogonal complement W = (Qh)^⊥ of an anisotropic vector,
// both from the invariant tuple of V and the square class of q = φ[h], and by
// restricting the Gram matrix directly.

#include "qflat/qspace.hpp"

namespace qflat {

struct ComplementInvariants {
  Invariants inv;
  /// True when q is not represented by V: the case tables were evaluated
  /// formally and do not describe an actual complement.
  bool formal = false;
};

ComplementInvariants complement_invariants(const Invariants& inv_v, const Rational& q);

/// Basis (rows) of {x : φ(x, h) = 0}, pivoting on the first nonzero entry of gram·h.
RationalMatrix complement_basis(const QuadraticSpace& space, const RationalVector& h);

/// The restriction of φ to (Qh)^⊥; throws if φ[h] = 0.
QuadraticSpace complement_space(const QuadraticSpace& space, const RationalVector& h);

}  // namespace qflat
