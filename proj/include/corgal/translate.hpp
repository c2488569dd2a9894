#pragma once

#include "corgal/errors.hpp"
#include "corgal/formula.hpp"

namespace corgal {

namespace detail {

// t([φ]X), dispatching on the shape of X.
inline Formula translate_box(const Formula& ann, const Formula& body);

inline Formula translate(const Formula& f) {
  switch (f.op()) {
    case Op::Atom:
    case Op::Top:
    case Op::Bot: return f;
    case Op::Not: return Formula::neg(translate(f.arg()));
    case Op::And: return Formula::conj(translate(f.lhs()), translate(f.rhs()));
    case Op::Or: return Formula::disj(translate(f.lhs()), translate(f.rhs()));
    case Op::Imp: return Formula::imp(translate(f.lhs()), translate(f.rhs()));
    case Op::Iff: return Formula::iff(translate(f.lhs()), translate(f.rhs()));
    case Op::Know: return Formula::know(f.agent(), translate(f.arg()));
    case Op::KnowDual: return Formula::know_dual(f.agent(), translate(f.arg()));
    case Op::Ann: return translate_box(f.announcement(), f.body());
    case Op::AnnDual:
      // ⟨φ⟩ψ = ¬[φ]¬ψ
      return Formula::neg(translate_box(f.announcement(), Formula::neg(f.body())));
    default:
      throw StratumError("group and coalition announcements have no epistemic translation");
  }
}

inline Formula translate_box(const Formula& ann, const Formula& body) {
  switch (body.op()) {
    case Op::Atom:
    case Op::Top:
    case Op::Bot:
      // t([φ]p) = t(φ → p)
      return Formula::imp(translate(ann), body);
    case Op::Not:
      // t([φ]¬ψ) = t(φ → ¬[φ]ψ)
      return Formula::imp(translate(ann), Formula::neg(translate_box(ann, body.arg())));
    case Op::And:
      // t([φ](ψ ∧ χ)) = t([φ]ψ ∧ [φ]χ)
      return Formula::conj(translate_box(ann, body.lhs()), translate_box(ann, body.rhs()));
    case Op::Know:
      // t([φ]K_a ψ) = t(φ → K_a[φ]ψ)
      return Formula::imp(translate(ann), Formula::know(body.agent(), translate_box(ann, body.arg())));
    case Op::Ann:
      // t([φ][ψ]χ) = t([φ ∧ [φ]ψ]χ)
      return translate_box(Formula::conj(ann, Formula::ann(ann, body.announcement())), body.body());
    case Op::Or:
    case Op::Imp:
    case Op::Iff:
    case Op::KnowDual:
    case Op::AnnDual: return translate_box(ann, expand_head(body));
    default:
      throw StratumError("group and coalition announcements have no epistemic translation");
  }
}

}  // namespace detail

/// Reduces a public announcement formula to an equivalent epistemic one.
/// Throws StratumError on group or coalition operators.
inline Formula pal_to_el(const Formula& f) {
  if (stratum(f) > Stratum::PAL) throw StratumError("formula is not in the public announcement fragment");
  return detail::translate(f);
}

}  // namespace corgal
