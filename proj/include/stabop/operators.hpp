#pragma once

#include <stdexcept>
#include <vector>

#include "stabop/manifold.hpp"
#include "stabop/rational.hpp"
#include "stabop/spectrum.hpp"

namespace stabop {

// The one-parameter family of fourth-order operators acting on functions:
//
//   A_alpha(phi) = (n-1) Lap^2 phi + 2s Lap phi - <Hess phi, r> + (1-alpha) phi |r|^2
//
// alpha = 0 is the stability operator A, alpha = 1 drops the zeroth-order
// term entirely (operator P).
class operator_kind {
public:
  static operator_kind A() { return operator_kind(rational(0)); }
  static operator_kind P() { return operator_kind(rational(1)); }
  static operator_kind interpolated(const rational& alpha) { return operator_kind(alpha); }

  const rational& alpha() const { return alpha_; }
  bool is_A() const { return alpha_.is_zero(); }
  bool is_P() const { return alpha_ == rational(1); }

  const char* name() const { return is_A() ? "A" : is_P() ? "P" : "A_alpha"; }

private:
  explicit operator_kind(rational alpha) : alpha_(std::move(alpha)) {
    if (alpha_ < rational(0) || alpha_ > rational(1))
      throw std::invalid_argument("operator_kind: alpha must lie in [0, 1]");
  }
  rational alpha_;
};

// Diagonal value of the operator on a joint eigenmode. On these products r is
// parallel and block-diagonal with constant eigenvalue c_i on factor i, so
// contracting it with the Hessian picks out the per-block traces:
// <Hess phi, r> = sum_i c_i tr_i(Hess phi) = sum_i c_i Lap_i phi. Hence every
// A_alpha is diagonal on the joint eigenbasis:
//
//   q(mode) = (n-1) L^2 - 2 s L + sum_i c_i L_i + (1-alpha) |r|^2,
//
// with L the total eigenvalue and L_i the per-factor components. Exact.
inline rational symbol(const geometry_data& geom, const operator_kind& kind,
                       const joint_eigenvalue& mode) {
  if (mode.components.size() != geom.ricci_eigs.size())
    throw std::invalid_argument("symbol: mode factor count does not match geometry");
  const rational& L = mode.total;
  rational ricci_term = 0;
  for (std::size_t i = 0; i < mode.components.size(); ++i)
    ricci_term += geom.ricci_eigs[i] * mode.components[i];
  return rational(geom.n - 1) * L * L - rational(2) * geom.s * L + ricci_term +
         (rational(1) - kind.alpha()) * geom.ricci_norm_sq;
}

// Finite expansion over distinct joint eigenmodes, each term standing for a
// unit-L2-norm eigenfunction from that mode's eigenspace. Coefficients are
// exact rationals or doubles; the float path carries <= 8 eps relative error
// per term.
template <class Coef>
struct expansion_term {
  joint_eigenvalue mode;
  Coef coef;
};

template <class Coef>
class coefficient_expansion {
public:
  coefficient_expansion() = default;
  explicit coefficient_expansion(std::vector<expansion_term<Coef>> terms)
      : terms_(std::move(terms)) {
    for (std::size_t i = 0; i < terms_.size(); ++i)
      for (std::size_t j = i + 1; j < terms_.size(); ++j)
        if (terms_[i].mode == terms_[j].mode)
          throw std::invalid_argument("coefficient_expansion: duplicate mode");
  }

  const std::vector<expansion_term<Coef>>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  Coef norm_sq() const {
    Coef s{};
    for (const auto& t : terms_) s += t.coef * t.coef;
    return s;
  }

private:
  std::vector<expansion_term<Coef>> terms_;
};

using expansion = coefficient_expansion<rational>;
using expansion_f = coefficient_expansion<double>;

namespace detail {
inline rational symbol_as(const rational&, const rational& q) { return q; }
inline double symbol_as(const double&, const rational& q) { return q.to_double(); }
}  // namespace detail

// integral of phi * Op(phi) under the convention integral of phi^2 = sum of
// squared coefficients; equals sum coef^2 * q(mode) by diagonality.
template <class Coef>
Coef quadratic_form(const geometry_data& geom, const operator_kind& kind,
                    const coefficient_expansion<Coef>& phi) {
  if (phi.empty()) throw std::invalid_argument("quadratic_form: empty expansion");
  Coef acc{};
  for (const auto& t : phi.terms())
    acc += t.coef * t.coef * detail::symbol_as(Coef{}, symbol(geom, kind, t.mode));
  return acc;
}

template <class Coef>
Coef rayleigh(const geometry_data& geom, const operator_kind& kind,
              const coefficient_expansion<Coef>& phi) {
  const Coef n2 = phi.norm_sq();
  if (!(n2 > Coef{})) throw std::invalid_argument("rayleigh: zero-norm expansion");
  return quadratic_form(geom, kind, phi) / n2;
}

// The four integrand totals of integral{ n (Lap phi)^2 - 2s |dphi|^2
// - |Hess phi|^2 + phi^2 |r|^2 } for a unit-norm eigenfunction, using
// integral (Lap phi)^2 = L^2, integral |dphi|^2 = L and
// integral |Hess phi|^2 = L^2 - sum_i c_i L_i (Bochner-Weitzenboeck on these
// homogeneous products). Their sum equals symbol(A, mode) exactly.
struct bochner_terms {
  rational laplacian_term; //  n L^2
  rational gradient_term;  // -2 s L
  rational hessian_term;   // -(L^2 - sum c_i L_i)
  rational zeroth_term;    //  |r|^2

  rational sum() const {
    return laplacian_term + gradient_term + hessian_term + zeroth_term;
  }
};

inline bochner_terms bochner_identity_terms(const geometry_data& geom,
                                            const joint_eigenvalue& mode) {
  if (mode.components.size() != geom.ricci_eigs.size())
    throw std::invalid_argument("bochner_identity_terms: factor count mismatch");
  const rational& L = mode.total;
  rational ricci_term = 0;
  for (std::size_t i = 0; i < mode.components.size(); ++i)
    ricci_term += geom.ricci_eigs[i] * mode.components[i];
  bochner_terms b;
  b.laplacian_term = rational(geom.n) * L * L;
  b.gradient_term = -rational(2) * geom.s * L;
  b.hessian_term = -(L * L - ricci_term);
  b.zeroth_term = geom.ricci_norm_sq;
  return b;
}

}  // namespace stabop
