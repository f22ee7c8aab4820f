#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "stabop/operators.hpp"

namespace stabop {

// Raised when two routes that must agree exactly disagree (e.g. a null mode
// off the forced Laplace eigenvalue). Maps to CLI exit code 3.
class consistency_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Proof that the enumerated minimum is global over the whole spectrum: every
// joint mode with total > cutoff has symbol >= witness >= value, because
// symbol >= q_low(L) = (n-1) L^2 - 2 s L + (1-alpha) |r|^2 (the Ricci
// contraction term is nonnegative) and q_low is increasing past its vertex
// s/(n-1) <= cutoff with q_low(cutoff) = witness.
struct termination_certificate {
  rational cutoff;
  rational witness;
  std::string statement;
};

struct variational_result {
  rational value;                           // the exact minimum over the spectrum
  std::vector<joint_eigenvalue> minimizers; // all modes attaining it
  long long kernel_dim = 0;                 // total multiplicity of null modes (0 unless value == 0)
  termination_certificate certificate;
};

namespace detail {

// q_low(L): the mode-independent lower envelope of the symbol at total L.
inline rational symbol_lower_envelope(const geometry_data& geom,
                                      const operator_kind& kind, const rational& L) {
  return rational(geom.n - 1) * L * L - rational(2) * geom.s * L +
         (rational(1) - kind.alpha()) * geom.ricci_norm_sq;
}

}  // namespace detail

// Exact minimum of the symbol over all joint eigenmodes, with a termination
// certificate. Enumerates up to a cutoff that starts at
// max(4s/(n-1), first nonzero eigenvalue) and doubles until the lower
// envelope certifies global minimality.
//
// Foundational lemma: on these homogeneous products every A_alpha acts
// diagonally on the joint eigenbasis, which is L2-complete, so the Rayleigh
// quotient of any finite expansion is a convex combination of symbol values
// and the infimum over the full Sobolev space equals the minimum over the
// spectrum (density plus diagonalization; sampled in the test suite via
// random expansions). The zeroth-order coefficient uses |r|^2 as the maximum
// of |r|^2 over M, which holds because r is parallel here; a non-homogeneous
// generalization would have to distinguish the two.
inline variational_result minimize_symbol(const geometry_data& geom,
                                          const operator_kind& kind) {
  const rational vertex = geom.s / rational(geom.n - 1);
  rational cutoff = max(rational(4) * vertex, first_nonzero_eigenvalue(geom.manifold));

  for (;;) {
    const auto modes = enumerate_joint(geom.manifold, cutoff);
    rational best;
    bool first = true;
    for (const auto& m : modes) {
      const rational q = symbol(geom, kind, m);
      if (first || q < best) {
        best = q;
        first = false;
      }
    }
    const rational witness = detail::symbol_lower_envelope(geom, kind, cutoff);
    if (cutoff >= vertex && witness >= best) {
      variational_result r;
      r.value = best;
      for (const auto& m : modes)
        if (symbol(geom, kind, m) == best) r.minimizers.push_back(m);
      if (best.is_zero())
        for (const auto& m : r.minimizers) r.kernel_dim += m.multiplicity;
      r.certificate.cutoff = cutoff;
      r.certificate.witness = witness;
      r.certificate.statement =
          "every mode with total > " + cutoff.str() + " has symbol >= " + witness.str() +
          " >= " + best.str() + " (lower envelope past its vertex " + vertex.str() + ")";
      return r;
    }
    cutoff *= rational(2);
  }
}

inline variational_result nu(const geometry_data& geom) {
  return minimize_symbol(geom, operator_kind::A());
}

inline variational_result mu(const geometry_data& geom) {
  return minimize_symbol(geom, operator_kind::P());
}

// Threshold ratio nu/|r|^2: for alpha below it the minimum symbol of A_alpha
// stays positive, and at it the minimum is exactly 0 (the symbol family is a
// constant shift by alpha |r|^2). Zero when nu itself vanishes.
inline rational alpha_star(const geometry_data& geom) {
  if (geom.ricci_norm_sq.is_zero())
    throw std::domain_error("alpha_star: Ricci-flat manifold (|r|^2 = 0)");
  const rational v = nu(geom).value;
  if (v.is_zero()) return rational(0);
  return v / geom.ricci_norm_sq;
}

// Kernel structure of A. When nu = 0 every null mode must sit exactly at the
// Laplace eigenvalue s/(n-1); any other outcome is an internal inconsistency.
struct kernel_report_data {
  variational_result nu_result;
  long long kernel_dim = 0;
  std::vector<joint_eigenvalue> kernel_modes;
  rational kernel_eigenvalue; // s/(n-1), meaningful when kernel_dim > 0
  bool ricci_flat = false;
};

inline kernel_report_data kernel_report(const geometry_data& geom) {
  kernel_report_data r;
  r.nu_result = nu(geom);
  r.ricci_flat = geom.ricci_flat;
  r.kernel_eigenvalue = geom.s / rational(geom.n - 1);
  if (r.nu_result.value.is_zero()) {
    r.kernel_modes = r.nu_result.minimizers;
    r.kernel_dim = r.nu_result.kernel_dim;
    for (const auto& m : r.kernel_modes)
      if (m.total != r.kernel_eigenvalue)
        throw consistency_error(
            "kernel_report: null mode at total " + m.total.str() +
            " but s/(n-1) = " + r.kernel_eigenvalue.str() + " on " + geom.manifold.str());
  }
  return r;
}

}  // namespace stabop
