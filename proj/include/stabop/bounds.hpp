#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "stabop/variational.hpp"

namespace stabop {

enum class bound_verdict { satisfied, violated, hypothesis_not_met };

inline const char* to_string(bound_verdict v) {
  switch (v) {
    case bound_verdict::satisfied: return "satisfied";
    case bound_verdict::violated: return "violated";
    default: return "hypothesis_not_met";
  }
}

// Evaluation of one closed-form eigenvalue bound against the computed value.
// verdict == violated requires hypothesis_ok and observed beyond bound_value
// by more than the tolerance; a violation means an implementation bug, never
// new mathematics.
struct bound_report {
  std::string bound_name;
  bool hypothesis_ok = false;
  std::string hypothesis_reason;
  double bound_value = 0.0;
  double observed = 0.0;
  bound_verdict verdict = bound_verdict::hypothesis_not_met;
  double slack = 0.0; // margin in the favourable direction
  std::string branch;
};

inline constexpr double kBoundRelTol = 1e-12;
inline constexpr double kDiscriminantClampWindow = 1e-10;

namespace detail {

// sqrt of k^2 - 4ks + 4s^2/n (+ extra), clamped to 0 inside the float window
// around the borderline root; nullopt when genuinely negative.
inline std::optional<double> clamped_sqrt_discriminant(int n, double s, double k,
                                                       double extra = 0.0) {
  const double disc = k * k - 4.0 * k * s + 4.0 * s * s / n + extra;
  const double scale = std::max({1.0, k * k, 4.0 * k * s, 4.0 * s * s / n, std::fabs(extra)});
  if (disc < 0.0) {
    if (disc >= -kDiscriminantClampWindow * scale) return 0.0;
    return std::nullopt;
  }
  return std::sqrt(disc);
}

}  // namespace detail

// Upper bound on the first nonzero Laplace eigenvalue under a Ricci lower
// bound r >= k:  (2s - k + sqrt(k^2 - 4ks + 4s^2/n)) / (2(n-1)).
// Sharp on the round sphere (k = n-1, s = n(n-1) gives exactly n).
inline std::optional<double> lambda1_upper_bound(int n, double s, double k) {
  if (n < 2) throw std::invalid_argument("lambda1_upper_bound: n must be >= 2");
  const auto root = detail::clamped_sqrt_discriminant(n, s, k);
  if (!root) return std::nullopt;
  return (2.0 * s - k + *root) / (2.0 * (n - 1));
}

// The k = 0 specialization for nonnegative Ricci: s/(n-1) * (1 + 1/sqrt(n)).
inline double lambda1_upper_bound_k0(int n, double s) {
  if (n < 2) throw std::invalid_argument("lambda1_upper_bound_k0: n must be >= 2");
  return s / (n - 1) * (1.0 + 1.0 / std::sqrt(static_cast<double>(n)));
}

// Same bound enlarged by the spectral invariant nu:
// (2s - k + sqrt(k^2 - 4ks + 4s^2/n + 4(n-1)nu)) / (2(n-1)).
// Reduces to lambda1_upper_bound at nu = 0.
inline std::optional<double> lambda1_upper_bound_nu(int n, double s, double k, double nu_value) {
  if (n < 2) throw std::invalid_argument("lambda1_upper_bound_nu: n must be >= 2");
  const auto root = detail::clamped_sqrt_discriminant(n, s, k, 4.0 * (n - 1) * nu_value);
  if (!root) return std::nullopt;
  return (2.0 * s - k + *root) / (2.0 * (n - 1));
}

// Classical Lichnerowicz lower bound lambda1 >= n/(n-1) * k, exact rational.
inline rational lichnerowicz_lower_bound(int n, const rational& k) {
  if (k < rational(0))
    throw std::invalid_argument("lichnerowicz_lower_bound: k must be >= 0");
  return rational(n) / rational(n - 1) * k;
}

inline double lichnerowicz_lower_bound(int n, double k) {
  return static_cast<double>(n) / (n - 1) * k;
}

namespace detail {

// k <= 2s(1 - sqrt(X)) for rational X in [0, 1], decided exactly:
// equivalent to 2s - k >= 0 and (2s - k)^2 >= 4 s^2 X.
inline bool k_below_sqrt_threshold(const rational& s, const rational& k, const rational& X) {
  const rational lhs = rational(2) * s - k;
  if (lhs < rational(0)) return false;
  return lhs * lhs >= rational(4) * s * s * X;
}

inline double slack_or_zero(double a, double b) { return a - b; }

}  // namespace detail

// Hypothesis 0 < k <= 2(1 - sqrt(1 - 1/n)) s, decided exactly over rationals.
inline bool ricci_pinch_hypothesis(int n, const rational& s, const rational& k) {
  if (!(k > rational(0)) || !(s > rational(0))) return false;
  return detail::k_below_sqrt_threshold(s, k, rational(n - 1) / rational(n));
}

// Hypothesis 0 <= k <= 2s(1 - sqrt(1 - 1/n - (n-1)nu/s^2)) for the
// 0 < nu <= s^2/n branch, decided exactly.
inline bool nu_branch_k_hypothesis(int n, const rational& s, const rational& k,
                                   const rational& nu_value) {
  if (k < rational(0) || !(s > rational(0))) return false;
  const rational X =
      rational(1) - rational(1) / rational(n) - rational(n - 1) * nu_value / (s * s);
  if (X < rational(0)) return false;
  return detail::k_below_sqrt_threshold(s, k, X);
}

// A kernel mode certifies the sign condition the upper bounds need: it is a
// Laplace eigenfunction with A phi = 0 and Lap phi = -(s/(n-1)) phi, so its
// positivity set is nonempty, A phi <= 0 there and Lap phi = 0 on the
// boundary.
struct superharmonic_witness_data {
  joint_eigenvalue mode;
  rational laplace_eigenvalue; // s/(n-1)
  rational symbol_value;       // 0
};

inline std::optional<superharmonic_witness_data> superharmonic_witness(
    const geometry_data& geom) {
  const kernel_report_data kr = kernel_report(geom);
  if (kr.kernel_dim == 0) return std::nullopt;
  superharmonic_witness_data w;
  w.mode = kr.kernel_modes.front();
  w.laplace_eigenvalue = kr.kernel_eigenvalue;
  w.symbol_value = symbol(geom, operator_kind::A(), w.mode);
  return w;
}

// If (n-1) lambda1 >= 2s + |r| then nu >= s^2/n. The hypothesis is decided
// exactly by squaring ((n-1) lambda1 - 2s >= 0 and its square >= |r|^2), and
// the conclusion compared as exact rationals.
inline bound_report threshold_check(const geometry_data& geom, const rational& lambda1,
                                    const rational& nu_value) {
  bound_report r;
  r.bound_name = "nu_threshold";
  const rational lhs = rational(geom.n - 1) * lambda1 - rational(2) * geom.s;
  const bool hyp = lhs >= rational(0) && lhs * lhs >= geom.ricci_norm_sq;
  const rational floor = geom.s * geom.s / rational(geom.n);
  r.bound_value = floor.to_double();
  r.observed = nu_value.to_double();
  if (!hyp) {
    r.hypothesis_ok = false;
    r.hypothesis_reason = "(n-1)*lambda1 < 2s + |r|";
    r.verdict = bound_verdict::hypothesis_not_met;
    return r;
  }
  r.hypothesis_ok = true;
  r.hypothesis_reason = "(n-1)*lambda1 >= 2s + |r|";
  r.verdict = nu_value >= floor ? bound_verdict::satisfied : bound_verdict::violated;
  r.slack = r.observed - r.bound_value;
  return r;
}

namespace detail {

inline bound_report upper_bound_row(const std::string& name, bool hyp,
                                    const std::string& reason,
                                    const std::optional<double>& bound, double lambda1,
                                    const std::string& branch = {}) {
  bound_report r;
  r.bound_name = name;
  r.hypothesis_ok = hyp;
  r.hypothesis_reason = reason;
  r.branch = branch;
  r.observed = lambda1;
  if (bound) {
    r.bound_value = *bound;
    r.slack = *bound - lambda1;
  }
  if (!hyp || !bound) {
    r.verdict = bound_verdict::hypothesis_not_met;
    if (!bound && r.hypothesis_reason.empty())
      r.hypothesis_reason = "discriminant negative beyond tolerance";
    return r;
  }
  const double tol = kBoundRelTol * std::max(1.0, std::fabs(*bound));
  r.verdict = lambda1 <= *bound + tol ? bound_verdict::satisfied : bound_verdict::violated;
  return r;
}

}  // namespace detail

// All applicable eigenvalue-bound checks for one manifold. k defaults to the
// exact Ricci lower bound min_i c_i; pass k_override to probe the hypothesis
// boundaries.
inline std::vector<bound_report> bound_suite(const geometry_data& geom,
                                             const std::optional<rational>& k_override = {}) {
  std::vector<bound_report> out;
  const rational lambda1 = first_nonzero_eigenvalue(geom.manifold);
  const variational_result nu_res = nu(geom);
  const rational k = k_override.value_or(geom.ricci_lower);
  const double sf = geom.s.to_double();
  const double kf = k.to_double();
  const double l1f = lambda1.to_double();
  const bool has_witness = nu_res.kernel_dim > 0;

  // Pinched-Ricci upper bound: needs s > 0, the superharmonic condition
  // (certified here by a kernel mode), and 0 < k <= 2(1 - sqrt(1-1/n))s.
  {
    std::string reason;
    bool hyp = true;
    if (!(geom.s > rational(0))) {
      hyp = false;
      reason = "scalar curvature not positive";
    } else if (!has_witness) {
      hyp = false;
      reason = "no superharmonic witness (kernel empty)";
    } else if (!ricci_pinch_hypothesis(geom.n, geom.s, k)) {
      hyp = false;
      reason = "k outside (0, 2(1-sqrt(1-1/n))s]";
    } else {
      reason = "kernel witness; k in pinching range";
    }
    out.push_back(detail::upper_bound_row("lambda1_upper_ricci_pinched", hyp, reason,
                                          lambda1_upper_bound(geom.n, sf, kf), l1f));
  }

  // k = 0 specialization: nonnegative Ricci (always true on these products),
  // s > 0 and the superharmonic condition.
  {
    std::string reason;
    bool hyp = true;
    if (!(geom.s > rational(0))) {
      hyp = false;
      reason = "scalar curvature not positive";
    } else if (!has_witness) {
      hyp = false;
      reason = "no superharmonic witness (kernel empty)";
    } else {
      reason = "kernel witness; Ricci >= 0";
    }
    out.push_back(detail::upper_bound_row("lambda1_upper_ricci_nonneg", hyp, reason,
                                          lambda1_upper_bound_k0(geom.n, sf), l1f));
  }

  // nu-enlarged upper bound, two hypothesis branches; Einstein metrics are
  // excluded from the statement. The minimizing eigenmode always has a
  // nonempty positivity set.
  {
    const rational nu_v = nu_res.value;
    const rational s2n = geom.s * geom.s / rational(geom.n);
    std::string reason, branch;
    bool hyp = true;
    if (!(geom.s > rational(0))) {
      hyp = false;
      reason = "scalar curvature not positive";
    } else if (geom.einstein) {
      hyp = false;
      reason = "Einstein metric excluded";
    } else if (nu_v > s2n && k >= rational(0)) {
      branch = "nu > s^2/n";
      reason = branch;
    } else if (nu_v > rational(0) && nu_v <= s2n &&
               nu_branch_k_hypothesis(geom.n, geom.s, k, nu_v)) {
      branch = "0 < nu <= s^2/n, k pinched";
      reason = branch;
    } else if (nu_v.is_zero()) {
      hyp = false;
      reason = "nu = 0";
    } else {
      hyp = false;
      reason = "k outside the nu-branch range";
    }
    out.push_back(detail::upper_bound_row(
        "lambda1_upper_from_nu", hyp, reason,
        lambda1_upper_bound_nu(geom.n, sf, kf, nu_v.to_double()), l1f, branch));
  }

  // Lichnerowicz lower bound, exact comparison.
  {
    bound_report r;
    r.bound_name = "lichnerowicz_lower";
    const rational lower = lichnerowicz_lower_bound(geom.n, k);
    r.hypothesis_ok = true;
    r.hypothesis_reason = k > rational(0) ? "Ricci >= k > 0" : "trivial at k = 0";
    r.bound_value = lower.to_double();
    r.observed = l1f;
    r.verdict = lambda1 >= lower ? bound_verdict::satisfied : bound_verdict::violated;
    r.slack = r.observed - r.bound_value;
    out.push_back(r);
  }

  out.push_back(threshold_check(geom, lambda1, nu_res.value));
  return out;
}

}  // namespace stabop
