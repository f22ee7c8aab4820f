#pragma once

#include <functional>
#include <string>
#include <vector>

#include "stabop/rng.hpp"
#include "stabop/sweep.hpp"

namespace stabop {

struct verify_row {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct verify_options {
  std::uint64_t seed = 7;
  int threads = 1;
  // self-test hook: flips the sign of the Ricci contraction term inside every
  // symbol, which must make the suite fail (used to prove the suite can fail)
  bool corrupt_ricci_sign = false;
};

namespace detail {

inline geometry_data verify_geometry(const product_manifold& m, bool corrupt) {
  geometry_data g = geometry(m);
  if (corrupt)
    for (auto& c : g.ricci_eigs) c = -c;
  return g;
}

}  // namespace detail

// The full desk-check suite: every closed-form value and inequality the
// library claims, evaluated end to end. Rows are pure and run in parallel
// into indexed slots, so the report is identical for any thread count.
inline std::vector<verify_row> verify_suite(const verify_options& opts = {}) {
  const bool corrupt = opts.corrupt_ricci_sign;
  const auto geom = [corrupt](const std::string& spec) {
    return detail::verify_geometry(product_manifold::parse(spec), corrupt);
  };

  struct pending {
    std::string name;
    std::function<std::pair<bool, std::string>()> check;
  };
  std::vector<pending> rows;

  // exact value of nu on the equal-factor products
  for (int m = 2; m <= 5; ++m) {
    const std::string spec = "S" + std::to_string(m) + "xS" + std::to_string(m);
    rows.push_back({"nu(" + spec + ") == " + std::to_string(m), [=] {
                      const auto r = nu(geom(spec));
                      return std::make_pair(
                          r.value == rational(m) && r.certificate.witness >= r.value,
                          "nu = " + r.value.str() + ", certificate cutoff " +
                              r.certificate.cutoff.str());
                    }});
  }

  // kernel examples: nu = 0, kernel exactly at s/(n-1), dimension = first
  // level multiplicity of the kernel factor
  struct kernel_case {
    std::string spec;
    long long expected_dim;
  };
  std::vector<kernel_case> kernels;
  for (int n = 2; n <= 6; ++n)
    kernels.push_back({"S" + std::to_string(n), n + 1});
  kernels.push_back({"S2xS3", 3});
  for (int n = 2; n <= 4; ++n)
    kernels.push_back({"S" + std::to_string(n) + "xS" + std::to_string(n + 1), n + 1});
  for (const auto& kc : kernels) {
    rows.push_back(
        {"nu(" + kc.spec + ") == 0 with kernel at s/(n-1), dim " +
             std::to_string(kc.expected_dim),
         [=] {
           const auto g = geom(kc.spec);
           const auto kr = kernel_report(g);
           bool ok = kr.nu_result.value.is_zero() && kr.kernel_dim == kc.expected_dim;
           for (const auto& m : kr.kernel_modes)
             ok = ok && m.total == g.s / rational(g.n - 1);
           return std::make_pair(ok, "nu = " + kr.nu_result.value.str() + ", kernel_dim = " +
                                         std::to_string(kr.kernel_dim));
         }});
  }

  // mu bracket on the kernel manifolds with s > 0; equality on Einstein ones
  for (const auto& kc : kernels) {
    rows.push_back({"mu(" + kc.spec + ") in [-|r|^2, -s^2/n]", [=] {
                      const auto g = geom(kc.spec);
                      const auto mr = mu(g);
                      const rational s2n = g.s * g.s / rational(g.n);
                      bool ok = mr.value >= -g.ricci_norm_sq && mr.value <= -s2n;
                      if (g.einstein) ok = ok && mr.value == -s2n;
                      return std::make_pair(ok, "mu = " + mr.value.str());
                    }});
  }

  // sharpness of the lambda1 upper bound on round spheres
  rows.push_back({"lambda1 upper bound sharp on S^n, n = 2..10", [=] {
                    for (int n = 2; n <= 10; ++n) {
                      const double s = static_cast<double>(n) * (n - 1);
                      const auto b = lambda1_upper_bound(n, s, n - 1.0);
                      if (!b) return std::make_pair(false, std::string("no bound at n = ") +
                                                               std::to_string(n));
                      if (std::fabs(*b - n) > 1e-12 * n)
                        return std::make_pair(false, "bound(n=" + std::to_string(n) +
                                                         ") = " + std::to_string(*b));
                      const auto l1 = first_nonzero_eigenvalue(
                          product_manifold::parse("S" + std::to_string(n)));
                      if (l1 != rational(n))
                        return std::make_pair(false, std::string("lambda1 mismatch"));
                    }
                    return std::make_pair(true, std::string("equality at k = n-1"));
                  }});

  // upper bound on nu for unequal sphere pairs
  {
    const std::pair<int, int> cases[] = {{2, 2}, {2, 3}, {3, 2}};
    for (const auto& [m, k] : cases) {
      const std::string spec = "S" + std::to_string(m) + "xS" + std::to_string(m + k);
      const rational cap = min(rational(static_cast<long long>(m + k) * (k - 1) * (k - 1)),
                               rational(static_cast<long long>(m) * (k + 1) * (k + 1)));
      rows.push_back({"nu(" + spec + ") <= " + cap.str(), [=] {
                        const auto r = nu(geom(spec));
                        return std::make_pair(r.value <= cap, "nu = " + r.value.str());
                      }});
    }
  }

  // alpha threshold on S2 x S2
  rows.push_back({"alpha_star(S2xS2) == 1/2 and min symbol at alpha_star == 0", [=] {
                    const auto g = geom("S2xS2");
                    const rational a = alpha_star(g);
                    const auto re = minimize_symbol(g, operator_kind::interpolated(a));
                    return std::make_pair(a == rational(1, 2) && re.value.is_zero(),
                                          "alpha_star = " + a.str() + ", min = " +
                                              re.value.str());
                  }});

  // homothety covariance of nu
  for (const std::string spec : {"S2xS3", "S2xS2", "S2(1/3)xS3(2)"}) {
    rows.push_back({"nu(scale(" + spec + ", t^2)) * t^4 == nu", [=] {
                      const auto m = product_manifold::parse(spec);
                      const rational base =
                          nu(detail::verify_geometry(m, corrupt)).value;
                      for (const rational tsq : {rational(1, 4), rational(1), rational(9)}) {
                        const auto scaled =
                            detail::verify_geometry(scale(m, tsq), corrupt);
                        if (nu(scaled).value * tsq * tsq != base)
                          return std::make_pair(false, "t^2 = " + tsq.str());
                      }
                      return std::make_pair(true, std::string("t^2 in {1/4, 1, 9}"));
                    }});
  }

  // lichnerowicz lower bound, exact comparison
  rows.push_back({"lichnerowicz lower bound <= lambda1 on the example suite", [=] {
                    for (const std::string spec :
                         {"S2", "S5", "S2xS3", "S3xS4", "S2(1/4)xS2", "S2xS2"}) {
                      const auto g = geom(spec);
                      const auto l1 = first_nonzero_eigenvalue(g.manifold);
                      if (lichnerowicz_lower_bound(g.n, g.ricci_lower) > l1)
                        return std::make_pair(false, spec);
                    }
                    return std::make_pair(true, std::string("exact rational comparisons"));
                  }});

  // no applicable bound may be violated across small radius sweeps
  for (const std::string pattern : {"S2(@)xS2(1)", "S2(@)xS3(1)"}) {
    rows.push_back({"no bound violated on sweep " + pattern, [=] {
                      sweep_spec spec;
                      spec.pattern = pattern;
                      spec.start = rational(1, 4);
                      spec.stop = rational(4);
                      spec.count = 8;
                      for (const auto& pt : run_sweep(spec)) {
                        for (const auto& b : pt.bounds)
                          if (b.verdict == bound_verdict::violated)
                            return std::make_pair(false, pt.manifold + ": " + b.bound_name);
                      }
                      return std::make_pair(true, std::string("8 grid points"));
                    }});
  }

  // mu of the flat torus vanishes at the constants
  rows.push_back({"mu(S1xS1) == 0 at the constant mode", [=] {
                    const auto r = mu(geom("S1xS1"));
                    const bool ok = r.value.is_zero() && r.minimizers.size() == 1 &&
                                    r.minimizers[0].is_constant();
                    return std::make_pair(ok, "mu = " + r.value.str());
                  }});

  // randomized Rayleigh quotients never undercut nu (seeded)
  rows.push_back(
      {"random exact expansions satisfy rayleigh(A, phi) >= nu", [=, seed = opts.seed] {
         splitmix64 rng(seed);
         for (const std::string spec : {"S2xS3", "S2xS2", "S2(2)xS2(1)"}) {
           const auto g = geom(spec);
           const rational v = nu(g).value;
           const auto modes = enumerate_joint(g.manifold, rational(12));
           for (int trial = 0; trial < 100; ++trial) {
             std::vector<expansion_term<rational>> terms;
             for (const auto& j : modes) {
               if (rng.next() % 3 == 0) continue;
               const rational c(rng.range(-9, 9), rng.range(1, 9));
               if (c.is_zero()) continue;
               terms.push_back({j, c});
             }
             if (terms.empty()) continue;
             if (rayleigh(g, operator_kind::A(), expansion(std::move(terms))) < v)
               return std::make_pair(false, spec + " trial " + std::to_string(trial));
           }
         }
         return std::make_pair(true, std::string("3 manifolds x 100 expansions"));
       }});

  // run everything; any exception fails its row
  std::vector<verify_row> out(rows.size());
  detail::parallel_for(rows.size(), opts.threads, [&](std::size_t i) {
    out[i].name = rows[i].name;
    try {
      const auto [ok, detail_text] = rows[i].check();
      out[i].pass = ok;
      out[i].detail = detail_text;
    } catch (const std::exception& e) {
      out[i].pass = false;
      out[i].detail = std::string("exception: ") + e.what();
    }
  });
  return out;
}

}  // namespace stabop
