#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "stabop/bounds.hpp"
#include "stabop/oracle.hpp"
#include "stabop/variational.hpp"

namespace stabop {

inline constexpr const char* kLibraryName = "stabop";
inline constexpr const char* kLibraryVersion = "0.1.0";

// Everything a run needs; echoed verbatim into every report so any output is
// reproducible from the report alone. Defaults are documented in the README.
struct run_config {
  std::string manifold;          // inline descriptor or descriptor file path
  rational cutoff = rational(10);
  rational alpha = rational(0);
  std::optional<rational> k_override;
  double epsilon = 1e-3;
  int n_polar = 12;
  int n_azimuth = 24;
  double tolerance = 1e-4;
  std::string format = "table";  // table | json | csv
  std::string out;               // empty = stdout
  std::uint64_t seed = 7;
  int threads = 1;
};

inline nlohmann::json rational_json(const rational& r) {
  return {{"exact", r.str()}, {"value", r.to_double()}};
}

// threads is deliberately not echoed: results are independent of scheduling,
// so the reproducibility surface of a run does not include it
inline nlohmann::json to_json(const run_config& c) {
  nlohmann::json j{{"manifold", c.manifold},
                   {"cutoff", c.cutoff.str()},
                   {"alpha", c.alpha.str()},
                   {"epsilon", c.epsilon},
                   {"n_polar", c.n_polar},
                   {"n_azimuth", c.n_azimuth},
                   {"tolerance", c.tolerance},
                   {"format", c.format},
                   {"out", c.out},
                   {"seed", c.seed}};
  if (c.k_override) j["k"] = c.k_override->str();
  return j;
}

inline nlohmann::json to_json(const geometry_data& g) {
  nlohmann::json eigs = nlohmann::json::array();
  for (const auto& c : g.ricci_eigs) eigs.push_back(rational_json(c));
  return {{"manifold", g.manifold.str()},
          {"n", g.n},
          {"scalar_curvature", rational_json(g.s)},
          {"ricci_eigenvalues", eigs},
          {"ricci_norm_sq", rational_json(g.ricci_norm_sq)},
          {"ricci_lower", rational_json(g.ricci_lower)},
          {"z_norm_sq", rational_json(g.z_norm_sq)},
          {"einstein", g.einstein},
          {"ricci_flat", g.ricci_flat}};
}

inline nlohmann::json to_json(const joint_eigenvalue& j) {
  nlohmann::json comps = nlohmann::json::array();
  for (const auto& c : j.components) comps.push_back(c.str());
  return {{"levels", j.levels},
          {"components", comps},
          {"total", rational_json(j.total)},
          {"multiplicity", j.multiplicity}};
}

inline nlohmann::json to_json(const variational_result& r) {
  nlohmann::json mins = nlohmann::json::array();
  for (const auto& m : r.minimizers) mins.push_back(to_json(m));
  return {{"value", rational_json(r.value)},
          {"minimizers", mins},
          {"kernel_dim", r.kernel_dim},
          {"certificate",
           {{"cutoff", rational_json(r.certificate.cutoff)},
            {"witness", rational_json(r.certificate.witness)},
            {"statement", r.certificate.statement}}}};
}

inline nlohmann::json to_json(const kernel_report_data& k) {
  nlohmann::json modes = nlohmann::json::array();
  for (const auto& m : k.kernel_modes) modes.push_back(to_json(m));
  return {{"nu", to_json(k.nu_result)},
          {"kernel_dim", k.kernel_dim},
          {"kernel_modes", modes},
          {"kernel_eigenvalue", rational_json(k.kernel_eigenvalue)},
          {"ricci_flat", k.ricci_flat}};
}

inline nlohmann::json to_json(const bound_report& b) {
  nlohmann::json j{{"bound", b.bound_name},
                   {"hypothesis_ok", b.hypothesis_ok},
                   {"hypothesis", b.hypothesis_reason},
                   {"bound_value", b.bound_value},
                   {"observed", b.observed},
                   {"verdict", to_string(b.verdict)},
                   {"slack", b.slack}};
  if (!b.branch.empty()) j["branch"] = b.branch;
  return j;
}

inline nlohmann::json to_json(const identity_report& r) {
  nlohmann::json breakdown;
  for (const auto& [name, value] : r.breakdown) breakdown[name] = value;
  return {{"check", r.check},
          {"lhs", r.lhs},
          {"rhs", r.rhs},
          {"phi_norm_sq", r.phi_norm_sq},
          {"scale", r.scale},
          {"rel_error", r.rel_error},
          {"pass", r.pass},
          {"breakdown", breakdown}};
}

}  // namespace stabop
