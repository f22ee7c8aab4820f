// stabop: spectral invariants of the linearized-scalar-curvature stability
// operator on products of round spheres.
//
// Exit codes: 0 success, 1 verification failure, 2 usage error, 3 internal
// consistency error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "stabop/report.hpp"
#include "stabop/sweep.hpp"
#include "stabop/verify.hpp"

namespace {

using namespace stabop;
using nlohmann::json;

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

product_manifold resolve_manifold(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("no manifold given (use --manifold)");
  try {
    return product_manifold::parse(text);
  } catch (const std::exception&) {
    if (std::filesystem::exists(text)) return product_manifold::load(text);
    throw;
  }
}

// JSON run-config file; any present key becomes the default for the matching
// flag (explicit flags win).
void apply_config_file(const std::string& path, const CLI::App& cmd, run_config& cfg) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  json j;
  in >> j;
  const auto unset = [&](const char* flag) {
    const CLI::Option* opt = cmd.get_option_no_throw(flag);
    return opt == nullptr || opt->count() == 0;
  };
  if (j.contains("manifold") && unset("--manifold"))
    cfg.manifold = j["manifold"].get<std::string>();
  if (j.contains("cutoff") && unset("--cutoff"))
    cfg.cutoff = rational::parse(j["cutoff"].get<std::string>());
  if (j.contains("alpha") && unset("--alpha"))
    cfg.alpha = rational::parse(j["alpha"].get<std::string>());
  if (j.contains("k") && unset("--k"))
    cfg.k_override = rational::parse(j["k"].get<std::string>());
  if (j.contains("epsilon") && unset("--epsilon")) cfg.epsilon = j["epsilon"].get<double>();
  if (j.contains("n_polar") && unset("--n-polar")) cfg.n_polar = j["n_polar"].get<int>();
  if (j.contains("n_azimuth") && unset("--n-azimuth"))
    cfg.n_azimuth = j["n_azimuth"].get<int>();
  if (j.contains("tolerance") && unset("--tolerance"))
    cfg.tolerance = j["tolerance"].get<double>();
  if (j.contains("format") && unset("--format")) cfg.format = j["format"].get<std::string>();
  if (j.contains("out") && unset("--out")) cfg.out = j["out"].get<std::string>();
  if (j.contains("seed") && unset("--seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("threads") && unset("--threads")) cfg.threads = j["threads"].get<int>();
}

void write_output(const run_config& cfg, const std::string& text) {
  if (cfg.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(cfg.out, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + cfg.out);
  out << text;
}

std::string json_report(const run_config& cfg, const char* key, json payload) {
  json j{{"tool", kLibraryName},
         {"version", kLibraryVersion},
         {"config", to_json(cfg)},
         {key, std::move(payload)}};
  return j.dump(2) + "\n";
}

std::string text_header(const run_config& cfg) {
  std::ostringstream os;
  os << "# " << kLibraryName << " " << kLibraryVersion << "\n";
  os << "# config: " << to_json(cfg).dump() << "\n";
  return os.str();
}

struct cmd_state {
  run_config cfg;
  std::string config_path;
  std::string family;
  std::string grid;
  std::string levels;
  bool corrupt = false; // hidden verify self-test hook
  int rc = 0;
};

void add_common_flags(CLI::App* cmd, cmd_state& st) {
  cmd->add_option("--manifold,-m", st.cfg.manifold,
                  "inline descriptor (e.g. S2(1/4)xS3) or descriptor file path");
  cmd->add_option("--config", st.config_path, "JSON run-config file (flags override)");
  cmd->add_option("--cutoff",
                  [&st](const std::vector<std::string>& v) {
                    st.cfg.cutoff = rational::parse(v[0]);
                    return true;
                  },
                  "total-eigenvalue cutoff as p/q (default 10)");
  cmd->add_option("--alpha",
                  [&st](const std::vector<std::string>& v) {
                    st.cfg.alpha = rational::parse(v[0]);
                    return true;
                  },
                  "interpolation parameter in [0,1] as p/q (default 0)");
  cmd->add_option("--k",
                  [&st](const std::vector<std::string>& v) {
                    st.cfg.k_override = rational::parse(v[0]);
                    return true;
                  },
                  "Ricci lower bound override as p/q (default: min Ricci eigenvalue)");
  cmd->add_option("--epsilon", st.cfg.epsilon, "finite-difference step (default 1e-3)");
  cmd->add_option("--n-polar", st.cfg.n_polar,
                  "quadrature nodes per polar angle (default 12)");
  cmd->add_option("--n-azimuth", st.cfg.n_azimuth, "quadrature azimuth nodes (default 24)");
  cmd->add_option("--tolerance", st.cfg.tolerance, "oracle relative tolerance (default 1e-4)");
  cmd->add_option("--format", st.cfg.format, "output format: table | json | csv")
      ->check(CLI::IsMember({"table", "json", "csv"}));
  cmd->add_option("--out", st.cfg.out, "output path (default stdout)");
  cmd->add_option("--seed", st.cfg.seed, "seed for randomized property checks (default 7)");
  cmd->add_option("--threads", st.cfg.threads, "worker threads (default 1)");
}

geometry_data geom_from(cmd_state& st, const CLI::App& cmd) {
  if (!st.config_path.empty()) apply_config_file(st.config_path, cmd, st.cfg);
  return geometry(resolve_manifold(st.cfg.manifold));
}

// ---------------------------------------------------------------------- //

void run_describe(cmd_state& st, const CLI::App& cmd) {
  const auto g = geom_from(st, cmd);
  st.cfg.manifold = g.manifold.str();
  if (st.cfg.format == "json") {
    write_output(st.cfg, json_report(st.cfg, "geometry", to_json(g)));
    return;
  }
  std::ostringstream os;
  os << text_header(st.cfg);
  os << "manifold        " << g.manifold.str() << "\n";
  os << "n               " << g.n << "\n";
  os << "s               " << g.s.str() << " (" << fmt_double(g.s.to_double()) << ")\n";
  os << "ricci_eigs      ";
  for (std::size_t i = 0; i < g.ricci_eigs.size(); ++i)
    os << (i ? " " : "") << g.ricci_eigs[i].str();
  os << "\n";
  os << "ricci_norm_sq   " << g.ricci_norm_sq.str() << " ("
     << fmt_double(g.ricci_norm_sq.to_double()) << ")\n";
  os << "ricci_lower     " << g.ricci_lower.str() << "\n";
  os << "z_norm_sq       " << g.z_norm_sq.str() << "\n";
  os << "einstein        " << (g.einstein ? "yes" : "no") << "\n";
  os << "ricci_flat      " << (g.ricci_flat ? "yes" : "no") << "\n";
  write_output(st.cfg, os.str());
}

void run_spectrum(cmd_state& st, const CLI::App& cmd) {
  const auto g = geom_from(st, cmd);
  st.cfg.manifold = g.manifold.str();
  const auto modes = enumerate_joint(g.manifold, st.cfg.cutoff);
  if (st.cfg.format == "json") {
    json arr = json::array();
    for (const auto& m : modes) arr.push_back(to_json(m));
    write_output(st.cfg, json_report(st.cfg, "spectrum", std::move(arr)));
    return;
  }
  // csv and table share the schema: levels, components, total, multiplicity
  std::ostringstream os;
  os << text_header(st.cfg);
  os << "levels,components,total,multiplicity\n";
  for (const auto& m : modes) {
    std::string levels, comps;
    for (std::size_t i = 0; i < m.levels.size(); ++i) {
      levels += (i ? ";" : "") + std::to_string(m.levels[i]);
      comps += (i ? ";" : "") + m.components[i].str();
    }
    os << levels << "," << comps << "," << m.total.str() << "," << m.multiplicity << "\n";
  }
  write_output(st.cfg, os.str());
}

void emit_variational(cmd_state& st, const char* name, const variational_result& r) {
  if (st.cfg.format == "json") {
    write_output(st.cfg, json_report(st.cfg, name, to_json(r)));
    return;
  }
  std::ostringstream os;
  os << text_header(st.cfg);
  os << name << "          " << r.value.str() << " (" << fmt_double(r.value.to_double())
     << ")\n";
  os << "kernel_dim  " << r.kernel_dim << "\n";
  os << "minimizers  ";
  for (std::size_t i = 0; i < r.minimizers.size(); ++i) {
    const auto& m = r.minimizers[i];
    os << (i ? " | " : "") << "levels(";
    for (std::size_t j = 0; j < m.levels.size(); ++j) os << (j ? "," : "") << m.levels[j];
    os << ") total " << m.total.str() << " mult " << m.multiplicity;
  }
  os << "\n";
  os << "certificate cutoff " << r.certificate.cutoff.str() << ", witness "
     << r.certificate.witness.str() << "\n";
  os << "            " << r.certificate.statement << "\n";
  write_output(st.cfg, os.str());
}

void run_nu(cmd_state& st, const CLI::App& cmd) {
  const auto g = geom_from(st, cmd);
  st.cfg.manifold = g.manifold.str();
  emit_variational(st, "nu", nu(g));
}

void run_mu(cmd_state& st, const CLI::App& cmd) {
  const auto g = geom_from(st, cmd);
  st.cfg.manifold = g.manifold.str();
  emit_variational(st, "mu", mu(g));
}

void run_min_symbol(cmd_state& st, const CLI::App& cmd) {
  const auto g = geom_from(st, cmd);
  st.cfg.manifold = g.manifold.str();
  emit_variational(st, "min_symbol",
                   minimize_symbol(g, operator_kind::interpolated(st.cfg.alpha)));
}

void run_alpha_star(cmd_state& st, const CLI::App& cmd) {
  const auto g = geom_from(st, cmd);
  st.cfg.manifold = g.manifold.str();
  const auto nr = nu(g);
  const rational a = alpha_star(g);
  const auto at_star = minimize_symbol(g, operator_kind::interpolated(a));
  if (st.cfg.format == "json") {
    json payload{{"nu", rational_json(nr.value)},
                 {"ricci_norm_sq", rational_json(g.ricci_norm_sq)},
                 {"alpha_star", rational_json(a)},
                 {"min_symbol_at_alpha_star", rational_json(at_star.value)}};
    write_output(st.cfg, json_report(st.cfg, "alpha_star", std::move(payload)));
    return;
  }
  std::ostringstream os;
  os << text_header(st.cfg);
  os << "nu                       " << nr.value.str() << "\n";
  os << "ricci_norm_sq            " << g.ricci_norm_sq.str() << "\n";
  os << "alpha_star               " << a.str() << " (" << fmt_double(a.to_double()) << ")\n";
  os << "min_symbol_at_alpha_star " << at_star.value.str() << "\n";
  write_output(st.cfg, os.str());
}

void run_kernel(cmd_state& st, const CLI::App& cmd) {
  const auto g = geom_from(st, cmd);
  st.cfg.manifold = g.manifold.str();
  const auto kr = kernel_report(g);
  if (st.cfg.format == "json") {
    write_output(st.cfg, json_report(st.cfg, "kernel", to_json(kr)));
    return;
  }
  std::ostringstream os;
  os << text_header(st.cfg);
  os << "nu               " << kr.nu_result.value.str() << "\n";
  os << "kernel_dim       " << kr.kernel_dim << "\n";
  os << "kernel_lambda    " << kr.kernel_eigenvalue.str() << " (s/(n-1))\n";
  os << "ricci_flat       " << (kr.ricci_flat ? "yes" : "no") << "\n";
  for (const auto& m : kr.kernel_modes) {
    os << "kernel_mode      levels(";
    for (std::size_t j = 0; j < m.levels.size(); ++j) os << (j ? "," : "") << m.levels[j];
    os << ") total " << m.total.str() << " mult " << m.multiplicity << "\n";
  }
  write_output(st.cfg, os.str());
}

void run_bounds(cmd_state& st, const CLI::App& cmd) {
  const auto g = geom_from(st, cmd);
  st.cfg.manifold = g.manifold.str();
  const auto rows = bound_suite(g, st.cfg.k_override);
  if (st.cfg.format == "json") {
    json arr = json::array();
    for (const auto& r : rows) arr.push_back(to_json(r));
    write_output(st.cfg, json_report(st.cfg, "bounds", std::move(arr)));
    return;
  }
  std::ostringstream os;
  os << text_header(st.cfg);
  if (st.cfg.format == "csv") {
    os << "bound,hypothesis_ok,verdict,bound_value,observed,slack,branch,reason\n";
    for (const auto& r : rows)
      os << r.bound_name << "," << (r.hypothesis_ok ? 1 : 0) << "," << to_string(r.verdict)
         << "," << fmt_double(r.bound_value) << "," << fmt_double(r.observed) << ","
         << fmt_double(r.slack) << "," << r.branch << "," << r.hypothesis_reason << "\n";
  } else {
    char line[256];
    std::snprintf(line, sizeof line, "%-28s %-20s %14s %14s  %s\n", "bound", "verdict",
                  "bound_value", "observed", "hypothesis");
    os << line;
    for (const auto& r : rows) {
      std::snprintf(line, sizeof line, "%-28s %-20s %14s %14s  %s\n", r.bound_name.c_str(),
                    to_string(r.verdict), fmt_double(r.bound_value).c_str(),
                    fmt_double(r.observed).c_str(), r.hypothesis_reason.c_str());
      os << line;
    }
  }
  write_output(st.cfg, os.str());
}

std::vector<int> parse_levels(const std::string& text, std::size_t expected) {
  std::vector<int> levels;
  std::istringstream is(text);
  std::string tok;
  while (std::getline(is, tok, ',')) levels.push_back(std::stoi(tok));
  if (levels.size() != expected)
    throw std::invalid_argument("--levels needs one entry per factor");
  return levels;
}

void run_oracle(cmd_state& st, const CLI::App& cmd) {
  const auto g = geom_from(st, cmd);
  st.cfg.manifold = g.manifold.str();
  const auto levels = parse_levels(st.levels, g.manifold.factor_count());

  oracle_options opts;
  opts.epsilon = st.cfg.epsilon;
  opts.n_polar = st.cfg.n_polar;
  opts.n_azimuth = st.cfg.n_azimuth;
  opts.tolerance = st.cfg.tolerance;

  // pointwise agreement of the FD application of A with the exact symbol,
  // over seeded random points away from the nodal set
  const auto phi = make_separated_eigenfunction(g.manifold, levels);
  const double exact = symbol(g, operator_kind::A(), phi.mode).to_double();
  splitmix64 rng(st.cfg.seed);
  double scale = 0.0;
  std::vector<point_coords> pts;
  while (pts.size() < 64) {
    auto q = random_point(g.manifold, rng);
    scale = std::max(scale, std::fabs(phi.eval(q)));
    pts.push_back(std::move(q));
  }
  double sup = 0.0;
  int used = 0;
  for (const auto& q : pts) {
    const double fq = phi.eval(q);
    if (std::fabs(fq) < 0.2 * scale) continue;
    sup = std::max(sup, std::fabs(oracle_apply_A(g, phi, q, opts.epsilon) / fq - exact));
    if (++used == 20) break;
  }
  const double apply_tol = 10.0 * opts.tolerance;
  const bool apply_pass = sup <= apply_tol && used > 0;

  const auto lstar = verify_lstar_identity(g, levels, opts);
  const auto bochner = verify_bochner(g, levels, opts);
  const bool all_pass = apply_pass && lstar.pass && bochner.pass;

  if (st.cfg.format == "json") {
    json payload{{"levels", levels},
                 {"symbol", rational_json(symbol(g, operator_kind::A(), phi.mode))},
                 {"apply_A",
                  {{"max_ratio_error", sup},
                   {"points", used},
                   {"tolerance", apply_tol},
                   {"pass", apply_pass}}},
                 {"lstar_identity", to_json(lstar)},
                 {"bochner", to_json(bochner)},
                 {"pass", all_pass}};
    write_output(st.cfg, json_report(st.cfg, "oracle", std::move(payload)));
  } else {
    std::ostringstream os;
    os << text_header(st.cfg);
    os << "symbol            " << fmt_double(exact) << "\n";
    os << "apply_A           " << (apply_pass ? "pass" : "FAIL") << "  max_ratio_error "
       << fmt_double(sup) << " over " << used << " points (tol " << fmt_double(apply_tol)
       << ")\n";
    os << "lstar_identity    " << (lstar.pass ? "pass" : "FAIL") << "  rel_error "
       << fmt_double(lstar.rel_error) << "\n";
    os << "bochner           " << (bochner.pass ? "pass" : "FAIL") << "  rel_error "
       << fmt_double(bochner.rel_error) << "\n";
    write_output(st.cfg, os.str());
  }
  if (!all_pass) st.rc = 1;
}

void run_sweep_cmd(cmd_state& st, const CLI::App& cmd) {
  if (!st.config_path.empty()) apply_config_file(st.config_path, cmd, st.cfg);
  sweep_spec spec;
  spec.pattern = st.family;
  spec.k_override = st.cfg.k_override;
  {
    std::istringstream is(st.grid);
    std::string a, b, c;
    if (!std::getline(is, a, ':') || !std::getline(is, b, ':') || !std::getline(is, c))
      throw std::invalid_argument("--grid must be start:stop:count");
    spec.start = rational::parse(a);
    spec.stop = rational::parse(b);
    spec.count = std::stoll(c);
    if (spec.count < 0) throw std::invalid_argument("--grid count must be >= 0");
  }
  st.cfg.manifold = st.family;
  const auto points = run_sweep(spec, st.cfg.threads);

  if (st.cfg.format == "json") {
    json arr = json::array();
    for (const auto& pt : points) {
      json bounds = json::array();
      for (const auto& b : pt.bounds) bounds.push_back(to_json(b));
      arr.push_back({{"param", rational_json(pt.param)},
                     {"manifold", pt.manifold},
                     {"nu", rational_json(pt.nu_value)},
                     {"kernel_dim", pt.kernel_dim},
                     {"bounds", std::move(bounds)}});
    }
    write_output(st.cfg, json_report(st.cfg, "sweep", std::move(arr)));
    return;
  }
  std::ostringstream os;
  os << text_header(st.cfg);
  os << "param,manifold,nu_exact,nu,kernel_dim";
  if (!points.empty())
    for (const auto& b : points.front().bounds) os << "," << b.bound_name;
  os << "\n";
  for (const auto& pt : points) {
    os << pt.param.str() << "," << pt.manifold << "," << pt.nu_value.str() << ","
       << fmt_double(pt.nu_value.to_double()) << "," << pt.kernel_dim;
    for (const auto& b : pt.bounds) os << "," << to_string(b.verdict);
    os << "\n";
  }
  write_output(st.cfg, os.str());
}

void run_verify(cmd_state& st, const CLI::App& cmd) {
  if (!st.config_path.empty()) apply_config_file(st.config_path, cmd, st.cfg);
  verify_options opts;
  opts.seed = st.cfg.seed;
  opts.threads = st.cfg.threads;
  opts.corrupt_ricci_sign = st.corrupt;
  const auto rows = verify_suite(opts);
  bool all = true;
  for (const auto& r : rows) all = all && r.pass;

  if (st.cfg.format == "json") {
    json arr = json::array();
    for (const auto& r : rows)
      arr.push_back({{"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
    json payload{{"rows", std::move(arr)}, {"pass", all}};
    write_output(st.cfg, json_report(st.cfg, "verify", std::move(payload)));
  } else {
    std::ostringstream os;
    os << text_header(st.cfg);
    for (const auto& r : rows) {
      char line[512];
      std::snprintf(line, sizeof line, "[%s] %-68s %s\n", r.pass ? "PASS" : "FAIL",
                    r.name.c_str(), r.detail.c_str());
      os << line;
    }
    os << (all ? "all checks passed" : "FAILURES PRESENT") << " (" << rows.size()
       << " rows)\n";
    write_output(st.cfg, os.str());
  }
  if (!all) st.rc = 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spectral invariants of the stability operator on sphere products"};
  app.require_subcommand(1);
  cmd_state st;

  struct sub {
    const char* name;
    const char* help;
    void (*fn)(cmd_state&, const CLI::App&);
  };
  const std::vector<sub> subs = {
      {"describe", "derived geometric constants of a manifold", run_describe},
      {"spectrum", "joint Laplace spectrum up to --cutoff", run_spectrum},
      {"nu", "minimize the symbol of A over the spectrum", run_nu},
      {"mu", "minimize the symbol of P over the spectrum", run_mu},
      {"min-symbol", "minimize the symbol of A_alpha (use --alpha)", run_min_symbol},
      {"alpha-star", "threshold alpha with vanishing minimum symbol", run_alpha_star},
      {"kernel", "kernel structure of A with consistency checks", run_kernel},
      {"bounds", "evaluate every eigenvalue bound with verdicts", run_bounds},
      {"oracle", "finite-difference verification of one joint mode", run_oracle},
      {"sweep", "one-parameter family sweep (--family, --grid)", run_sweep_cmd},
      {"verify", "run the full reproduction suite", run_verify},
  };

  std::vector<std::pair<CLI::App*, const sub*>> wired;
  for (const auto& s : subs) {
    CLI::App* cmd = app.add_subcommand(s.name, s.help);
    add_common_flags(cmd, st);
    if (std::string(s.name) == "oracle")
      cmd->add_option("--levels", st.levels, "per-factor levels, e.g. 1,0")->required();
    if (std::string(s.name) == "sweep") {
      cmd->add_option("--family", st.family, "pattern with '@' for the swept radius_sq")
          ->required();
      cmd->add_option("--grid", st.grid, "start:stop:count with rational endpoints")
          ->required();
    }
    if (std::string(s.name) == "verify")
      cmd->add_flag("--self-test-corrupt", st.corrupt,
                    "negate the Ricci term to prove the suite can fail")
          ->group(""); // hidden
    wired.emplace_back(cmd, &s);
  }

  try {
    app.parse(argc, argv);
    for (const auto& [cmd, s] : wired)
      if (cmd->parsed()) s->fn(st, *cmd);
    return st.rc;
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  } catch (const stabop::consistency_error& e) {
    std::cerr << "internal consistency error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
