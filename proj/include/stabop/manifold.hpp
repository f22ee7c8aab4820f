#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "stabop/rational.hpp"

namespace stabop {

// One round factor S^m of squared radius rho^2. Radii are carried squared and
// rational so every Laplace eigenvalue k(k+m-1)/rho^2 stays an exact rational.
struct sphere_factor {
  int dim = 0;            // m >= 1 (m == 1 is a circle)
  rational radius_sq = 1; // rho^2 > 0
};

// Ordered product of round spheres/circles. Total dimension must be >= 2.
class product_manifold {
public:
  explicit product_manifold(std::vector<sphere_factor> factors)
      : factors_(std::move(factors)) {
    if (factors_.empty())
      throw std::invalid_argument("product_manifold: empty factor list");
    int n = 0;
    for (const auto& f : factors_) {
      if (f.dim < 1)
        throw std::invalid_argument("product_manifold: factor dimension must be >= 1");
      if (!(f.radius_sq > rational(0)))
        throw std::invalid_argument("product_manifold: radius_sq must be positive");
      n += f.dim;
    }
    if (n < 2)
      throw std::invalid_argument("product_manifold: total dimension must be >= 2");
  }

  const std::vector<sphere_factor>& factors() const { return factors_; }
  std::size_t factor_count() const { return factors_.size(); }

  int total_dim() const {
    int n = 0;
    for (const auto& f : factors_) n += f.dim;
    return n;
  }

  // Canonical inline form, e.g. "S2(1)xS3(9/4)".
  std::string str() const {
    std::string s;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      if (i) s += 'x';
      s += 'S';
      s += std::to_string(factors_[i].dim);
      s += '(';
      s += factors_[i].radius_sq.str();
      s += ')';
    }
    return s;
  }

  // Inline grammar:  manifold := factor ('x' factor)*
  //                  factor   := 'S' dim [ '(' rational ')' ]
  //                  rational := int [ '/' posint ]
  // Radius defaults to 1. Example: "S2x S3", "S2(1/4)xS2(1)".
  static product_manifold parse(std::string_view text) {
    std::vector<sphere_factor> fs;
    std::size_t i = 0;
    const auto bad = [&](const std::string& why) {
      throw std::invalid_argument("manifold '" + std::string(text) + "': " + why);
    };
    const auto skip_ws = [&] {
      while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) ++i;
    };
    while (true) {
      skip_ws();
      if (i >= text.size() || (text[i] != 'S' && text[i] != 's')) bad("expected 'S<dim>'");
      ++i;
      if (i >= text.size() || text[i] < '0' || text[i] > '9') bad("expected dimension digit");
      long long dim = 0;
      while (i < text.size() && text[i] >= '0' && text[i] <= '9') {
        dim = dim * 10 + (text[i] - '0');
        if (dim > 1000) bad("dimension too large");
        ++i;
      }
      rational rsq = 1;
      skip_ws();
      if (i < text.size() && text[i] == '(') {
        std::size_t close = text.find(')', i);
        if (close == std::string_view::npos) bad("unterminated '('");
        std::string inner(text.substr(i + 1, close - i - 1));
        std::erase(inner, ' ');
        rsq = rational::parse(inner);
        i = close + 1;
      }
      fs.push_back({static_cast<int>(dim), rsq});
      skip_ws();
      if (i >= text.size()) break;
      if (text[i] != 'x' && text[i] != 'X' && text[i] != '*') bad("expected 'x' between factors");
      ++i;
    }
    return product_manifold(std::move(fs));
  }

  // Descriptor file: one factor per line, "sphere <dim> <radius_sq>",
  // '#' starts a comment, blank lines ignored. Order is significant.
  static product_manifold load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open manifold descriptor: " + path);
    std::vector<sphere_factor> fs;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      std::istringstream ls(line);
      std::string keyword;
      if (!(ls >> keyword)) continue;
      if (keyword != "sphere")
        throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                    ": expected 'sphere', got '" + keyword + "'");
      int dim = 0;
      std::string rsq;
      if (!(ls >> dim >> rsq))
        throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                    ": expected 'sphere <dim> <radius_sq>'");
      std::string extra;
      if (ls >> extra)
        throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                    ": trailing token '" + extra + "'");
      fs.push_back({dim, rational::parse(rsq)});
    }
    return product_manifold(std::move(fs));
  }

private:
  std::vector<sphere_factor> factors_;
};

// Homothety g -> t^2 g, i.e. every rho^2 -> t^2 rho^2.
inline product_manifold scale(const product_manifold& m, const rational& t_sq) {
  if (!(t_sq > rational(0)))
    throw std::invalid_argument("scale: t_sq must be positive");
  std::vector<sphere_factor> fs = m.factors();
  for (auto& f : fs) f.radius_sq *= t_sq;
  return product_manifold(std::move(fs));
}

// Constant curvature data of a product of round spheres. Everything here is
// an exact rational: the metric is homogeneous, r is parallel with eigenvalue
// c_i = (m_i - 1)/rho_i^2 on factor i, and max |r|^2 over M equals |r|^2.
struct geometry_data {
  explicit geometry_data(product_manifold m) : manifold(std::move(m)) {}

  product_manifold manifold;
  int n = 0;                        // total dimension
  rational s;                       // scalar curvature = sum m_i c_i
  std::vector<rational> ricci_eigs; // c_i per factor
  rational ricci_norm_sq;           // |r|^2 = sum m_i c_i^2
  rational ricci_lower;             // k0 = min_i c_i
  rational z_norm_sq;               // |z|^2 = |r|^2 - s^2/n
  bool einstein = false;            // all c_i equal
  bool ricci_flat = false;          // s == 0 (every factor a circle)
};

inline geometry_data geometry(const product_manifold& m) {
  geometry_data g(m);
  g.n = m.total_dim();
  g.s = 0;
  g.ricci_norm_sq = 0;
  bool first = true;
  bool all_equal = true;
  for (const auto& f : m.factors()) {
    const rational c = rational(f.dim - 1) / f.radius_sq;
    g.ricci_eigs.push_back(c);
    g.s += rational(f.dim) * c;
    g.ricci_norm_sq += rational(f.dim) * c * c;
    if (first) {
      g.ricci_lower = c;
      first = false;
    } else {
      if (c != g.ricci_eigs.front()) all_equal = false;
      g.ricci_lower = min(g.ricci_lower, c);
    }
  }
  g.einstein = all_equal;
  g.ricci_flat = g.s.is_zero();
  g.z_norm_sq = g.ricci_norm_sq - g.s * g.s / rational(g.n);
  return g;
}

}  // namespace stabop
