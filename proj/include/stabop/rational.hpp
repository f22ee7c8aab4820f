#pragma once

#include <cstdint>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace stabop {

// Exact rational number over 64-bit integers. All intermediate products are
// carried in 128 bits and narrowed back with a range check, so arithmetic
// that would exceed 64 bits throws std::overflow_error instead of wrapping.
// Invariant: den > 0 and gcd(|num|, den) == 1.
class rational {
public:
  using int_type = long long;

  constexpr rational() = default;
  constexpr rational(int_type n) : num_(n), den_(1) {}
  constexpr rational(int n) : num_(n), den_(1) {}

  rational(int_type n, int_type d) {
    if (d == 0) throw std::domain_error("rational: zero denominator");
    i128 nn = n, dd = d;
    if (dd < 0) { nn = -nn; dd = -dd; }
    const i128 g = gcd128(nn < 0 ? -nn : nn, dd);
    if (g > 1) { nn /= g; dd /= g; }
    num_ = narrow(nn);
    den_ = narrow(dd);
  }

  constexpr int_type num() const { return num_; }
  constexpr int_type den() const { return den_; }

  constexpr bool is_zero() const { return num_ == 0; }
  constexpr bool is_integer() const { return den_ == 1; }
  constexpr int sign() const { return num_ > 0 ? 1 : num_ < 0 ? -1 : 0; }

  double to_double() const {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }

  // "p/q", or "p" when q == 1.
  std::string str() const {
    std::string s = std::to_string(num_);
    if (den_ != 1) {
      s += '/';
      s += std::to_string(den_);
    }
    return s;
  }

  // Accepts "p" or "p/q": optional leading sign on p, q unsigned; no spaces.
  static rational parse(std::string_view text) {
    const auto bad = [&] {
      throw std::invalid_argument("rational: cannot parse '" + std::string(text) + "'");
    };
    if (text.empty()) bad();
    std::size_t slash = text.find('/');
    const auto to_int = [&](std::string_view part, bool allow_sign) -> int_type {
      if (part.empty()) bad();
      std::size_t i = 0;
      bool neg = false;
      if (allow_sign && (part[0] == '+' || part[0] == '-')) {
        neg = part[0] == '-';
        i = 1;
        if (i == part.size()) bad();
      }
      i128 v = 0;
      for (; i < part.size(); ++i) {
        if (part[i] < '0' || part[i] > '9') bad();
        v = v * 10 + (part[i] - '0');
        if (v > max64()) bad();
      }
      return static_cast<int_type>(neg ? -v : v);
    };
    if (slash == std::string_view::npos) return rational(to_int(text, true));
    return rational(to_int(text.substr(0, slash), true),
                    to_int(text.substr(slash + 1), false));
  }

  friend rational operator-(const rational& x) { return make(-i128(x.num_), x.den_); }

  friend rational operator+(const rational& a, const rational& b) {
    return make(i128(a.num_) * b.den_ + i128(b.num_) * a.den_, i128(a.den_) * b.den_);
  }
  friend rational operator-(const rational& a, const rational& b) {
    return make(i128(a.num_) * b.den_ - i128(b.num_) * a.den_, i128(a.den_) * b.den_);
  }
  friend rational operator*(const rational& a, const rational& b) {
    return make(i128(a.num_) * b.num_, i128(a.den_) * b.den_);
  }
  friend rational operator/(const rational& a, const rational& b) {
    if (b.num_ == 0) throw std::domain_error("rational: division by zero");
    return make(i128(a.num_) * b.den_, i128(a.den_) * b.num_);
  }

  rational& operator+=(const rational& x) { return *this = *this + x; }
  rational& operator-=(const rational& x) { return *this = *this - x; }
  rational& operator*=(const rational& x) { return *this = *this * x; }
  rational& operator/=(const rational& x) { return *this = *this / x; }

  friend bool operator==(const rational& a, const rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const rational& a, const rational& b) { return !(a == b); }
  friend bool operator<(const rational& a, const rational& b) {
    return i128(a.num_) * b.den_ < i128(b.num_) * a.den_;
  }
  friend bool operator>(const rational& a, const rational& b) { return b < a; }
  friend bool operator<=(const rational& a, const rational& b) { return !(b < a); }
  friend bool operator>=(const rational& a, const rational& b) { return !(a < b); }

  friend std::ostream& operator<<(std::ostream& os, const rational& x) {
    return os << x.str();
  }

private:
  using i128 = __int128;

  static constexpr i128 max64() { return std::numeric_limits<int_type>::max(); }
  static constexpr i128 min64() { return std::numeric_limits<int_type>::min(); }

  static int_type narrow(i128 v) {
    if (v > max64() || v < min64())
      throw std::overflow_error("rational: value exceeds 64-bit range");
    return static_cast<int_type>(v);
  }

  static i128 gcd128(i128 a, i128 b) {
    while (b != 0) {
      i128 t = a % b;
      a = b;
      b = t;
    }
    return a;
  }

  static rational make(i128 n, i128 d) {
    if (d < 0) { n = -n; d = -d; }
    const i128 g = gcd128(n < 0 ? -n : n, d);
    if (g > 1) { n /= g; d /= g; }
    rational r;
    r.num_ = narrow(n);
    r.den_ = narrow(d);
    return r;
  }

  int_type num_ = 0;
  int_type den_ = 1;
};

inline rational abs(const rational& x) { return x.sign() < 0 ? -x : x; }
inline rational min(const rational& a, const rational& b) { return b < a ? b : a; }
inline rational max(const rational& a, const rational& b) { return a < b ? b : a; }

}  // namespace stabop
