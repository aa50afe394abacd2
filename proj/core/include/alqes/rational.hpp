#pragma once

#include <charconv>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace alqes {

/// Exact rational on 64-bit integers, always normalized (positive
/// denominator, coprime). The solvability bookkeeping never leaves small
/// quarter-integers, so no overflow guards beyond normalization.
class Rational {
 public:
  constexpr Rational() = default;
  constexpr Rational(long long value) : num_(value) {}  // NOLINT: implicit by design
  Rational(long long num, long long den) : num_(num), den_(den) {
    if (den_ == 0) throw std::invalid_argument("Rational: zero denominator");
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    long long g = std::gcd(num_ < 0 ? -num_ : num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
  }

  /// Accepts "p", "-p", or "p/q" with integer p, q. Anything else,
  /// including decimals, yields nullopt.
  static std::optional<Rational> parse(std::string_view text) {
    auto read_int = [](std::string_view s, long long& out) {
      if (s.empty()) return false;
      const char* first = s.data();
      const char* last = s.data() + s.size();
      auto [ptr, ec] = std::from_chars(first, last, out);
      return ec == std::errc{} && ptr == last;
    };
    long long num = 0;
    long long den = 1;
    auto slash = text.find('/');
    if (slash == std::string_view::npos) {
      if (!read_int(text, num)) return std::nullopt;
    } else {
      if (!read_int(text.substr(0, slash), num)) return std::nullopt;
      if (!read_int(text.substr(slash + 1), den)) return std::nullopt;
      if (den == 0) return std::nullopt;
    }
    return Rational(num, den);
  }

  long long num() const { return num_; }
  long long den() const { return den_; }

  bool is_integer() const { return den_ == 1; }
  bool is_half_integer() const { return den_ == 2; }

  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  std::string str() const {
    std::string s = std::to_string(num_);
    if (den_ != 1) {
      s += '/';
      s += std::to_string(den_);
    }
    return s;
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.num_, a.den_ * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw std::invalid_argument("Rational: division by zero");
    return Rational(a.num_ * b.den_, a.den_ * b.num_);
  }
  Rational operator-() const {
    Rational r = *this;
    r.num_ = -r.num_;
    return r;
  }

  friend bool operator==(const Rational& a, const Rational& b) = default;
  friend bool operator<(const Rational& a, const Rational& b) {
    return a.num_ * b.den_ < b.num_ * a.den_;
  }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
  friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

 private:
  long long num_ = 0;
  long long den_ = 1;
};

}  // namespace alqes
