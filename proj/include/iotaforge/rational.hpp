#pragma once

#include <compare>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace iota {

// Exact rational with int64 numerator/denominator kept in lowest terms, den > 0.
class Rational {
 public:
  constexpr Rational() = default;
  constexpr Rational(int64_t n) : num_(n), den_(1) {}  // NOLINT(implicit)
  Rational(int64_t n, int64_t d) : num_(n), den_(d) { normalize(); }

  int64_t num() const { return num_; }
  int64_t den() const { return den_; }
  bool is_integer() const { return den_ == 1; }

  // Returns k when this value is an even integer 2k, else nullopt.
  std::optional<int64_t> half_even() const {
    if (den_ != 1 || (num_ % 2) != 0) return std::nullopt;
    return num_ / 2;
  }

  Rational operator-() const { return Rational(-num_, den_, raw_tag{}); }
  friend Rational operator+(const Rational& a, const Rational& b) {
    return from_wide(static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_,
                     static_cast<__int128>(a.den_) * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return from_wide(static_cast<__int128>(a.num_) * b.num_, static_cast<__int128>(a.den_) * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw std::domain_error("rational division by zero");
    return from_wide(static_cast<__int128>(a.num_) * b.den_, static_cast<__int128>(a.den_) * b.num_);
  }
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }

  friend bool operator==(const Rational& a, const Rational& b) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    __int128 l = static_cast<__int128>(a.num_) * b.den_;
    __int128 r = static_cast<__int128>(b.num_) * a.den_;
    if (l < r) return std::strong_ordering::less;
    if (l > r) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  std::string str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  // Accepts "p", "-p", "p/q". Throws std::invalid_argument on malformed text.
  static Rational parse(std::string_view s) {
    auto to_i64 = [](std::string_view t) -> int64_t {
      if (t.empty()) throw std::invalid_argument("empty rational component");
      size_t i = 0;
      bool neg = false;
      if (t[0] == '-' || t[0] == '+') {
        neg = t[0] == '-';
        i = 1;
      }
      if (i == t.size()) throw std::invalid_argument("bad rational");
      int64_t v = 0;
      for (; i < t.size(); ++i) {
        if (t[i] < '0' || t[i] > '9') throw std::invalid_argument("bad rational: " + std::string(t));
        v = v * 10 + (t[i] - '0');
        if (v > (int64_t{1} << 50)) throw std::invalid_argument("rational component too large");
      }
      return neg ? -v : v;
    };
    auto slash = s.find('/');
    if (slash == std::string_view::npos) return Rational(to_i64(s));
    int64_t d = to_i64(s.substr(slash + 1));
    if (d == 0) throw std::invalid_argument("zero denominator");
    return Rational(to_i64(s.substr(0, slash)), d);
  }

 private:
  struct raw_tag {};
  Rational(int64_t n, int64_t d, raw_tag) : num_(n), den_(d) {}

  static Rational from_wide(__int128 n, __int128 d) {
    if (d == 0) throw std::domain_error("zero denominator");
    if (d < 0) {
      n = -n;
      d = -d;
    }
    __int128 a = n < 0 ? -n : n, b = d;
    while (b != 0) {
      __int128 t = a % b;
      a = b;
      b = t;
    }
    if (a > 1) {
      n /= a;
      d /= a;
    }
    constexpr __int128 lim = static_cast<__int128>(INT64_MAX);
    if (n > lim || -n > lim || d > lim) throw std::overflow_error("rational overflow");
    return Rational(static_cast<int64_t>(n), static_cast<int64_t>(d), raw_tag{});
  }

  void normalize() {
    if (den_ == 0) throw std::domain_error("zero denominator");
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    int64_t g = std::gcd(num_ < 0 ? -num_ : num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
  }

  int64_t num_ = 0;
  int64_t den_ = 1;
};

using Grading = Rational;

}  // namespace iota
