#pragma once

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>

namespace revival {

// Reduced signed rational. The denominator is always >= 1 and coprime to
// the numerator; zero is canonically 0/1.
class Fraction {
 public:
  constexpr Fraction() = default;
  Fraction(long long num, long long den = 1) : num_(num), den_(den) { reduce(); }

  long long num() const { return num_; }
  long long den() const { return den_; }
  double value() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  bool is_zero() const { return num_ == 0; }
  bool is_integer() const { return den_ == 1; }
  bool is_negative() const { return num_ < 0; }

  Fraction inverse() const { return Fraction(den_, num_); }
  Fraction abs() const { return Fraction(num_ < 0 ? -num_ : num_, den_); }

  // Canonical representative in [0, 1).
  Fraction mod1() const { return Fraction(((num_ % den_) + den_) % den_, den_); }

  friend Fraction operator-(const Fraction& f) { return Fraction(-f.num_, f.den_); }
  friend Fraction operator+(const Fraction& a, const Fraction& b) {
    long long g = std::gcd(a.den_, b.den_);
    long long bd = b.den_ / g;
    return Fraction(a.num_ * bd + b.num_ * (a.den_ / g), a.den_ * bd);
  }
  friend Fraction operator-(const Fraction& a, const Fraction& b) { return a + (-b); }
  friend Fraction operator*(const Fraction& a, const Fraction& b) {
    long long g1 = std::gcd(a.num_ < 0 ? -a.num_ : a.num_, b.den_);
    long long g2 = std::gcd(b.num_ < 0 ? -b.num_ : b.num_, a.den_);
    return Fraction((a.num_ / g1) * (b.num_ / g2), (a.den_ / g2) * (b.den_ / g1));
  }
  friend Fraction operator/(const Fraction& a, const Fraction& b) { return a * b.inverse(); }

  friend bool operator==(const Fraction& a, const Fraction& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Fraction& a, const Fraction& b) { return !(a == b); }
  friend bool operator<(const Fraction& a, const Fraction& b) { return (a - b).num_ < 0; }
  friend bool operator>(const Fraction& a, const Fraction& b) { return b < a; }
  friend bool operator<=(const Fraction& a, const Fraction& b) { return !(b < a); }
  friend bool operator>=(const Fraction& a, const Fraction& b) { return !(a < b); }

  std::string str() const { return std::to_string(num_) + "/" + std::to_string(den_); }

  static std::optional<Fraction> parse(const std::string& text) {
    const char* first = text.data();
    const char* last = text.data() + text.size();
    long long num = 0, den = 1;
    auto r = std::from_chars(first, last, num);
    if (r.ec != std::errc{}) return std::nullopt;
    if (r.ptr != last) {
      if (*r.ptr != '/') return std::nullopt;
      auto r2 = std::from_chars(r.ptr + 1, last, den);
      if (r2.ec != std::errc{} || r2.ptr != last || den == 0) return std::nullopt;
    }
    return Fraction(num, den);
  }

 private:
  void reduce() {
    if (den_ == 0) throw std::domain_error("Fraction: zero denominator");
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    long long g = std::gcd(num_ < 0 ? -num_ : num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
    if (num_ == 0) den_ = 1;
  }

  long long num_ = 0;
  long long den_ = 1;
};

// Best rational approximation of x by continued-fraction convergents.
// Returns the first convergent p/q with q <= max_den and
// |x - p/q| <= tol * max(1, |x|), or nullopt if no convergent at this
// resolution gets that close (x is treated as incommensurate).
inline std::optional<Fraction> rationalize(double x, long long max_den, double tol) {
  if (!std::isfinite(x)) throw std::invalid_argument("rationalize: non-finite input");
  if (max_den < 1) throw std::invalid_argument("rationalize: max_den must be >= 1");
  if (tol < 0) throw std::invalid_argument("rationalize: negative tolerance");

  const double scale = std::max(1.0, std::abs(x));
  long long h_prev = 1, k_prev = 0;
  long long h = static_cast<long long>(std::floor(x));
  long long k = 1;
  double rem = x - std::floor(x);

  for (int iter = 0; iter < 64; ++iter) {
    if (k > max_den) break;
    if (std::abs(x - static_cast<double>(h) / static_cast<double>(k)) <= tol * scale)
      return Fraction(h, k);
    if (rem < 1e-18) break;  // expansion terminated without a match
    double inv = 1.0 / rem;
    double a_real = std::floor(inv);
    if (a_real > 9e17) break;
    long long a = static_cast<long long>(a_real);
    rem = inv - a_real;
    long long h_next = a * h + h_prev;
    long long k_next = a * k + k_prev;
    h_prev = h;
    k_prev = k;
    h = h_next;
    k = k_next;
  }
  return std::nullopt;
}

}  // namespace revival
