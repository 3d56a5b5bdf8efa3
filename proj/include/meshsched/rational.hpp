#pragma once

#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <stdexcept>
#include <string>

namespace meshsched {

// Exact ratio of 64-bit integers. Throughputs, tolerances and bounds are
// carried as rationals end to end; decimal rendering happens only at output
// boundaries, via integer long division, so results are identical across
// platforms and runs.
struct Rational {
  long long num = 0;
  long long den = 1;  // always > 0, gcd(|num|, den) == 1

  Rational() = default;
  Rational(long long n) : num(n), den(1) {}
  Rational(long long n, long long d) : num(n), den(d) { normalize(); }

  void normalize() {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    if (den < 0) { num = -num; den = -den; }
    long long g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) { num /= g; den /= g; }
    if (num == 0) den = 1;
  }

  double to_double() const { return double(num) / double(den); }
  bool is_zero() const { return num == 0; }

  // Fixed-point decimal string with `digits` fraction digits, rounded half
  // away from zero. Pure integer arithmetic, deterministic everywhere.
  std::string to_decimal(int digits) const;
  std::string to_string() const;  // "num/den"

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num == b.num && a.den == b.den;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b) {
    return (__int128)a.num * b.den < (__int128)b.num * a.den;
  }
  friend bool operator<=(const Rational& a, const Rational& b) {
    return (__int128)a.num * b.den <= (__int128)b.num * a.den;
  }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator>=(const Rational& a, const Rational& b) { return b <= a; }
};

Rational operator+(const Rational& a, const Rational& b);
Rational operator-(const Rational& a, const Rational& b);
Rational operator*(const Rational& a, const Rational& b);
Rational operator/(const Rational& a, const Rational& b);

// Parses a plain decimal string ("0.001", "2", "-1.5") into an exact
// rational. Throws std::invalid_argument on malformed input.
Rational parse_decimal(const std::string& text);

}  // namespace meshsched
