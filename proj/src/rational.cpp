#include "meshsched/rational.hpp"

#include <cctype>

namespace meshsched {

namespace {

long long checked(__int128 v, const char* what) {
  if (v > INT64_MAX || v < INT64_MIN) throw std::overflow_error(what);
  return (long long)v;
}

}  // namespace

Rational operator+(const Rational& a, const Rational& b) {
  long long g = std::gcd(a.den, b.den);
  __int128 n = (__int128)a.num * (b.den / g) + (__int128)b.num * (a.den / g);
  __int128 d = (__int128)(a.den / g) * b.den;
  Rational r;
  // Reduce in 128 bits before narrowing.
  __int128 an = n < 0 ? -n : n;
  __int128 x = an, y = d;
  while (y != 0) { __int128 t = x % y; x = y; y = t; }
  if (x > 1) { n /= x; d /= x; }
  r.num = checked(n, "rational add overflow");
  r.den = checked(d, "rational add overflow");
  return r;
}

Rational operator-(const Rational& a, const Rational& b) {
  Rational nb = b;
  nb.num = -nb.num;
  return a + nb;
}

Rational operator*(const Rational& a, const Rational& b) {
  long long g1 = std::gcd(a.num < 0 ? -a.num : a.num, b.den);
  long long g2 = std::gcd(b.num < 0 ? -b.num : b.num, a.den);
  __int128 n = (__int128)(a.num / g1) * (b.num / g2);
  __int128 d = (__int128)(a.den / g2) * (b.den / g1);
  Rational r;
  r.num = checked(n, "rational mul overflow");
  r.den = checked(d, "rational mul overflow");
  return r;
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.num == 0) throw std::invalid_argument("rational division by zero");
  Rational inv;
  inv.num = b.den;
  inv.den = b.num;
  if (inv.den < 0) { inv.num = -inv.num; inv.den = -inv.den; }
  return a * inv;
}

std::string Rational::to_decimal(int digits) const {
  if (digits < 0 || digits > 18) throw std::invalid_argument("decimal digits out of range");
  __int128 scale = 1;
  for (int i = 0; i < digits; ++i) scale *= 10;
  __int128 an = num < 0 ? -(__int128)num : (__int128)num;
  __int128 scaled = an * scale;
  __int128 q = scaled / den;
  __int128 rem = scaled % den;
  if (2 * rem >= den) ++q;
  __int128 ip = q / scale;
  __int128 fp = q % scale;
  std::string intpart;
  if (ip == 0) {
    intpart = "0";
  } else {
    while (ip > 0) { intpart.insert(intpart.begin(), char('0' + int(ip % 10))); ip /= 10; }
  }
  std::string out = (num < 0 && q != 0) ? "-" : "";
  out += intpart;
  if (digits > 0) {
    std::string frac(digits, '0');
    for (int i = digits - 1; i >= 0; --i) { frac[i] = char('0' + int(fp % 10)); fp /= 10; }
    out += "." + frac;
  }
  return out;
}

std::string Rational::to_string() const {
  return std::to_string(num) + "/" + std::to_string(den);
}

Rational parse_decimal(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty decimal");
  size_t i = 0;
  bool neg = false;
  if (text[i] == '+' || text[i] == '-') { neg = text[i] == '-'; ++i; }
  long long num = 0, den = 1;
  bool any = false, frac = false;
  for (; i < text.size(); ++i) {
    char c = text[i];
    if (c == '.') {
      if (frac) throw std::invalid_argument("malformed decimal: " + text);
      frac = true;
      continue;
    }
    if (!std::isdigit((unsigned char)c)) throw std::invalid_argument("malformed decimal: " + text);
    if (num > (INT64_MAX - 9) / 10) throw std::overflow_error("decimal too large: " + text);
    num = num * 10 + (c - '0');
    if (frac) {
      if (den > INT64_MAX / 10) throw std::overflow_error("decimal too precise: " + text);
      den *= 10;
    }
    any = true;
  }
  if (!any) throw std::invalid_argument("malformed decimal: " + text);
  return Rational(neg ? -num : num, den);
}

}  // namespace meshsched
