#pragma once

// Exact scalars and small dense vectors over Q.

#include <gmpxx.h>

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "mfarb/errors.hpp"

namespace mfarb {

/// GMP rationals are kept in lowest terms with a positive denominator
/// as long as every value passes through canonicalize() after
/// construction from raw parts; arithmetic results are always canonical.
using Rational = mpq_class;
using Vec = std::vector<Rational>;

inline Rational make_rational(long num, long den = 1) {
  if (den == 0) throw StructuralError("zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

/// Parses "p", "p/q", "-1.25" or "3e-2" exactly.
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto trim = [](std::string& v) {
    const auto b = v.find_first_not_of(" \t");
    const auto e = v.find_last_not_of(" \t");
    v = b == std::string::npos ? std::string() : v.substr(b, e - b + 1);
  };
  trim(s);
  if (s.empty()) throw ValidationError("empty rational literal");

  auto bad = [&] { return ValidationError("malformed rational literal '" + s + "'"); };
  auto is_int = [](std::string_view v) {
    std::size_t i = 0;
    if (!v.empty() && (v[0] == '-' || v[0] == '+')) i = 1;
    if (i == v.size()) return false;
    for (; i < v.size(); ++i)
      if (v[i] < '0' || v[i] > '9') return false;
    return true;
  };
  auto to_mpz = [](std::string v) {
    if (!v.empty() && v[0] == '+') v.erase(0, 1);
    return mpz_class(v, 10);
  };

  if (const auto slash = s.find('/'); slash != std::string::npos) {
    const std::string num = s.substr(0, slash);
    const std::string den = s.substr(slash + 1);
    if (!is_int(num) || !is_int(den)) throw bad();
    mpz_class d = to_mpz(den);
    if (d == 0) throw ValidationError("zero denominator in '" + s + "'");
    Rational r(to_mpz(num), d);
    r.canonicalize();
    return r;
  }

  std::string mantissa = s;
  long exponent = 0;
  if (const auto e = s.find_first_of("eE"); e != std::string::npos) {
    mantissa = s.substr(0, e);
    const std::string exp = s.substr(e + 1);
    if (!is_int(exp) || exp.size() > 6) throw bad();
    exponent = std::stol(exp);
  }
  std::string digits = mantissa;
  if (const auto dot = mantissa.find('.'); dot != std::string::npos) {
    std::string frac = mantissa.substr(dot + 1);
    std::string whole = mantissa.substr(0, dot);
    if (whole.empty() || whole == "-" || whole == "+") whole += "0";
    if (!frac.empty() && !is_int(frac)) throw bad();
    if (!frac.empty() && (frac[0] == '-' || frac[0] == '+')) throw bad();
    digits = whole + frac;
    exponent -= static_cast<long>(frac.size());
  }
  if (!is_int(digits)) throw bad();

  Rational r(to_mpz(digits));
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
  if (exponent >= 0)
    r *= scale;
  else
    r /= scale;
  r.canonicalize();
  return r;
}

/// Canonical "p/q" rendering; integers render with q = 1.
inline std::string to_string(const Rational& r) {
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

inline Rational dot(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw StructuralError("dot: dimension mismatch");
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline Vec operator-(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw StructuralError("vector difference: dimension mismatch");
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

inline Vec operator+(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw StructuralError("vector sum: dimension mismatch");
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

inline Vec operator*(const Rational& s, const Vec& a) {
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = s * a[i];
  return out;
}

inline bool is_zero(const Vec& a) {
  for (const auto& x : a)
    if (x != 0) return false;
  return true;
}

inline Vec zero_vec(std::size_t d) { return Vec(d, Rational(0)); }

}  // namespace mfarb
