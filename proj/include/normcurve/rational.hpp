#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>

namespace normcurve {

// Exact arbitrary-precision rational scalar. Expression templates are
// disabled so that arithmetic yields plain values, which generic code
// (matrices, forms) relies on.
using Rat = boost::multiprecision::number<boost::multiprecision::cpp_rational_backend,
                                          boost::multiprecision::et_off>;
using BigInt =
    boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>,
                                  boost::multiprecision::et_off>;

inline bool is_zero(const Rat& x) { return x.is_zero(); }

namespace detail {
// backend-independent: cpp_int accepts "" as 0, which we must not
inline void check_integer_literal(const std::string& s, const std::string& whole) {
  std::size_t i = (!s.empty() && (s[0] == '+' || s[0] == '-')) ? 1 : 0;
  if (i == s.size()) throw std::invalid_argument("bad rational literal: " + whole);
  for (; i < s.size(); ++i)
    if (s[i] < '0' || s[i] > '9')
      throw std::invalid_argument("bad rational literal: " + whole);
}
}  // namespace detail

// Accepts "n" or "n/d" with optional sign; d must be nonzero.
inline Rat parse_rational(const std::string& s) {
  const auto slash = s.find('/');
  try {
    if (slash == std::string::npos) {
      detail::check_integer_literal(s, s);
      return Rat(BigInt(s));
    }
    const std::string ns = s.substr(0, slash), ds = s.substr(slash + 1);
    detail::check_integer_literal(ns, s);
    detail::check_integer_literal(ds, s);
    BigInt num(ns);
    BigInt den(ds);
    if (den == 0) throw std::invalid_argument("zero denominator: " + s);
    return Rat(num) / Rat(den);
  } catch (const std::runtime_error& e) {
    throw std::invalid_argument("bad rational literal: " + s);
  }
}

inline std::string format_rational(const Rat& x) {
  if (denominator(x) == 1) return numerator(x).str();
  return numerator(x).str() + "/" + denominator(x).str();
}

}  // namespace normcurve
