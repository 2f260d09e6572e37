#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "normcurve/field.hpp"
#include "normcurve/matrix.hpp"

namespace normcurve {

template <Scalar K>
struct Mat2 {
  // e[i][j], row i, column j
  K e[2][2]{};

  static Mat2 identity() {
    Mat2 m;
    m.e[0][0] = K(1);
    m.e[1][1] = K(1);
    return m;
  }
  K det() const { return e[0][0] * e[1][1] - e[0][1] * e[1][0]; }

  friend Mat2 operator*(const Mat2& a, const Mat2& b) {
    Mat2 m;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) m.e[i][j] = a.e[i][0] * b.e[0][j] + a.e[i][1] * b.e[1][j];
    return m;
  }
};

// Homogeneous polynomial in U0, U1. coeffs()[j] multiplies U0^(d-j) * U1^j;
// this ordering is fixed project-wide and every matrix layout inherits it.
// The zero form of any degree is representable (all coefficients zero).
template <Scalar K>
class BinForm {
 public:
  explicit BinForm(int degree) : c_(check_degree(degree) + 1) {}
  BinForm(int degree, std::vector<K> coeffs) : c_(std::move(coeffs)) {
    if (static_cast<int>(c_.size()) != check_degree(degree) + 1)
      throw std::invalid_argument("BinForm: coefficient count != degree + 1");
  }

  static BinForm monomial(int degree, int u1_exponent, K coeff = K(1)) {
    BinForm f(degree);
    if (u1_exponent < 0 || u1_exponent > degree)
      throw std::invalid_argument("BinForm::monomial: exponent out of range");
    f.c_[u1_exponent] = std::move(coeff);
    return f;
  }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const std::vector<K>& coeffs() const { return c_; }
  const K& coeff(int j) const { return c_.at(j); }

  bool is_zero() const {
    for (const K& x : c_)
      if (!normcurve::is_zero(x)) return false;
    return true;
  }

  friend BinForm operator+(const BinForm& a, const BinForm& b) {
    check_same_degree(a, b, "+");
    BinForm r(a.degree());
    for (std::size_t j = 0; j < a.c_.size(); ++j) r.c_[j] = a.c_[j] + b.c_[j];
    return r;
  }
  friend BinForm operator-(const BinForm& a, const BinForm& b) {
    check_same_degree(a, b, "-");
    BinForm r(a.degree());
    for (std::size_t j = 0; j < a.c_.size(); ++j) r.c_[j] = a.c_[j] - b.c_[j];
    return r;
  }
  BinForm operator-() const {
    BinForm r(degree());
    for (std::size_t j = 0; j < c_.size(); ++j) r.c_[j] = -c_[j];
    return r;
  }
  friend BinForm operator*(const K& s, const BinForm& f) {
    BinForm r(f.degree());
    for (std::size_t j = 0; j < f.c_.size(); ++j) r.c_[j] = s * f.c_[j];
    return r;
  }
  // Coefficientwise convolution; degrees add.
  friend BinForm operator*(const BinForm& a, const BinForm& b) {
    BinForm r(a.degree() + b.degree());
    for (int i = 0; i <= a.degree(); ++i) {
      if (normcurve::is_zero(a.c_[i])) continue;
      for (int j = 0; j <= b.degree(); ++j) r.c_[i + j] += a.c_[i] * b.c_[j];
    }
    return r;
  }

  friend bool operator==(const BinForm& a, const BinForm& b) {
    return a.c_ == b.c_;
  }

  K eval(const K& x0, const K& x1) const {
    const int d = degree();
    std::vector<K> p0(d + 1, K(1)), p1(d + 1, K(1));
    for (int i = 1; i <= d; ++i) {
      p0[i] = p0[i - 1] * x0;
      p1[i] = p1[i - 1] * x1;
    }
    K acc{};
    for (int j = 0; j <= d; ++j) acc += c_[j] * p0[d - j] * p1[j];
    return acc;
  }

 private:
  static int check_degree(int d) {
    if (d < 0) throw std::invalid_argument("BinForm: negative degree");
    return d;
  }
  static void check_same_degree(const BinForm& a, const BinForm& b, const char* op) {
    if (a.degree() != b.degree())
      throw std::invalid_argument(std::string("BinForm: degree mismatch in ") + op);
  }

  std::vector<K> c_;
};

// d/dU^axis; degree drops by one. Satisfies the Euler relation
// U0*df/dU0 + U1*df/dU1 = d*f for char 0 or p > d.
template <Scalar K>
BinForm<K> bf_partial(const BinForm<K>& f, int axis) {
  const int d = f.degree();
  if (d < 1) throw std::invalid_argument("bf_partial: degree-0 form");
  BinForm<K> r(d - 1);
  std::vector<K> c(d);
  if (axis == 0) {
    for (int j = 0; j < d; ++j) c[j] = K(d - j) * f.coeff(j);
  } else if (axis == 1) {
    for (int j = 0; j < d; ++j) c[j] = K(j + 1) * f.coeff(j + 1);
  } else {
    throw std::invalid_argument("bf_partial: axis must be 0 or 1");
  }
  return BinForm<K>(d - 1, std::move(c));
}

// f composed with the substitution (U0, U1) -> g * (U0, U1)^T.
template <Scalar K>
BinForm<K> bf_coord_change(const BinForm<K>& f, const Mat2<K>& g) {
  if (normcurve::is_zero(g.det()))
    throw std::invalid_argument("bf_coord_change: singular matrix");
  const int d = f.degree();
  const BinForm<K> a(1, {g.e[0][0], g.e[0][1]});
  const BinForm<K> b(1, {g.e[1][0], g.e[1][1]});
  std::vector<BinForm<K>> apow, bpow;
  apow.emplace_back(0, std::vector<K>{K(1)});
  bpow.emplace_back(0, std::vector<K>{K(1)});
  for (int i = 1; i <= d; ++i) {
    apow.push_back(apow.back() * a);
    bpow.push_back(bpow.back() * b);
  }
  BinForm<K> r(d);
  for (int j = 0; j <= d; ++j) {
    if (normcurve::is_zero(f.coeff(j))) continue;
    r = r + f.coeff(j) * (apow[d - j] * bpow[j]);
  }
  return r;
}

template <Scalar K>
BinForm<K> bf_random(int degree, SplitMix64& rng, const FieldSpec& fs) {
  std::vector<K> c(degree + 1);
  for (K& x : c) x = FieldTraits<K>::random(rng, fs);
  return BinForm<K>(degree, std::move(c));
}

namespace detail {

// Univariate view after setting U0 = 1; z stands for U1. The power of U0
// dividing the form (trailing coefficients of the z-polynomial are kept,
// the U0 content is what dehomogenization loses) is returned separately.
template <Scalar K>
struct Dehom {
  std::vector<K> p;  // z-coefficients, trimmed, leading nonzero
  int u0_mult;       // d - deg(p)
};

template <Scalar K>
Dehom<K> dehomogenize(const BinForm<K>& f) {
  int e = f.degree();
  while (e > 0 && is_zero(f.coeff(e))) --e;
  std::vector<K> p(f.coeffs().begin(), f.coeffs().begin() + e + 1);
  return {std::move(p), f.degree() - e};
}

template <Scalar K>
std::vector<K> poly_monic(std::vector<K> p) {
  const K lead = p.back();
  for (K& x : p) x = x / lead;
  return p;
}

template <Scalar K>
std::vector<K> poly_rem(std::vector<K> a, const std::vector<K>& b) {
  while (a.size() >= b.size()) {
    const K q = a.back() / b.back();
    const std::size_t off = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) a[off + i] -= q * b[i];
    while (a.size() > 1 && is_zero(a.back())) a.pop_back();
    if (a.size() == 1 && is_zero(a[0])) break;
  }
  return a;
}

template <Scalar K>
std::vector<K> poly_gcd(std::vector<K> a, std::vector<K> b) {
  while (!(b.size() == 1 && is_zero(b[0]))) {
    auto r = poly_rem(std::move(a), b);
    a = std::move(b);
    b = std::move(r);
    if (!(b.size() == 1 && is_zero(b[0]))) b = poly_monic(std::move(b));
  }
  return poly_monic(std::move(a));
}

}  // namespace detail

// Greatest common divisor of a family of forms, normalized so the first
// nonzero coefficient is 1. Degree 0 means the family is coprime.
template <Scalar K>
BinForm<K> bf_gcd(const std::vector<BinForm<K>>& fs) {
  std::vector<K> g;
  int u0_mult = 0;
  bool seen = false;
  for (const auto& f : fs) {
    if (f.is_zero()) continue;
    auto dh = detail::dehomogenize(f);
    if (!seen) {
      g = detail::poly_monic(std::move(dh.p));
      u0_mult = dh.u0_mult;
      seen = true;
    } else {
      g = detail::poly_gcd(std::move(g), dh.p);
      u0_mult = std::min(u0_mult, dh.u0_mult);
    }
  }
  if (!seen) throw std::invalid_argument("bf_gcd: all forms are zero");
  const int e = static_cast<int>(g.size()) - 1;
  std::vector<K> c(e + u0_mult + 1);
  for (int j = 0; j <= e; ++j) c[j] = g[j];
  BinForm<K> out(e + u0_mult, std::move(c));
  // normalize first nonzero coefficient to 1
  for (int j = 0; j <= out.degree(); ++j) {
    if (!is_zero(out.coeff(j))) {
      return (K(1) / out.coeff(j)) * out;
    }
  }
  return out;
}

// Matrix of multiplication by f from forms of degree k to forms of degree
// k + deg f, in the coefficient basis: entry (m, j) = coeff_{m-j}(f).
template <Scalar K>
ExactMatrix<K> toeplitz_block(const BinForm<K>& f, int k) {
  if (k < 0) throw std::invalid_argument("toeplitz_block: negative source degree");
  const int d = f.degree();
  ExactMatrix<K> m(k + d + 1, k + 1);
  for (int j = 0; j <= k; ++j)
    for (int i = 0; i <= d; ++i) m.at(j + i, j) = f.coeff(i);
  return m;
}

template <Scalar K>
std::string bf_to_string(const BinForm<K>& f) {
  const int d = f.degree();
  std::string out;
  for (int j = 0; j <= d; ++j) {
    if (is_zero(f.coeff(j))) continue;
    std::string cs = FieldTraits<K>::to_string(f.coeff(j));
    bool neg = !cs.empty() && cs[0] == '-';
    if (neg) cs = cs.substr(1);
    std::string mono;
    if (d - j > 0) mono += "U0" + (d - j > 1 ? "^" + std::to_string(d - j) : "");
    if (j > 0) mono += std::string(mono.empty() ? "" : "*") + "U1" +
                       (j > 1 ? "^" + std::to_string(j) : "");
    std::string term;
    if (mono.empty()) {
      term = cs;
    } else if (cs == "1") {
      term = mono;
    } else {
      term = cs + "*" + mono;
    }
    if (out.empty()) {
      out = (neg ? "-" : "") + term;
    } else {
      out += (neg ? " - " : " + ") + term;
    }
  }
  return out.empty() ? "0" : out;
}

}  // namespace normcurve
