#pragma once

#include <initializer_list>
#include <vector>

#include "normcurve/curve.hpp"

namespace testutil {

template <class K>
normcurve::BinForm<K> form_of(std::initializer_list<long long> coeffs) {
  std::vector<K> c;
  for (long long v : coeffs) c.push_back(K(v));
  const int degree = static_cast<int>(c.size()) - 1;  // before the move below
  return normcurve::BinForm<K>(degree, std::move(c));
}

template <class K>
normcurve::ParamCurve<K> curve_of(int n, int d,
                                  std::initializer_list<std::initializer_list<long long>> rows) {
  std::vector<normcurve::BinForm<K>> forms;
  for (const auto& row : rows) forms.push_back(form_of<K>(row));
  return normcurve::ParamCurve<K>(n, d, std::move(forms));
}

// Rational normal curve of degree d in P^d: all monomials.
template <class K>
normcurve::ParamCurve<K> rational_normal(int d) {
  std::vector<normcurve::BinForm<K>> forms;
  for (int m = 0; m <= d; ++m) forms.push_back(normcurve::BinForm<K>::monomial(d, m));
  return normcurve::ParamCurve<K>(d, d, std::move(forms));
}

// Immersed nondegenerate plane cubic with a node, used as a fixed base.
template <class K>
normcurve::ParamCurve<K> nodal_cubic() {
  return curve_of<K>(2, 3, {{1, 0, -1, 0}, {0, 1, 0, -1}, {0, 0, 1, 0}});
}

}  // namespace testutil
