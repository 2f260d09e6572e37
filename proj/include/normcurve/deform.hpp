#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "normcurve/splitting.hpp"

namespace normcurve {

// First-order deformation data over a plane curve: the lifted curve in
// P^(2+r) is (s0, s1, s2, eps*t1, ..., eps*tr).
template <Scalar K>
struct DeformationSpec {
  ParamCurve<K> g;
  std::vector<BinForm<K>> ts;
  K epsilon;
};

template <Scalar K>
void check_deformation_spec(const DeformationSpec<K>& spec, bool require_nonzero_eps = true) {
  if (spec.g.n() != 2)
    throw std::invalid_argument("deformation base must be a plane curve (n = 2)");
  if (spec.ts.empty())
    throw std::invalid_argument("deformation needs at least one direction form");
  for (const auto& t : spec.ts)
    if (t.degree() != spec.g.d())
      throw std::invalid_argument("direction form degree != curve degree");
  if (require_nonzero_eps && is_zero(spec.epsilon))
    throw std::invalid_argument("epsilon must be nonzero");
  const auto v = validate(spec.g);
  if (!v.immersive || !v.nondegenerate)
    throw std::invalid_argument("base curve must be immersed and nondegenerate" +
                                (v.witness ? " (" + *v.witness + ")" : std::string()));
}

// eps = 0 is allowed here and yields the degenerate embedding of g; the
// predictor paths require eps != 0 via check_deformation_spec.
template <Scalar K>
ParamCurve<K> lift(const DeformationSpec<K>& spec) {
  check_deformation_spec(spec, false);
  std::vector<BinForm<K>> forms = spec.g.forms();
  for (const auto& t : spec.ts) forms.push_back(spec.epsilon * t);
  return ParamCurve<K>(2 + static_cast<int>(spec.ts.size()), spec.g.d(), std::move(forms));
}

// Obstruction class of a direction form t: the pair of partials of t seen
// modulo the three Jacobian columns of g. Zero exactly when t is a linear
// combination of the base forms.
template <Scalar K>
struct XiClass {
  std::pair<BinForm<K>, BinForm<K>> rep;
  std::vector<std::pair<BinForm<K>, BinForm<K>>> span_basis;
};

namespace detail {

// Columns of stacked coefficient vectors (coeffs q0, then coeffs q1),
// one column per pair; all pairs must share one degree.
template <Scalar K>
ExactMatrix<K> stacked_pair_columns(const std::vector<std::pair<BinForm<K>, BinForm<K>>>& ps) {
  const int e = ps.at(0).first.degree();
  ExactMatrix<K> m(2 * (e + 1), ps.size());
  for (std::size_t c = 0; c < ps.size(); ++c) {
    if (ps[c].first.degree() != e || ps[c].second.degree() != e)
      throw std::invalid_argument("stacked_pair_columns: mixed degrees");
    for (int i = 0; i <= e; ++i) {
      m.at(i, c) = ps[c].first.coeff(i);
      m.at(e + 1 + i, c) = ps[c].second.coeff(i);
    }
  }
  return m;
}

template <Scalar K>
std::vector<std::pair<BinForm<K>, BinForm<K>>> jacobian_pairs(const ParamCurve<K>& g) {
  std::vector<std::pair<BinForm<K>, BinForm<K>>> ps;
  for (int j = 0; j <= g.n(); ++j)
    ps.emplace_back(bf_partial(g.form(j), 0), bf_partial(g.form(j), 1));
  return ps;
}

}  // namespace detail

template <Scalar K>
XiClass<K> xi_class(const ParamCurve<K>& g, const BinForm<K>& t) {
  if (t.degree() != g.d())
    throw std::invalid_argument("xi_class: direction form degree != curve degree");
  return XiClass<K>{{bf_partial(t, 0), bf_partial(t, 1)}, detail::jacobian_pairs(g)};
}

template <Scalar K>
bool xi_is_zero(const XiClass<K>& xi) {
  const auto span = detail::stacked_pair_columns(xi.span_basis);
  const auto v = detail::stacked_pair_columns<K>({xi.rep});
  const auto rr = rank_rel(span, v);
  return rr.second == rr.first;
}

template <Scalar K>
bool xi_is_zero(const ParamCurve<K>& g, const BinForm<K>& t) {
  return xi_is_zero(xi_class(g, t));
}

// Kernel dimension of cup product with the deformation class at twist a:
// tuples (p_1..p_r) of degree a-d forms with sum_k (dt^k) p_k in the image
// of the base relations J_a. This is the obstructed part of the predictor.
template <Scalar K>
std::size_t cup_kernel_dim(const ParamCurve<K>& g, const std::vector<BinForm<K>>& ts, int a) {
  const int d = g.d();
  const int k = a - d;
  const auto J = stacked_multiplication_matrix(g.jacobian(), k);
  std::vector<std::vector<BinForm<K>>> bands(2);
  for (const auto& t : ts) {
    bands[0].push_back(bf_partial(t, 0));
    bands[1].push_back(bf_partial(t, 1));
  }
  const auto Q = stacked_multiplication_matrix(bands, k);
  const auto rr = rank_rel(J, Q);
  return ts.size() * (k + 1) - (rr.second - rr.first);
}

// Diagnostic only: for r >= 2 the combined kernel above is authoritative;
// the sum of single-direction kernels can in principle differ.
template <Scalar K>
std::size_t per_component_kernel_sum(const ParamCurve<K>& g, const std::vector<BinForm<K>>& ts,
                                     int a) {
  std::size_t s = 0;
  for (const auto& t : ts) s += cup_kernel_dim(g, {t}, a);
  return s;
}

// Predicted h^0 of the conormal bundle of the lifted curve at twist a:
// the unobstructed sections of O(2-3d)(a) plus the cup-product kernel.
template <Scalar K>
std::size_t predicted_h0(const ParamCurve<K>& g, const std::vector<BinForm<K>>& ts, int a) {
  const int d = g.d();
  if (a < d - 1 || a > 4 * d - 1)
    throw std::invalid_argument("predicted_h0: twist " + std::to_string(a) +
                                " outside [d-1, 4d-1]");
  const std::size_t base = static_cast<std::size_t>(std::max(0, a + 3 - 3 * d));
  return base + cup_kernel_dim(g, ts, a);
}

template <Scalar K>
H0Profile predicted_profile(const ParamCurve<K>& g, const std::vector<BinForm<K>>& ts) {
  H0Profile p;
  for (int a = g.d() - 1; a <= 4 * g.d() - 1; ++a)
    p.entries[a] = static_cast<int>(predicted_h0(g, ts, a));
  return p;
}

template <Scalar K>
SplittingType predicted_splitting(const ParamCurve<K>& g, const std::vector<BinForm<K>>& ts) {
  return profile_to_type(predicted_profile(g, ts), 2 + static_cast<int>(ts.size()), g.d());
}

// Rank of t -> xi_class(g, t) on the (d+1)-dimensional space of degree-d
// forms. The kernel is span{s0, s1, s2}, so the value is d - 2.
template <Scalar K>
std::size_t phi_rank(const ParamCurve<K>& g) {
  const auto v = validate(g);
  if (!v.immersive || !v.nondegenerate)
    throw std::invalid_argument("phi_rank: base curve must be immersed and nondegenerate");
  const int d = g.d();
  const auto span = detail::stacked_pair_columns(detail::jacobian_pairs(g));
  std::vector<std::pair<BinForm<K>, BinForm<K>>> monos;
  for (int m = 0; m <= d; ++m) {
    const auto t = BinForm<K>::monomial(d, m);
    monos.emplace_back(bf_partial(t, 0), bf_partial(t, 1));
  }
  const auto S = detail::stacked_pair_columns(monos);
  const auto rr = rank_rel(span, S);
  return rr.second - rr.first;
}

struct ComparisonOutcome {
  std::optional<SplittingType> predicted;
  std::string predicted_error;  // profile decode failure, kept as data
  std::optional<SplittingType> direct;
  std::string direct_error;
  H0Profile predicted_profile;
  H0Profile direct_profile;
  bool equal = false;
  // Every direction form has zero class: the lift splits off the base
  // geometry and the predictor-vs-direct race is not informative.
  bool degenerate_lift = false;
  std::vector<std::string> retry_direct;  // direct types at fresh epsilons
  bool semicontinuity_checked = false;
  bool semicontinuity_ok = true;
};

// Predictor versus direct computation on the lifted curve. When they
// disagree on a non-degenerate lift and an rng is supplied, the direct
// type is recomputed at 3 fresh nonzero epsilons; at least 2 of 3 must
// reproduce the original direct type.
template <Scalar K>
ComparisonOutcome compare(const DeformationSpec<K>& spec, SplitMix64* rng = nullptr,
                          const FieldSpec* fs = nullptr) {
  check_deformation_spec(spec, true);
  const int d = spec.g.d();
  const int n_lift = 2 + static_cast<int>(spec.ts.size());

  ComparisonOutcome out;
  out.predicted_profile = predicted_profile(spec.g, spec.ts);
  try {
    out.predicted = profile_to_type(out.predicted_profile, n_lift, d);
  } catch (const std::exception& e) {
    out.predicted_error = e.what();
  }

  const auto lifted = lift(spec);
  out.direct_profile = h0_profile(lifted);
  try {
    out.direct = profile_to_type(out.direct_profile, n_lift, d);
  } catch (const std::exception& e) {
    out.direct_error = e.what();
  }

  out.equal = out.predicted && out.direct && *out.predicted == *out.direct;

  out.degenerate_lift = true;
  for (const auto& t : spec.ts)
    if (!xi_is_zero(spec.g, t)) {
      out.degenerate_lift = false;
      break;
    }

  if (!out.equal && !out.degenerate_lift && rng && fs && out.direct) {
    out.semicontinuity_checked = true;
    int agree = 0;
    for (int i = 0; i < 3; ++i) {
      DeformationSpec<K> fresh{spec.g, spec.ts, FieldTraits<K>::random_nonzero(*rng, *fs)};
      try {
        const auto ty = profile_to_type(h0_profile(lift(fresh)), n_lift, d);
        out.retry_direct.push_back(ty.to_string());
        if (ty == *out.direct) ++agree;
      } catch (const std::exception& e) {
        out.retry_direct.push_back(std::string("error: ") + e.what());
      }
    }
    out.semicontinuity_ok = agree >= 2;
  }
  return out;
}

}  // namespace normcurve
