#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "normcurve/deform.hpp"
#include "normcurve/parallel.hpp"

namespace normcurve {

// Choice of local coordinate: the substitution U = F * U' moves the point
// p = F * [1:0] (the first column of F) to [1:0], where z = U1/U0 is the
// local coordinate. Reports pin the frame for reproducibility.
template <Scalar K>
struct TailFrame {
  Mat2<K> m;

  std::pair<K, K> point() const { return {m.e[0][0], m.e[1][0]}; }

  std::string describe() const {
    auto s = [](const K& x) { return FieldTraits<K>::to_string(x); };
    return "[[" + s(m.e[0][0]) + "," + s(m.e[0][1]) + "],[" + s(m.e[1][0]) + "," +
           s(m.e[1][1]) + "]]";
  }
};

template <Scalar K>
TailFrame<K> random_frame(SplitMix64& rng, const FieldSpec& fs) {
  for (;;) {
    Mat2<K> m;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) m.e[i][j] = FieldTraits<K>::random(rng, fs);
    if (!is_zero(m.det())) return TailFrame<K>{m};
  }
}

// Coordinates of an obstruction class in the tail model at a point: the
// class is sum_j c_j z^(j - (2d-2)) truncated at z^0, j = 1 .. 2d-3.
template <Scalar K>
struct TailClass {
  int d = 0;
  std::pair<K, K> point{};
  std::vector<K> c;  // c[j-1] holds c_j

  bool is_zero() const {
    for (const K& x : c)
      if (!normcurve::is_zero(x)) return false;
    return true;
  }
};

struct LeadingDegree {
  std::optional<int> l;  // empty for the zero class
};

template <Scalar K>
LeadingDegree leading_degree(const TailClass<K>& tc) {
  for (std::size_t i = 0; i < tc.c.size(); ++i)
    if (!is_zero(tc.c[i])) return {static_cast<int>(i) + 1};
  return {std::nullopt};
}

namespace detail {

// The relations matrix of an immersed plane curve at twist 3d-4 has a
// 1-dimensional cokernel (it computes H^1 of O(2-2d) modulo the three
// Jacobian columns in degree range terms). Returns the unique functional,
// first nonzero coordinate normalized to 1.
template <Scalar K>
std::vector<K> cokernel_functional(const ParamCurve<K>& gm) {
  const int d = gm.d();
  const auto J = mu_matrix(gm, 3 * d - 4);
  auto left = kernel_basis(J.transposed());
  if (left.size() != 1)
    throw std::invalid_argument(
        "tail extraction: cokernel at twist 3d-4 is not 1-dimensional "
        "(curve is not an immersed plane curve)");
  auto lam = std::move(left[0]);
  for (const K& x : lam)
    if (!is_zero(x)) {
      const K inv = K(1) / x;
      for (K& y : lam) y = inv * y;
      break;
    }
  return lam;
}

// Pairing of (q0, q1), the partials of a moved direction form, against the
// monomial h_m = U0^(2d-4-m) U1^m under the cokernel functional.
template <Scalar K>
std::vector<K> tail_coords(int d, const std::vector<K>& lam, const BinForm<K>& q0,
                           const BinForm<K>& q1) {
  const int len = 2 * d - 3;
  std::vector<K> c(len);
  for (int m = 0; m <= 2 * d - 4; ++m) {
    const auto h = BinForm<K>::monomial(2 * d - 4, m);
    const auto p0 = h * q0;  // degree 3d-5, i.e. 3d-4 coefficients
    const auto p1 = h * q1;
    K phi{};
    const int rows = 3 * d - 4;
    for (int i = 0; i < rows; ++i) {
      phi += lam[i] * p0.coeff(i);
      phi += lam[rows + i] * p1.coeff(i);
    }
    // residue pairing <z^(j-(2d-2)), z^m> is nonzero iff j + m = 2d-3
    c[(2 * d - 3 - m) - 1] = phi;
  }
  return c;
}

}  // namespace detail

template <Scalar K>
TailClass<K> tail_from_xi(const ParamCurve<K>& g, const BinForm<K>& t, const TailFrame<K>& frame) {
  const int d = g.d();
  if (d < 2) throw std::invalid_argument("tail_from_xi: tail is empty for d < 2");
  if (t.degree() != d)
    throw std::invalid_argument("tail_from_xi: direction form degree != curve degree");
  if (is_zero(frame.m.det())) throw std::invalid_argument("tail_from_xi: singular frame");
  const auto gm = g.coord_change(frame.m);
  const auto lam = detail::cokernel_functional(gm);
  const auto tm = bf_coord_change(t, frame.m);
  TailClass<K> tc;
  tc.d = d;
  tc.point = frame.point();
  tc.c = detail::tail_coords(d, lam, bf_partial(tm, 0), bf_partial(tm, 1));
  return tc;
}

// Overload taking the point explicitly; it must be the point the frame
// moves to [1:0], i.e. proportional to the first column.
template <Scalar K>
TailClass<K> tail_from_xi(const ParamCurve<K>& g, const BinForm<K>& t,
                          const std::pair<K, K>& point, const TailFrame<K>& frame) {
  if (is_zero(point.first) && is_zero(point.second))
    throw std::invalid_argument("tail_from_xi: point must be nonzero");
  const auto col = frame.point();
  if (!is_zero(point.first * col.second - point.second * col.first))
    throw std::invalid_argument("tail_from_xi: frame does not move the point to [1:0]");
  return tail_from_xi(g, t, frame);
}

// Matrix of t -> tail coordinates over the monomial basis of degree-d
// forms: (2d-3) x (d+1), sharing one cokernel functional across columns.
template <Scalar K>
ExactMatrix<K> tail_matrix(const ParamCurve<K>& g, const TailFrame<K>& frame) {
  const int d = g.d();
  if (d < 2) throw std::invalid_argument("tail_matrix: tail is empty for d < 2");
  const auto gm = g.coord_change(frame.m);
  const auto lam = detail::cokernel_functional(gm);
  ExactMatrix<K> m(2 * d - 3, d + 1);
  for (int col = 0; col <= d; ++col) {
    const auto tm = bf_coord_change(BinForm<K>::monomial(d, col), frame.m);
    const auto c = detail::tail_coords(d, lam, bf_partial(tm, 0), bf_partial(tm, 1));
    for (int j = 0; j < 2 * d - 3; ++j) m.at(j, col) = c[j];
  }
  return m;
}

namespace detail {
inline void check_model_twist(int d, int a) {
  if (a < d - 1 || a > 3 * d - 2)
    throw std::invalid_argument("twist " + std::to_string(a) + " outside [d-1, 3d-2]");
}
}  // namespace detail

// True single-direction cup-product kernel dimension at twist a.
template <Scalar K>
std::size_t kernel_dim_exact(const ParamCurve<K>& g, const BinForm<K>& t, int a) {
  detail::check_model_twist(g.d(), a);
  return cup_kernel_dim(g, {t}, a);
}

// cech: kernel of multiplication by the tail inside the genuine principal-
//   parts window, coefficients of z^j for j in [a-d+1, 2d-3].
// trunc: kernel of p -> p * n(z) mod z^(3d-a-2); closed form in the
//   leading degree alone.
enum class ModelConvention { cech, trunc };

template <Scalar K>
std::size_t kernel_dim_model(const TailClass<K>& tc, int a, ModelConvention conv) {
  const int d = tc.d;
  detail::check_model_twist(d, a);
  const int dom = a - d + 1;  // dim of the space of multipliers p
  if (conv == ModelConvention::trunc) {
    const auto l = leading_degree(tc).l;
    if (!l) return dom;
    return std::min(dom, std::max(0, 2 * a + *l - 4 * d + 3));
  }
  const int lo = a - d + 1, hi = 2 * d - 3;
  if (lo > hi) return dom;
  ExactMatrix<K> m(hi - lo + 1, dom);
  for (int j = lo; j <= hi; ++j)
    for (int i = 0; i < dom; ++i) {
      const int q = j - i;
      if (q >= 1 && q <= 2 * d - 3) m.at(j - lo, i) = tc.c[q - 1];
    }
  return dom - rank(m);
}

struct RemarkCell {
  int l = 0;
  int a = 0;
  std::size_t count = 0;
  std::set<std::size_t> exact;
  std::set<std::size_t> cech;
  std::set<std::size_t> trunc;
};

struct RemarkReport {
  int d = 0, a_min = 0, a_max = 0;
  std::size_t samples = 0, zero_classes = 0, rejected = 0;
  uint64_t seed = 0;
  std::string field;
  std::string frame;
  std::vector<RemarkCell> cells;  // sorted by (l, a)
  std::vector<int> realized_l;
  bool exact_constant_per_class = true;
  bool cech_matches_exact = true;
  bool trunc_matches_exact = true;
  bool trunc_constant_per_class = true;
  std::string note;
};

// Samples random immersed plane curves and direction forms at one fixed
// frame, groups realized classes by leading degree, and records the exact
// kernel dimensions next to both model conventions.
template <Scalar K>
RemarkReport remark_test(int d, int a_min, int a_max, int samples, uint64_t seed,
                         const FieldSpec& fs) {
  if (d < 3) throw std::invalid_argument("remark_test: requires d >= 3");
  detail::check_model_twist(d, a_min);
  detail::check_model_twist(d, a_max);
  if (a_min > a_max) throw std::invalid_argument("remark_test: a_min > a_max");

  RemarkReport rep;
  rep.d = d;
  rep.a_min = a_min;
  rep.a_max = a_max;
  rep.samples = samples;
  rep.seed = seed;
  rep.field = fs.describe();

  SplitMix64 master(seed);
  const auto frame = random_frame<K>(master, fs);
  rep.frame = frame.describe();

  struct SampleOut {
    bool rejected = false;
    bool zero = false;
    int l = 0;
    std::vector<std::size_t> exact, cech, trunc;  // indexed by a - a_min
  };
  std::vector<SampleOut> outs(samples);

  parallel_for(samples, [&](std::size_t i) {
    SplitMix64 rng(derive_seed(seed, i));
    SampleOut& so = outs[i];
    ParamCurve<K> g = [&] {
      try {
        return random_immersed_curve<K>(2, d, rng, fs);
      } catch (const std::exception&) {
        so.rejected = true;
        return ParamCurve<K>(2, 1,
                             {BinForm<K>::monomial(1, 0), BinForm<K>::monomial(1, 1),
                              BinForm<K>::monomial(1, 1)});
      }
    }();
    if (so.rejected) return;
    const auto t = bf_random<K>(d, rng, fs);
    const auto tc = tail_from_xi(g, t, frame);
    if (tc.is_zero()) {
      so.zero = true;
      return;
    }
    so.l = *leading_degree(tc).l;
    for (int a = a_min; a <= a_max; ++a) {
      so.exact.push_back(kernel_dim_exact(g, t, a));
      so.cech.push_back(kernel_dim_model(tc, a, ModelConvention::cech));
      so.trunc.push_back(kernel_dim_model(tc, a, ModelConvention::trunc));
    }
  });

  std::map<std::pair<int, int>, RemarkCell> cells;
  for (const auto& so : outs) {
    if (so.rejected) {
      ++rep.rejected;
      continue;
    }
    if (so.zero) {
      ++rep.zero_classes;
      continue;
    }
    for (int a = a_min; a <= a_max; ++a) {
      const std::size_t k = a - a_min;
      auto& cell = cells[{so.l, a}];
      cell.l = so.l;
      cell.a = a;
      ++cell.count;
      cell.exact.insert(so.exact[k]);
      cell.cech.insert(so.cech[k]);
      cell.trunc.insert(so.trunc[k]);
      if (so.cech[k] != so.exact[k]) rep.cech_matches_exact = false;
      if (so.trunc[k] != so.exact[k]) rep.trunc_matches_exact = false;
    }
  }
  std::set<int> ls;
  for (auto& [key, cell] : cells) {
    ls.insert(cell.l);
    if (cell.exact.size() > 1) rep.exact_constant_per_class = false;
    if (cell.trunc.size() > 1) rep.trunc_constant_per_class = false;
    rep.cells.push_back(cell);
  }
  rep.realized_l.assign(ls.begin(), ls.end());
  if (ls.size() <= 1)
    rep.note = "realized classes exhibit a single leading degree; per-class constancy is vacuous";
  return rep;
}

}  // namespace normcurve
