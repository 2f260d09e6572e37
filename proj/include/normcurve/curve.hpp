#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "normcurve/binform.hpp"

namespace normcurve {

// Degree-d map P^1 -> P^n given by n+1 forms of degree d. Construction only
// checks shape (n >= 2, d >= 1, equal degrees, not all forms zero);
// geometric conditions are the job of validate().
template <Scalar K>
class ParamCurve {
 public:
  ParamCurve(int n, int d, std::vector<BinForm<K>> forms)
      : n_(n), d_(d), forms_(std::move(forms)) {
    if (n_ < 2) throw std::invalid_argument("ParamCurve: ambient dimension n must be >= 2");
    if (d_ < 1) throw std::invalid_argument("ParamCurve: degree must be >= 1");
    if (static_cast<int>(forms_.size()) != n_ + 1)
      throw std::invalid_argument("ParamCurve: expected n + 1 forms");
    bool all_zero = true;
    for (const auto& f : forms_) {
      if (f.degree() != d_)
        throw std::invalid_argument("ParamCurve: form degree != curve degree");
      if (!f.is_zero()) all_zero = false;
    }
    if (all_zero) throw std::invalid_argument("ParamCurve: all forms are zero");
  }

  int n() const { return n_; }
  int d() const { return d_; }
  const std::vector<BinForm<K>>& forms() const { return forms_; }
  const BinForm<K>& form(int j) const { return forms_.at(j); }

  // Rows indexed by the two partials, columns by the forms.
  std::vector<std::vector<BinForm<K>>> jacobian() const {
    std::vector<std::vector<BinForm<K>>> rows(2);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j <= n_; ++j) rows[i].push_back(bf_partial(forms_[j], i));
    return rows;
  }

  ParamCurve coord_change(const Mat2<K>& g) const {
    std::vector<BinForm<K>> fs;
    fs.reserve(forms_.size());
    for (const auto& f : forms_) fs.push_back(bf_coord_change(f, g));
    return ParamCurve(n_, d_, std::move(fs));
  }

 private:
  int n_, d_;
  std::vector<BinForm<K>> forms_;
};

struct ValidationReport {
  bool base_point_free = false;
  bool nondegenerate = false;
  bool immersive = false;
  // First failure in the order above, as human-readable evidence: a common
  // factor, a dependency relation, or a common factor of the Jacobian minors.
  std::optional<std::string> witness;

  bool ok() const { return base_point_free && nondegenerate && immersive; }
};

namespace detail {

// 2x2 minors of the Jacobian, one per pair of forms j < k.
template <Scalar K>
std::vector<BinForm<K>> jacobian_minors(const ParamCurve<K>& c) {
  const auto jac = c.jacobian();
  std::vector<BinForm<K>> minors;
  for (int j = 0; j <= c.n(); ++j)
    for (int k = j + 1; k <= c.n(); ++k)
      minors.push_back(jac[0][j] * jac[1][k] - jac[0][k] * jac[1][j]);
  return minors;
}

template <Scalar K>
ExactMatrix<K> coefficient_matrix(const ParamCurve<K>& c) {
  ExactMatrix<K> m(c.n() + 1, c.d() + 1);
  for (int j = 0; j <= c.n(); ++j)
    for (int i = 0; i <= c.d(); ++i) m.at(j, i) = c.form(j).coeff(i);
  return m;
}

}  // namespace detail

// All three verdicts are computed independently (a degenerate curve can
// still be immersive); witness reports the first failure in field order.
template <Scalar K>
ValidationReport validate(const ParamCurve<K>& c) {
  ValidationReport r;

  const auto g = bf_gcd(c.forms());
  r.base_point_free = g.degree() == 0;
  if (!r.base_point_free) r.witness = bf_to_string(g);

  const auto cm = detail::coefficient_matrix(c);
  r.nondegenerate = rank(cm) == static_cast<std::size_t>(c.n()) + 1;
  if (!r.nondegenerate && !r.witness) {
    // a left-kernel vector of the coefficient matrix is a dependency
    const auto dep = kernel_basis(cm.transposed());
    std::string w = "(";
    if (dep.size() == 1) {
      for (std::size_t j = 0; j < dep[0].size(); ++j) {
        if (j) w += ", ";
        w += FieldTraits<K>::to_string(dep[0][j]);
      }
    } else {
      w += "multiple relations";
    }
    r.witness = w + ")";
  }

  const auto minors = detail::jacobian_minors(c);
  bool minors_all_zero = true;
  for (const auto& m : minors)
    if (!m.is_zero()) minors_all_zero = false;
  if (minors_all_zero) {
    r.immersive = false;
    if (!r.witness) r.witness = "0";
  } else {
    const auto mg = bf_gcd(minors);
    r.immersive = mg.degree() == 0;
    if (!r.immersive && !r.witness) r.witness = bf_to_string(mg);
  }
  return r;
}

// Draws coefficient vectors until the curve passes validate(). For n >= d
// extra nondegeneracy retries are pointless (n + 1 > d + 1 forces a
// relation), so that case is rejected up front.
template <Scalar K>
ParamCurve<K> random_immersed_curve(int n, int d, SplitMix64& rng, const FieldSpec& fs,
                                    int max_attempts = 200) {
  if (n > d)
    throw std::invalid_argument(
        "random_immersed_curve: no nondegenerate degree-" + std::to_string(d) +
        " curve exists in P^" + std::to_string(n));
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    std::vector<BinForm<K>> forms;
    bool all_zero = true;
    for (int j = 0; j <= n; ++j) {
      forms.push_back(bf_random<K>(d, rng, fs));
      if (!forms.back().is_zero()) all_zero = false;
    }
    if (all_zero) continue;
    ParamCurve<K> c(n, d, std::move(forms));
    if (validate(c).ok()) return c;
  }
  throw std::runtime_error("random_immersed_curve: attempts exhausted");
}

}  // namespace normcurve
