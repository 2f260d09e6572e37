#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "normcurve/curve.hpp"

namespace normcurve {

// h^0 of the twisted conormal bundle, one entry per twist a in the window
// [d-1, 4d-1]. That window is complete: every summand degree lies below the
// top end, and the final first difference already equals its limit n-1.
struct H0Profile {
  std::map<int, int> entries;
};

class SplittingType {
 public:
  // a_values are the shifts in N = (+) O(d + a_i); stored sorted ascending.
  SplittingType(int n, int d, std::vector<int> a_values)
      : n_(n), d_(d), a_(std::move(a_values)) {
    std::sort(a_.begin(), a_.end());
    if (static_cast<int>(a_.size()) != n_ - 1)
      throw std::invalid_argument("SplittingType: expected n - 1 summands, got " +
                                  std::to_string(a_.size()));
    long long sum = 0;
    for (int a : a_) {
      if (a < 0 || a > 3 * d_ - 2)
        throw std::invalid_argument("SplittingType: summand shift " + std::to_string(a) +
                                    " outside [0, 3d-2]");
      sum += d_ + a;
    }
    const long long expect = static_cast<long long>(d_) * (n_ + 1) - 2;
    if (sum != expect)
      throw std::invalid_argument("SplittingType: degree sum " + std::to_string(sum) +
                                  " != d(n+1) - 2 = " + std::to_string(expect));
  }

  int n() const { return n_; }
  int d() const { return d_; }
  const std::vector<int>& a_values() const { return a_; }
  std::vector<int> raw() const {
    std::vector<int> r(a_);
    for (int& v : r) v += d_;
    return r;
  }

  friend bool operator==(const SplittingType& x, const SplittingType& y) {
    return x.n_ == y.n_ && x.d_ == y.d_ && x.a_ == y.a_;
  }
  friend bool operator<(const SplittingType& x, const SplittingType& y) {
    if (x.n_ != y.n_) return x.n_ < y.n_;
    if (x.d_ != y.d_) return x.d_ < y.d_;
    return x.a_ < y.a_;
  }

  std::string to_string() const {
    std::string s = "{";
    for (std::size_t i = 0; i < a_.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(a_[i]);
    }
    return s + "}";
  }

 private:
  int n_, d_;
  std::vector<int> a_;
};

// h^0 of the dual split bundle (+) O(a - d - a_i) at twist a.
inline int expected_h0(const SplittingType& t, int a) {
  int h = 0;
  for (int ai : t.a_values()) h += std::max(0, a - (t.d() + ai) + 1);
  return h;
}

// Stacks one horizontal band per group: band g, block j is the matrix of
// multiplication by blocks[g][j] from degree k to degree k + e, with e the
// common degree of all entries. k = -1 gives the empty-domain matrix.
template <Scalar K>
ExactMatrix<K> stacked_multiplication_matrix(
    const std::vector<std::vector<BinForm<K>>>& blocks, int k) {
  if (blocks.empty() || blocks[0].empty())
    throw std::invalid_argument("stacked_multiplication_matrix: no blocks");
  if (k < -1) throw std::invalid_argument("stacked_multiplication_matrix: k < -1");
  const int e = blocks[0][0].degree();
  const std::size_t per = blocks[0].size();
  for (const auto& row : blocks) {
    if (row.size() != per)
      throw std::invalid_argument("stacked_multiplication_matrix: ragged blocks");
    for (const auto& f : row)
      if (f.degree() != e)
        throw std::invalid_argument("stacked_multiplication_matrix: mixed degrees");
  }
  const std::size_t band_rows = e + k + 1;
  const std::size_t width = k + 1;
  ExactMatrix<K> m(band_rows * blocks.size(), width * per);
  for (std::size_t g = 0; g < blocks.size(); ++g)
    for (std::size_t j = 0; j < per; ++j) {
      if (k < 0) continue;
      const auto blk = toeplitz_block(blocks[g][j], k);
      for (std::size_t r = 0; r < blk.rows(); ++r)
        for (std::size_t c = 0; c < blk.cols(); ++c)
          m.at(g * band_rows + r, j * width + c) = blk.at(r, c);
    }
  return m;
}

// Relations matrix whose kernel is H^0(N_f^v(a)): an (n+1)-tuple of degree
// a-d forms (alpha_j) lies in the kernel iff both weighted Jacobian sums
// vanish. Rows: dU0 band then dU1 band; columns: form index j, then
// monomial index within the block.
template <Scalar K>
ExactMatrix<K> mu_matrix(const ParamCurve<K>& c, int a) {
  if (a < c.d() - 1)
    throw std::invalid_argument("mu_matrix: twist " + std::to_string(a) +
                                " below d - 1 = " + std::to_string(c.d() - 1));
  return stacked_multiplication_matrix(c.jacobian(), a - c.d());
}

template <Scalar K>
std::size_t h0_conormal(const ParamCurve<K>& c, int a) {
  const auto m = mu_matrix(c, a);
  return m.cols() - rank(m);
}

template <Scalar K>
std::vector<std::vector<K>> h0_conormal_kernel(const ParamCurve<K>& c, int a) {
  return kernel_basis(mu_matrix(c, a));
}

template <Scalar K>
H0Profile h0_profile(const ParamCurve<K>& c) {
  H0Profile p;
  for (int a = c.d() - 1; a <= 4 * c.d() - 1; ++a)
    p.entries[a] = static_cast<int>(h0_conormal(c, a));
  return p;
}

// Second-difference decoding: Delta(a) = h(a) - h(a-1) counts summands with
// raw degree <= a, so each value's multiplicity is the jump in Delta.
inline SplittingType profile_to_type(const H0Profile& p, int n, int d) {
  const int lo = d - 1, hi = 4 * d - 1;
  auto h = [&](int a) {
    auto it = p.entries.find(a);
    if (it == p.entries.end())
      throw std::invalid_argument("profile_to_type: missing twist " + std::to_string(a));
    return it->second;
  };
  if (h(lo) != 0)
    throw std::invalid_argument("profile_to_type: nonzero dimension at twist d - 1");
  std::vector<int> delta;  // delta[i] for a = d + i
  int prev = 0;
  for (int a = lo + 1; a <= hi; ++a) {
    const int da = h(a) - h(a - 1);
    if (da < prev)
      throw std::invalid_argument("profile_to_type: first differences decrease at twist " +
                                  std::to_string(a));
    delta.push_back(da);
    prev = da;
  }
  if (delta.back() != n - 1)
    throw std::invalid_argument("profile_to_type: terminal difference " +
                                std::to_string(delta.back()) + " != n - 1");
  std::vector<int> a_values;
  int before = 0;
  for (int i = 0; i < static_cast<int>(delta.size()); ++i) {
    for (int m = 0; m < delta[i] - before; ++m) a_values.push_back(i);  // raw d+i
    before = delta[i];
  }
  return SplittingType(n, d, std::move(a_values));
}

template <Scalar K>
SplittingType splitting_type(const ParamCurve<K>& c) {
  const auto v = validate(c);
  if (!v.immersive)
    throw std::invalid_argument("splitting_type: curve is not an immersion" +
                                (v.witness ? " (" + *v.witness + ")" : std::string()));
  return profile_to_type(h0_profile(c), c.n(), c.d());
}

}  // namespace normcurve
