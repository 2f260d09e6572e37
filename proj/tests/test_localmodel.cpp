#include <doctest.h>

#include <stdexcept>

#include "normcurve/localmodel.hpp"
#include "util.hpp"

using namespace normcurve;
using testutil::curve_of;
using testutil::form_of;

namespace {

TailFrame<Rat> frame_of(long long a, long long b, long long c, long long d) {
  TailFrame<Rat> f;
  f.m.e[0][0] = Rat(a); f.m.e[0][1] = Rat(b);
  f.m.e[1][0] = Rat(c); f.m.e[1][1] = Rat(d);
  return f;
}

TailClass<Rat> tail_of(int d, std::initializer_list<long long> cs) {
  TailClass<Rat> tc;
  tc.d = d;
  tc.point = {Rat(1), Rat(0)};
  for (long long c : cs) tc.c.emplace_back(c);
  return tc;
}

const BinForm<Rat> kCube = BinForm<Rat>::monomial(3, 3);  // class != 0 on the nodal cubic

}  // namespace

TEST_CASE("leading degree of a tail") {
  CHECK(leading_degree(tail_of(3, {0, 5, 7})).l == 2);
  CHECK_FALSE(leading_degree(tail_of(3, {0, 0, 0})).l.has_value());
  CHECK(leading_degree(tail_of(3, {4, 0, 0})).l == 1);
  CHECK(tail_of(3, {0, 0, 0}).is_zero());
  CHECK_FALSE(tail_of(3, {0, 5, 7}).is_zero());
}

TEST_CASE("frames") {
  const auto f = frame_of(1, 2, 1, 3);
  CHECK(f.point() == std::pair<Rat, Rat>{Rat(1), Rat(1)});
  CHECK(f.describe() == "[[1,2],[1,3]]");
  SplitMix64 rng(3);
  const auto fs = FieldSpec::rationals();
  for (int i = 0; i < 10; ++i)
    CHECK_FALSE(is_zero(random_frame<Rat>(rng, fs).m.det()));
}

TEST_CASE("tail extraction input checks") {
  const auto g = testutil::nodal_cubic<Rat>();
  const auto id = frame_of(1, 0, 0, 1);
  CHECK_THROWS_AS(tail_from_xi(g, BinForm<Rat>::monomial(2, 0), id),
                  std::invalid_argument);
  CHECK_THROWS_AS(tail_from_xi(g, kCube, frame_of(1, 2, 2, 4)), std::invalid_argument);
  CHECK_THROWS_AS(
      tail_from_xi(curve_of<Rat>(2, 1, {{1, 0}, {0, 1}, {1, 1}}),
                   BinForm<Rat>::monomial(1, 0), id),
      std::invalid_argument);
  // degenerate base: cokernel is not a line
  CHECK_THROWS_AS(
      tail_from_xi(curve_of<Rat>(2, 3, {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 1, 0, 0}}),
                   kCube, id),
      std::invalid_argument);
}

TEST_CASE("explicit-point overload cross-checks the frame") {
  const auto g = testutil::nodal_cubic<Rat>();
  const auto f = frame_of(1, 2, 1, 3);  // moves [1:1] to [1:0]
  const auto base = tail_from_xi(g, kCube, f);
  const auto same = tail_from_xi(g, kCube, {Rat(1), Rat(1)}, f);
  CHECK(base.c == same.c);
  CHECK(tail_from_xi(g, kCube, {Rat(-2), Rat(-2)}, f).c == base.c);  // scaling ok
  CHECK_THROWS_AS(tail_from_xi(g, kCube, {Rat(1), Rat(2)}, f), std::invalid_argument);
  CHECK_THROWS_AS(tail_from_xi(g, kCube, {Rat(0), Rat(0)}, f), std::invalid_argument);
}

TEST_CASE("zero tail exactly for zero classes") {
  const auto g = testutil::nodal_cubic<Rat>();
  const auto f = frame_of(1, 2, 1, 3);
  for (int j = 0; j <= 2; ++j) CHECK(tail_from_xi(g, g.form(j), f).is_zero());
  CHECK(tail_from_xi(g, g.form(0) + Rat(3) * g.form(2), f).is_zero());
  const auto tc = tail_from_xi(g, kCube, f);
  CHECK_FALSE(tc.is_zero());
  CHECK(tc.c.size() == 3);  // 2d-3
  CHECK(tc.point == std::pair<Rat, Rat>{Rat(1), Rat(1)});

  const auto fs = FieldSpec::prime(1000003);
  SplitMix64 rng(51);
  for (int d = 3; d <= 4; ++d) {
    const auto gp = random_immersed_curve<Fp>(2, d, rng, fs);
    const auto fr = random_frame<Fp>(rng, fs);
    for (int trial = 0; trial < 5; ++trial) {
      const auto t = bf_random<Fp>(d, rng, fs);
      CHECK(tail_from_xi(gp, t, fr).is_zero() == xi_is_zero(gp, t));
    }
  }
}

TEST_CASE("tail is linear in the direction form") {
  const auto g = testutil::nodal_cubic<Rat>();
  const auto f = frame_of(2, -1, 1, 1);
  SplitMix64 rng(52);
  const auto qs = FieldSpec::rationals();
  for (int trial = 0; trial < 5; ++trial) {
    const auto t1 = bf_random<Rat>(3, rng, qs);
    const auto t2 = bf_random<Rat>(3, rng, qs);
    const auto c1 = tail_from_xi(g, t1, f).c;
    const auto c2 = tail_from_xi(g, t2, f).c;
    const auto csum = tail_from_xi(g, t1 + t2, f).c;
    const auto cscaled = tail_from_xi(g, Rat(-5) * t1, f).c;
    for (int j = 0; j < 3; ++j) {
      CHECK(csum[j] == c1[j] + c2[j]);
      CHECK(cscaled[j] == Rat(-5) * c1[j]);
    }
  }
}

TEST_CASE("d=2 tails have length one and vanish on the full space") {
  // span{s0,s1,s2} is already all of the degree-2 forms, so every class dies
  const auto g = curve_of<Rat>(2, 2, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
  const auto f = frame_of(1, 1, -1, 1);
  for (int m = 0; m <= 2; ++m) {
    const auto tc = tail_from_xi(g, BinForm<Rat>::monomial(2, m), f);
    CHECK(tc.c.size() == 1);
    CHECK(tc.is_zero());
  }
}

TEST_CASE("tail matrix has the class-map kernel") {
  const auto g = testutil::nodal_cubic<Rat>();
  const auto f = frame_of(1, 2, 1, 3);
  const auto m = tail_matrix(g, f);
  CHECK(m.rows() == 3);
  CHECK(m.cols() == 4);
  CHECK(rank(m) == phi_rank(g));  // d - 2
  for (int j = 0; j <= 2; ++j) {
    std::vector<Rat> coeffs(g.form(j).coeffs());
    for (const auto& y : m.apply(coeffs)) CHECK(is_zero(y));
  }
  // columns reproduce per-monomial tails
  for (int col = 0; col <= 3; ++col) {
    const auto tc = tail_from_xi(g, BinForm<Rat>::monomial(3, col), f);
    for (int j = 0; j < 3; ++j) CHECK(m.at(j, col) == tc.c[j]);
  }
}

TEST_CASE("exact kernel dimensions across the twist window") {
  const auto g = testutil::nodal_cubic<Rat>();
  CHECK_THROWS_AS(kernel_dim_exact(g, kCube, 1), std::invalid_argument);
  CHECK_THROWS_AS(kernel_dim_exact(g, kCube, 8), std::invalid_argument);

  CHECK(kernel_dim_exact(g, kCube, 2) == 0);
  CHECK(kernel_dim_exact(g, kCube, 4) == 0);   // generic direction, d=3
  CHECK(kernel_dim_exact(g, kCube, 6) == 4);   // a = 3d-3: full kernel a-d+1
  CHECK(kernel_dim_exact(g, kCube, 7) == 5);   // a = 3d-2: full kernel 2d-1

  // zero class: the map vanishes, kernel is everything at every twist
  for (int a = 2; a <= 7; ++a)
    CHECK(kernel_dim_exact(g, g.form(1), a) == static_cast<std::size_t>(a - 2));

  // independent of the representative of the class
  for (int a = 2; a <= 7; ++a)
    CHECK(kernel_dim_exact(g, kCube, a) ==
          kernel_dim_exact(g, kCube + Rat(2) * g.form(0) - g.form(2), a));

  // consistency with the predictor and monotonicity
  std::size_t prev = 0;
  for (int a = 2; a <= 7; ++a) {
    const auto k = kernel_dim_exact(g, kCube, a);
    CHECK(k + static_cast<std::size_t>(std::max(0, a + 3 - 9)) ==
          predicted_h0(g, {kCube}, a));
    CHECK(k >= prev);
    prev = k;
  }
}

TEST_CASE("closed-form model values") {
  CHECK(kernel_dim_model(tail_of(3, {0, 1, 0}), 4, ModelConvention::trunc) == 1);
  CHECK(kernel_dim_model(tail_of(3, {1, 0, 0}), 4, ModelConvention::trunc) == 0);
  // zero tail: full kernel under either convention
  for (auto conv : {ModelConvention::cech, ModelConvention::trunc}) {
    CHECK(kernel_dim_model(tail_of(3, {0, 0, 0}), 5, conv) == 3);
    CHECK(kernel_dim_model(tail_of(3, {0, 0, 0}), 2, conv) == 0);
  }
  // trunc depends on the tail only through its leading degree
  CHECK(kernel_dim_model(tail_of(4, {0, 3, 1, 0, 9}), 6, ModelConvention::trunc) ==
        kernel_dim_model(tail_of(4, {0, -1, 0, 0, 0}), 6, ModelConvention::trunc));
  // top of the window: everything is in the kernel
  CHECK(kernel_dim_model(tail_of(3, {1, 2, 3}), 7, ModelConvention::cech) == 5);
  CHECK(kernel_dim_model(tail_of(3, {1, 2, 3}), 7, ModelConvention::trunc) == 5);
  CHECK_THROWS_AS(kernel_dim_model(tail_of(3, {1, 2, 3}), 8, ModelConvention::cech),
                  std::invalid_argument);
}

TEST_CASE("window convention reproduces the exact kernel on realized classes") {
  const auto fs = FieldSpec::prime(1000003);
  SplitMix64 rng(53);
  for (int d = 3; d <= 4; ++d) {
    const auto g = random_immersed_curve<Fp>(2, d, rng, fs);
    const auto fr = random_frame<Fp>(rng, fs);
    int nonzero = 0;
    for (int trial = 0; trial < 6; ++trial) {
      const auto t = bf_random<Fp>(d, rng, fs);
      const auto tc = tail_from_xi(g, t, fr);
      if (tc.is_zero()) continue;
      ++nonzero;
      for (int a = d - 1; a <= 3 * d - 2; ++a)
        CHECK(kernel_dim_model(tc, a, ModelConvention::cech) ==
              kernel_dim_exact(g, t, a));
    }
    CHECK(nonzero > 0);
  }
}

TEST_CASE("remark harness") {
  const auto fs = FieldSpec::prime(1000003);
  CHECK_THROWS_AS(remark_test<Fp>(2, 1, 4, 10, 1, fs), std::invalid_argument);
  CHECK_THROWS_AS(remark_test<Fp>(3, 5, 4, 10, 1, fs), std::invalid_argument);
  CHECK_THROWS_AS(remark_test<Fp>(3, 2, 9, 10, 1, fs), std::invalid_argument);

  const auto rep = remark_test<Fp>(3, 2, 7, 12, 99, fs);
  CHECK(rep.d == 3);
  CHECK(rep.samples == 12);
  CHECK(rep.field == "prime:1000003");
  CHECK_FALSE(rep.frame.empty());
  // image of the class map is a line for d=3: a single leading degree
  CHECK(rep.realized_l.size() <= 1);
  CHECK_FALSE(rep.note.empty());
  CHECK(rep.cech_matches_exact);
  CHECK(rep.trunc_constant_per_class);
  CHECK(rep.exact_constant_per_class);

  // cell counts at one twist account for every informative sample
  std::size_t at_a = 0;
  for (const auto& cell : rep.cells)
    if (cell.a == 4) at_a += cell.count;
  CHECK(at_a == rep.samples - rep.rejected - rep.zero_classes);

  // deterministic
  const auto rep2 = remark_test<Fp>(3, 2, 7, 12, 99, fs);
  CHECK(rep2.frame == rep.frame);
  CHECK(rep2.realized_l == rep.realized_l);
  REQUIRE(rep2.cells.size() == rep.cells.size());
  for (std::size_t i = 0; i < rep.cells.size(); ++i) {
    CHECK(rep2.cells[i].l == rep.cells[i].l);
    CHECK(rep2.cells[i].a == rep.cells[i].a);
    CHECK(rep2.cells[i].count == rep.cells[i].count);
    CHECK(rep2.cells[i].exact == rep.cells[i].exact);
  }
}
