// Acceptance gate: every release-blocking property in one binary. Each
// criterion prints exactly one [PASS]/[FAIL] line; the exit status is
// nonzero when any line failed. Criteria keep running after a failure so
// a single run shows the whole picture.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "normcurve/normcurve.hpp"
#include "oracle.hpp"

namespace nc = normcurve;
using nc::Fp;
using nc::Rat;

namespace {

constexpr uint64_t kMaster = 0x5eed2026u;
const nc::FieldSpec kPrime = nc::FieldSpec::prime(1000003);
const nc::FieldSpec kQ = nc::FieldSpec::rationals();

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt_secs(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1fs", s);
  return buf;
}

nc::ParamCurve<Rat> load_golden(const std::string& name) {
  std::ifstream in(std::string(TEST_DATA_DIR) + "/" + name);
  if (!in) throw std::runtime_error("cannot open data file " + name);
  return nc::curve_from_json<Rat>(nlohmann::json::parse(in), kQ);
}

struct Golden {
  std::string name;
  nc::ParamCurve<Rat> curve;
  nc::SplittingType expect;
};

// Random invertible target change: forms are replaced by independent linear
// combinations, i.e. the image moves by an automorphism of P^n.
template <class K>
nc::ParamCurve<K> target_change(const nc::ParamCurve<K>& c, nc::SplitMix64& rng,
                                const nc::FieldSpec& fs) {
  const int n = c.n();
  for (;;) {
    nc::ExactMatrix<K> m(n + 1, n + 1);
    for (int i = 0; i <= n; ++i)
      for (int j = 0; j <= n; ++j) m.at(i, j) = nc::FieldTraits<K>::random(rng, fs);
    if (nc::rank(m) != static_cast<std::size_t>(n) + 1) continue;
    std::vector<nc::BinForm<K>> rows;
    for (int i = 0; i <= n; ++i) {
      nc::BinForm<K> acc(c.d());
      for (int j = 0; j <= n; ++j) acc = acc + m.at(i, j) * c.form(j);
      rows.push_back(std::move(acc));
    }
    return nc::ParamCurve<K>(n, c.d(), std::move(rows));
  }
}

// Stacked coefficient column (partial_0 t, partial_1 t), length 2d.
template <class K>
void fill_pair_column(nc::ExactMatrix<K>& m, std::size_t col, const nc::BinForm<K>& t) {
  const auto q0 = nc::bf_partial(t, 0);
  const auto q1 = nc::bf_partial(t, 1);
  const int d = t.degree();
  for (int i = 0; i < d; ++i) {
    m.at(i, col) = q0.coeff(i);
    m.at(d + i, col) = q1.coeff(i);
  }
}

}  // namespace

int main() {
  bool all_pass = true;
  auto emit = [&](int idx, bool pass, const std::string& text) {
    std::printf("[%s] criterion %d: %s\n", pass ? "PASS" : "FAIL", idx, text.c_str());
    std::fflush(stdout);
    if (!pass) all_pass = false;
  };

  // ---- criteria 1 and 2: degree sum rule and shift bounds on shared samples
  {
    const std::pair<int, int> pairs[] = {{2, 3}, {2, 4}, {3, 3}, {3, 4}, {4, 4}, {3, 5}};
    bool sum_ok = true, bounds_ok = true;
    std::string why1, why2;
    std::size_t checked = 0;
    double secs = 0;
    std::vector<std::pair<std::pair<int, int>, std::vector<int>>> drawn;  // ((n,d), a-values)
    try {
      const auto t0 = std::chrono::steady_clock::now();
      for (std::size_t pi = 0; pi < 6; ++pi) {
        const auto [n, d] = pairs[pi];
        nc::SplitMix64 rng(nc::derive_seed(kMaster, 100 + pi));
        for (int k = 0; k < 50; ++k) {
          const auto c = nc::random_immersed_curve<Fp>(n, d, rng, kPrime);
          const auto ty = nc::splitting_type(c);
          long long sum = 0;
          for (int a : ty.a_values()) sum += d + a;
          if (sum != static_cast<long long>(d) * (n + 1) - 2) {
            sum_ok = false;
            why1 = "sum " + std::to_string(sum) + " at (n,d)=(" + std::to_string(n) + "," +
                   std::to_string(d) + ")";
          }
          drawn.push_back({{n, d}, ty.a_values()});
          ++checked;
        }
      }
      secs = seconds_since(t0);
      if (secs >= 120.0) {
        sum_ok = false;
        why1 = "over the 2 minute budget";
      }
    } catch (const std::exception& e) {
      sum_ok = bounds_ok = false;
      why1 = why2 = e.what();
    }
    emit(1, sum_ok,
         "summand degrees add to d(n+1)-2 on " + std::to_string(checked) +
             " random immersed curves, 6 (n,d) pairs x 50, prime field 1000003, " +
             fmt_secs(secs) + (sum_ok ? "" : " [" + why1 + "]"));
    for (const auto& [nd, avals] : drawn)
      for (int a : avals)
        if (a < 0 || a > 3 * nd.second - 2) {
          bounds_ok = false;
          why2 = "shift " + std::to_string(a) + " at (n,d)=(" + std::to_string(nd.first) +
                 "," + std::to_string(nd.second) + ")";
        }
    emit(2, bounds_ok,
         "every summand shift lies in [0, 3d-2] on the same samples" +
             (bounds_ok ? std::string() : " [" + why2 + "]"));
  }

  // ---- criterion 3: golden splitting types over the rationals
  std::vector<Golden> goldens;
  {
    bool ok = true;
    std::string why;
    const std::pair<const char*, std::vector<int>> specs[] = {
        {"twisted_cubic.json", {2, 2}},
        {"rn_quartic_p4.json", {2, 2, 2}},
        {"plane_quartic.json", {6}},
        {"line_p3.json", {0, 0}}};
    for (const auto& [file, avals] : specs) {
      try {
        auto c = load_golden(file);
        const auto ty = nc::splitting_type(c);
        const nc::SplittingType expect(c.n(), c.d(), avals);
        if (!(ty == expect)) {
          ok = false;
          why = std::string(file) + " gave " + ty.to_string();
        }
        goldens.push_back({file, std::move(c), expect});
      } catch (const std::exception& e) {
        ok = false;
        why = std::string(file) + ": " + e.what();
      }
    }
    emit(3, ok,
         "golden types over the rationals: twisted cubic {2,2}, degree-4 normal curve "
         "{2,2,2}, immersed plane quartic {6}, line in P^3 {0,0}" +
             (ok ? std::string() : " [" + why + "]"));
  }

  // ---- criterion 4: independent oracle agrees twist by twist
  {
    bool ok = !goldens.empty();
    std::string why = goldens.empty() ? "goldens unavailable" : "";
    std::size_t checked = 0;
    for (const auto& g : goldens) {
      const int d = g.curve.d();
      for (int a = d - 1; a <= 4 * d - 1; ++a) {
        try {
          const auto lib = nc::h0_conormal(g.curve, a);
          const auto ora = oracle::h0_conormal_oracle(g.curve, a);
          if (lib != ora) {
            ok = false;
            why = g.name + " twist " + std::to_string(a) + ": " + std::to_string(lib) +
                  " vs oracle " + std::to_string(ora);
          }
          ++checked;
        } catch (const std::exception& e) {
          ok = false;
          why = g.name + ": " + e.what();
        }
      }
    }
    emit(4, ok,
         "evaluation-interpolation oracle matches the Toeplitz kernel on all " +
             std::to_string(checked) + " twists of the golden curves" +
             (ok ? std::string() : " [" + why + "]"));
  }

  // ---- criterion 5: predictor versus direct computation on random lifts
  {
    bool ok = true;
    std::string why;
    std::size_t matched = 0, total = 0;
    double secs = 0;
    try {
      const auto t0 = std::chrono::steady_clock::now();
      for (int d : {3, 4})
        for (int r : {1, 2}) {
          const auto rep =
              nc::survey_deform<Fp>(d, r, 50, nc::derive_seed(kMaster, 500 + 10 * d + r), kPrime);
          matched += rep.matched;
          total += rep.count;
          if (rep.matched * 10 < rep.count * 9) {
            ok = false;
            why = "rate " + std::to_string(rep.matched) + "/" + std::to_string(rep.count) +
                  " at d=" + std::to_string(d) + " r=" + std::to_string(r);
          }
          for (const auto& tr : rep.trials)
            if (!tr.rejected && !tr.match && !tr.degenerate_lift && tr.witness.empty()) {
              ok = false;
              why = "mismatch without witness, trial seed " + std::to_string(tr.seed);
            }
        }
      secs = seconds_since(t0);
      if (secs >= 300.0) {
        ok = false;
        why = "over the 5 minute budget";
      }
    } catch (const std::exception& e) {
      ok = false;
      why = e.what();
    }
    emit(5, ok,
         "predicted splitting equals the direct lift computation on " +
             std::to_string(matched) + "/" + std::to_string(total) +
             " random deformations (d in {3,4}, r in {1,2}), every mismatch witnessed, " +
             fmt_secs(secs) + (ok ? "" : " [" + why + "]"));
  }

  // ---- criterion 6: invariance under reparametrization and ambient motion
  {
    bool ok = !goldens.empty();
    std::string why = goldens.empty() ? "goldens unavailable" : "";
    std::size_t checked = 0;
    nc::SplitMix64 rng(nc::derive_seed(kMaster, 600));
    for (const auto& g : goldens) {
      try {
        for (int k = 0; k < 20; ++k) {
          const auto fr = nc::random_frame<Rat>(rng, kQ);
          if (!(nc::splitting_type(g.curve.coord_change(fr.m)) == g.expect)) {
            ok = false;
            why = g.name + " changed under source reparametrization";
          }
          ++checked;
        }
        for (int k = 0; k < 20; ++k) {
          if (!(nc::splitting_type(target_change(g.curve, rng, kQ)) == g.expect)) {
            ok = false;
            why = g.name + " changed under target linear change";
          }
          ++checked;
        }
      } catch (const std::exception& e) {
        ok = false;
        why = g.name + ": " + e.what();
      }
    }
    emit(6, ok,
         "splitting types unchanged under 20 source reparametrizations and 20 target "
         "linear changes per golden curve (" +
             std::to_string(checked) + " conjugations)" +
             (ok ? std::string() : " [" + why + "]"));
  }

  // ---- criterion 7: rank of the class map and exact kernel identification
  {
    bool ok = true;
    std::string why;
    std::size_t checked = 0;
    try {
      for (int d : {3, 4, 5}) {
        nc::SplitMix64 rng(nc::derive_seed(kMaster, 700 + d));
        for (int k = 0; k < 20; ++k) {
          const auto g = nc::random_immersed_curve<Fp>(2, d, rng, kPrime);
          if (nc::phi_rank(g) != static_cast<std::size_t>(d) - 2) {
            ok = false;
            why = "rank != d-2 at d=" + std::to_string(d);
          }
          // span{s0,s1,s2} inside the kernel: each base form has zero class.
          for (int j = 0; j <= 2; ++j)
            if (!nc::xi_is_zero(g, g.form(j))) {
              ok = false;
              why = "base form with nonzero class at d=" + std::to_string(d);
            }
          // Kernel inside the span: solve J u + S c = 0 and check every
          // c-part lies in the coefficient span of the base forms.
          nc::ExactMatrix<Fp> J(2 * d, 3), S(2 * d, d + 1);
          for (int j = 0; j <= 2; ++j) fill_pair_column(J, j, g.form(j));
          for (int m = 0; m <= d; ++m) fill_pair_column(S, m, nc::BinForm<Fp>::monomial(d, m));
          const auto kb = nc::kernel_basis(J.hstacked(S));
          nc::ExactMatrix<Fp> C(d + 1, 3), P(d + 1, kb.size());
          for (int j = 0; j <= 2; ++j)
            for (int i = 0; i <= d; ++i) C.at(i, j) = g.form(j).coeff(i);
          for (std::size_t v = 0; v < kb.size(); ++v)
            for (int i = 0; i <= d; ++i) P.at(i, v) = kb[v][3 + i];
          const auto rr = nc::rank_rel(C, P);
          if (kb.size() != 3 || rr.first != 3 || rr.second != 3 || nc::rank(P) != 3) {
            ok = false;
            why = "kernel differs from the base-form span at d=" + std::to_string(d);
          }
          ++checked;
        }
      }
    } catch (const std::exception& e) {
      ok = false;
      why = e.what();
    }
    emit(7, ok,
         "class map has rank d-2 with kernel exactly the span of the three base forms, "
         "membership checked both ways on " +
             std::to_string(checked) + " plane curves (d in {3,4,5})" +
             (ok ? std::string() : " [" + why + "]"));
  }

  // ---- criterion 8: the leading tail functional vanishes in codimension one
  {
    bool ok = true;
    std::string why;
    std::size_t rank_one = 0, total = 0;
    try {
      for (int d : {3, 4, 5}) {
        nc::SplitMix64 rng(nc::derive_seed(kMaster, 800 + d));
        std::size_t ones = 0;
        const std::size_t per = 30;
        for (std::size_t k = 0; k < per; ++k) {
          const auto g = nc::random_immersed_curve<Fp>(2, d, rng, kPrime);
          const auto rep = nc::codim_one_check(g, nc::random_frame<Fp>(rng, kPrime));
          if (rep.rank > 1) {
            ok = false;
            why = "rank " + std::to_string(rep.rank) + " at d=" + std::to_string(d);
          }
          if (rep.rank == 1) ++ones;
        }
        rank_one += ones;
        total += per;
        if (ones * 10 < per * 9) {
          ok = false;
          why = "rank-one rate " + std::to_string(ones) + "/" + std::to_string(per) +
                " at d=" + std::to_string(d);
        }
      }
    } catch (const std::exception& e) {
      ok = false;
      why = e.what();
    }
    emit(8, ok,
         "leading coefficient functional: rank <= 1 always, rank exactly 1 on " +
             std::to_string(rank_one) + "/" + std::to_string(total) +
             " sampled (curve, frame) pairs (d in {3,4,5})" +
             (ok ? std::string() : " [" + why + "]"));
  }

  // ---- criterion 9: level sets of the leading degree are linear
  {
    bool ok = true;
    std::string why;
    std::size_t pairs = 0;
    try {
      for (int d : {3, 4})
        for (int l0 = 1; l0 <= 2 * d - 3; ++l0) {
          nc::SplitMix64 rng(nc::derive_seed(kMaster, 900 + 10 * d + l0));
          const auto g = nc::random_immersed_curve<Fp>(2, d, rng, kPrime);
          const auto rep = nc::level_set_linearity(g, l0, 100, rng, kPrime);
          pairs += rep.trials;
          if (rep.closure_failures != 0) {
            ok = false;
            why = std::to_string(rep.closure_failures) + " closure failures at d=" +
                  std::to_string(d) + " l0=" + std::to_string(l0);
          }
          if (!rep.nested) {
            ok = false;
            why = "nesting failed at d=" + std::to_string(d) + " l0=" + std::to_string(l0);
          }
        }
    } catch (const std::exception& e) {
      ok = false;
      why = e.what();
    }
    emit(9, ok,
         "level sets close under linear combination: zero failures over " +
             std::to_string(pairs) + " sampled pairs (100 per (d, l0), d in {3,4})" +
             (ok ? std::string() : " [" + why + "]"));
  }

  // ---- criterion 10: leading-degree harness completes and renders verdicts
  {
    bool ok = true;
    std::string why, verdicts;
    try {
      for (int d : {3, 4}) {
        const auto rep = nc::remark_test<Fp>(d, d - 1, 3 * d - 2, 40,
                                             nc::derive_seed(kMaster, 1000 + d), kPrime);
        if (rep.realized_l.empty() || rep.cells.empty()) {
          ok = false;
          why = "no realized classes at d=" + std::to_string(d);
        }
        if (!rep.trunc_constant_per_class) {
          ok = false;
          why = "truncated-model column not constant per class at d=" + std::to_string(d);
        }
        verdicts += (verdicts.empty() ? "" : "; ") + std::string("d=") + std::to_string(d) +
                    ": window-model==exact " + (rep.cech_matches_exact ? "yes" : "no") +
                    ", truncated==exact " + (rep.trunc_matches_exact ? "yes" : "no") +
                    ", exact constant per class " +
                    (rep.exact_constant_per_class ? "yes" : "no");
      }
    } catch (const std::exception& e) {
      ok = false;
      why = e.what();
    }
    emit(10, ok,
         "tail-model harness completes for d in {3,4} with verdicts (" + verdicts + ")" +
             (ok ? std::string() : " [" + why + "]"));
  }

  // ---- criterion 11: identical seeds give byte-identical reports
  {
    bool ok = true;
    std::string why;
    auto dump_all = [&](uint64_t seed) {
      std::string s;
      s += nc::survey_to_json(nc::survey_splitting<Fp>(3, 3, 10, seed, kPrime)).dump();
      s += nc::survey_to_json(nc::survey_deform<Fp>(3, 1, 10, seed + 1, kPrime)).dump();
      s += nc::remark_to_json(nc::remark_test<Fp>(3, 2, 7, 10, seed + 2, kPrime)).dump();
      s += nc::leading_to_json(nc::leading_survey<Fp>(3, 10, seed + 3, kPrime)).dump();
      {
        nc::SplitMix64 grng(nc::derive_seed(seed + 4, 10));
        const auto g = nc::random_immersed_curve<Fp>(2, 3, grng, kPrime);
        s += nc::fiber_to_json(nc::fiber_dim_check(g, 1, 10, seed + 4, kPrime)).dump();
      }
      {
        nc::SplitMix64 rng(seed + 5);
        const auto g = nc::random_immersed_curve<Fp>(2, 4, rng, kPrime);
        s += nc::linearity_to_json(nc::level_set_linearity(g, 2, 10, rng, kPrime)).dump();
        s += nc::codim_to_json(nc::codim_one_check(g, nc::random_frame<Fp>(rng, kPrime))).dump();
      }
      return s;
    };
    try {
      const auto a = dump_all(nc::derive_seed(kMaster, 1100));
      const auto b = dump_all(nc::derive_seed(kMaster, 1100));
      if (a != b) {
        ok = false;
        why = "reports differ between identically seeded runs";
      }
      if (a.empty()) {
        ok = false;
        why = "no report bytes produced";
      }
    } catch (const std::exception& e) {
      ok = false;
      why = e.what();
    }
    emit(11, ok,
         "byte-identical JSON across two identically seeded runs of every report family" +
             (ok ? std::string() : " [" + why + "]"));
  }

  std::printf("%s\n", all_pass ? "acceptance: all criteria passed"
                               : "acceptance: at least one criterion FAILED");
  return all_pass ? 0 : 1;
}
