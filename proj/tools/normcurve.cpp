#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "normcurve/normcurve.hpp"

namespace nc = normcurve;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;       // unreadable or malformed input
constexpr int kExitNotImmersive = 3;
constexpr int kExitBadBase = 4;     // deformation base not planar/immersed/nondegenerate
constexpr int kExitInvariant = 5;   // sum rule or bounds violated on a computed curve

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  return json::parse(in);
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw std::invalid_argument("cannot write " + out_path);
  out << text;
}

void emit(const json& j, const std::string& out_path) { emit(j.dump(2) + "\n", out_path); }

nc::FieldSpec parse_field_flag(const std::string& s, int degree) {
  if (s == "rational") return nc::FieldSpec::rationals();
  const auto fs = nc::FieldSpec::prime(std::stoull(s));
  nc::check_admissible(fs, degree);
  return fs;
}

int run_validate(const std::string& file) {
  const json j = load_json(file);
  const auto fs = nc::curve_file_field(j);
  return nc::with_field(fs, [&](auto tag) {
    using K = typename decltype(tag)::type;
    const auto c = nc::curve_from_json<K>(j, fs);
    const auto rep = nc::validate(c);
    emit(nc::validation_to_json(rep), "");
    return rep.immersive && rep.base_point_free ? kExitOk : kExitNotImmersive;
  });
}

int run_split(const std::string& file, bool with_profile) {
  const json j = load_json(file);
  const auto fs = nc::curve_file_field(j);
  return nc::with_field(fs, [&](auto tag) {
    using K = typename decltype(tag)::type;
    const auto c = nc::curve_from_json<K>(j, fs);
    const auto rep = nc::validate(c);
    if (!rep.immersive) {
      emit(nc::validation_to_json(rep), "");
      return kExitNotImmersive;
    }
    const auto profile = nc::h0_profile(c);
    const auto ty = nc::profile_to_type(profile, c.n(), c.d());
    json out = nc::type_to_json(ty);
    if (with_profile) out["profile"] = nc::profile_to_json(profile);
    emit(out, "");
    return kExitOk;
  });
}

// Shared by predict and compare: parse the base, enforce the planar
// immersed nondegenerate contract (exit 4 on failure), load or draw ts.
template <class K>
struct BaseBundle {
  nc::ParamCurve<K> g;
  nc::FieldSpec fs;
};

template <class K>
std::vector<nc::BinForm<K>> gather_ts(const nc::ParamCurve<K>& g, const nc::FieldSpec& fs,
                                      const std::vector<std::string>& t_files, int r,
                                      nc::SplitMix64& rng) {
  std::vector<nc::BinForm<K>> ts;
  if (!t_files.empty()) {
    for (const auto& path : t_files) {
      auto part = nc::forms_from_json<K>(load_json(path), g.d(), fs);
      ts.insert(ts.end(), part.begin(), part.end());
    }
  } else {
    for (int k = 0; k < r; ++k) ts.push_back(nc::bf_random<K>(g.d(), rng, fs));
  }
  return ts;
}

int run_predict(const std::string& file, const std::vector<std::string>& t_files, int r,
                uint64_t seed) {
  const json j = load_json(file);
  const auto fs = nc::curve_file_field(j);
  return nc::with_field(fs, [&](auto tag) {
    using K = typename decltype(tag)::type;
    const auto g = nc::curve_from_json<K>(j, fs);
    const auto rep = nc::validate(g);
    if (g.n() != 2 || !rep.immersive || !rep.nondegenerate) {
      json out = nc::validation_to_json(rep);
      out["error"] = "base must be an immersed nondegenerate plane curve";
      emit(out, "");
      return kExitBadBase;
    }
    nc::SplitMix64 rng(nc::derive_seed(seed, 0));
    const auto ts = gather_ts<K>(g, fs, t_files, r, rng);
    const auto profile = nc::predicted_profile(g, ts);
    json out{{"n", g.n()},
             {"d", g.d()},
             {"field", fs.describe()},
             {"r", ts.size()},
             {"seed", seed},
             {"ts_source", t_files.empty() ? "random" : "files"},
             {"profile", nc::profile_to_json(profile)}};
    try {
      const auto ty = nc::profile_to_type(profile, 2 + static_cast<int>(ts.size()), g.d());
      out["predicted"] = ty.to_string();
      out["type"] = nc::type_to_json(ty);
    } catch (const std::invalid_argument& e) {
      out["predicted"] = nullptr;
      out["predicted_error"] = e.what();
    }
    emit(out, "");
    return kExitOk;
  });
}

int run_compare(const std::string& file, const std::vector<std::string>& t_files, int r,
                const std::string& eps_flag, std::size_t trials, uint64_t seed) {
  const json j = load_json(file);
  const auto fs = nc::curve_file_field(j);
  return nc::with_field(fs, [&](auto tag) {
    using K = typename decltype(tag)::type;
    const auto g = nc::curve_from_json<K>(j, fs);
    const auto rep = nc::validate(g);
    if (g.n() != 2 || !rep.immersive || !rep.nondegenerate) {
      json out = nc::validation_to_json(rep);
      out["error"] = "base must be an immersed nondegenerate plane curve";
      emit(out, "");
      return kExitBadBase;
    }
    json rows = json::array();
    std::size_t compared = 0, matched = 0;
    for (std::size_t k = 0; k < trials; ++k) {
      const uint64_t trial_seed = nc::derive_seed(seed, k);
      nc::SplitMix64 rng(trial_seed);
      nc::DeformationSpec<K> spec{g, gather_ts<K>(g, fs, t_files, r, rng), K(1)};
      if (eps_flag == "random")
        spec.epsilon = nc::FieldTraits<K>::random_nonzero(rng, fs);
      else
        spec.epsilon = nc::scalar_from_json<K>(json(eps_flag), fs);
      const auto out = nc::compare(spec, &rng, &fs);
      json row = nc::outcome_to_json(out);
      row["trial"] = k;
      row["seed"] = trial_seed;
      row["epsilon"] = nc::FieldTraits<K>::to_string(spec.epsilon);
      rows.push_back(std::move(row));
      if (!out.degenerate_lift) {
        ++compared;
        if (out.equal) ++matched;
      }
    }
    emit(json{{"n", g.n()},
              {"d", g.d()},
              {"field", fs.describe()},
              {"seed", seed},
              {"trials", rows},
              {"agreement", nc::format_rate(matched, compared)}},
         "");
    return kExitOk;
  });
}

int run_survey(const std::string& mode, int n, int d, int r, std::size_t count, uint64_t seed,
               const std::string& field_flag, const std::string& output,
               const std::string& out_path) {
  if (d < 1) throw std::invalid_argument("survey: --d is required and must be >= 1");
  const auto fs = parse_field_flag(field_flag, d);
  return nc::with_field(fs, [&](auto tag) {
    using K = typename decltype(tag)::type;
    if (mode == "splitting") {
      if (n < 2) throw std::invalid_argument("splitting survey: --n >= 2 is required");
      const auto rep = nc::survey_splitting<K>(n, d, count, seed, fs);
      emit(output == "csv" ? std::string(nc::survey_csv(rep))
                           : nc::survey_to_json(rep).dump(2) + "\n",
           out_path);
      return kExitOk;
    }
    if (mode == "deform") {
      const auto rep = nc::survey_deform<K>(d, r, count, seed, fs);
      emit(output == "csv" ? std::string(nc::survey_csv(rep))
                           : nc::survey_to_json(rep).dump(2) + "\n",
           out_path);
      return kExitOk;
    }
    if (mode == "leading") {
      const auto rep = nc::leading_survey<K>(d, count, seed, fs);
      emit(output == "csv" ? std::string(nc::leading_csv(rep))
                           : nc::leading_to_json(rep).dump(2) + "\n",
           out_path);
      return kExitOk;
    }
    if (mode == "fiber") {
      nc::SplitMix64 grng(nc::derive_seed(seed, count));
      const auto g = nc::random_immersed_curve<K>(2, d, grng, fs);
      auto rep = nc::fiber_dim_check(g, r, count, seed, fs);
      json out = nc::fiber_to_json(rep);
      out["base"] = nc::curve_to_json(g, fs);
      out["seed"] = seed;
      emit(output == "csv" ? std::string(nc::fiber_csv(rep)) : out.dump(2) + "\n", out_path);
      return kExitOk;
    }
    throw std::invalid_argument("unknown survey mode " + mode);
  });
}

int run_remark(int d, int a_min, int a_max, int samples, uint64_t seed,
               const std::string& field_flag, const std::string& output,
               const std::string& out_path) {
  if (a_min < 0) a_min = d - 1;
  if (a_max < 0) a_max = 3 * d - 2;
  const auto fs = parse_field_flag(field_flag, d);
  return nc::with_field(fs, [&](auto tag) {
    using K = typename decltype(tag)::type;
    const auto rep = nc::remark_test<K>(d, a_min, a_max, samples, seed, fs);
    emit(output == "csv" ? std::string(nc::remark_csv(rep))
                         : nc::remark_to_json(rep).dump(2) + "\n",
         out_path);
    return kExitOk;
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "normcurve: exact splitting types of normal bundles of rational curves,\n"
      "deformation prediction, local tail model, and sampling surveys"};
  app.require_subcommand(1);

  std::string file, out_path, output = "json", field_flag = "1000003";
  std::string eps_flag = "random", mode;
  std::vector<std::string> t_files;
  bool with_profile = false;
  int n = 0, d = 0, r = 1, a_min = -1, a_max = -1, samples = 100;
  std::size_t count = 100, trials = 1;
  uint64_t seed = 0;

  std::function<int()> action;

  auto* v = app.add_subcommand("validate", "check base-point-freeness, nondegeneracy, immersivity");
  v->add_option("file", file, "curve JSON file")->required();
  v->callback([&] { action = [&] { return run_validate(file); }; });

  auto* s = app.add_subcommand("split", "compute the splitting type of the normal bundle");
  s->add_option("file", file, "curve JSON file")->required();
  s->add_flag("--profile", with_profile, "include the twist-by-twist h0 table");
  s->callback([&] { action = [&] { return run_split(file, with_profile); }; });

  auto* p = app.add_subcommand("predict", "predicted splitting type of a first-order lift");
  p->add_option("file", file, "base plane curve JSON file")->required();
  p->add_option("--t", t_files, "direction forms JSON file (repeatable)");
  p->add_option("--r", r, "number of random directions when no --t is given");
  p->add_option("--seed", seed, "seed for random directions");
  p->callback([&] { action = [&] { return run_predict(file, t_files, r, seed); }; });

  auto* c = app.add_subcommand("compare", "predicted versus direct splitting of the lift");
  c->add_option("file", file, "base plane curve JSON file")->required();
  c->add_option("--t", t_files, "direction forms JSON file (repeatable)");
  c->add_option("--r", r, "number of random directions when no --t is given");
  c->add_option("--eps", eps_flag, "epsilon: a scalar literal, or 'random'");
  c->add_option("--trials", trials, "number of trials");
  c->add_option("--seed", seed, "master seed");
  c->callback([&] { action = [&] { return run_compare(file, t_files, r, eps_flag, trials, seed); }; });

  auto* sv = app.add_subcommand("survey", "randomized surveys over curves and deformations");
  sv->add_option("--mode", mode, "splitting | deform | leading | fiber")->required();
  sv->add_option("--n", n, "ambient dimension (splitting mode)");
  sv->add_option("--d", d, "curve degree")->required();
  sv->add_option("--r", r, "number of deformation directions");
  sv->add_option("--count", count, "number of trials");
  sv->add_option("--seed", seed, "master seed");
  sv->add_option("--field", field_flag, "'rational' or a prime modulus");
  sv->add_option("--output", output, "json | csv");
  sv->add_option("--out", out_path, "write report to this path instead of stdout");
  sv->callback([&] {
    action = [&] { return run_survey(mode, n, d, r, count, seed, field_flag, output, out_path); };
  });

  auto* rm = app.add_subcommand("remark-test", "leading-degree constancy harness for the tail model");
  rm->add_option("--d", d, "curve degree (>= 3)")->required();
  rm->add_option("--a-min", a_min, "lowest twist (default d-1)");
  rm->add_option("--a-max", a_max, "highest twist (default 3d-2)");
  rm->add_option("--samples", samples, "number of samples");
  rm->add_option("--seed", seed, "master seed");
  rm->add_option("--field", field_flag, "'rational' or a prime modulus");
  rm->add_option("--output", output, "json | csv");
  rm->add_option("--out", out_path, "write report to this path instead of stdout");
  rm->callback([&] {
    action = [&] {
      return run_remark(d, a_min, a_max, samples, seed, field_flag, output, out_path);
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    return action ? action() : kExitInput;
  } catch (const nc::SurveyInvariantError& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return kExitInvariant;
  } catch (const json::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
