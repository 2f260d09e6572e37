#pragma once

#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include <json.hpp>

#include "normcurve/strata.hpp"

namespace normcurve {

using nlohmann::json;

// Dispatches fn on the scalar type a field spec selects. fn receives a
// std::type_identity tag whose ::type is Rat or Fp.
template <class Fn>
auto with_field(const FieldSpec& fs, Fn&& fn) {
  if (fs.kind == FieldKind::rationals) return fn(std::type_identity<Rat>{});
  return fn(std::type_identity<Fp>{});
}

inline FieldSpec field_from_json(const json& j) {
  if (j.is_string() && j.get<std::string>() == "rational") return FieldSpec::rationals();
  if (j.is_object() && j.contains("prime") && j["prime"].is_number_unsigned())
    return FieldSpec::prime(j["prime"].get<uint64_t>());
  if (j.is_object() && j.contains("prime") && j["prime"].is_number_integer()) {
    const auto v = j["prime"].get<int64_t>();
    if (v > 0) return FieldSpec::prime(static_cast<uint64_t>(v));
  }
  throw std::invalid_argument(
      "field must be \"rational\" or {\"prime\": p} with positive p");
}

inline json field_to_json(const FieldSpec& fs) {
  if (fs.kind == FieldKind::rationals) return json("rational");
  return json{{"prime", fs.p}};
}

template <Scalar K>
K scalar_from_json(const json& j, const FieldSpec& fs);

template <>
inline Rat scalar_from_json<Rat>(const json& j, const FieldSpec&) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rat(j.get<int64_t>());
  if (j.is_number_unsigned()) return Rat(j.get<uint64_t>());
  throw std::invalid_argument("rational scalar must be a string or integer");
}

template <>
inline Fp scalar_from_json<Fp>(const json& j, const FieldSpec& fs) {
  long long v = 0;
  if (j.is_number_integer())
    v = j.get<int64_t>();
  else if (j.is_number_unsigned())
    v = static_cast<long long>(j.get<uint64_t>());
  else if (j.is_string())
    v = std::stoll(j.get<std::string>());
  else
    throw std::invalid_argument("prime-field scalar must be an integer");
  const auto p = static_cast<long long>(fs.p);
  return Fp::from_residue(static_cast<uint64_t>(((v % p) + p) % p), fs.p);
}

template <Scalar K>
json scalar_to_json(const K& x);

template <>
inline json scalar_to_json<Rat>(const Rat& x) {
  return json(format_rational(x));
}

template <>
inline json scalar_to_json<Fp>(const Fp& x) {
  return json(x.residue());
}

inline FieldSpec curve_file_field(const json& j) {
  if (!j.is_object() || !j.contains("field"))
    throw std::invalid_argument("curve file must be an object with a \"field\" key");
  return field_from_json(j["field"]);
}

namespace detail {
inline void check_curve_shape(const json& j, const char* what) {
  for (const char* key : {"n", "d", "forms"})
    if (!j.contains(key))
      throw std::invalid_argument(std::string(what) + " missing key \"" + key + "\"");
  if (!j["n"].is_number_integer() || !j["d"].is_number_integer() || !j["forms"].is_array())
    throw std::invalid_argument(std::string(what) + " has wrong key types");
}
}  // namespace detail

template <Scalar K>
ParamCurve<K> curve_from_json(const json& j, const FieldSpec& fs) {
  detail::check_curve_shape(j, "curve file");
  const int n = j["n"].get<int>();
  const int d = j["d"].get<int>();
  if (fs.kind == FieldKind::prime) check_admissible(fs, d);
  const auto& forms = j["forms"];
  if (static_cast<int>(forms.size()) != n + 1)
    throw std::invalid_argument("curve file: expected n + 1 coefficient arrays");
  std::vector<BinForm<K>> fs_out;
  for (const auto& arr : forms) {
    if (!arr.is_array() || static_cast<int>(arr.size()) != d + 1)
      throw std::invalid_argument("curve file: each form needs d + 1 coefficients");
    std::vector<K> c;
    for (const auto& e : arr) c.push_back(scalar_from_json<K>(e, fs));
    fs_out.emplace_back(d, std::move(c));
  }
  return ParamCurve<K>(n, d, std::move(fs_out));
}

template <Scalar K>
json curve_to_json(const ParamCurve<K>& c, const FieldSpec& fs) {
  json forms = json::array();
  for (const auto& f : c.forms()) {
    json arr = json::array();
    for (const auto& x : f.coeffs()) arr.push_back(scalar_to_json<K>(x));
    forms.push_back(std::move(arr));
  }
  return json{{"field", field_to_json(fs)}, {"n", c.n()}, {"d", c.d()},
              {"forms", std::move(forms)}};
}

// Direction-form files: {"field": ..., "d": ..., "forms": [[...], ...]};
// the field must match the base curve's.
template <Scalar K>
std::vector<BinForm<K>> forms_from_json(const json& j, int expect_d, const FieldSpec& base) {
  if (!j.is_object() || !j.contains("field") || !j.contains("d") || !j.contains("forms"))
    throw std::invalid_argument("forms file needs keys field, d, forms");
  const auto fs = field_from_json(j["field"]);
  if (fs.kind != base.kind || fs.p != base.p)
    throw std::invalid_argument("forms file field differs from the base curve field");
  if (j["d"].get<int>() != expect_d)
    throw std::invalid_argument("forms file degree differs from the base curve degree");
  std::vector<BinForm<K>> out;
  for (const auto& arr : j["forms"]) {
    if (!arr.is_array() || static_cast<int>(arr.size()) != expect_d + 1)
      throw std::invalid_argument("forms file: each form needs d + 1 coefficients");
    std::vector<K> c;
    for (const auto& e : arr) c.push_back(scalar_from_json<K>(e, base));
    out.emplace_back(expect_d, std::move(c));
  }
  if (out.empty()) throw std::invalid_argument("forms file contains no forms");
  return out;
}

inline json validation_to_json(const ValidationReport& r) {
  return json{{"base_point_free", r.base_point_free},
              {"nondegenerate", r.nondegenerate},
              {"immersive", r.immersive},
              {"ok", r.ok()},
              {"witness", r.witness ? json(*r.witness) : json(nullptr)}};
}

inline json type_to_json(const SplittingType& t) {
  return json{{"n", t.n()}, {"d", t.d()}, {"a", t.a_values()}, {"raw", t.raw()}};
}

inline json profile_to_json(const H0Profile& p) {
  json arr = json::array();
  for (const auto& [a, h] : p.entries) arr.push_back(json::array({a, h}));
  return arr;
}

inline std::string format_rate(std::size_t num, std::size_t den) {
  return std::to_string(num) + "/" + std::to_string(den);
}

inline json outcome_to_json(const ComparisonOutcome& o) {
  json j{{"predicted", o.predicted ? json(o.predicted->to_string()) : json(nullptr)},
         {"direct", o.direct ? json(o.direct->to_string()) : json(nullptr)},
         {"match", o.equal},
         {"degenerate_lift", o.degenerate_lift},
         {"predicted_profile", profile_to_json(o.predicted_profile)},
         {"direct_profile", profile_to_json(o.direct_profile)}};
  if (!o.predicted_error.empty()) j["predicted_error"] = o.predicted_error;
  if (!o.direct_error.empty()) j["direct_error"] = o.direct_error;
  if (o.semicontinuity_checked) {
    j["retry_direct"] = o.retry_direct;
    j["semicontinuity_ok"] = o.semicontinuity_ok;
  }
  return j;
}

namespace detail {
inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}
}  // namespace detail

inline json survey_to_json(const SurveyReport& r) {
  json hist = json::object();
  for (const auto& [ty, freq] : r.histogram) hist[ty] = freq;
  json trials = json::array();
  for (const auto& tr : r.trials) {
    json t{{"trial", tr.index}, {"seed", tr.seed}, {"rejected", tr.rejected}};
    if (!tr.rejected) {
      t["direct"] = tr.direct;
      if (r.mode == "deform") {
        t["predicted"] = tr.predicted;
        t["match"] = tr.match;
        t["degenerate_lift"] = tr.degenerate_lift;
      }
      if (!tr.witness.empty()) t["witness"] = tr.witness;
    }
    trials.push_back(std::move(t));
  }
  json j{{"mode", r.mode},
         {"n", r.n},
         {"d", r.d},
         {"count", r.count},
         {"seed", r.seed},
         {"field", r.field},
         {"histogram", std::move(hist)},
         {"rejected", r.rejected},
         {"trials", std::move(trials)},
         {"anomalies", r.anomaly_indices},
         {"preamble", r.preamble}};
  if (r.mode == "deform") {
    j["r"] = r.r;
    j["agreement"] = format_rate(r.matched, r.compared);
  }
  return j;
}

inline std::string survey_csv(const SurveyReport& r) {
  std::string out;
  const bool deform = r.mode == "deform";
  out = deform ? "trial,seed,rejected,predicted,direct,match,degenerate_lift,witness\n"
               : "trial,seed,rejected,type\n";
  for (const auto& tr : r.trials) {
    out += std::to_string(tr.index) + "," + std::to_string(tr.seed) + "," +
           (tr.rejected ? "1" : "0");
    if (deform)
      out += "," + detail::csv_escape(tr.predicted) + "," + detail::csv_escape(tr.direct) +
             "," + (tr.match ? "1" : "0") + "," + (tr.degenerate_lift ? "1" : "0") + "," +
             detail::csv_escape(tr.witness);
    else
      out += "," + detail::csv_escape(tr.direct);
    out += "\n";
  }
  return out;
}

inline json remark_to_json(const RemarkReport& r) {
  json cells = json::array();
  for (const auto& c : r.cells) {
    cells.push_back(json{{"l", c.l},
                         {"a", c.a},
                         {"count", c.count},
                         {"exact", std::vector<std::size_t>(c.exact.begin(), c.exact.end())},
                         {"cech", std::vector<std::size_t>(c.cech.begin(), c.cech.end())},
                         {"trunc", std::vector<std::size_t>(c.trunc.begin(), c.trunc.end())}});
  }
  return json{{"d", r.d},
              {"a_min", r.a_min},
              {"a_max", r.a_max},
              {"samples", r.samples},
              {"zero_classes", r.zero_classes},
              {"rejected", r.rejected},
              {"seed", r.seed},
              {"field", r.field},
              {"frame", r.frame},
              {"cells", std::move(cells)},
              {"realized_l", r.realized_l},
              {"verdicts",
               json{{"exact_constant_per_class", r.exact_constant_per_class},
                    {"cech_matches_exact", r.cech_matches_exact},
                    {"trunc_matches_exact", r.trunc_matches_exact},
                    {"trunc_constant_per_class", r.trunc_constant_per_class}}},
              {"note", r.note}};
}

inline std::string remark_csv(const RemarkReport& r) {
  auto join = [](const std::set<std::size_t>& s) {
    std::string out;
    for (auto v : s) {
      if (!out.empty()) out += "|";
      out += std::to_string(v);
    }
    return out;
  };
  std::string out = "l,a,count,exact,cech,trunc\n";
  for (const auto& c : r.cells)
    out += std::to_string(c.l) + "," + std::to_string(c.a) + "," + std::to_string(c.count) +
           "," + join(c.exact) + "," + join(c.cech) + "," + join(c.trunc) + "\n";
  return out;
}

inline json linearity_to_json(const LinearityReport& r) {
  return json{{"d", r.d},
              {"l0", r.l0},
              {"trials", r.trials},
              {"subspace_dim", r.subspace_dim},
              {"dim_estimate", r.dim_estimate},
              {"closure_failures", r.closure_failures},
              {"nested", r.nested},
              {"frame", r.frame}};
}

inline json codim_to_json(const CodimOneReport& r) {
  return json{{"d", r.d},
              {"rank", r.rank},
              {"kernel_dim", r.kernel_dim},
              {"kernel_contains_forms", r.kernel_contains_forms},
              {"frame", r.frame}};
}

inline json fiber_to_json(const FiberReport& r) {
  json hist = json::object();
  for (const auto& [ty, freq] : r.histogram) hist[ty] = freq;
  json trials = json::array();
  for (const auto& tr : r.trials_log) {
    json t{{"trial", tr.index}, {"seed", tr.seed}};
    if (!tr.predicted.empty()) t["predicted"] = tr.predicted;
    if (!tr.witness.empty()) t["witness"] = tr.witness;
    trials.push_back(std::move(t));
  }
  return json{{"d", r.d},
              {"r", r.r},
              {"trials", r.trials},
              {"fiber_dim", r.fiber_dim},
              {"modal_type", r.modal_type},
              {"modal_rate", format_rate(r.modal_hits, r.counted)},
              {"undecodable", r.undecodable},
              {"histogram", std::move(hist)},
              {"trial_log", std::move(trials)}};
}

inline std::string fiber_csv(const FiberReport& r) {
  std::string out = "trial,seed,predicted,witness\n";
  for (const auto& tr : r.trials_log)
    out += std::to_string(tr.index) + "," + std::to_string(tr.seed) + "," +
           detail::csv_escape(tr.predicted) + "," + detail::csv_escape(tr.witness) + "\n";
  return out;
}

inline json leading_to_json(const LeadingSurveyReport& r) {
  json hist = json::object();
  for (const auto& [l, freq] : r.l_histogram) hist[std::to_string(l)] = freq;
  json lin = json::array();
  for (const auto& lr : r.linearity) lin.push_back(linearity_to_json(lr));
  json trials = json::array();
  for (const auto& tr : r.trials) {
    json t{{"trial", tr.index}, {"seed", tr.seed}, {"rejected", tr.rejected}};
    if (!tr.rejected) t["leading"] = tr.direct;
    trials.push_back(std::move(t));
  }
  return json{{"d", r.d},
              {"count", r.count},
              {"seed", r.seed},
              {"field", r.field},
              {"frame", r.frame},
              {"rejected", r.rejected},
              {"zero_classes", r.zero_classes},
              {"rank_one_rate", format_rate(r.rank_one, r.count - r.rejected)},
              {"leading_histogram", std::move(hist)},
              {"linearity", std::move(lin)},
              {"trials", std::move(trials)},
              {"note", r.note}};
}

inline std::string leading_csv(const LeadingSurveyReport& r) {
  std::string out = "trial,seed,rejected,leading\n";
  for (const auto& tr : r.trials)
    out += std::to_string(tr.index) + "," + std::to_string(tr.seed) + "," +
           (tr.rejected ? "1" : "0") + "," + detail::csv_escape(tr.direct) + "\n";
  return out;
}

}  // namespace normcurve
