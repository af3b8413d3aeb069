#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "harness.hpp"
#include "modular.hpp"
#include "properties.hpp"
#include "step_fn.hpp"
#include "witness.hpp"

namespace modagg {

/** Insertion-ordered JSON keeps every emitted document byte-stable. */
using Json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "0.1.0";

namespace detail {
inline ParseError json_error(const std::string& where, const std::string& what) {
  return ParseError(where + ": " + what);
}

inline const Json& member(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) throw json_error(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw json_error(where, "missing key '" + std::string(key) + "'");
  return *it;
}

inline std::string string_member(const Json& j, const char* key, const std::string& where) {
  const Json& v = member(j, key, where);
  if (!v.is_string()) throw json_error(where, "key '" + std::string(key) + "' must be a string");
  return v.get<std::string>();
}
}  // namespace detail

/** {"pieces": [{"upto": "1", "value": "3"}, ...], "tail": "1"} — the k-th
 * piece holds on the interval up to and including its "upto". */
inline Json step_fn_to_json(const StepFn& f) {
  Json pieces = Json::array();
  for (std::size_t k = 0; k < f.breakpoints().size(); ++k)
    pieces.push_back({{"upto", rat_str(f.breakpoints()[k])}, {"value", f.values()[k].str()}});
  return {{"pieces", std::move(pieces)}, {"tail", f.values().back().str()}};
}

inline StepFn step_fn_from_json(const Json& j) {
  const std::string where = "step function";
  const Json& pieces = detail::member(j, "pieces", where);
  if (!pieces.is_array()) throw detail::json_error(where, "'pieces' must be an array");
  std::vector<Rat> breakpoints;
  std::vector<ExtReal> values;
  for (const Json& p : pieces) {
    breakpoints.push_back(parse_rat(detail::string_member(p, "upto", where + " piece")));
    values.push_back(ExtReal::parse(detail::string_member(p, "value", where + " piece")));
  }
  values.push_back(ExtReal::parse(detail::string_member(j, "tail", where)));
  auto made = StepFn::make(std::move(breakpoints), std::move(values));
  if (auto* rising = std::get_if<NotNonincreasing>(&made))
    throw detail::json_error(where,
                             "values rise at piece " + std::to_string(rising->index) +
                                 "; a distance profile must be nonincreasing");
  return std::get<StepFn>(std::move(made));
}

namespace detail {
inline std::pair<std::string, std::string> split_pair_key(const std::string& key,
                                                          const std::string& where) {
  auto bar = key.find('|');
  if (bar == std::string::npos || key.find('|', bar + 1) != std::string::npos)
    throw json_error(where, "entry key '" + key + "' must have the form 'from|to'");
  return {key.substr(0, bar), key.substr(bar + 1)};
}
}  // namespace detail

/** {"points": [...], "w": {"a|b": <step function>, ...}}; the diagonal is
 * implicitly zero and absent off-diagonal entries default to the zero
 * function (distance zero at every exposure). */
inline Json space_to_json(const ModularSpace& s) {
  Json w = Json::object();
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (i == j || s.entry(i, j).is_zero()) continue;
      w[s.label(i) + "|" + s.label(j)] = step_fn_to_json(s.entry(i, j));
    }
  return {{"points", s.points()}, {"w", std::move(w)}};
}

inline ModularSpace space_from_json(const Json& j) {
  const std::string where = "modular space";
  const Json& points = detail::member(j, "points", where);
  if (!points.is_array() || points.empty())
    throw detail::json_error(where, "'points' must be a nonempty array of labels");
  std::vector<std::string> labels;
  for (const Json& p : points) {
    if (!p.is_string()) throw detail::json_error(where, "point labels must be strings");
    labels.push_back(p.get<std::string>());
  }
  ModularSpace s(std::move(labels));
  if (auto it = j.find("w"); it != j.end()) {
    if (!it->is_object()) throw detail::json_error(where, "'w' must be an object");
    for (const auto& [key, value] : it->items()) {
      auto [from, to] = detail::split_pair_key(key, where);
      std::size_t a = s.index_of(from), b = s.index_of(to);
      if (a == b)
        throw detail::json_error(where, "entry '" + key + "' names the diagonal, which is "
                                        "implicitly zero and cannot be set");
      s.set_entry(a, b, step_fn_from_json(value));
    }
  }
  return s;
}

/** {"points": [...], "d": {"a|b": "3/2", ...}}; diagonal implicitly zero,
 * absent entries default to 0. */
inline Json qpm_to_json(const FiniteQpm& d) {
  Json entries = Json::object();
  for (std::size_t i = 0; i < d.size(); ++i)
    for (std::size_t j = 0; j < d.size(); ++j) {
      if (i == j || d.at(i, j).is_zero()) continue;
      entries[d.points()[i] + "|" + d.points()[j]] = d.at(i, j).str();
    }
  return {{"points", d.points()}, {"d", std::move(entries)}};
}

inline FiniteQpm qpm_from_json(const Json& j) {
  const std::string where = "distance table";
  const Json& points = detail::member(j, "points", where);
  if (!points.is_array() || points.empty())
    throw detail::json_error(where, "'points' must be a nonempty array of labels");
  std::vector<std::string> labels;
  for (const Json& p : points) {
    if (!p.is_string()) throw detail::json_error(where, "point labels must be strings");
    labels.push_back(p.get<std::string>());
  }
  FiniteQpm d(std::move(labels));
  auto index_of = [&](const std::string& label) {
    for (std::size_t i = 0; i < d.points().size(); ++i)
      if (d.points()[i] == label) return i;
    throw detail::json_error(where, "unknown point '" + label + "'");
  };
  if (auto it = j.find("d"); it != j.end()) {
    if (!it->is_object()) throw detail::json_error(where, "'d' must be an object");
    for (const auto& [key, value] : it->items()) {
      auto [from, to] = detail::split_pair_key(key, where);
      std::size_t a = index_of(from), b = index_of(to);
      if (a == b)
        throw detail::json_error(where, "entry '" + key + "' names the diagonal, which is "
                                        "implicitly zero and cannot be set");
      if (!value.is_string()) throw detail::json_error(where, "distances must be strings");
      d.set(a, b, ExtReal::parse(value.get<std::string>()));
    }
  }
  return d;
}

inline Json witness_to_json(const Witness& w) {
  Json tuples = Json::array();
  for (const Tuple& t : w.tuples) {
    Json row = Json::array();
    for (const ExtReal& v : t) row.push_back(v.str());
    tuples.push_back(std::move(row));
  }
  Json out = {{"kind", witness_kind_name(w.kind)}, {"tuples", std::move(tuples)}};
  if (w.kind == WitnessKind::SymTriplet) out["apex"] = w.apex;
  return out;
}

inline Json verdict_to_json(const Verdict& v) {
  switch (v.status) {
    case VerdictStatus::ExactMember:
      return {{"status", verdict_status_name(v.status)}, {"reason", v.reason}};
    case VerdictStatus::Consistent:
      return {{"status", verdict_status_name(v.status)}, {"seed", v.seed},
              {"samples", v.samples}};
    case VerdictStatus::Refuted: {
      Json out = {{"status", verdict_status_name(v.status)}};
      out["witness"] = witness_to_json(*v.witness);
      out["via_transfer"] = v.via_transfer;
      return out;
    }
  }
  return Json::object();
}

inline Json family_to_json(const FamilyVerdict& f) {
  Json out = {{"name", f.name}, {"aliases", f.aliases},
              {"status", verdict_status_name(f.status)}};
  if (f.status == VerdictStatus::Refuted) {
    out["refuted_by"] = f.refuted_by;
    out["witness"] = witness_to_json(*f.witness);
    out["via_transfer"] = f.witness_via_transfer;
  }
  return out;
}

inline Json classification_to_json(const Classification& c) {
  Json checks = {{"zero", verdict_to_json(c.zero)},
                 {"isotone", verdict_to_json(c.isotone)},
                 {"subadditive", verdict_to_json(c.subadditive)},
                 {"asym_triplets", verdict_to_json(c.asym_triplets)},
                 {"sym_triplets", verdict_to_json(c.sym_triplets)},
                 {"kernel_exact", verdict_to_json(c.kernel_exact)},
                 {"kernel_some", verdict_to_json(c.kernel_some)}};
  return {{"spec", c.spec},
          {"arity", c.arity},
          {"seed", c.seed},
          {"samples", c.samples},
          {"checks", std::move(checks)},
          {"families", Json::array({family_to_json(c.products_all),
                                    family_to_json(c.products_separated),
                                    family_to_json(c.sets_separated)})},
          {"weights_include_inf", c.weights_include_inf}};
}

inline Json violation_to_json(const ModularSpace& s, const ModularViolation& v) {
  Json out = {{"axiom", axiom_name(v.axiom)}, {"x", s.label(v.x)}, {"y", s.label(v.y)}};
  if (v.via) out["via"] = s.label(*v.via);
  if (v.t) out["t"] = rat_str(*v.t);
  return out;
}

inline Json aggregation_failure_to_json(const AggregationFailure& f) {
  if (f.kind == AggregationFailure::Kind::DiagonalNotZero)
    return {{"kind", "diagonal_not_zero"}, {"value", f.diagonal_value.str()}};
  return {{"kind", "not_nonincreasing"},
          {"from", f.from},
          {"to", f.to},
          {"piece_index", f.piece_index}};
}

inline Json harness_report_to_json(const HarnessReport& r) {
  Json conditions = Json::array();
  for (const ConditionOutcome& c : r.conditions) {
    Json row = {{"name", c.name}, {"refuted", c.refuted}};
    if (c.witness) {
      row["witness"] = witness_to_json(*c.witness);
      row["via_transfer"] = c.via_transfer;
    }
    conditions.push_back(std::move(row));
  }
  Json lifting = {{"function_refuted", r.lifting.function_refuted},
                  {"lifted_refuted", r.lifting.lifted_refuted},
                  {"co_occur", r.lifting.co_occur},
                  {"one_sided", r.lifting.one_sided}};
  if (!r.lifting.function_note.empty()) lifting["function_note"] = r.lifting.function_note;
  if (!r.lifting.lifted_note.empty()) lifting["lifted_note"] = r.lifting.lifted_note;
  if (r.lifting.extracted) lifting["extracted"] = witness_to_json(*r.lifting.extracted);
  Json semantic = {{"refuted_route", r.semantic.refuted_route}};
  if (r.semantic.refuted_route) {
    semantic["violated"] = r.semantic.violated;
  } else {
    semantic["aggregations"] = r.semantic.aggregations;
    semantic["clean"] = r.semantic.clean;
  }
  semantic["inconsistent"] = r.semantic.inconsistent;
  semantic["detail"] = r.semantic.detail;
  return {{"spec", r.spec},
          {"arity", r.arity},
          {"seed", r.seed},
          {"samples", r.samples},
          {"classification", classification_to_json(r.classification)},
          {"conditions", std::move(conditions)},
          {"conditions_agree", r.conditions_agree},
          {"lifting", std::move(lifting)},
          {"semantic", std::move(semantic)},
          {"consistent", r.consistent}};
}

}  // namespace modagg
