#pragma once

#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "json_io.hpp"

namespace modagg {
namespace cli_detail {

/** Option values may be inline JSON or '@path' to read a file. */
inline std::string load_text(const std::string& arg) {
  if (arg.empty() || arg[0] != '@') return arg;
  std::ifstream in(arg.substr(1), std::ios::binary);
  if (!in) throw ParseError("cannot read file '" + arg.substr(1) + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline Json parse_json_arg(const std::string& arg, const std::string& what) {
  Json j = Json::parse(load_text(arg), nullptr, false);
  if (j.is_discarded()) throw ParseError(what + ": malformed JSON");
  return j;
}

inline std::string tuple_csv(const Tuple& t) {
  std::string s;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) s += ",";
    s += t[i].str();
  }
  return s;
}

/** Renders a witness as replayable invocations of `agg eval`, one line per
 * evaluation, followed by the violated comparison. */
inline std::string witness_human(const Witness& w, const Aggregator& f) {
  auto line = [&](const Tuple& t) {
    return "  modagg agg eval --spec '" + f.describe() + "' --arity " +
           std::to_string(f.arity()) + " --at " + tuple_csv(t) + "   -> " + f.eval(t).str() +
           "\n";
  };
  auto fval = [&](const Tuple& t) { return f.eval(t).str(); };
  switch (w.kind) {
    case WitnessKind::NotZeroAtZero: {
      Tuple z = zero_tuple(f.arity());
      return "nonzero at the zero tuple:\n" + line(z) + "  expected 0, got " + fval(z) + "\n";
    }
    case WitnessKind::Isotone: {
      const Tuple &x = w.tuples[0], &y = w.tuples[1];
      return "order violation: x is componentwise below y but F(x) > F(y)\n" + line(x) + line(y) +
             "  " + fval(x) + " > " + fval(y) + "\n";
    }
    case WitnessKind::Subadditive: {
      const Tuple &x = w.tuples[0], &y = w.tuples[1];
      Tuple s = tuple_add(x, y);
      return "subadditivity violation: F(x+y) > F(x) + F(y)\n" + line(s) + line(x) + line(y) +
             "  " + fval(s) + " > " + fval(x) + " + " + fval(y) + "\n";
    }
    case WitnessKind::AsymTriplet: {
      const Tuple &a = w.tuples[0], &b = w.tuples[1], &c = w.tuples[2];
      return "triplet violation: a <= b + c componentwise but F(a) > F(b) + F(c)\n" + line(a) +
             line(b) + line(c) + "  " + fval(a) + " > " + fval(b) + " + " + fval(c) + "\n";
    }
    case WitnessKind::SymTriplet: {
      const std::size_t ap = static_cast<std::size_t>(w.apex);
      const Tuple &p = w.tuples[ap], &q = w.tuples[(ap + 1) % 3], &r = w.tuples[(ap + 2) % 3];
      return "triangle triplet violation at apex " + std::to_string(w.apex) +
             ": F(apex) > sum of the other two images\n" + line(p) + line(q) + line(r) + "  " +
             fval(p) + " > " + fval(q) + " + " + fval(r) + "\n";
    }
    case WitnessKind::KernelExact:
      return "nonzero tuple mapped to 0:\n" + line(w.tuples[0]) + "\n";
    case WitnessKind::KernelSome:
      return "everywhere-nonzero tuple mapped to 0:\n" + line(w.tuples[0]) + "\n";
  }
  return "";
}

inline std::string space_human(const ModularSpace& s) {
  std::string o = "points:";
  for (const std::string& p : s.points()) o += " " + p;
  o += "\n";
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (i == j || s.entry(i, j).is_zero()) continue;
      o += "  w(" + s.label(i) + ", " + s.label(j) + ") = " + s.entry(i, j).str() + "\n";
    }
  return o;
}

inline std::string violation_human(const ModularSpace& s, const ModularViolation& v) {
  std::string o = std::string(axiom_name(v.axiom)) + " fails at (" + s.label(v.x) + ", " +
                  s.label(v.y) + ")";
  if (v.via) o += " via " + s.label(*v.via);
  if (v.t) o += " at t = " + rat_str(*v.t);
  switch (v.axiom) {
    case ModularViolation::Axiom::M2: break;
    case ModularViolation::Axiom::M3: o += ": both directions vanish identically"; break;
    case ModularViolation::Axiom::M4: o += ": the two directions differ"; break;
  }
  return o + "\n";
}

inline std::string failure_human(const AggregationFailure& f) {
  if (f.kind == AggregationFailure::Kind::DiagonalNotZero)
    return "aggregation rejected: the implicit diagonal would be the nonzero constant " +
           f.diagonal_value.str() + "\n";
  return "aggregation rejected: composite distance from " + f.from + " to " + f.to +
         " rises at piece " + std::to_string(f.piece_index) + "\n";
}

inline std::string verdict_human(const std::string& name, const Verdict& v,
                                 const Aggregator& f) {
  std::string o = name + ": ";
  switch (v.status) {
    case VerdictStatus::ExactMember: return o + "exact member (" + v.reason + ")\n";
    case VerdictStatus::Consistent:
      return o + "consistent on " + std::to_string(v.samples) + " samples (seed " +
             std::to_string(v.seed) + ")\n";
    case VerdictStatus::Refuted:
      o += v.via_transfer ? "refuted (witness carried over by transfer)\n" : "refuted\n";
      return o + witness_human(*v.witness, f);
  }
  return o;
}

}  // namespace cli_detail

/** Entry point shared by the binary and the in-process tests. Returns 0 when
 * the requested check holds or the requested object was produced, 1 when a
 * law was refuted or violated (a witness is printed), 2 on usage or parse
 * errors. */
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  using cli_detail::load_text;
  using cli_detail::parse_json_arg;
  CLI::App app{"exact step-function distance profiles, modular spaces and aggregation"};
  app.name("modagg");
  app.fallthrough();
  std::string format = "human";
  app.add_option("--format", format, "output format")
      ->check(CLI::IsMember({"human", "json"}))
      ->capture_default_str();
  int code = 0;
  auto emit = [&](const Json& doc, const std::string& human) {
    if (format == "json")
      out << doc.dump(2) << "\n";
    else
      out << human;
  };

  auto* nabla = app.add_subcommand("nabla", "step-function operations");
  nabla->require_subcommand(1);
  {
    std::string f_arg, g_arg, t_arg;
    auto* oplus_cmd = nabla->add_subcommand("oplus", "exact infimal convolution of two profiles");
    oplus_cmd->add_option("--f", f_arg, "step function (JSON or @file)")->required();
    oplus_cmd->add_option("--g", g_arg, "step function (JSON or @file)")->required();
    oplus_cmd->callback([&] {
      StepFn f = step_fn_from_json(parse_json_arg(f_arg, "--f"));
      StepFn g = step_fn_from_json(parse_json_arg(g_arg, "--g"));
      StepFn h = oplus(f, g);
      emit(step_fn_to_json(h), h.str() + "\n");
    });

    auto* leq_cmd = nabla->add_subcommand(
        "leq", "decide f below g in the profile order (g pointwise below f)");
    leq_cmd->add_option("--f", f_arg, "step function (JSON or @file)")->required();
    leq_cmd->add_option("--g", g_arg, "step function (JSON or @file)")->required();
    leq_cmd->callback([&] {
      StepFn f = step_fn_from_json(parse_json_arg(f_arg, "--f"));
      StepFn g = step_fn_from_json(parse_json_arg(g_arg, "--g"));
      if (auto t = leq_witness(g, f)) {
        code = 1;
        emit({{"holds", false},
              {"t", rat_str(*t)},
              {"f_at_t", f.eval(*t).str()},
              {"g_at_t", g.eval(*t).str()}},
             "fails at t = " + rat_str(*t) + ": g(t) = " + g.eval(*t).str() +
                 " exceeds f(t) = " + f.eval(*t).str() + "\n");
      } else {
        emit({{"holds", true}}, "holds\n");
      }
    });

    auto* eval_cmd2 = nabla->add_subcommand("eval", "evaluate a profile at a positive exposure");
    eval_cmd2->add_option("--f", f_arg, "step function (JSON or @file)")->required();
    eval_cmd2->add_option("--t", t_arg, "positive rational exposure")->required();
    eval_cmd2->callback([&] {
      StepFn f = step_fn_from_json(parse_json_arg(f_arg, "--f"));
      ExtReal v = f.eval(parse_rat(t_arg));
      emit({{"value", v.str()}}, v.str() + "\n");
    });
  }

  auto* modular = app.add_subcommand("modular", "modular space construction and validation");
  modular->require_subcommand(1);
  {
    std::string space_arg, level_arg, spaces_arg, agg_arg, g_arg2, d_arg;
    std::size_t cap_points = ProductCaps{}.max_points;
    std::size_t cap_factors = ProductCaps{}.max_factors;

    auto* validate_cmd = modular->add_subcommand("validate", "check the modular axioms");
    validate_cmd->add_option("--space", space_arg, "modular space (JSON or @file)")->required();
    validate_cmd
        ->add_option("--level", level_arg,
                     "pseudo | quasi_metric | metric_pseudo | metric")
        ->required();
    validate_cmd->callback([&] {
      ModularSpace s = space_from_json(parse_json_arg(space_arg, "--space"));
      Level level = level_from_string(level_arg);
      auto violations = validate(s, level);
      if (violations.empty()) {
        emit({{"valid", true}, {"level", level_name(level)}},
             std::string("valid at level ") + level_name(level) + "\n");
      } else {
        code = 1;
        Json vj = Json::array();
        std::string human;
        for (const auto& v : violations) {
          vj.push_back(violation_to_json(s, v));
          human += cli_detail::violation_human(s, v);
        }
        emit({{"valid", false}, {"level", level_name(level)}, {"violations", std::move(vj)}},
             human);
      }
    });

    auto aggregate = [&](const std::string& spaces_text, const std::string& agg_text,
                                    bool product, ProductCaps caps) {
      Json arr = parse_json_arg(spaces_text, "--spaces");
      if (!arr.is_array() || arr.empty())
        throw ParseError("--spaces: expected a nonempty JSON array of spaces");
      std::vector<ModularSpace> spaces;
      for (const Json& j : arr) spaces.push_back(space_from_json(j));
      Aggregator f = Aggregator::parse_spec(agg_text, spaces.size());
      auto r = product ? product_space(spaces, f, caps) : set_aggregate(spaces, f);
      if (const AggregationFailure* fail = std::get_if<AggregationFailure>(&r)) {
        code = 1;
        emit(aggregation_failure_to_json(*fail), cli_detail::failure_human(*fail));
      } else {
        const ModularSpace& s = std::get<ModularSpace>(r);
        emit(space_to_json(s), cli_detail::space_human(s));
      }
    };

    auto* product_cmd =
        modular->add_subcommand("product", "aggregate spaces over the product point set");
    product_cmd->add_option("--spaces", spaces_arg, "JSON array of spaces (or @file)")->required();
    product_cmd->add_option("--agg", agg_arg, "aggregator spec; arity = number of spaces")
        ->required();
    product_cmd->add_option("--max-points", cap_points, "refuse larger products")
        ->capture_default_str();
    product_cmd->add_option("--max-factors", cap_factors, "refuse more factors")
        ->capture_default_str();
    product_cmd->callback(
        [&] { aggregate(spaces_arg, agg_arg, true, ProductCaps{cap_points, cap_factors}); });

    auto* set_cmd = modular->add_subcommand(
        "set-aggregate", "aggregate parameterized distances on one shared point set");
    set_cmd->add_option("--spaces", spaces_arg, "JSON array of spaces (or @file)")->required();
    set_cmd->add_option("--agg", agg_arg, "aggregator spec; arity = number of spaces")->required();
    set_cmd->callback([&] { aggregate(spaces_arg, agg_arg, false, ProductCaps{}); });

    auto* fromgd = modular->add_subcommand(
        "from-gd", "build the space w(t, x, y) = d(x, y) * g(t) from a distance table");
    fromgd->add_option("--g", g_arg2, "step function (JSON or @file)")->required();
    fromgd->add_option("--d", d_arg, "distance table (JSON or @file)")->required();
    fromgd->callback([&] {
      StepFn g = step_fn_from_json(parse_json_arg(g_arg2, "--g"));
      FiniteQpm d = qpm_from_json(parse_json_arg(d_arg, "--d"));
      if (auto vs = validate_qpm(d); !vs.empty()) {
        code = 1;
        Json vj = Json::array();
        std::string human;
        for (const auto& v : vs) {
          vj.push_back({{"x", d.points()[v.x]}, {"y", d.points()[v.y]}, {"via", d.points()[v.via]}});
          human += "triangle inequality fails at (" + d.points()[v.x] + ", " + d.points()[v.y] +
                   ") via " + d.points()[v.via] + "\n";
        }
        emit({{"valid", false}, {"violations", std::move(vj)}}, human);
        return;
      }
      ModularSpace s = from_gd(g, d);
      emit(space_to_json(s), cli_detail::space_human(s));
    });
  }

  auto* agg = app.add_subcommand("agg", "aggregator parsing, evaluation and classification");
  agg->require_subcommand(1);
  {
    std::string spec_arg, at_arg;
    std::size_t arity_arg = 0;
    std::uint64_t seed_arg = 0;
    std::size_t samples_arg = 512;

    auto* parse_cmd = agg->add_subcommand("parse", "parse a spec and echo its canonical form");
    parse_cmd->add_option("--spec", spec_arg, "builtin:<name>[:params] or expr:<expression>")
        ->required();
    parse_cmd->add_option("--arity", arity_arg, "number of arguments")->required();
    parse_cmd->callback([&] {
      Aggregator f = Aggregator::parse_spec(spec_arg, arity_arg);
      emit({{"spec", f.describe()}, {"arity", f.arity()}, {"builtin", f.is_builtin()}},
           f.describe() + "\n");
    });

    auto* eval_cmd = agg->add_subcommand("eval", "evaluate an aggregator exactly");
    eval_cmd->add_option("--spec", spec_arg, "aggregator spec")->required();
    eval_cmd->add_option("--arity", arity_arg, "number of arguments")->required();
    eval_cmd->add_option("--at", at_arg, "comma-separated values, e.g. 1,1/2,inf")->required();
    eval_cmd->callback([&] {
      Aggregator f = Aggregator::parse_spec(spec_arg, arity_arg);
      Tuple xs;
      for (const std::string& part : detail::split(at_arg, ','))
        xs.push_back(ExtReal::parse(part));
      ExtReal v = f.eval(xs);
      emit({{"value", v.str()}}, v.str() + "\n");
    });

    auto* classify_cmd =
        agg->add_subcommand("classify", "run all property checks and the membership families");
    classify_cmd->add_option("--spec", spec_arg, "aggregator spec")->required();
    classify_cmd->add_option("--arity", arity_arg, "number of arguments")->required();
    classify_cmd->add_option("--seed", seed_arg, "sampling seed")->capture_default_str();
    classify_cmd->add_option("--samples", samples_arg, "samples per check")->capture_default_str();
    classify_cmd->callback([&] {
      Aggregator f = Aggregator::parse_spec(spec_arg, arity_arg);
      Classification c = classify(f, CheckConfig{seed_arg, samples_arg});
      std::string human = "spec: " + c.spec + " (arity " + std::to_string(c.arity) + ")\n";
      human += cli_detail::verdict_human("zero", c.zero, f);
      human += cli_detail::verdict_human("isotone", c.isotone, f);
      human += cli_detail::verdict_human("subadditive", c.subadditive, f);
      human += cli_detail::verdict_human("asym_triplets", c.asym_triplets, f);
      human += cli_detail::verdict_human("sym_triplets", c.sym_triplets, f);
      human += cli_detail::verdict_human("kernel_exact", c.kernel_exact, f);
      human += cli_detail::verdict_human("kernel_some", c.kernel_some, f);
      human += "families:\n";
      for (const FamilyVerdict* fam :
           {&c.products_all, &c.products_separated, &c.sets_separated}) {
        human += "  " + fam->name + " (=";
        for (const std::string& a : fam->aliases) human += " " + a;
        human += "): " + std::string(verdict_status_name(fam->status));
        if (fam->status == VerdictStatus::Refuted) human += " by " + fam->refuted_by;
        human += "\n";
      }
      if (c.weights_include_inf)
        human += "note: weights include inf; products stay within the same families\n";
      if (c.products_all.status == VerdictStatus::Refuted) code = 1;
      emit(classification_to_json(c), human);
    });
  }

  auto* theorems = app.add_subcommand("theorems", "cross-validation of the structural results");
  theorems->require_subcommand(1);
  {
    std::uint64_t seed_arg = 0;
    std::size_t samples_arg = 512, step_tuples_arg = 100, battery_arg = 20, terms_arg = 100;

    auto* verify = theorems->add_subcommand(
        "verify",
        "run the three-way condition agreement, the lifting co-occurrence and the semantic "
        "checks over the default aggregators plus random expression terms");
    verify->add_option("--seed", seed_arg, "seed for all sampling")->capture_default_str();
    verify->add_option("--samples", samples_arg, "samples per property check")
        ->capture_default_str();
    verify->add_option("--step-tuples", step_tuples_arg, "step-function tuples for the lifting leg")
        ->capture_default_str();
    verify->add_option("--battery-spaces", battery_arg, "spaces for the semantic leg")
        ->capture_default_str();
    verify->add_option("--terms", terms_arg, "number of random expression terms")
        ->capture_default_str();
    verify->callback([&] {
      HarnessConfig cfg{seed_arg, samples_arg, step_tuples_arg, battery_arg};
      Json rows = Json::array();
      std::string human;
      std::size_t checked = 0, inconsistencies = 0;
      auto run_one = [&](const Aggregator& f) {
        HarnessReport rep = run_harness(f, cfg);
        ++checked;
        if (!rep.consistent) ++inconsistencies;
        rows.push_back({{"spec", rep.spec},
                        {"arity", rep.arity},
                        {"verdict", verdict_status_name(rep.classification.products_all.status)},
                        {"conditions_agree", rep.conditions_agree},
                        {"lifting_co_occur", rep.lifting.co_occur},
                        {"semantic_ok", !rep.semantic.inconsistent},
                        {"consistent", rep.consistent}});
        human += rep.spec + " (arity " + std::to_string(rep.arity) + "): " +
                 verdict_status_name(rep.classification.products_all.status) +
                 (rep.consistent ? "; consistent" : "; INCONSISTENT") + "\n";
      };
      for (const auto& [spec, arity] : default_battery())
        run_one(Aggregator::parse_spec(spec, arity));
      Sampler terms(fork_seed(seed_arg, "terms"));
      for (std::size_t i = 0; i < terms_arg; ++i)
        run_one(random_dsl(terms, 1 + terms.below(3)));
      human += "checked " + std::to_string(checked) + " aggregators: " +
               std::to_string(inconsistencies) + " inconsistencies\n";
      if (inconsistencies > 0) code = 1;
      emit({{"tool", "modagg"},
            {"version", kToolVersion},
            {"seed", seed_arg},
            {"samples", samples_arg},
            {"step_tuples", step_tuples_arg},
            {"battery_spaces", battery_arg},
            {"terms", terms_arg},
            {"aggregators", std::move(rows)},
            {"checked", checked},
            {"inconsistencies", inconsistencies},
            {"consistent", inconsistencies == 0}},
           human);
    });
  }

  app.require_subcommand(1);

  std::vector<const char*> argv;
  argv.push_back("modagg");
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int cli_code = app.exit(e, out, err);
    return cli_code == 0 ? 0 : 2;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return code;
}

}  // namespace modagg
