#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "properties.hpp"

namespace modagg {

struct HarnessConfig {
  std::uint64_t seed = 0;
  std::size_t samples = 512;
  std::size_t step_tuples = 100;
  std::size_t battery_spaces = 20;
};

/** One of the three equivalent membership conditions, evaluated on shared
 * samples. A condition refuted only through a transferred witness (rather
 * than by its own sampling) is flagged, so agreement is visibly constructive. */
struct ConditionOutcome {
  std::string name;
  bool refuted = false;
  std::optional<Witness> witness;
  bool via_transfer = false;
};

/** Consistency of refutations across the two levels: the aggregator on
 * tuples, and its pointwise lift on step-function tuples. After constructive
 * reconciliation (embedding tuple witnesses as constant functions one way,
 * extracting tuple witnesses from lifted violations the other way), both
 * sides must agree; `one_sided` marks a reconciliation that failed. */
struct LiftingOutcome {
  bool function_refuted = false;
  bool lifted_refuted = false;
  bool co_occur = true;
  bool one_sided = false;
  std::string function_note;
  std::string lifted_note;
  std::optional<Witness> extracted;
};

/** Semantic leg: a refuted aggregator must produce an exact aggregation
 * failure on its witness spaces; an unrefuted one must aggregate a battery of
 * valid spaces into valid spaces. */
struct SemanticOutcome {
  bool refuted_route = false;
  bool violated = false;
  std::size_t aggregations = 0;
  std::size_t clean = 0;
  bool inconsistent = false;
  std::string detail;
};

struct HarnessReport {
  std::string spec;
  std::size_t arity = 0;
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  Classification classification;
  std::vector<ConditionOutcome> conditions;
  bool conditions_agree = true;
  LiftingOutcome lifting;
  SemanticOutcome semantic;
  bool consistent = true;
};

namespace detail {

/** Turns a rising composite (first rising piece `index` on the merged grid of
 * fs) into an order violation of the aggregator: the argument tuples at the
 * two surrounding grid positions are componentwise ordered downwards while
 * their images rise. */
inline Witness escape_to_isotone(const Aggregator& f, std::span<const StepFn> fs,
                                 std::size_t index) {
  std::vector<Rat> grid = merged_grid(fs);
  if (index == 0 || index > grid.size())
    throw std::logic_error("escape_to_isotone: rising piece index out of range");
  Rat t_early = grid[index - 1];
  Rat t_late = index < grid.size() ? grid[index] : grid.back() + 1;
  Tuple x, y;
  for (const StepFn& g : fs) {
    x.push_back(g.eval(t_late));
    y.push_back(g.eval(t_early));
  }
  Witness w = Witness::isotone(std::move(x), std::move(y));
  if (!replay(w, f)) throw std::logic_error("escape_to_isotone: extracted witness failed replay");
  return w;
}

struct LiftedViolation {
  Witness extracted;
  std::string note;
};

/** Runs the three lifted laws on one pair of step tuples and extracts an
 * aggregator-level witness from the first violation:
 *  - composite must stay nonincreasing (escape -> order violation),
 *  - the lift must preserve the pointwise order (violation at t -> order
 *    violation between the argument tuples at t),
 *  - the lift must laxly preserve the convolution (violation at t -> a
 *    triangle-shaped violation through an exact optimal split of t). */
inline std::optional<LiftedViolation> lifted_laws(const Aggregator& f,
                                                  const std::vector<StepFn>& fs,
                                                  const std::vector<StepFn>& gs) {
  auto lf = lift(f, fs);
  if (auto* esc = std::get_if<NotNonincreasing>(&lf))
    return LiftedViolation{escape_to_isotone(f, fs, esc->index),
                           "composite of the first tuple rises"};
  auto lg = lift(f, gs);
  if (auto* esc = std::get_if<NotNonincreasing>(&lg))
    return LiftedViolation{escape_to_isotone(f, gs, esc->index),
                           "composite of the second tuple rises"};
  const StepFn& Lf = std::get<StepFn>(lf);
  const StepFn& Lg = std::get<StepFn>(lg);
  // The order law only applies when its premise holds (the sampled pairs are
  // ordered by construction, but embedded pairs need not be).
  bool ordered = true;
  for (std::size_t i = 0; i < fs.size(); ++i) ordered = ordered && leq_pointwise(fs[i], gs[i]);
  if (ordered) {
    if (auto t = leq_witness(Lf, Lg)) {
      Tuple x, y;
      for (std::size_t i = 0; i < fs.size(); ++i) {
        x.push_back(fs[i].eval(*t));
        y.push_back(gs[i].eval(*t));
      }
      Witness w = Witness::isotone(std::move(x), std::move(y));
      if (!replay(w, f)) throw std::logic_error("lifted_laws: order extraction failed replay");
      return LiftedViolation{std::move(w), "lift does not preserve the pointwise order at t = " +
                                               rat_str(*t)};
    }
  }
  std::vector<StepFn> hs;
  hs.reserve(fs.size());
  for (std::size_t i = 0; i < fs.size(); ++i) hs.push_back(oplus(fs[i], gs[i]));
  auto lh = lift(f, hs);
  if (auto* esc = std::get_if<NotNonincreasing>(&lh))
    return LiftedViolation{escape_to_isotone(f, hs, esc->index),
                           "composite of the convolved tuple rises"};
  const StepFn& Lh = std::get<StepFn>(lh);
  StepFn rhs = oplus(Lf, Lg);
  if (auto t = leq_witness(Lh, rhs)) {
    OplusSplit split = oplus_argmin(Lf, Lg, *t);
    Tuple x, y, z;
    for (std::size_t i = 0; i < fs.size(); ++i) {
      x.push_back(fs[i].eval(split.r));
      y.push_back(gs[i].eval(split.s));
      z.push_back(hs[i].eval(*t));
    }
    Witness w = Witness::asym_triplet(std::move(z), std::move(x), std::move(y));
    if (!replay(w, f)) throw std::logic_error("lifted_laws: convolution extraction failed replay");
    return LiftedViolation{std::move(w),
                           "lift is not laxly compatible with the convolution at t = " +
                               rat_str(*t) + " (optimal split " + rat_str(split.r) + " + " +
                               rat_str(split.s) + ")"};
  }
  return std::nullopt;
}

/** Re-runs the lifted laws on the constant embedding of a function-level
 * witness; a lax witness must reproduce a lifted violation exactly. */
inline std::optional<LiftedViolation> embed_witness(const Aggregator& f, const Witness& w) {
  auto consts = [](const Tuple& t) {
    std::vector<StepFn> fs;
    fs.reserve(t.size());
    for (const ExtReal& v : t) fs.push_back(StepFn::constant(v));
    return fs;
  };
  switch (w.kind) {
    case WitnessKind::Isotone: return lifted_laws(f, consts(w.tuples[0]), consts(w.tuples[1]));
    case WitnessKind::Subadditive: return lifted_laws(f, consts(w.tuples[0]), consts(w.tuples[1]));
    default: return std::nullopt;
  }
}

}  // namespace detail

inline std::vector<std::pair<std::string, std::size_t>> default_battery() {
  return {
      {"builtin:sum", 2},          {"builtin:wsum:1,1/2", 2}, {"builtin:sup:1,1", 2},
      {"builtin:proj:1", 2},       {"builtin:const_jump:2", 2}, {"builtin:zero", 2},
      {"expr:x1*x1", 1},           {"expr:max(x1,x2)", 2},    {"expr:min(x1,x2)+x1", 2},
  };
}

/** A random term of the expression grammar; every term it can produce is a
 * well-formed aggregator of the given arity. */
inline AggExprPtr random_expr(Sampler& s, std::size_t arity, int depth) {
  if (depth <= 0 || s.below(3) == 0) {
    if (s.below(4) == 0) {
      static const char* consts[] = {"0", "1", "2", "1/2", "3", "inf"};
      return AggExpr::make_const(ExtReal::parse(consts[s.below(6)]));
    }
    return AggExpr::make_var(1 + s.below(arity));
  }
  static const AggExpr::Kind kinds[] = {AggExpr::Kind::Add, AggExpr::Kind::Mul,
                                        AggExpr::Kind::Max, AggExpr::Kind::Min};
  AggExpr::Kind k = kinds[s.below(4)];
  std::vector<AggExprPtr> args;
  for (std::size_t i = 0, m = 2 + s.below(2); i < m; ++i)
    args.push_back(random_expr(s, arity, depth - 1));
  return AggExpr::make_node(k, std::move(args));
}

inline Aggregator random_dsl(Sampler& s, std::size_t arity) {
  return Aggregator::from_expr(random_expr(s, arity, 3), arity);
}

/** Cross-validates the characterization results on one aggregator:
 *  (1) the three equivalent membership conditions agree on shared samples,
 *      with disagreements repaired constructively by witness transfer;
 *  (2) refutations at the tuple level and at the lifted step-function level
 *      co-occur, by embedding and extraction;
 *  (3) refuted aggregators produce exact failures on constructed spaces,
 *      unrefuted ones aggregate a battery of valid spaces cleanly. */
inline HarnessReport run_harness(const Aggregator& f, const HarnessConfig& cfg = {}) {
  HarnessReport rep;
  rep.spec = f.describe();
  rep.arity = f.arity();
  rep.seed = cfg.seed;
  rep.samples = cfg.samples;
  rep.classification = classify(f, CheckConfig{cfg.seed, cfg.samples});
  Classification& cls = rep.classification;

  // Lifting leg. The function side starts from the classification; the lifted
  // side samples the three lifted laws, then the two sides are reconciled.
  LiftingOutcome& lift_leg = rep.lifting;
  lift_leg.function_refuted = cls.products_all.status == VerdictStatus::Refuted;
  if (lift_leg.function_refuted)
    lift_leg.function_note = "lax condition refuted by " + cls.products_all.refuted_by;
  std::optional<detail::LiftedViolation> lifted;
  if (cls.zero.status == VerdictStatus::Refuted) {
    lifted = detail::LiftedViolation{Witness::not_zero_at_zero(),
                                     "lift of the all-zero tuple is the nonzero constant "
                                     "F(0,...,0), so the unit is not preserved"};
  } else {
    Sampler s(fork_seed(cfg.seed, "lifting"));
    for (std::size_t i = 0; i < cfg.step_tuples && !lifted; ++i) {
      auto [fs, gs] = s.ordered_step_pair(f.arity());
      lifted = detail::lifted_laws(f, fs, gs);
    }
  }
  if (lifted) {
    lift_leg.lifted_refuted = true;
    lift_leg.lifted_note = lifted->note;
    lift_leg.extracted = lifted->extracted;
  }

  if (lift_leg.lifted_refuted && !lift_leg.function_refuted) {
    // Extraction: the lifted violation came with a tuple-level witness; close
    // the classification under it so the function side is refuted too.
    std::vector<Witness> pool{*lift_leg.extracted};
    detail::close_under_transfer(pool, f);
    detail::strengthen_from_pool(cls, pool);
    detail::recompute_families(cls);
    lift_leg.function_refuted = cls.products_all.status == VerdictStatus::Refuted;
    lift_leg.function_note = "refuted via the witness extracted from the lifted violation";
  } else if (lift_leg.function_refuted && !lift_leg.lifted_refuted) {
    // Embedding: replay the function-level witness as constant step tuples.
    if (auto emb = detail::embed_witness(f, *cls.products_all.witness)) {
      lift_leg.lifted_refuted = true;
      lift_leg.lifted_note = emb->note + " (constant embedding of the function-level witness)";
      lift_leg.extracted = emb->extracted;
    }
  }
  lift_leg.co_occur = lift_leg.function_refuted == lift_leg.lifted_refuted;
  lift_leg.one_sided = !lift_leg.co_occur;

  // Condition leg, from the (possibly strengthened) classification.
  auto condition = [](std::string name,
                      std::initializer_list<const Verdict*> conjuncts) -> ConditionOutcome {
    ConditionOutcome c{std::move(name), false, std::nullopt, false};
    for (const Verdict* v : conjuncts)
      if (v->status == VerdictStatus::Refuted) {
        c.refuted = true;
        c.witness = v->witness;
        c.via_transfer = v->via_transfer;
        break;
      }
    return c;
  };
  rep.conditions.push_back(
      condition("lax laws", {&cls.zero, &cls.isotone, &cls.subadditive}));
  rep.conditions.push_back(condition("asym triplet preservation", {&cls.zero, &cls.asym_triplets}));
  rep.conditions.push_back(
      condition("sym triplet preservation", {&cls.zero, &cls.isotone, &cls.sym_triplets}));
  rep.conditions_agree = rep.conditions[0].refuted == rep.conditions[1].refuted &&
                         rep.conditions[1].refuted == rep.conditions[2].refuted;

  // Semantic leg.
  SemanticOutcome& sem = rep.semantic;
  if (cls.products_all.status == VerdictStatus::Refuted) {
    sem.refuted_route = true;
    try {
      WitnessSpaces ws = witness_spaces(*cls.products_all.witness, f);
      SemanticCheck check = run_witness_spaces(ws, f);
      sem.violated = check.violated;
      sem.detail = ws.construction + ": " + check.detail;
      sem.inconsistent = !check.violated;
    } catch (const InapplicableTransfer& e) {
      sem.inconsistent = true;
      sem.detail = e.what();
    }
  } else {
    Sampler s(fork_seed(cfg.seed, "battery"));
    for (std::size_t k = 0; k < cfg.battery_spaces; ++k) {
      std::string what;
      std::variant<ModularSpace, AggregationFailure> r = [&]() {
        if (k % 2 == 0 || f.arity() > 3) {
          std::size_t points = (k % 4 == 2) ? 3 : 2;
          auto spaces = random_shared_family(s, f.arity(), points);
          what = "shared-set aggregation over " + std::to_string(points) + " points";
          return set_aggregate(spaces, f);
        }
        std::vector<ModularSpace> spaces;
        for (std::size_t i = 0; i < f.arity(); ++i) spaces.push_back(random_space(s));
        what = "product aggregation";
        return product_space(spaces, f);
      }();
      ++sem.aggregations;
      if (const AggregationFailure* fail = std::get_if<AggregationFailure>(&r)) {
        sem.inconsistent = true;
        sem.detail = what + " failed (" +
                     (fail->kind == AggregationFailure::Kind::DiagonalNotZero
                          ? std::string("diagonal not zero")
                          : "composite rises from " + fail->from + " to " + fail->to) +
                     ") although the aggregator was not refuted";
        break;
      }
      auto violations = validate(std::get<ModularSpace>(r), Level::Pseudo);
      if (!violations.empty()) {
        sem.inconsistent = true;
        const ModularViolation& v = violations.front();
        const ModularSpace& sp = std::get<ModularSpace>(r);
        sem.detail = what + " produced an invalid space: M2 fails at (" + sp.label(v.x) + ", " +
                     sp.label(v.y) + ")";
        break;
      }
      ++sem.clean;
    }
    if (!sem.inconsistent)
      sem.detail = "all " + std::to_string(sem.clean) + " aggregations validated clean";
  }

  rep.consistent = rep.conditions_agree && !lift_leg.one_sided && !sem.inconsistent;
  return rep;
}

}  // namespace modagg
