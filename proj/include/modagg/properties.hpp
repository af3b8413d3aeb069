#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "aggregator.hpp"
#include "modular.hpp"
#include "sampler.hpp"
#include "witness.hpp"

namespace modagg {

enum class VerdictStatus { ExactMember, Consistent, Refuted };

inline const char* verdict_status_name(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::ExactMember: return "exact_member";
    case VerdictStatus::Consistent: return "consistent_on_samples";
    case VerdictStatus::Refuted: return "refuted";
  }
  return "?";
}

/** Outcome of one property check. ExactMember carries a closed-form reason,
 * Consistent carries the sampling budget that failed to refute, Refuted
 * carries a replayable witness (via_transfer marks witnesses that were
 * carried over from another refuted check rather than found directly). */
struct Verdict {
  VerdictStatus status;
  std::optional<Witness> witness;
  std::string reason;
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  bool via_transfer = false;

  static Verdict member(std::string reason) {
    return {VerdictStatus::ExactMember, std::nullopt, std::move(reason), 0, 0, false};
  }
  static Verdict consistent(std::uint64_t seed, std::size_t samples) {
    return {VerdictStatus::Consistent, std::nullopt, "", seed, samples, false};
  }
  static Verdict refuted(Witness w, bool via_transfer = false) {
    return {VerdictStatus::Refuted, std::move(w), "", 0, 0, via_transfer};
  }
};

struct CheckConfig {
  std::uint64_t seed = 0;
  std::size_t samples = 512;
};

/** Zero at zero is decided exactly for every aggregator: one evaluation. */
inline Verdict check_zero(const Aggregator& f) {
  ExtReal at_zero = f.eval(zero_tuple(f.arity()));
  if (at_zero.is_zero())
    return Verdict::member("evaluates to 0 at the zero tuple; one exact evaluation decides");
  return Verdict::refuted(Witness::not_zero_at_zero());
}

inline Verdict check_isotone(const Aggregator& f, const CheckConfig& cfg = {}) {
  if (const Builtin* b = f.builtin()) {
    switch (b->family) {
      case Builtin::Family::Sum:
        return Verdict::member("a finite sum is monotone in every argument");
      case Builtin::Family::WSum:
        return Verdict::member("a weighted sum with weights in (0, inf] is monotone");
      case Builtin::Family::Sup:
        return Verdict::member("a maximum of weighted coordinates is monotone");
      case Builtin::Family::Proj:
        return Verdict::member("coordinate selection is monotone");
      case Builtin::Family::ConstJump:
        return Verdict::member(
            "0 at the zero tuple and one fixed value elsewhere; growing a tuple can only move it "
            "from the zero tuple to a nonzero one");
      case Builtin::Family::Zero: return Verdict::member("constant maps are monotone");
    }
  }
  Sampler s(fork_seed(cfg.seed, "isotone"));
  const std::size_t n = f.arity();
  for (std::size_t i = 0; i < cfg.samples; ++i) {
    auto [x, y] = s.ordered_pair(n);
    if (f.eval(x) > f.eval(y))
      return Verdict::refuted(shrink(Witness::isotone(std::move(x), std::move(y)), f));
  }
  return Verdict::consistent(cfg.seed, cfg.samples);
}

inline Verdict check_subadditive(const Aggregator& f, const CheckConfig& cfg = {}) {
  if (const Builtin* b = f.builtin()) {
    switch (b->family) {
      case Builtin::Family::Sum:
        return Verdict::member("finite sums are additive: F(x+y) = F(x) + F(y)");
      case Builtin::Family::WSum:
        return Verdict::member(
            "weighted sums are additive; k*(x+y) = k*x + k*y holds in the extended arithmetic "
            "for every weight k in (0, inf]");
      case Builtin::Family::Sup:
        return Verdict::member(
            "max_i k_i*(x_i+y_i) <= max_i k_i*x_i + max_j k_j*y_j, since each k_i*(x_i+y_i) is "
            "bounded by the sum of the two maxima");
      case Builtin::Family::Proj: return Verdict::member("coordinate selection is additive");
      case Builtin::Family::ConstJump:
        return Verdict::member(
            "if x+y is a nonzero tuple then x or y is nonzero, so F(x+y) <= F(x) + F(y)");
      case Builtin::Family::Zero: return Verdict::member("the zero map is additive");
    }
  }
  Sampler s(fork_seed(cfg.seed, "subadditive"));
  const std::size_t n = f.arity();
  for (std::size_t i = 0; i < cfg.samples; ++i) {
    auto [x, y] = s.sum_pair(n);
    if (f.eval(tuple_add(x, y)) > f.eval(x) + f.eval(y))
      return Verdict::refuted(shrink(Witness::subadditive(std::move(x), std::move(y)), f));
  }
  return Verdict::consistent(cfg.seed, cfg.samples);
}

namespace detail {
inline std::optional<std::string> builtin_triplet_reason(const Aggregator& f) {
  if (!f.is_builtin()) return std::nullopt;
  return "zero at zero, monotone and subadditive in closed form, so triangle-shaped bounds are "
         "preserved: a <= b + c gives F(a) <= F(b+c) <= F(b) + F(c)";
}
}  // namespace detail

inline Verdict check_asym_triplets(const Aggregator& f, const CheckConfig& cfg = {}) {
  if (auto reason = detail::builtin_triplet_reason(f)) return Verdict::member(*reason);
  Sampler s(fork_seed(cfg.seed, "asym_triplets"));
  const std::size_t n = f.arity();
  for (std::size_t i = 0; i < cfg.samples; ++i) {
    auto [a, b, c] = s.asym_triplet(n);
    if (f.eval(a) > f.eval(b) + f.eval(c))
      return Verdict::refuted(
          shrink(Witness::asym_triplet(std::move(a), std::move(b), std::move(c)), f));
  }
  return Verdict::consistent(cfg.seed, cfg.samples);
}

inline Verdict check_sym_triplets(const Aggregator& f, const CheckConfig& cfg = {}) {
  if (auto reason = detail::builtin_triplet_reason(f)) return Verdict::member(*reason);
  Sampler s(fork_seed(cfg.seed, "sym_triplets"));
  const std::size_t n = f.arity();
  for (std::size_t i = 0; i < cfg.samples; ++i) {
    auto [a, b, c] = s.sym_triplet(n);
    const ExtReal fa = f.eval(a), fb = f.eval(b), fc = f.eval(c);
    int apex = -1;
    if (fa > fb + fc) apex = 0;
    else if (fb > fa + fc) apex = 1;
    else if (fc > fa + fb) apex = 2;
    if (apex >= 0)
      return Verdict::refuted(
          shrink(Witness::sym_triplet(std::move(a), std::move(b), std::move(c), apex), f));
  }
  return Verdict::consistent(cfg.seed, cfg.samples);
}

inline Verdict check_kernel_exact(const Aggregator& f, const CheckConfig& cfg = {}) {
  const std::size_t n = f.arity();
  if (const Builtin* b = f.builtin()) {
    switch (b->family) {
      case Builtin::Family::Sum:
        return Verdict::member("a sum of nonnegative terms vanishes only when every term does");
      case Builtin::Family::WSum:
      case Builtin::Family::Sup:
        return Verdict::member(
            "every weight is nonzero, and k*x = 0 forces x = 0 for k in (0, inf]");
      case Builtin::Family::Proj: {
        if (n == 1) return Verdict::member("the identity map vanishes only at 0");
        Tuple a = zero_tuple(n);
        a[b->index == 1 ? 1 : 0] = ExtReal(1);
        return Verdict::refuted(Witness::kernel_exact(std::move(a)));
      }
      case Builtin::Family::ConstJump:
        if (!b->jump.is_zero())
          return Verdict::member("every nonzero tuple maps to the nonzero jump value");
        return Verdict::refuted(Witness::kernel_exact(Tuple(n, ExtReal(1))));
      case Builtin::Family::Zero:
        return Verdict::refuted(Witness::kernel_exact(Tuple(n, ExtReal(1))));
    }
  }
  Sampler s(fork_seed(cfg.seed, "kernel_exact"));
  for (std::size_t i = 0; i < cfg.samples; ++i) {
    Tuple a;
    if (i % 3 == 0) {
      a = zero_tuple(n);
      a[s.below(n)] = s.positive_value();
    } else {
      a = s.tuple(n);
      if (tuple_is_zero(a)) a[s.below(n)] = s.positive_value();
    }
    if (f.eval(a).is_zero()) return Verdict::refuted(shrink(Witness::kernel_exact(std::move(a)), f));
  }
  return Verdict::consistent(cfg.seed, cfg.samples);
}

inline Verdict check_kernel_some(const Aggregator& f, const CheckConfig& cfg = {}) {
  const std::size_t n = f.arity();
  if (const Builtin* b = f.builtin()) {
    switch (b->family) {
      case Builtin::Family::Sum:
      case Builtin::Family::WSum:
      case Builtin::Family::Sup:
        return Verdict::member("a vanishing value forces every coordinate to vanish");
      case Builtin::Family::Proj:
        return Verdict::member("a vanishing value means the selected coordinate is itself 0");
      case Builtin::Family::ConstJump:
        if (!b->jump.is_zero())
          return Verdict::member("the only tuple mapped to 0 is the zero tuple");
        return Verdict::refuted(Witness::kernel_some(Tuple(n, ExtReal(1))));
      case Builtin::Family::Zero:
        return Verdict::refuted(Witness::kernel_some(Tuple(n, ExtReal(1))));
    }
  }
  Sampler s(fork_seed(cfg.seed, "kernel_some"));
  for (std::size_t i = 0; i < cfg.samples; ++i) {
    Tuple a;
    a.reserve(n);
    for (std::size_t k = 0; k < n; ++k) a.push_back(s.positive_value());
    if (f.eval(a).is_zero()) return Verdict::refuted(shrink(Witness::kernel_some(std::move(a)), f));
  }
  return Verdict::consistent(cfg.seed, cfg.samples);
}

/** One membership family. `name` is the canonical family label; `aliases`
 * lists the families the characterization results collapse onto it. */
struct FamilyVerdict {
  std::string name;
  std::vector<std::string> aliases;
  VerdictStatus status;
  std::string refuted_by;  // conjunct name when refuted
  std::optional<Witness> witness;
  bool witness_via_transfer = false;
};

struct Classification {
  std::string spec;
  std::size_t arity = 0;
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  Verdict zero, isotone, subadditive, asym_triplets, sym_triplets, kernel_exact, kernel_some;
  FamilyVerdict products_all;       // QPModAP = QPModAS = PModAP = PModAS
  FamilyVerdict products_separated; // QModAP = ModAP
  FamilyVerdict sets_separated;     // QModAS = ModAS
  bool weights_include_inf = false;
};

namespace detail {
inline FamilyVerdict family_verdict(std::string name, std::vector<std::string> aliases,
                                    const std::vector<std::pair<std::string, const Verdict*>>& cs) {
  FamilyVerdict out{std::move(name), std::move(aliases), VerdictStatus::ExactMember, "",
                    std::nullopt, false};
  for (const auto& [cname, v] : cs) {
    if (v->status == VerdictStatus::Refuted) {
      out.status = VerdictStatus::Refuted;
      out.refuted_by = cname;
      out.witness = v->witness;
      out.witness_via_transfer = v->via_transfer;
      return out;
    }
    if (v->status == VerdictStatus::Consistent) out.status = VerdictStatus::Consistent;
  }
  return out;
}

/** Closes a witness pool under transfer, one witness per kind. Three rounds
 * suffice: the longest chain is sym -> asym -> subadditive -> sym. */
inline void close_under_transfer(std::vector<Witness>& pool, const Aggregator& f) {
  for (int round = 0; round < 3; ++round) {
    std::vector<Witness> fresh;
    for (const Witness& w : pool) {
      std::vector<Witness> ts;
      try {
        ts = transfer_witness(w, f);
      } catch (const InapplicableTransfer&) {
        continue;
      }
      for (Witness& t : ts) {
        bool known = false;
        for (const Witness& p : pool) known = known || p.kind == t.kind;
        for (const Witness& p : fresh) known = known || p.kind == t.kind;
        if (!known) fresh.push_back(std::move(t));
      }
    }
    if (fresh.empty()) break;
    for (Witness& w : fresh) pool.push_back(std::move(w));
  }
}

/** Upgrades every non-refuted verdict that the pool holds a witness for. */
inline void strengthen_from_pool(Classification& r, const std::vector<Witness>& pool);

inline void recompute_families(Classification& r);
}  // namespace detail

/** Runs all checks, closes refutations under witness transfer so every check
 * carries its strongest applicable verdict, and derives the three distinct
 * membership families. */
inline Classification classify(const Aggregator& f, const CheckConfig& cfg = {}) {
  Classification r;
  r.spec = f.describe();
  r.arity = f.arity();
  r.seed = cfg.seed;
  r.samples = cfg.samples;
  r.zero = check_zero(f);
  r.isotone = check_isotone(f, cfg);
  r.subadditive = check_subadditive(f, cfg);
  r.asym_triplets = check_asym_triplets(f, cfg);
  r.sym_triplets = check_sym_triplets(f, cfg);
  r.kernel_exact = check_kernel_exact(f, cfg);
  r.kernel_some = check_kernel_some(f, cfg);
  r.weights_include_inf = f.weights_include_inf();

  // Close the refutations under transfer, so that e.g. a triplet witness also
  // refutes subadditivity (or monotonicity) even when direct sampling missed
  // it; every check then carries its strongest applicable verdict.
  std::vector<Witness> pool;
  auto harvest = [&](const Verdict& v) {
    if (v.status == VerdictStatus::Refuted) pool.push_back(*v.witness);
  };
  harvest(r.zero);
  harvest(r.isotone);
  harvest(r.subadditive);
  harvest(r.asym_triplets);
  harvest(r.sym_triplets);
  harvest(r.kernel_exact);
  harvest(r.kernel_some);
  detail::close_under_transfer(pool, f);
  detail::strengthen_from_pool(r, pool);
  detail::recompute_families(r);
  return r;
}

inline void detail::strengthen_from_pool(Classification& r, const std::vector<Witness>& pool) {
  auto strengthen = [&](Verdict& v, WitnessKind kind) {
    if (v.status == VerdictStatus::Refuted) return;
    for (const Witness& w : pool)
      if (w.kind == kind) {
        v = Verdict::refuted(w, /*via_transfer=*/true);
        return;
      }
  };
  strengthen(r.zero, WitnessKind::NotZeroAtZero);
  strengthen(r.isotone, WitnessKind::Isotone);
  strengthen(r.subadditive, WitnessKind::Subadditive);
  strengthen(r.asym_triplets, WitnessKind::AsymTriplet);
  strengthen(r.sym_triplets, WitnessKind::SymTriplet);
  strengthen(r.kernel_exact, WitnessKind::KernelExact);
  strengthen(r.kernel_some, WitnessKind::KernelSome);
}

inline void detail::recompute_families(Classification& r) {
  r.products_all = detail::family_verdict(
      "QPModAP", {"QPModAS", "PModAP", "PModAS"},
      {{"zero", &r.zero}, {"isotone", &r.isotone}, {"subadditive", &r.subadditive}});
  r.products_separated = detail::family_verdict(
      "QModAP", {"ModAP"},
      {{"zero", &r.zero},
       {"isotone", &r.isotone},
       {"subadditive", &r.subadditive},
       {"kernel_exact", &r.kernel_exact}});
  r.sets_separated = detail::family_verdict(
      "QModAS", {"ModAS"},
      {{"zero", &r.zero},
       {"isotone", &r.isotone},
       {"subadditive", &r.subadditive},
       {"kernel_some", &r.kernel_some}});
}

/** Finite spaces that turn an aggregator-level witness into an exact
 * aggregation-level failure.
 *
 * construction "chain": for a subadditivity-flavoured witness with parts b, c
 * the i-th space is a three-point path p, q, r whose forward distances are the
 * constants b_i (p to q), c_i (q to r) and b_i + c_i (p to r), with infinite
 * reverse distances (a valid space: the only binding triangle instance is
 * b_i + c_i <= b_i + c_i). Aggregating them shares the path and the triangle
 * law at (p, r) via q becomes exactly F(b+c) <= F(b) + F(c), which the
 * witness refutes. Three points are necessary: on two points with a pinned
 * zero diagonal, every triangle instance degenerates to a unit law and holds
 * identically.
 *
 * construction "two_level": for an order-flavoured witness lo <= hi with
 * F(lo) > F(hi), the i-th space is a two-point space whose distance steps
 * from hi_i down to lo_i at t = 1. The aggregated distance would step from
 * F(hi) up to F(lo), so aggregation is rejected with the exact rising piece.
 *
 * construction "diagonal": for a nonzero-at-zero witness, any aggregation is
 * rejected because the implicit diagonal would be the constant F(0,...,0). */
struct WitnessSpaces {
  std::vector<ModularSpace> spaces;
  std::string construction;
  std::string note;
};

namespace detail {
inline std::vector<ModularSpace> chain_spaces(const Tuple& b, const Tuple& c) {
  std::vector<ModularSpace> out;
  for (std::size_t i = 0; i < b.size(); ++i) {
    ModularSpace s({"p", "q", "r"});
    s.set_entry(0, 1, StepFn::constant(b[i]));
    s.set_entry(1, 2, StepFn::constant(c[i]));
    s.set_entry(0, 2, StepFn::constant(b[i] + c[i]));
    s.set_entry(1, 0, StepFn::constant(ExtReal::inf()));
    s.set_entry(2, 1, StepFn::constant(ExtReal::inf()));
    s.set_entry(2, 0, StepFn::constant(ExtReal::inf()));
    out.push_back(std::move(s));
  }
  return out;
}

inline std::vector<ModularSpace> two_level_spaces(const Tuple& lo, const Tuple& hi) {
  if (!tuple_leq(lo, hi))
    throw std::logic_error("two_level_spaces: lo must be componentwise below hi");
  std::vector<ModularSpace> out;
  for (std::size_t i = 0; i < lo.size(); ++i) {
    StepFn f = lo[i] == hi[i] ? StepFn::constant(hi[i])
                              : StepFn::make_valid({Rat(1)}, {hi[i], lo[i]});
    ModularSpace s({"p", "q"});
    s.set_entry(0, 1, f);
    s.set_entry(1, 0, std::move(f));
    out.push_back(std::move(s));
  }
  return out;
}
}  // namespace detail

inline WitnessSpaces witness_spaces(const Witness& w, const Aggregator& f) {
  if (!replay(w, f)) throw std::invalid_argument("witness_spaces: witness does not replay");
  switch (w.kind) {
    case WitnessKind::Subadditive:
      return {detail::chain_spaces(w.tuples[0], w.tuples[1]), "chain",
              "triangle law at (p, r) via q asks F(" + tuple_str(tuple_add(w.tuples[0], w.tuples[1])) +
                  ") <= F(" + tuple_str(w.tuples[0]) + ") + F(" + tuple_str(w.tuples[1]) + ")"};
    case WitnessKind::Isotone:
      return {detail::two_level_spaces(w.tuples[0], w.tuples[1]), "two_level",
              "aggregated distance would rise from F(" + tuple_str(w.tuples[1]) + ") to F(" +
                  tuple_str(w.tuples[0]) + ") at t = 1"};
    case WitnessKind::AsymTriplet: {
      const Tuple& a = w.tuples[0];
      const Tuple& b = w.tuples[1];
      const Tuple& c = w.tuples[2];
      if (replay(Witness::subadditive(b, c), f))
        return {detail::chain_spaces(b, c), "chain",
                "triangle law at (p, r) via q asks F(" + tuple_str(tuple_add(b, c)) + ") <= F(" +
                    tuple_str(b) + ") + F(" + tuple_str(c) + ")"};
      return {detail::two_level_spaces(a, tuple_add(b, c)), "two_level",
              "F(b+c) <= F(b) + F(c) < F(a) here, so the order violation a <= b+c with "
              "F(a) > F(b+c) drives the construction"};
    }
    case WitnessKind::SymTriplet: {
      const std::size_t a = static_cast<std::size_t>(w.apex);
      return witness_spaces(
          Witness::asym_triplet(w.tuples[a], w.tuples[(a + 1) % 3], w.tuples[(a + 2) % 3]), f);
    }
    case WitnessKind::NotZeroAtZero: {
      std::vector<ModularSpace> spaces;
      for (std::size_t i = 0; i < f.arity(); ++i) {
        ModularSpace s({"p", "q"});
        s.set_entry(0, 1, StepFn::constant(ExtReal(1)));
        s.set_entry(1, 0, StepFn::constant(ExtReal(1)));
        spaces.push_back(std::move(s));
      }
      return {std::move(spaces), "diagonal",
              "every aggregation is rejected: the implicit diagonal would be the nonzero constant "
              "F(0,...,0)"};
    }
    case WitnessKind::KernelExact:
    case WitnessKind::KernelSome:
      throw InapplicableTransfer(
          "kernel witnesses have no finite lax-failure construction; they separate the "
          "families at the separation axioms instead");
  }
  throw std::logic_error("witness_spaces: unhandled kind");
}

/** Runs the shared-set aggregation on the constructed spaces and reports the
 * exact failure. `violated` is true when the construction produced what it
 * promised: an aggregation failure, or an invalid aggregated space. */
struct SemanticCheck {
  bool violated = false;
  std::optional<AggregationFailure> failure;
  std::vector<ModularViolation> violations;
  std::string detail;
};

inline SemanticCheck run_witness_spaces(const WitnessSpaces& ws, const Aggregator& f) {
  SemanticCheck out;
  auto r = set_aggregate(ws.spaces, f);
  if (const AggregationFailure* fail = std::get_if<AggregationFailure>(&r)) {
    out.violated = true;
    out.failure = *fail;
    out.detail = fail->kind == AggregationFailure::Kind::DiagonalNotZero
                     ? "aggregation rejected: diagonal would be " + fail->diagonal_value.str()
                     : "aggregation rejected: composite distance from " + fail->from + " to " +
                           fail->to + " rises at piece " + std::to_string(fail->piece_index);
    return out;
  }
  const ModularSpace& sp = std::get<ModularSpace>(r);
  out.violations = validate(sp, Level::Pseudo);
  out.violated = !out.violations.empty();
  if (out.violated) {
    const ModularViolation& v = out.violations.front();
    out.detail = "aggregated space violates M2 at (" + sp.label(v.x) + ", " + sp.label(v.y) + ")";
    if (v.via) out.detail += " via " + sp.label(*v.via);
  } else {
    out.detail = "aggregated space is a valid quasi-pseudometric modular";
  }
  return out;
}

/** Battery generators: every produced space is valid by construction, so the
 * semantic side of the harness can aggregate them and expect validity for
 * member aggregators. */
inline FiniteQpm random_qpm(Sampler& s, std::size_t points, bool strictly_positive) {
  static const char* names[] = {"a", "b", "c", "d"};
  if (points < 1 || points > 4) throw std::invalid_argument("random_qpm: 1 to 4 points");
  FiniteQpm d(std::vector<std::string>(names, names + points));
  for (std::size_t i = 0; i < points; ++i)
    for (std::size_t j = 0; j < points; ++j) {
      if (i == j) continue;
      ExtReal v = strictly_positive ? (s.below(6) == 0 ? ExtReal::inf() : s.positive_value())
                                    : s.value();
      d.set(i, j, std::move(v));
    }
  // Min-plus closure enforces the triangle inequality; it preserves strict
  // positivity because every path value is a finite sum of positive entries.
  for (std::size_t k = 0; k < points; ++k)
    for (std::size_t i = 0; i < points; ++i)
      for (std::size_t j = 0; j < points; ++j) {
        if (i == j || i == k || j == k) continue;
        ExtReal through = d.at(i, k) + d.at(k, j);
        if (through < d.at(i, j)) d.set(i, j, std::move(through));
      }
  return d;
}

inline ModularSpace random_two_point_space(Sampler& s) {
  ModularSpace sp({"a", "b"});
  sp.set_entry(0, 1, s.step_fn());
  sp.set_entry(1, 0, s.step_fn());
  return sp;
}

inline ModularSpace random_space(Sampler& s) {
  switch (s.below(3)) {
    case 0: return random_two_point_space(s);
    case 1: {
      StepFn g = s.step_fn();
      if (g.is_zero()) g = StepFn::constant(ExtReal(1));
      return from_gd(g, random_qpm(s, 2 + s.below(2), false));
    }
    default: {
      std::vector<Rat> values;
      Rat v = s.positive_rational(8, 8);
      for (std::size_t i = 0, m = 2 + s.below(2); i < m; ++i) {
        values.push_back(v);
        v += s.positive_rational(8, 8);
      }
      return additive_space(values);
    }
  }
}

/** Spaces over one shared point set, each valid. Two-point sets take
 * arbitrary step entries; larger sets are built from scaled quasi-pseudometrics
 * so validity is inherited. */
inline std::vector<ModularSpace> random_shared_family(Sampler& s, std::size_t count,
                                                      std::size_t points) {
  std::vector<ModularSpace> out;
  for (std::size_t i = 0; i < count; ++i) {
    if (points == 2) {
      out.push_back(random_two_point_space(s));
    } else {
      StepFn g = s.step_fn();
      if (g.is_zero()) g = StepFn::constant(ExtReal(1));
      out.push_back(from_gd(g, random_qpm(s, points, false)));
    }
  }
  return out;
}

}  // namespace modagg
