#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "aggregator.hpp"
#include "extreal.hpp"

namespace modagg {

enum class WitnessKind {
  NotZeroAtZero,
  Isotone,
  Subadditive,
  AsymTriplet,
  SymTriplet,
  KernelExact,
  KernelSome,
};

inline std::string witness_kind_name(WitnessKind k) {
  switch (k) {
    case WitnessKind::NotZeroAtZero: return "not_zero_at_zero";
    case WitnessKind::Isotone: return "isotone";
    case WitnessKind::Subadditive: return "subadditive";
    case WitnessKind::AsymTriplet: return "asym_triplet";
    case WitnessKind::SymTriplet: return "sym_triplet";
    case WitnessKind::KernelExact: return "kernel_exact";
    case WitnessKind::KernelSome: return "kernel_some";
  }
  return "?";
}

inline Tuple zero_tuple(std::size_t n) { return Tuple(n, ExtReal(0)); }

inline bool tuple_is_zero(const Tuple& t) {
  for (const ExtReal& v : t)
    if (!v.is_zero()) return false;
  return true;
}

inline bool tuple_leq(const Tuple& x, const Tuple& y) {
  if (x.size() != y.size()) throw std::invalid_argument("tuple_leq: size mismatch");
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!(x[i] <= y[i])) return false;
  return true;
}

inline Tuple tuple_add(const Tuple& x, const Tuple& y) {
  if (x.size() != y.size()) throw std::invalid_argument("tuple_add: size mismatch");
  Tuple r;
  r.reserve(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) r.push_back(x[i] + y[i]);
  return r;
}

inline std::string tuple_str(const Tuple& t) {
  std::string s = "(";
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) s += ",";
    s += t[i].str();
  }
  return s + ")";
}

/** A concrete counterexample for one property check. Replaying it against the
 * aggregator re-evaluates every clause exactly, so a stored witness is
 * self-certifying. For SymTriplet, `apex` is the index (into tuples) of the
 * component whose image exceeds the sum of the other two images. */
struct Witness {
  WitnessKind kind;
  std::vector<Tuple> tuples;
  int apex = 0;

  static Witness not_zero_at_zero() { return {WitnessKind::NotZeroAtZero, {}, 0}; }
  static Witness isotone(Tuple x, Tuple y) {
    return {WitnessKind::Isotone, {std::move(x), std::move(y)}, 0};
  }
  static Witness subadditive(Tuple x, Tuple y) {
    return {WitnessKind::Subadditive, {std::move(x), std::move(y)}, 0};
  }
  static Witness asym_triplet(Tuple a, Tuple b, Tuple c) {
    return {WitnessKind::AsymTriplet, {std::move(a), std::move(b), std::move(c)}, 0};
  }
  static Witness sym_triplet(Tuple a, Tuple b, Tuple c, int apex) {
    return {WitnessKind::SymTriplet, {std::move(a), std::move(b), std::move(c)}, apex};
  }
  static Witness kernel_exact(Tuple a) { return {WitnessKind::KernelExact, {std::move(a)}, 0}; }
  static Witness kernel_some(Tuple a) { return {WitnessKind::KernelSome, {std::move(a)}, 0}; }

  bool operator==(const Witness&) const = default;

  std::string str() const {
    std::string s = witness_kind_name(kind);
    for (const Tuple& t : tuples) s += " " + tuple_str(t);
    if (kind == WitnessKind::SymTriplet) s += " apex=" + std::to_string(apex);
    return s;
  }
};

namespace detail {
inline void require_shape(const Witness& w, std::size_t tuples, std::size_t arity) {
  if (w.tuples.size() != tuples)
    throw std::invalid_argument("witness: expected " + std::to_string(tuples) + " tuples");
  for (const Tuple& t : w.tuples)
    if (t.size() != arity) throw std::invalid_argument("witness: tuple arity mismatch");
}
}  // namespace detail

/** Exact re-evaluation of every clause of the witness. */
inline bool replay(const Witness& w, const Aggregator& f) {
  const std::size_t n = f.arity();
  switch (w.kind) {
    case WitnessKind::NotZeroAtZero:
      detail::require_shape(w, 0, n);
      return !f.eval(zero_tuple(n)).is_zero();
    case WitnessKind::Isotone: {
      detail::require_shape(w, 2, n);
      const Tuple& x = w.tuples[0];
      const Tuple& y = w.tuples[1];
      return tuple_leq(x, y) && f.eval(x) > f.eval(y);
    }
    case WitnessKind::Subadditive: {
      detail::require_shape(w, 2, n);
      const Tuple& x = w.tuples[0];
      const Tuple& y = w.tuples[1];
      return f.eval(tuple_add(x, y)) > f.eval(x) + f.eval(y);
    }
    case WitnessKind::AsymTriplet: {
      detail::require_shape(w, 3, n);
      const Tuple& a = w.tuples[0];
      const Tuple& b = w.tuples[1];
      const Tuple& c = w.tuples[2];
      return tuple_leq(a, tuple_add(b, c)) && f.eval(a) > f.eval(b) + f.eval(c);
    }
    case WitnessKind::SymTriplet: {
      detail::require_shape(w, 3, n);
      if (w.apex < 0 || w.apex > 2) throw std::invalid_argument("witness: apex out of range");
      const Tuple& a = w.tuples[0];
      const Tuple& b = w.tuples[1];
      const Tuple& c = w.tuples[2];
      bool domain = tuple_leq(a, tuple_add(b, c)) && tuple_leq(b, tuple_add(a, c)) &&
                    tuple_leq(c, tuple_add(a, b));
      if (!domain) return false;
      const Tuple& p = w.tuples[static_cast<std::size_t>(w.apex)];
      const Tuple& q = w.tuples[(w.apex + 1) % 3];
      const Tuple& r = w.tuples[(w.apex + 2) % 3];
      return f.eval(p) > f.eval(q) + f.eval(r);
    }
    case WitnessKind::KernelExact:
      detail::require_shape(w, 1, n);
      return !tuple_is_zero(w.tuples[0]) && f.eval(w.tuples[0]).is_zero();
    case WitnessKind::KernelSome: {
      detail::require_shape(w, 1, n);
      for (const ExtReal& v : w.tuples[0])
        if (v.is_zero()) return false;
      return f.eval(w.tuples[0]).is_zero();
    }
  }
  return false;
}

/** Deterministic bounded minimization: snap each coordinate to 0, then 1,
 * then halve it at most ten times, keeping every step that still replays.
 * The replay includes the domain constraints, so they are preserved for free.
 * The halving budget is bounded because some violations are scale invariant
 * and would otherwise shrink forever without reaching a fixpoint. */
inline Witness shrink(Witness w, const Aggregator& f) {
  if (!replay(w, f)) return w;
  for (Tuple& t : w.tuples) {
    for (ExtReal& v : t) {
      const ExtReal original = v;
      if (!original.is_zero()) {
        v = ExtReal(0);
        if (replay(w, f)) continue;
        v = ExtReal(1);
        if (original != ExtReal(1) && replay(w, f)) continue;
        v = original;
      }
      if (v.is_inf() || v.is_zero()) continue;
      for (int round = 0; round < 10; ++round) {
        const ExtReal kept = v;
        v = v * ExtReal(Rat(1, 2));
        if (!replay(w, f)) {
          v = kept;
          break;
        }
      }
    }
  }
  return w;
}

/** Raised when a transfer rule needs a side condition that does not hold
 * (for now only: turning an order violation into a triplet violation uses the
 * zero law, so it is unavailable when the aggregator is nonzero at zero). */
struct InapplicableTransfer : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/** Constructively converts a witness for one failed check into witnesses for
 * the checks that the equivalence results tie to it. Every returned witness
 * is replay-verified here; a replay failure would mean a broken rule and is
 * reported as a logic error.
 *
 * Rules:
 *  - Subadditive (x, y)        -> AsymTriplet (x+y, x, y) and SymTriplet (x+y, x, y).
 *  - Isotone (x, y)            -> AsymTriplet (x, y, 0) when F is zero at zero.
 *  - AsymTriplet (a, b, c)     -> Subadditive (b, c) when F(b+c) > F(b)+F(c),
 *                                 otherwise Isotone (a, b+c); one case always holds.
 *  - SymTriplet                -> the failing apex rearranged as an AsymTriplet,
 *                                 followed by that triplet's own transfers.
 *  - KernelSome (a)            -> KernelExact (a).
 *  - NotZeroAtZero, KernelExact -> nothing.
 */
inline std::vector<Witness> transfer_witness(const Witness& w, const Aggregator& f) {
  if (!replay(w, f)) throw std::invalid_argument("transfer_witness: witness does not replay");
  std::vector<Witness> out;
  switch (w.kind) {
    case WitnessKind::Subadditive: {
      Tuple s = tuple_add(w.tuples[0], w.tuples[1]);
      out.push_back(Witness::asym_triplet(s, w.tuples[0], w.tuples[1]));
      out.push_back(Witness::sym_triplet(std::move(s), w.tuples[0], w.tuples[1], 0));
      break;
    }
    case WitnessKind::Isotone: {
      if (!f.eval(zero_tuple(f.arity())).is_zero())
        throw InapplicableTransfer(
            "isotone witness transfers to a triplet witness only when the aggregator is zero at "
            "zero");
      out.push_back(Witness::asym_triplet(w.tuples[0], w.tuples[1], zero_tuple(f.arity())));
      break;
    }
    case WitnessKind::AsymTriplet: {
      Witness sub = Witness::subadditive(w.tuples[1], w.tuples[2]);
      if (replay(sub, f)) {
        out.push_back(std::move(sub));
      } else {
        out.push_back(Witness::isotone(w.tuples[0], tuple_add(w.tuples[1], w.tuples[2])));
      }
      break;
    }
    case WitnessKind::SymTriplet: {
      const std::size_t a = static_cast<std::size_t>(w.apex);
      Witness asym = Witness::asym_triplet(w.tuples[a], w.tuples[(a + 1) % 3], w.tuples[(a + 2) % 3]);
      std::vector<Witness> tail = transfer_witness(asym, f);
      out.push_back(std::move(asym));
      for (Witness& t : tail) out.push_back(std::move(t));
      break;
    }
    case WitnessKind::KernelSome:
      out.push_back(Witness::kernel_exact(w.tuples[0]));
      break;
    case WitnessKind::NotZeroAtZero:
    case WitnessKind::KernelExact:
      break;
  }
  for (const Witness& t : out)
    if (!replay(t, f))
      throw std::logic_error("transfer_witness: transferred witness failed replay: " + t.str());
  return out;
}

}  // namespace modagg
