#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "extreal.hpp"

namespace modagg {

/** Rejection of a value list that rises somewhere: `index` is the 0-based
 * position of the first piece whose value exceeds its predecessor. */
struct NotNonincreasing {
  std::size_t index;
};

/** A nonincreasing step function (0, inf) -> [0, inf], left-continuous in the
 * sense that each piece owns its right endpoint: with breakpoints
 * t_1 < ... < t_m the k-th value is taken on (t_{k-1}, t_k] (t_0 = 0) and the
 * last value on (t_m, inf). Canonical form: adjacent equal values are merged,
 * so structural equality is pointwise equality. */
class StepFn {
public:
  StepFn() : values_{ExtReal()} {}

  /** Validates and canonicalizes. Throws std::invalid_argument on malformed
   * breakpoints (nonpositive, unsorted, size mismatch); returns
   * NotNonincreasing when the value list rises. */
  static std::variant<StepFn, NotNonincreasing> make(std::vector<Rat> breakpoints,
                                                     std::vector<ExtReal> values) {
    if (values.size() != breakpoints.size() + 1)
      throw std::invalid_argument("StepFn: need one more value than breakpoints");
    for (std::size_t k = 0; k < breakpoints.size(); ++k) {
      if (breakpoints[k] <= 0)
        throw std::invalid_argument("StepFn: breakpoints must be positive");
      if (k > 0 && breakpoints[k] <= breakpoints[k - 1])
        throw std::invalid_argument("StepFn: breakpoints must be strictly increasing");
    }
    for (std::size_t k = 0; k + 1 < values.size(); ++k)
      if (values[k] < values[k + 1]) return NotNonincreasing{k + 1};
    StepFn f;
    f.breakpoints_.clear();
    f.values_.clear();
    for (std::size_t k = 0; k < values.size(); ++k) {
      if (!f.values_.empty() && f.values_.back() == values[k])
        f.breakpoints_.pop_back();  // merge: previous piece extends
      else
        f.values_.push_back(values[k]);
      if (k < breakpoints.size()) f.breakpoints_.push_back(breakpoints[k]);
    }
    return f;
  }

  /** make() for inputs known to be nonincreasing; throws std::logic_error otherwise. */
  static StepFn make_valid(std::vector<Rat> breakpoints, std::vector<ExtReal> values) {
    auto r = make(std::move(breakpoints), std::move(values));
    if (auto* f = std::get_if<StepFn>(&r)) return std::move(*f);
    throw std::logic_error("StepFn::make_valid: values rise at index " +
                           std::to_string(std::get<NotNonincreasing>(r).index));
  }

  static StepFn constant(ExtReal v) {
    StepFn f;
    f.values_ = {std::move(v)};
    return f;
  }

  static const StepFn& zero() {
    static const StepFn z;
    return z;
  }

  ExtReal eval(const Rat& t) const {
    if (t <= 0) throw std::domain_error("StepFn::eval: t must be positive");
    auto it = std::lower_bound(breakpoints_.begin(), breakpoints_.end(), t);
    return values_[static_cast<std::size_t>(it - breakpoints_.begin())];
  }

  const std::vector<Rat>& breakpoints() const { return breakpoints_; }
  const std::vector<ExtReal>& values() const { return values_; }
  const ExtReal& tail() const { return values_.back(); }
  std::size_t piece_count() const { return values_.size(); }
  bool is_zero() const { return breakpoints_.empty() && values_[0].is_zero(); }

  /** Left end of piece k, excluded from the piece (0 for the first). */
  Rat piece_lower(std::size_t k) const { return k == 0 ? Rat(0) : breakpoints_[k - 1]; }
  /** Right end of piece k, included; nullopt for the unbounded last piece. */
  std::optional<Rat> piece_upper(std::size_t k) const {
    if (k + 1 == values_.size()) return std::nullopt;
    return breakpoints_[k];
  }

  friend bool operator==(const StepFn&, const StepFn&) = default;

  std::string str() const {
    std::string s = "[";
    for (std::size_t k = 0; k < values_.size(); ++k) {
      if (k) s += ", ";
      s += values_[k].str();
      if (k < breakpoints_.size()) s += " upto " + rat_str(breakpoints_[k]);
      else s += " onward";
    }
    return s + "]";
  }

private:
  std::vector<Rat> breakpoints_;
  std::vector<ExtReal> values_;  // breakpoints_.size() + 1 entries
};

namespace detail {
/** Sorted union of the breakpoint sets. */
inline std::vector<Rat> merged_grid(std::span<const StepFn> fs) {
  std::vector<Rat> grid;
  for (const StepFn& f : fs) grid.insert(grid.end(), f.breakpoints().begin(), f.breakpoints().end());
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}
}  // namespace detail

/** Applies an exact pointwise n-ary map on the merged breakpoint grid. The
 * composite is constant on each merged piece, so grid evaluation is exact; the
 * result may fail to be nonincreasing, which is reported, not thrown. */
template <class Fn>
std::variant<StepFn, NotNonincreasing> lift_pointwise(Fn&& fn, std::span<const StepFn> fs) {
  std::vector<Rat> grid = detail::merged_grid(fs);
  std::vector<ExtReal> values;
  values.reserve(grid.size() + 1);
  std::vector<ExtReal> args(fs.size());
  for (const Rat& t : grid) {
    for (std::size_t i = 0; i < fs.size(); ++i) args[i] = fs[i].eval(t);
    values.push_back(fn(std::span<const ExtReal>(args)));
  }
  for (std::size_t i = 0; i < fs.size(); ++i) args[i] = fs[i].tail();
  values.push_back(fn(std::span<const ExtReal>(args)));
  return StepFn::make(std::move(grid), std::move(values));
}

/** Pointwise binary combine for maps that preserve nonincreasingness. */
template <class Fn>
StepFn combine_pointwise(const StepFn& f, const StepFn& g, Fn&& fn) {
  const StepFn fg[2] = {f, g};
  auto r = lift_pointwise([&](std::span<const ExtReal> a) { return fn(a[0], a[1]); },
                          std::span<const StepFn>(fg, 2));
  if (auto* s = std::get_if<StepFn>(&r)) return std::move(*s);
  throw std::logic_error("combine_pointwise: map did not preserve monotonicity");
}

inline StepFn min_pointwise(const StepFn& f, const StepFn& g) {
  return combine_pointwise(f, g, [](const ExtReal& a, const ExtReal& b) { return min(a, b); });
}
inline StepFn max_pointwise(const StepFn& f, const StepFn& g) {
  return combine_pointwise(f, g, [](const ExtReal& a, const ExtReal& b) { return max(a, b); });
}
inline StepFn add_pointwise(const StepFn& f, const StepFn& g) {
  return combine_pointwise(f, g, [](const ExtReal& a, const ExtReal& b) { return a + b; });
}

/** Pointwise scaling c*f; exact, with inf*0 = 0. */
inline StepFn scale(const StepFn& f, const ExtReal& c) {
  std::vector<ExtReal> values;
  values.reserve(f.values().size());
  for (const ExtReal& v : f.values()) values.push_back(c * v);
  return StepFn::make_valid(f.breakpoints(), std::move(values));
}

/** Smallest grid point where f > g, if any: f <= g pointwise holds iff it holds
 * at every merged breakpoint and on the common tail. */
inline std::optional<Rat> leq_witness(const StepFn& f, const StepFn& g) {
  const StepFn fg[2] = {f, g};
  std::vector<Rat> grid = detail::merged_grid(std::span<const StepFn>(fg, 2));
  for (const Rat& t : grid)
    if (f.eval(t) > g.eval(t)) return t;
  if (f.tail() > g.tail()) return grid.empty() ? Rat(1) : Rat(grid.back() + 1);
  return std::nullopt;
}

/** Exact pointwise order f(t) <= g(t) for all t > 0. */
inline bool leq_pointwise(const StepFn& f, const StepFn& g) { return !leq_witness(f, g).has_value(); }

namespace detail {
/** Candidate rectangle (i, j) of the convolution: the value f_i + g_j is
 * achievable exactly for t in (lower, upper], upper absent when unbounded. */
struct OplusCandidate {
  Rat lower;
  std::optional<Rat> upper;
  ExtReal value;
  std::size_t i, j;
};

inline std::vector<OplusCandidate> oplus_candidates(const StepFn& f, const StepFn& g) {
  std::vector<OplusCandidate> cs;
  cs.reserve(f.piece_count() * g.piece_count());
  for (std::size_t i = 0; i < f.piece_count(); ++i)
    for (std::size_t j = 0; j < g.piece_count(); ++j) {
      OplusCandidate c;
      c.lower = f.piece_lower(i) + g.piece_lower(j);
      auto fu = f.piece_upper(i), gu = g.piece_upper(j);
      if (fu && gu) c.upper = *fu + *gu;
      c.value = f.values()[i] + g.values()[j];
      c.i = i;
      c.j = j;
      cs.push_back(std::move(c));
    }
  return cs;
}

inline bool candidate_covers(const OplusCandidate& c, const Rat& t) {
  return c.lower < t && (!c.upper || t <= *c.upper);
}
}  // namespace detail

/** Infimal convolution on the step quantale:
 * (f (+) g)(t) = inf { f(r) + g(s) : r + s = t, r, s > 0 }, computed exactly.
 * Every output piece boundary is a sum of input breakpoints (0 included), and
 * on each interval between consecutive sums the set of achievable value pairs
 * is constant, so the result is the pointwise minimum of the candidate
 * rectangles swept over that sum grid. */
inline StepFn oplus(const StepFn& f, const StepFn& g) {
  auto cs = detail::oplus_candidates(f, g);
  std::vector<Rat> sums;
  for (const auto& c : cs)
    if (c.lower > 0) sums.push_back(c.lower);
  std::sort(sums.begin(), sums.end());
  sums.erase(std::unique(sums.begin(), sums.end()), sums.end());

  std::vector<ExtReal> values;
  values.reserve(sums.size() + 1);
  for (const Rat& t : sums) {
    ExtReal best = ExtReal::inf();
    for (const auto& c : cs)
      if (detail::candidate_covers(c, t)) best = min(best, c.value);
    values.push_back(best);
  }
  values.push_back(f.tail() + g.tail());
  return StepFn::make_valid(std::move(sums), std::move(values));
}

/** A split r + s = t realizing (f (+) g)(t) exactly. */
struct OplusSplit {
  Rat r, s;
  ExtReal value;
};

inline OplusSplit oplus_argmin(const StepFn& f, const StepFn& g, const Rat& t) {
  if (t <= 0) throw std::domain_error("oplus_argmin: t must be positive");
  auto cs = detail::oplus_candidates(f, g);
  const detail::OplusCandidate* best = nullptr;
  for (const auto& c : cs)
    if (detail::candidate_covers(c, t) && (!best || c.value < best->value)) best = &c;
  if (!best) throw std::logic_error("oplus_argmin: no candidate covers t");

  // Pick r inside { r : f_lo(i) < r <= f_up(i), g_lo(j) < t - r <= g_up(j) }.
  Rat f_lo = f.piece_lower(best->i), g_lo = g.piece_lower(best->j);
  auto f_up = f.piece_upper(best->i), g_up = g.piece_upper(best->j);
  Rat r;
  if (f_up && *f_up < t - g_lo) r = *f_up;
  else if (g_up && t - *g_up > f_lo) r = t - *g_up;
  else r = (f_lo + (t - g_lo)) / 2;
  OplusSplit split{r, t - r, best->value};
  if (f.eval(split.r) + g.eval(split.s) != split.value)
    throw std::logic_error("oplus_argmin: split does not realize the minimum");
  return split;
}

}  // namespace modagg
