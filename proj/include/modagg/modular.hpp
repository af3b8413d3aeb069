#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "aggregator.hpp"
#include "extreal.hpp"
#include "quantale.hpp"
#include "step_fn.hpp"

namespace modagg {

/** A finite point set with a parameterized distance w(t, x, y), stored as one
 * step function per ordered pair. The diagonal is pinned to the zero function,
 * so the "self-distance vanishes" axiom holds by representation and is never
 * checked. */
class ModularSpace {
public:
  explicit ModularSpace(std::vector<std::string> points)
      : points_(std::move(points)), entries_(points_.size() * points_.size(), StepFn::zero()) {
    if (points_.empty()) throw std::invalid_argument("ModularSpace: need at least one point");
    for (std::size_t i = 0; i < points_.size(); ++i)
      for (std::size_t j = i + 1; j < points_.size(); ++j)
        if (points_[i] == points_[j])
          throw std::invalid_argument("ModularSpace: duplicate point label '" + points_[i] + "'");
  }

  std::size_t size() const { return points_.size(); }
  const std::vector<std::string>& points() const { return points_; }
  const std::string& label(std::size_t i) const { return points_[i]; }

  std::size_t index_of(const std::string& label) const {
    for (std::size_t i = 0; i < points_.size(); ++i)
      if (points_[i] == label) return i;
    throw std::invalid_argument("ModularSpace: unknown point '" + label + "'");
  }

  const StepFn& entry(std::size_t i, std::size_t j) const { return entries_[i * size() + j]; }

  void set_entry(std::size_t i, std::size_t j, StepFn f) {
    if (i == j) throw std::invalid_argument("ModularSpace: diagonal entries are implicitly zero");
    entries_[i * size() + j] = std::move(f);
  }

  friend bool operator==(const ModularSpace&, const ModularSpace&) = default;

private:
  std::vector<std::string> points_;
  std::vector<StepFn> entries_;
};

enum class Level { Pseudo, QuasiMetric, MetricPseudo, Metric };

inline Level level_from_string(std::string_view s) {
  if (s == "pseudo") return Level::Pseudo;
  if (s == "quasi_metric") return Level::QuasiMetric;
  if (s == "metric_pseudo") return Level::MetricPseudo;
  if (s == "metric") return Level::Metric;
  throw std::invalid_argument("unknown level '" + std::string(s) +
                              "' (pseudo, quasi_metric, metric_pseudo, metric)");
}

inline const char* level_name(Level l) {
  switch (l) {
    case Level::Pseudo: return "pseudo";
    case Level::QuasiMetric: return "quasi_metric";
    case Level::MetricPseudo: return "metric_pseudo";
    default: return "metric";
  }
}

struct ModularViolation {
  enum class Axiom { M2, M3, M4 };
  Axiom axiom;
  std::size_t x, y;
  std::optional<std::size_t> via;  // M2 middle point
  std::optional<Rat> t;            // M2 witness time
};

inline const char* axiom_name(ModularViolation::Axiom a) {
  switch (a) {
    case ModularViolation::Axiom::M2: return "M2";
    case ModularViolation::Axiom::M3: return "M3";
    default: return "M4";
  }
}

/** Checks the split triangle law exactly: w(., x, y) below the convolution of
 * w(., x, z) and w(., z, y) pointwise, which is equivalent to
 * w(t+s, x, y) <= w(t, x, z) + w(s, z, y) for all splits. Levels add the
 * separation axiom (M3: both directions vanish only on the diagonal) and
 * symmetry (M4). The representational M1 needs no check. */
inline std::vector<ModularViolation> validate(const ModularSpace& s, Level level) {
  std::vector<ModularViolation> out;
  std::size_t n = s.size();
  // Instances with x == y or z in {x, y} hold identically: the diagonal is the
  // zero function, which is the convolution unit.
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      if (x == y) continue;
      for (std::size_t z = 0; z < n; ++z) {
        if (z == x || z == y) continue;
        auto t = leq_witness(s.entry(x, y), oplus(s.entry(x, z), s.entry(z, y)));
        if (t) out.push_back({ModularViolation::Axiom::M2, x, y, z, *t});
      }
    }
  if (level == Level::QuasiMetric || level == Level::Metric)
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = x + 1; y < n; ++y)
        if (s.entry(x, y).is_zero() && s.entry(y, x).is_zero())
          out.push_back({ModularViolation::Axiom::M3, x, y, std::nullopt, std::nullopt});
  if (level == Level::MetricPseudo || level == Level::Metric)
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = x + 1; y < n; ++y)
        if (!(s.entry(x, y) == s.entry(y, x)))
          out.push_back({ModularViolation::Axiom::M4, x, y, std::nullopt, std::nullopt});
  return out;
}

/** A finite extended quasi-pseudometric: exact distances in [0, inf] with a
 * pinned-zero diagonal. */
class FiniteQpm {
public:
  explicit FiniteQpm(std::vector<std::string> points)
      : points_(std::move(points)), d_(points_.size() * points_.size(), ExtReal()) {
    if (points_.empty()) throw std::invalid_argument("FiniteQpm: need at least one point");
  }

  std::size_t size() const { return points_.size(); }
  const std::vector<std::string>& points() const { return points_; }
  const ExtReal& at(std::size_t i, std::size_t j) const { return d_[i * size() + j]; }
  void set(std::size_t i, std::size_t j, ExtReal v) {
    if (i == j) throw std::invalid_argument("FiniteQpm: diagonal entries are implicitly zero");
    d_[i * size() + j] = std::move(v);
  }

private:
  std::vector<std::string> points_;
  std::vector<ExtReal> d_;
};

struct TriangleViolation {
  std::size_t x, y, via;
};

inline std::vector<TriangleViolation> validate_qpm(const FiniteQpm& d) {
  std::vector<TriangleViolation> out;
  std::size_t n = d.size();
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      if (x == y) continue;
      for (std::size_t z = 0; z < n; ++z) {
        if (z == x || z == y) continue;
        if (d.at(x, y) > d.at(x, z) + d.at(z, y)) out.push_back({x, y, z});
      }
    }
  return out;
}

/** A pair of distinct points with both directions zero, if any; absence makes
 * d a quasi-metric. */
inline std::optional<std::pair<std::size_t, std::size_t>> qpm_separation_failure(
    const FiniteQpm& d) {
  for (std::size_t x = 0; x < d.size(); ++x)
    for (std::size_t y = x + 1; y < d.size(); ++y)
      if (d.at(x, y).is_zero() && d.at(y, x).is_zero()) return std::make_pair(x, y);
  return std::nullopt;
}

/** The scaled family w(t, x, y) = g(t) * d(x, y) with inf*0 = 0. Requires d to
 * pass the triangle check. */
inline ModularSpace from_gd(const StepFn& g, const FiniteQpm& d) {
  if (auto vs = validate_qpm(d); !vs.empty())
    throw std::invalid_argument("from_gd: d violates the triangle inequality at (" +
                                d.points()[vs[0].x] + ", " + d.points()[vs[0].y] + ") via " +
                                d.points()[vs[0].via]);
  ModularSpace s(d.points());
  for (std::size_t i = 0; i < d.size(); ++i)
    for (std::size_t j = 0; j < d.size(); ++j)
      if (i != j) s.set_entry(i, j, scale(g, d.at(i, j)));
  return s;
}

/** Points labelled by distinct nonnegative rationals; the distance of two
 * points is the constant function x + y. */
inline ModularSpace additive_space(const std::vector<Rat>& values) {
  std::vector<std::string> labels;
  for (const Rat& v : values) {
    if (v < 0) throw std::invalid_argument("additive_space: values must be nonnegative");
    labels.push_back(rat_str(v));
  }
  ModularSpace s(std::move(labels));
  for (std::size_t i = 0; i < values.size(); ++i)
    for (std::size_t j = 0; j < values.size(); ++j)
      if (i != j) s.set_entry(i, j, StepFn::constant(ExtReal(values[i] + values[j])));
  return s;
}

/** Why an aggregated space could not be built: the composite either rises
 * somewhere (escapes the nonincreasing class) or has a nonzero implicit
 * diagonal F(0, ..., 0), which the representation cannot store. Both carry the
 * exact offending data. */
struct AggregationFailure {
  enum class Kind { NotNonincreasing, DiagonalNotZero };
  Kind kind;
  std::string from, to;         // offending pair (empty for DiagonalNotZero)
  std::size_t piece_index = 0;  // NotNonincreasing: rising piece in the composite
  ExtReal diagonal_value;       // DiagonalNotZero: the value of F at the zero tuple
};

struct ProductCaps {
  std::size_t max_points = 64;
  std::size_t max_factors = 4;
};

namespace detail {
inline std::optional<AggregationFailure> diagonal_failure(const Aggregator& f) {
  std::vector<ExtReal> zeros(f.arity(), ExtReal());
  ExtReal at_zero = f.eval(zeros);
  if (!at_zero.is_zero())
    return AggregationFailure{AggregationFailure::Kind::DiagonalNotZero, "", "", 0, at_zero};
  return std::nullopt;
}
}  // namespace detail

/** Aggregates n spaces into one on the product point set:
 * w(t, a, b) = F(w_1(t, a_1, b_1), ..., w_n(t, a_n, b_n)). */
inline std::variant<ModularSpace, AggregationFailure> product_space(
    std::span<const ModularSpace> spaces, const Aggregator& f, ProductCaps caps = {}) {
  if (spaces.size() != f.arity())
    throw std::invalid_argument("product_space: aggregator arity " + std::to_string(f.arity()) +
                                " but " + std::to_string(spaces.size()) + " spaces");
  if (spaces.size() > caps.max_factors)
    throw std::invalid_argument("product_space: factor cap " + std::to_string(caps.max_factors) +
                                " exceeded");
  std::size_t total = 1;
  std::vector<std::size_t> sizes;
  for (const auto& s : spaces) {
    sizes.push_back(s.size());
    total *= s.size();
    if (total > caps.max_points)
      throw std::invalid_argument("product_space: point cap " + std::to_string(caps.max_points) +
                                  " exceeded");
  }
  if (auto fail = detail::diagonal_failure(f)) return *fail;

  auto tuples = detail::tuple_indices(sizes);
  std::vector<std::string> labels;
  labels.reserve(tuples.size());
  for (const auto& t : tuples) {
    std::vector<std::string> parts;
    for (std::size_t i = 0; i < t.size(); ++i) parts.push_back(spaces[i].label(t[i]));
    labels.push_back(detail::join_labels(parts));
  }
  ModularSpace out(labels);
  std::vector<StepFn> fs(spaces.size());
  for (std::size_t a = 0; a < tuples.size(); ++a)
    for (std::size_t b = 0; b < tuples.size(); ++b) {
      if (a == b) continue;
      for (std::size_t i = 0; i < spaces.size(); ++i)
        fs[i] = spaces[i].entry(tuples[a][i], tuples[b][i]);
      auto lifted = lift(f, fs);
      if (auto* bad = std::get_if<NotNonincreasing>(&lifted))
        return AggregationFailure{AggregationFailure::Kind::NotNonincreasing, labels[a], labels[b],
                                  bad->index, ExtReal()};
      out.set_entry(a, b, std::move(std::get<StepFn>(lifted)));
    }
  return out;
}

/** Aggregates n parameterized distances on one shared point set:
 * w(t, x, y) = F(w_1(t, x, y), ..., w_n(t, x, y)). */
inline std::variant<ModularSpace, AggregationFailure> set_aggregate(
    std::span<const ModularSpace> spaces, const Aggregator& f) {
  if (spaces.size() != f.arity())
    throw std::invalid_argument("set_aggregate: aggregator arity " + std::to_string(f.arity()) +
                                " but " + std::to_string(spaces.size()) + " spaces");
  for (const auto& s : spaces)
    if (s.points() != spaces[0].points())
      throw std::invalid_argument("set_aggregate: spaces must share one point set");
  if (auto fail = detail::diagonal_failure(f)) return *fail;

  ModularSpace out(spaces[0].points());
  std::vector<StepFn> fs(spaces.size());
  for (std::size_t x = 0; x < out.size(); ++x)
    for (std::size_t y = 0; y < out.size(); ++y) {
      if (x == y) continue;
      for (std::size_t i = 0; i < spaces.size(); ++i) fs[i] = spaces[i].entry(x, y);
      auto lifted = lift(f, fs);
      if (auto* bad = std::get_if<NotNonincreasing>(&lifted))
        return AggregationFailure{AggregationFailure::Kind::NotNonincreasing, out.label(x),
                                  out.label(y), bad->index, ExtReal()};
      out.set_entry(x, y, std::move(std::get<StepFn>(lifted)));
    }
  return out;
}

/** The same data viewed as a category enriched in the step quantale. */
inline VCat<StepQuantale> to_vcat(const ModularSpace& s) {
  VCat<StepQuantale> c(s.points(), StepFn::zero());
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = 0; j < s.size(); ++j)
      if (i != j) c.at(i, j) = s.entry(i, j);
  return c;
}

struct NonzeroDiagonal {
  std::size_t point;
};

/** Inverse of to_vcat. The reflexivity clause together with integrality pins
 * every diagonal hom to the zero function, so anything else is rejected. */
inline std::variant<ModularSpace, NonzeroDiagonal> from_vcat(const VCat<StepQuantale>& c) {
  for (std::size_t i = 0; i < c.size(); ++i)
    if (!c.at(i, i).is_zero()) return NonzeroDiagonal{i};
  ModularSpace s(c.points);
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t j = 0; j < c.size(); ++j)
      if (i != j) s.set_entry(i, j, c.at(i, j));
  return s;
}

}  // namespace modagg
