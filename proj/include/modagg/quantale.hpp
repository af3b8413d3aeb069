#pragma once

#include <concepts>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "extreal.hpp"
#include "step_fn.hpp"

namespace modagg {

/** A commutative integral quantale presented operationally: a complete-enough
 * lattice order `leq`, binary `join`/`meet`, a commutative monotone `tensor`
 * whose `unit` coincides with `top`. Instances here are desk-sized carriers
 * where every law is exactly decidable. */
template <class Q>
concept Quantale = requires(const Q& q, const typename Q::Value& a, const typename Q::Value& b) {
  { q.tensor(a, b) } -> std::same_as<typename Q::Value>;
  { q.leq(a, b) } -> std::same_as<bool>;
  { q.eq(a, b) } -> std::same_as<bool>;
  { q.join(a, b) } -> std::same_as<typename Q::Value>;
  { q.meet(a, b) } -> std::same_as<typename Q::Value>;
  { q.unit() } -> std::same_as<typename Q::Value>;
  { q.top() } -> std::same_as<typename Q::Value>;
  { q.value_str(a) } -> std::same_as<std::string>;
};

/** The two-element quantale {0, 1}, tensor = logical and (every t-norm
 * restricts to it), unit = top = 1. */
struct TwoQuantale {
  using Value = bool;
  Value tensor(Value a, Value b) const { return a && b; }
  bool leq(Value a, Value b) const { return !a || b; }
  bool eq(Value a, Value b) const { return a == b; }
  Value join(Value a, Value b) const { return a || b; }
  Value meet(Value a, Value b) const { return a && b; }
  Value unit() const { return true; }
  Value top() const { return true; }
  std::string value_str(Value v) const { return v ? "1" : "0"; }
};

/** [0, inf] with the order opposite to the numeric one and tensor = +, so
 * unit = top = 0: the quantale underlying generalized distances. a "below" b
 * here means a numerically dominates b. */
struct CostQuantale {
  using Value = ExtReal;
  Value tensor(const Value& a, const Value& b) const { return a + b; }
  bool leq(const Value& a, const Value& b) const { return b <= a; }
  bool eq(const Value& a, const Value& b) const { return a == b; }
  Value join(const Value& a, const Value& b) const { return min(a, b); }
  Value meet(const Value& a, const Value& b) const { return max(a, b); }
  Value unit() const { return ExtReal(); }
  Value top() const { return ExtReal(); }
  std::string value_str(const Value& v) const { return v.str(); }
};

/** Nonincreasing step functions under the pointwise opposite order with the
 * infimal convolution as tensor; unit = top = the zero function. */
struct StepQuantale {
  using Value = StepFn;
  Value tensor(const Value& a, const Value& b) const { return oplus(a, b); }
  bool leq(const Value& a, const Value& b) const { return leq_pointwise(b, a); }
  bool eq(const Value& a, const Value& b) const { return a == b; }
  Value join(const Value& a, const Value& b) const { return min_pointwise(a, b); }
  Value meet(const Value& a, const Value& b) const { return max_pointwise(a, b); }
  Value unit() const { return StepFn::zero(); }
  Value top() const { return StepFn::zero(); }
  std::string value_str(const Value& v) const { return v.str(); }
};

/** The n-th power of a base quantale, everything componentwise. Elements are
 * length-n vectors; a length mismatch is a carrier error, not a value. */
template <Quantale Q>
struct PowerQuantale {
  using Value = std::vector<typename Q::Value>;
  Q base;
  std::size_t n;

  PowerQuantale(Q b, std::size_t arity) : base(std::move(b)), n(arity) {}

  void check(const Value& a) const {
    if (a.size() != n)
      throw std::invalid_argument("power quantale: element has arity " + std::to_string(a.size()) +
                                  ", carrier expects " + std::to_string(n));
  }
  Value tensor(const Value& a, const Value& b) const {
    check(a), check(b);
    Value r;
    r.reserve(n);
    for (std::size_t i = 0; i < n; ++i) r.push_back(base.tensor(a[i], b[i]));
    return r;
  }
  bool leq(const Value& a, const Value& b) const {
    check(a), check(b);
    for (std::size_t i = 0; i < n; ++i)
      if (!base.leq(a[i], b[i])) return false;
    return true;
  }
  bool eq(const Value& a, const Value& b) const {
    check(a), check(b);
    for (std::size_t i = 0; i < n; ++i)
      if (!base.eq(a[i], b[i])) return false;
    return true;
  }
  Value join(const Value& a, const Value& b) const {
    check(a), check(b);
    Value r;
    r.reserve(n);
    for (std::size_t i = 0; i < n; ++i) r.push_back(base.join(a[i], b[i]));
    return r;
  }
  Value meet(const Value& a, const Value& b) const {
    check(a), check(b);
    Value r;
    r.reserve(n);
    for (std::size_t i = 0; i < n; ++i) r.push_back(base.meet(a[i], b[i]));
    return r;
  }
  Value unit() const { return Value(n, base.unit()); }
  Value top() const { return Value(n, base.top()); }
  std::string value_str(const Value& v) const {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) s += ", ";
      s += base.value_str(v[i]);
    }
    return s + ")";
  }
};

/** (x, y, z) with tensor(y, z) below x: on the cost quantale this reads
 * x <= y + z numerically, the one-sided triangle condition with apex x. */
template <Quantale Q>
bool is_asym_triplet(const Q& q, const typename Q::Value& x, const typename Q::Value& y,
                     const typename Q::Value& z) {
  return q.leq(q.tensor(y, z), x);
}

/** The full triangle condition: every permutation of (x, y, z) is an
 * asymmetric triplet. */
template <Quantale Q>
bool is_triplet(const Q& q, const typename Q::Value& x, const typename Q::Value& y,
                const typename Q::Value& z) {
  return is_asym_triplet(q, x, y, z) && is_asym_triplet(q, x, z, y) &&
         is_asym_triplet(q, y, x, z) && is_asym_triplet(q, y, z, x) &&
         is_asym_triplet(q, z, x, y) && is_asym_triplet(q, z, y, x);
}

/** A small category enriched in Q: labelled points and an n*n table of homs. */
template <Quantale Q>
struct VCat {
  std::vector<std::string> points;
  std::vector<typename Q::Value> hom;  // row-major

  VCat(std::vector<std::string> pts, typename Q::Value fill)
      : points(std::move(pts)), hom(points.size() * points.size(), std::move(fill)) {}

  std::size_t size() const { return points.size(); }
  const typename Q::Value& at(std::size_t i, std::size_t j) const { return hom[i * size() + j]; }
  typename Q::Value& at(std::size_t i, std::size_t j) { return hom[i * size() + j]; }

  friend bool operator==(const VCat&, const VCat&) = default;
};

struct VCatViolation {
  enum class Clause { Vc1, Vc2, Separated, Symmetric };
  Clause clause;
  std::size_t from, to;
  std::optional<std::size_t> via;  // only for Vc2
};

inline const char* clause_name(VCatViolation::Clause c) {
  switch (c) {
    case VCatViolation::Clause::Vc1: return "VC1";
    case VCatViolation::Clause::Vc2: return "VC2";
    case VCatViolation::Clause::Separated: return "separated";
    default: return "symmetric";
  }
}

/** Checks VC1 (unit below every a(x,x)) and VC2 (a(x,z) tensor a(z,y) below
 * a(x,y)) over all points, plus separatedness and symmetry when requested.
 * Reports every violated instance with named positions. */
template <Quantale Q>
std::vector<VCatViolation> vcat_check(const Q& q, const VCat<Q>& c, bool separated = false,
                                      bool symmetric = false) {
  std::vector<VCatViolation> out;
  std::size_t n = c.size();
  for (std::size_t x = 0; x < n; ++x)
    if (!q.leq(q.unit(), c.at(x, x)))
      out.push_back({VCatViolation::Clause::Vc1, x, x, std::nullopt});
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      for (std::size_t z = 0; z < n; ++z)
        if (!q.leq(q.tensor(c.at(x, z), c.at(z, y)), c.at(x, y)))
          out.push_back({VCatViolation::Clause::Vc2, x, y, z});
  if (separated)
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = x + 1; y < n; ++y)
        if (q.leq(q.unit(), c.at(x, y)) && q.leq(q.unit(), c.at(y, x)))
          out.push_back({VCatViolation::Clause::Separated, x, y, std::nullopt});
  if (symmetric)
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = x + 1; y < n; ++y)
        if (!q.eq(c.at(x, y), c.at(y, x)))
          out.push_back({VCatViolation::Clause::Symmetric, x, y, std::nullopt});
  return out;
}

namespace detail {
inline std::string join_labels(std::span<const std::string> parts) {
  if (parts.size() == 1) return parts[0];
  std::string s;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) s += ",";
    s += parts[i];
  }
  return s;
}

/** Enumerates tuples over the component sizes in row-major order. */
inline std::vector<std::vector<std::size_t>> tuple_indices(std::span<const std::size_t> sizes) {
  std::vector<std::vector<std::size_t>> tuples{{}};
  for (std::size_t s : sizes) {
    std::vector<std::vector<std::size_t>> next;
    next.reserve(tuples.size() * s);
    for (const auto& t : tuples)
      for (std::size_t v = 0; v < s; ++v) {
        auto u = t;
        u.push_back(v);
        next.push_back(std::move(u));
      }
    tuples = std::move(next);
  }
  return tuples;
}
}  // namespace detail

/** The product enrichment: points are tuples, the hom of two tuples is the
 * vector of componentwise homs, valued in the power quantale. */
template <Quantale Q>
VCat<PowerQuantale<Q>> vcat_product(const Q& base, std::span<const VCat<Q>> comps) {
  std::vector<std::size_t> sizes;
  for (const auto& c : comps) sizes.push_back(c.size());
  auto tuples = detail::tuple_indices(sizes);
  PowerQuantale<Q> pq(base, comps.size());
  std::vector<std::string> labels;
  labels.reserve(tuples.size());
  for (const auto& t : tuples) {
    std::vector<std::string> parts;
    for (std::size_t i = 0; i < t.size(); ++i) parts.push_back(comps[i].points[t[i]]);
    labels.push_back(detail::join_labels(parts));
  }
  VCat<PowerQuantale<Q>> out(std::move(labels), pq.unit());
  for (std::size_t a = 0; a < tuples.size(); ++a)
    for (std::size_t b = 0; b < tuples.size(); ++b) {
      typename PowerQuantale<Q>::Value v;
      v.reserve(comps.size());
      for (std::size_t i = 0; i < comps.size(); ++i)
        v.push_back(comps[i].at(tuples[a][i], tuples[b][i]));
      out.at(a, b) = std::move(v);
    }
  return out;
}

/** Several enrichments of one shared point set, bundled componentwise. */
template <Quantale Q>
VCat<PowerQuantale<Q>> vcat_shared(const Q& base, std::span<const VCat<Q>> comps) {
  if (comps.empty()) throw std::invalid_argument("vcat_shared: need at least one component");
  for (const auto& c : comps)
    if (c.points != comps[0].points)
      throw std::invalid_argument("vcat_shared: components must share one point set");
  std::size_t n = comps[0].size();
  PowerQuantale<Q> pq(base, comps.size());
  VCat<PowerQuantale<Q>> out(comps[0].points, pq.unit());
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      typename PowerQuantale<Q>::Value v;
      v.reserve(comps.size());
      for (const auto& c : comps) v.push_back(c.at(a, b));
      out.at(a, b) = std::move(v);
    }
  return out;
}

}  // namespace modagg
