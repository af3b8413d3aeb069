#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

#include "extreal.hpp"
#include "step_fn.hpp"

namespace modagg {

/** splitmix64; fixed algorithm so streams are identical across platforms. */
class SplitMix64 {
public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  std::uint64_t below(std::uint64_t n) { return next() % n; }

private:
  std::uint64_t state_;
};

/** Stable per-purpose sub-seed so adding one check never shifts another's stream. */
inline std::uint64_t fork_seed(std::uint64_t seed, std::string_view label) {
  std::uint64_t h = 1469598103934665603ull;
  for (char c : label) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  return seed ^ h;
}

/** Deterministic generator for check inputs. The value pool always contains
 * 0, 1 and inf, plus small seeded rationals (numerator and denominator up to
 * 32) and two large outliers; structured draws cover order pairs, sum pairs
 * and both triplet shapes including their boundary cases. */
class Sampler {
public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  ExtReal value() {
    switch (rng_.below(12)) {
      case 0:
      case 1: return ExtReal(0);
      case 2:
      case 3: return ExtReal(1);
      case 4: return ExtReal::inf();
      case 5: return ExtReal(Rat(1048576));
      case 6: return ExtReal(Rat(1048577));
      default: return small_rational();
    }
  }

  ExtReal small_rational() {
    return ExtReal(Rat(Int(1 + rng_.below(32)), Int(1 + rng_.below(32))));
  }

  ExtReal positive_value() {
    ExtReal v = value();
    return v.is_zero() ? small_rational() : v;
  }

  Tuple tuple(std::size_t n) {
    Tuple t;
    t.reserve(n);
    for (std::size_t i = 0; i < n; ++i) t.push_back(value());
    return t;
  }

  /** x componentwise below y. */
  std::pair<Tuple, Tuple> ordered_pair(std::size_t n) {
    Tuple x = tuple(n), y;
    y.reserve(n);
    for (const ExtReal& xi : x) y.push_back(xi + value());
    return {std::move(x), std::move(y)};
  }

  std::pair<Tuple, Tuple> sum_pair(std::size_t n) { return {tuple(n), tuple(n)}; }

  /** (a, b, c) with a <= b + c componentwise; the boundary a = b + c is drawn
   * with positive probability. */
  std::array<Tuple, 3> asym_triplet(std::size_t n) {
    Tuple b = tuple(n), c = tuple(n), a;
    a.reserve(n);
    static const Rat fractions[] = {Rat(0), Rat(1, 4), Rat(1, 3), Rat(1, 2), Rat(2, 3), Rat(3, 4)};
    for (std::size_t i = 0; i < n; ++i) {
      ExtReal cap = b[i] + c[i];
      switch (rng_.below(4)) {
        case 0:
        case 1: a.push_back(cap); break;
        case 2: a.push_back(cap * ExtReal(fractions[rng_.below(6)])); break;
        default: a.push_back(min(value(), cap)); break;
      }
    }
    return {std::move(a), std::move(b), std::move(c)};
  }

  /** A full triangle triplet: (u+v, v+w, u+w) ranges over exactly those. */
  std::array<Tuple, 3> sym_triplet(std::size_t n) {
    Tuple u = tuple(n), v = tuple(n), w = tuple(n), a, b, c;
    for (std::size_t i = 0; i < n; ++i) {
      a.push_back(u[i] + v[i]);
      b.push_back(v[i] + w[i]);
      c.push_back(u[i] + w[i]);
    }
    return {std::move(a), std::move(b), std::move(c)};
  }

  Rat positive_rational(std::uint64_t max_num, std::uint64_t max_den) {
    return Rat(Int(1 + rng_.below(max_num)), Int(1 + rng_.below(max_den)));
  }

  /** Up to max_pieces pieces, breakpoints with numerator and denominator
   * bounded by `bound`; nonincreasing by cumulative construction. */
  StepFn step_fn(std::size_t max_pieces = 5, std::uint64_t bound = 16) {
    std::size_t m = rng_.below(max_pieces);
    std::vector<Rat> bps;
    for (std::size_t k = 0; k < 3 * m && bps.size() < m; ++k) {
      Rat r = positive_rational(bound, bound);
      bool dup = false;
      for (const Rat& b : bps) dup = dup || b == r;
      if (!dup) bps.push_back(r);
    }
    std::sort(bps.begin(), bps.end());
    std::vector<ExtReal> values(bps.size() + 1);
    values.back() = value();
    for (std::size_t k = values.size() - 1; k-- > 0;) values[k] = values[k + 1] + value();
    return StepFn::make_valid(std::move(bps), std::move(values));
  }

  std::vector<StepFn> step_tuple(std::size_t n, std::size_t max_pieces = 5,
                                 std::uint64_t bound = 16) {
    std::vector<StepFn> fs;
    fs.reserve(n);
    for (std::size_t i = 0; i < n; ++i) fs.push_back(step_fn(max_pieces, bound));
    return fs;
  }

  /** Componentwise-ordered pair of step tuples: fs_i below gs_i pointwise. */
  std::pair<std::vector<StepFn>, std::vector<StepFn>> ordered_step_pair(std::size_t n) {
    std::vector<StepFn> fs = step_tuple(n), gs;
    gs.reserve(n);
    for (const StepFn& f : fs) gs.push_back(add_pointwise(f, step_fn()));
    return {std::move(fs), std::move(gs)};
  }

  std::uint64_t below(std::uint64_t n) { return rng_.below(n); }

private:
  SplitMix64 rng_;
};

}  // namespace modagg
