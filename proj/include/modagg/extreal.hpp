#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace modagg {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

class ExtReal;
/** A point of the n-fold product domain. */
using Tuple = std::vector<ExtReal>;

/** Thrown on malformed textual input (numbers, step functions, expressions). */
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/** Parses a nonnegative rational literal: "7", "3/4" or an exact decimal "1.25".
 * No sign, no exponent. Throws ParseError. */
inline Rat parse_rat(std::string_view text) {
  auto fail = [&] { throw ParseError("invalid rational literal '" + std::string(text) + "'"); };
  if (text.empty()) fail();
  auto digits = [&](std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
      if (c < '0' || c > '9') return false;
    return true;
  };
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    std::string_view num = text.substr(0, slash), den = text.substr(slash + 1);
    if (!digits(num) || !digits(den)) fail();
    Int d{std::string(den)};
    if (d == 0) fail();
    return Rat(Int{std::string(num)}, d);
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view whole = text.substr(0, dot), frac = text.substr(dot + 1);
    if (!digits(frac) || (!whole.empty() && !digits(whole))) fail();
    Int scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    Int w = whole.empty() ? Int(0) : Int(std::string(whole));
    return Rat(w * scale + Int(std::string(frac)), scale);
  }
  if (!digits(text)) fail();
  return Rat(Int(std::string(text)));
}

/** Exact element of [0, inf]: an arbitrary-precision nonnegative rational or a
 * tagged infinity. Infinity is absorbing for +; multiplication uses the
 * conventions inf*0 = 0 and inf*a = inf for a > 0. The order is total with
 * every rational below infinity. */
class ExtReal {
public:
  ExtReal() : rat_(0), inf_(false) {}
  ExtReal(Rat r) : rat_(std::move(r)), inf_(false) {
    if (rat_ < 0) throw std::domain_error("ExtReal cannot be negative");
  }
  ExtReal(long long v) : ExtReal(Rat(v)) {}
  ExtReal(int v) : ExtReal(Rat(v)) {}

  static ExtReal inf() {
    ExtReal e;
    e.inf_ = true;
    return e;
  }

  bool is_inf() const { return inf_; }
  bool is_zero() const { return !inf_ && rat_ == 0; }

  /** The rational value; only meaningful when finite. */
  const Rat& rat() const {
    if (inf_) throw std::logic_error("ExtReal::rat on infinity");
    return rat_;
  }

  friend ExtReal operator+(const ExtReal& a, const ExtReal& b) {
    if (a.inf_ || b.inf_) return inf();
    return ExtReal(a.rat_ + b.rat_);
  }

  friend ExtReal operator*(const ExtReal& a, const ExtReal& b) {
    if (a.is_zero() || b.is_zero()) return ExtReal();
    if (a.inf_ || b.inf_) return inf();
    return ExtReal(a.rat_ * b.rat_);
  }

  ExtReal& operator+=(const ExtReal& o) { return *this = *this + o; }
  ExtReal& operator*=(const ExtReal& o) { return *this = *this * o; }

  friend bool operator==(const ExtReal& a, const ExtReal& b) {
    if (a.inf_ != b.inf_) return false;
    return a.inf_ || a.rat_ == b.rat_;
  }

  friend std::strong_ordering operator<=>(const ExtReal& a, const ExtReal& b) {
    if (a.inf_ && b.inf_) return std::strong_ordering::equal;
    if (a.inf_) return std::strong_ordering::greater;
    if (b.inf_) return std::strong_ordering::less;
    if (a.rat_ < b.rat_) return std::strong_ordering::less;
    if (a.rat_ == b.rat_) return std::strong_ordering::equal;
    return std::strong_ordering::greater;
  }

  static ExtReal parse(std::string_view text) {
    if (text == "inf") return inf();
    return ExtReal(parse_rat(text));
  }

  std::string str() const {
    if (inf_) return "inf";
    if (denominator(rat_) == 1) return numerator(rat_).str();
    return numerator(rat_).str() + "/" + denominator(rat_).str();
  }

private:
  Rat rat_;
  bool inf_;
};

inline ExtReal min(const ExtReal& a, const ExtReal& b) { return a <= b ? a : b; }
inline ExtReal max(const ExtReal& a, const ExtReal& b) { return a >= b ? a : b; }

inline std::string rat_str(const Rat& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

}  // namespace modagg
