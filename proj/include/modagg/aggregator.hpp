#pragma once

#include <cctype>
#include <cstddef>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "extreal.hpp"
#include "step_fn.hpp"

namespace modagg {

/** Expression tree over the closed exact fragment: nonnegative constants,
 * 1-based variables, n-ary +, *, max, min. Every operation preserves
 * exactness and monotonicity in each argument. */
struct AggExpr {
  enum class Kind { Const, Var, Add, Mul, Max, Min };
  Kind kind;
  ExtReal constant;       // Const
  std::size_t var_index;  // Var, 1-based
  std::vector<std::shared_ptr<const AggExpr>> args;

  static std::shared_ptr<const AggExpr> make_const(ExtReal v) {
    auto e = std::make_shared<AggExpr>();
    e->kind = Kind::Const;
    e->constant = std::move(v);
    return e;
  }
  static std::shared_ptr<const AggExpr> make_var(std::size_t i) {
    auto e = std::make_shared<AggExpr>();
    e->kind = Kind::Var;
    e->var_index = i;
    return e;
  }
  static std::shared_ptr<const AggExpr> make_node(Kind k,
                                                  std::vector<std::shared_ptr<const AggExpr>> args) {
    auto e = std::make_shared<AggExpr>();
    e->kind = k;
    e->args = std::move(args);
    return e;
  }
};

using AggExprPtr = std::shared_ptr<const AggExpr>;

struct Builtin {
  enum class Family { Sum, WSum, Sup, Proj, ConstJump, Zero };
  Family family;
  std::vector<ExtReal> weights;  // WSum, Sup
  std::size_t index = 0;         // Proj, 1-based
  ExtReal jump;                  // ConstJump
};

namespace detail {

class ExprParser {
public:
  ExprParser(std::string_view text, std::size_t arity) : text_(text), arity_(arity) {}

  AggExprPtr parse() {
    auto e = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return e;
  }

private:
  std::string_view text_;
  std::size_t arity_, pos_ = 0;

  [[noreturn]] void fail(const std::string& what) {
    throw ParseError("expression parse error at position " + std::to_string(pos_) + ": " + what);
  }
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!eat(c)) fail(std::string("expected '") + c + "'");
  }

  AggExprPtr expr() {
    std::vector<AggExprPtr> terms{term()};
    while (eat('+')) terms.push_back(term());
    return terms.size() == 1 ? terms[0] : AggExpr::make_node(AggExpr::Kind::Add, std::move(terms));
  }
  AggExprPtr term() {
    std::vector<AggExprPtr> factors{factor()};
    while (eat('*')) factors.push_back(factor());
    return factors.size() == 1 ? factors[0]
                               : AggExpr::make_node(AggExpr::Kind::Mul, std::move(factors));
  }
  AggExprPtr factor() {
    skip_ws();
    if (pos_ >= text_.size()) fail("expected a factor");
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      auto e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return word();
    fail(std::string("unexpected character '") + c + "'");
  }
  AggExprPtr number() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) ||
                                   text_[pos_] == '/' || text_[pos_] == '.'))
      ++pos_;
    try {
      return AggExpr::make_const(ExtReal(parse_rat(text_.substr(start, pos_ - start))));
    } catch (const ParseError&) {
      pos_ = start;
      fail("malformed number '" + std::string(text_.substr(start)) + "'");
    }
  }
  AggExprPtr word() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    std::string_view name = text_.substr(start, pos_ - start);
    if (name == "inf") return AggExpr::make_const(ExtReal::inf());
    if (name == "max" || name == "min") {
      expect('(');
      std::vector<AggExprPtr> args{expr()};
      while (eat(',')) args.push_back(expr());
      expect(')');
      return AggExpr::make_node(name == "max" ? AggExpr::Kind::Max : AggExpr::Kind::Min,
                                std::move(args));
    }
    if (name == "x") {
      std::size_t dstart = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (dstart == pos_) fail("expected a variable index after 'x'");
      std::size_t idx = std::stoul(std::string(text_.substr(dstart, pos_ - dstart)));
      if (idx < 1 || idx > arity_)
        fail("variable x" + std::to_string(idx) + " out of arity " + std::to_string(arity_));
      return AggExpr::make_var(idx);
    }
    pos_ = start;
    fail("unknown identifier '" + std::string(name) + "'");
  }
};

inline ExtReal eval_expr(const AggExpr& e, std::span<const ExtReal> xs) {
  switch (e.kind) {
    case AggExpr::Kind::Const: return e.constant;
    case AggExpr::Kind::Var: return xs[e.var_index - 1];
    case AggExpr::Kind::Add: {
      ExtReal acc;
      for (const auto& a : e.args) acc += eval_expr(*a, xs);
      return acc;
    }
    case AggExpr::Kind::Mul: {
      ExtReal acc(1);
      for (const auto& a : e.args) acc *= eval_expr(*a, xs);
      return acc;
    }
    case AggExpr::Kind::Max: {
      ExtReal acc = eval_expr(*e.args[0], xs);
      for (std::size_t i = 1; i < e.args.size(); ++i) acc = max(acc, eval_expr(*e.args[i], xs));
      return acc;
    }
    default: {
      ExtReal acc = eval_expr(*e.args[0], xs);
      for (std::size_t i = 1; i < e.args.size(); ++i) acc = min(acc, eval_expr(*e.args[i], xs));
      return acc;
    }
  }
}

inline std::string print_expr(const AggExpr& e) {
  auto joined = [](const std::vector<AggExprPtr>& args, const char* sep, bool paren_adds) {
    std::string s;
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (i) s += sep;
      bool paren = paren_adds && args[i]->kind == AggExpr::Kind::Add;
      if (paren) s += "(";
      s += print_expr(*args[i]);
      if (paren) s += ")";
    }
    return s;
  };
  switch (e.kind) {
    case AggExpr::Kind::Const: return e.constant.str();
    case AggExpr::Kind::Var: return "x" + std::to_string(e.var_index);
    case AggExpr::Kind::Add: return joined(e.args, "+", false);
    case AggExpr::Kind::Mul: return joined(e.args, "*", true);
    case AggExpr::Kind::Max: return "max(" + joined(e.args, ",", false) + ")";
    default: return "min(" + joined(e.args, ",", false) + ")";
  }
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto p = s.find(sep, start);
    if (p == std::string_view::npos) {
      out.emplace_back(s.substr(start));
      return out;
    }
    out.emplace_back(s.substr(start, p - start));
    start = p + 1;
  }
}

}  // namespace detail

/** An aggregation candidate [0, inf]^n -> [0, inf]: either a registry builtin
 * or an expression from the closed DSL fragment. Evaluation is exact. */
class Aggregator {
public:
  static Aggregator sum(std::size_t n) { return Aggregator(n, Builtin{Builtin::Family::Sum, {}, 0, {}}); }
  static Aggregator zero(std::size_t n) {
    return Aggregator(n, Builtin{Builtin::Family::Zero, {}, 0, {}});
  }
  static Aggregator proj(std::size_t j, std::size_t n) {
    if (j < 1 || j > n) throw std::invalid_argument("proj: index out of arity");
    return Aggregator(n, Builtin{Builtin::Family::Proj, {}, j, {}});
  }
  static Aggregator wsum(std::vector<ExtReal> weights) {
    return weighted(Builtin::Family::WSum, std::move(weights));
  }
  static Aggregator sup(std::vector<ExtReal> weights) {
    return weighted(Builtin::Family::Sup, std::move(weights));
  }
  static Aggregator const_jump(ExtReal k, std::size_t n) {
    return Aggregator(n, Builtin{Builtin::Family::ConstJump, {}, 0, std::move(k)});
  }
  static Aggregator from_expr(AggExprPtr e, std::size_t n) { return Aggregator(n, std::move(e)); }

  static Aggregator parse_expr(std::string_view text, std::size_t arity) {
    if (arity < 1) throw std::invalid_argument("aggregator arity must be at least 1");
    return Aggregator(arity, detail::ExprParser(text, arity).parse());
  }

  /** Parses "builtin:<name>[:params]" or "expr:<expression>" at a given arity. */
  static Aggregator parse_spec(std::string_view spec, std::size_t arity) {
    if (arity < 1) throw std::invalid_argument("aggregator arity must be at least 1");
    if (spec.rfind("expr:", 0) == 0) return parse_expr(spec.substr(5), arity);
    if (spec.rfind("builtin:", 0) != 0)
      throw ParseError("aggregator spec must start with 'builtin:' or 'expr:'");
    auto parts = detail::split(spec.substr(8), ':');
    const std::string& name = parts[0];
    auto weights_of = [&](const std::string& csv) {
      std::vector<ExtReal> ws;
      for (const auto& w : detail::split(csv, ',')) ws.push_back(ExtReal::parse(w));
      if (ws.size() != arity)
        throw std::invalid_argument("expected " + std::to_string(arity) + " weights, got " +
                                    std::to_string(ws.size()));
      return ws;
    };
    if (name == "sum" && parts.size() == 1) return sum(arity);
    if (name == "zero" && parts.size() == 1) return zero(arity);
    if (name == "proj" && parts.size() == 2) return proj(std::stoul(parts[1]), arity);
    if (name == "wsum" && parts.size() == 2) return wsum(weights_of(parts[1]));
    if (name == "sup" && parts.size() == 2) return sup(weights_of(parts[1]));
    if (name == "const_jump" && parts.size() == 2) return const_jump(ExtReal::parse(parts[1]), arity);
    throw ParseError("unknown builtin spec '" + std::string(spec) + "'");
  }

  std::size_t arity() const { return arity_; }
  bool is_builtin() const { return std::holds_alternative<Builtin>(body_); }
  const Builtin* builtin() const { return std::get_if<Builtin>(&body_); }
  const AggExprPtr* expr() const { return std::get_if<AggExprPtr>(&body_); }

  ExtReal eval(std::span<const ExtReal> xs) const {
    if (xs.size() != arity_)
      throw std::invalid_argument("aggregator of arity " + std::to_string(arity_) +
                                  " applied to " + std::to_string(xs.size()) + " values");
    if (const Builtin* b = builtin()) {
      switch (b->family) {
        case Builtin::Family::Sum: {
          ExtReal acc;
          for (const ExtReal& x : xs) acc += x;
          return acc;
        }
        case Builtin::Family::WSum: {
          ExtReal acc;
          for (std::size_t i = 0; i < xs.size(); ++i) acc += b->weights[i] * xs[i];
          return acc;
        }
        case Builtin::Family::Sup: {
          ExtReal acc = b->weights[0] * xs[0];
          for (std::size_t i = 1; i < xs.size(); ++i) acc = max(acc, b->weights[i] * xs[i]);
          return acc;
        }
        case Builtin::Family::Proj: return xs[b->index - 1];
        case Builtin::Family::ConstJump: {
          for (const ExtReal& x : xs)
            if (!x.is_zero()) return b->jump;
          return ExtReal();
        }
        default: return ExtReal();
      }
    }
    return detail::eval_expr(**expr(), xs);
  }

  ExtReal eval(std::initializer_list<ExtReal> xs) const {
    return eval(std::span<const ExtReal>(xs.begin(), xs.size()));
  }

  /** Canonical spec string, replayable through parse_spec at the same arity. */
  std::string describe() const {
    if (const Builtin* b = builtin()) {
      auto csv = [&] {
        std::string s;
        for (std::size_t i = 0; i < b->weights.size(); ++i) {
          if (i) s += ",";
          s += b->weights[i].str();
        }
        return s;
      };
      switch (b->family) {
        case Builtin::Family::Sum: return "builtin:sum";
        case Builtin::Family::WSum: return "builtin:wsum:" + csv();
        case Builtin::Family::Sup: return "builtin:sup:" + csv();
        case Builtin::Family::Proj: return "builtin:proj:" + std::to_string(b->index);
        case Builtin::Family::ConstJump: return "builtin:const_jump:" + b->jump.str();
        default: return "builtin:zero";
      }
    }
    return "expr:" + detail::print_expr(**expr());
  }

  bool weights_include_inf() const {
    if (const Builtin* b = builtin())
      for (const ExtReal& w : b->weights)
        if (w.is_inf()) return true;
    return false;
  }

private:
  Aggregator(std::size_t arity, std::variant<Builtin, AggExprPtr> body)
      : arity_(arity), body_(std::move(body)) {
    if (arity_ < 1) throw std::invalid_argument("aggregator arity must be at least 1");
  }
  static Aggregator weighted(Builtin::Family fam, std::vector<ExtReal> ws) {
    if (ws.empty()) throw std::invalid_argument("weighted aggregator needs at least one weight");
    for (const ExtReal& w : ws)
      if (w.is_zero()) throw std::invalid_argument("weights must be positive (inf allowed)");
    const std::size_t n = ws.size();
    return Aggregator(n, Builtin{fam, std::move(ws), 0, {}});
  }

  std::size_t arity_;
  std::variant<Builtin, AggExprPtr> body_;
};

/** Pointwise application of F to a tuple of step functions on the merged grid;
 * the composite can escape the nonincreasing class, which is reported. */
inline std::variant<StepFn, NotNonincreasing> lift(const Aggregator& f,
                                                   std::span<const StepFn> fs) {
  if (fs.size() != f.arity())
    throw std::invalid_argument("lift: aggregator arity " + std::to_string(f.arity()) +
                                " applied to " + std::to_string(fs.size()) + " functions");
  return lift_pointwise([&](std::span<const ExtReal> xs) { return f.eval(xs); }, fs);
}

}  // namespace modagg
