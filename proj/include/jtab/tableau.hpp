#pragma once

// Signed tableau calculus: rules, proof trees and closure detection.

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "jtab/logic.hpp"
#include "jtab/syntax.hpp"

namespace jtab {

enum class Rule : std::uint8_t {
  Root,
  FNeg,
  TNeg,
  FImp,
  TImp,
  TE,
  FE,
  SumL,
  SumR,
  App,
  PB,
  PBe,
  E,
  EBot,
  Bang,
  WQuery,
  Query,
  Cut,
};

inline std::string to_string(Rule r) {
  switch (r) {
    case Rule::Root: return "root";
    case Rule::FNeg: return "F~";
    case Rule::TNeg: return "T~";
    case Rule::FImp: return "F->";
    case Rule::TImp: return "T->";
    case Rule::TE: return "Te";
    case Rule::FE: return "Fe";
    case Rule::SumL: return "+L";
    case Rule::SumR: return "+R";
    case Rule::App: return "*";
    case Rule::PB: return "PB";
    case Rule::PBe: return "PBe";
    case Rule::E: return "e";
    case Rule::EBot: return "e_bot";
    case Rule::Bang: return "!";
    case Rule::WQuery: return "??";
    case Rule::Query: return "?";
    case Rule::Cut: return "cut";
  }
  return "?";
}

inline std::optional<Rule> rule_from_string(std::string_view s) {
  for (int i = 0; i <= static_cast<int>(Rule::Cut); ++i) {
    auto r = static_cast<Rule>(i);
    if (to_string(r) == s) return r;
  }
  return std::nullopt;
}

inline bool is_branching(Rule r) {
  return r == Rule::TImp || r == Rule::PB || r == Rule::PBe || r == Rule::Cut;
}

/// Whether the rule belongs to the calculus of `logic` (cuts never do).
inline bool rule_active(Rule r, const LogicSpec& logic) {
  switch (r) {
    case Rule::E: return logic.t;
    case Rule::EBot: return logic.d;
    case Rule::Bang: return logic.four;
    case Rule::WQuery: return logic.b;
    case Rule::Query: return logic.five;
    case Rule::Cut: return false;
    default: return true;
  }
}

/// How a node was obtained. Premises are stored by content and resolve to
/// their nearest occurrence above the node. `part` is the product index for
/// linear rules and the fork index for branching rules.
struct Step {
  Rule rule = Rule::Root;
  std::vector<SignedFormula> premises;
  int part = 0;

  friend bool operator==(const Step&, const Step&) = default;
};

struct TabNode {
  SignedFormula formula;
  Step step;
  std::vector<TabNode> children;
};

/// A proof tree. The root sequence is the chain of Root-justified nodes
/// starting at `root`.
struct Tableau {
  TabNode root;

  std::vector<SignedFormula> root_sequence() const {
    std::vector<SignedFormula> out;
    const TabNode* n = &root;
    while (n && n->step.rule == Rule::Root) {
      out.push_back(n->formula);
      n = n->children.size() == 1 ? &n->children[0] : nullptr;
    }
    return out;
  }
};

inline std::size_t count_nodes(const TabNode& n) {
  std::size_t k = 1;
  for (const auto& c : n.children) k += count_nodes(c);
  return k;
}

inline std::size_t count_nodes(const std::vector<TabNode>& ns) {
  std::size_t k = 0;
  for (const auto& c : ns) k += count_nodes(c);
  return k;
}

/// Builds a linear chain of nodes; returns the head. `tail_children` go under
/// the last node.
inline TabNode make_chain(std::vector<std::pair<SignedFormula, Step>> items,
                          std::vector<TabNode> tail_children = {}) {
  std::vector<TabNode> below = std::move(tail_children);
  for (auto it = items.rbegin(); it != items.rend(); ++it) {
    TabNode n{std::move(it->first), std::move(it->second), std::move(below)};
    below.clear();
    below.push_back(std::move(n));
  }
  return std::move(below.front());
}

// ---------------------------------------------------------------------------
// Rule products
// ---------------------------------------------------------------------------

struct RuleInstance {
  Rule rule = Rule::Root;
  std::vector<SignedFormula> premises;
  /// One list for linear rules, two for branching rules.
  std::vector<std::vector<SignedFormula>> forks;

  bool branching() const { return forks.size() == 2; }
  friend bool operator==(const RuleInstance&, const RuleInstance&) = default;
};

/// Every one-premise rule that applies to `sf` in `logic`, with its products.
/// (+L) and (+R) are reported separately.
inline std::vector<RuleInstance> unary_instances(const SignedFormula& sf, const LogicSpec& logic) {
  std::vector<RuleInstance> out;
  const Formula& a = sf.body;
  auto linear = [&](Rule r, std::vector<SignedFormula> products) {
    out.push_back({r, {sf}, {std::move(products)}});
  };
  if (!sf.evidential()) {
    switch (a.kind()) {
      case FormulaKind::Neg:
        if (sf.is_true()) {
          linear(Rule::TNeg, {SignedFormula::f(a.inner())});
        } else {
          linear(Rule::FNeg, {SignedFormula::t(a.inner())});
        }
        break;
      case FormulaKind::Implies:
        if (sf.is_true()) {
          out.push_back({Rule::TImp, {sf}, {{SignedFormula::f(a.lhs())}, {SignedFormula::t(a.rhs())}}});
        } else {
          linear(Rule::FImp, {SignedFormula::t(a.lhs()), SignedFormula::f(a.rhs())});
        }
        break;
      case FormulaKind::Just:
        if (sf.is_true()) {
          linear(Rule::TE, {SignedFormula::te(a.term(), a.body())});
        } else {
          linear(Rule::FE, {SignedFormula::fe(a.term(), a.body())});
        }
        break;
      default:
        break;
    }
    return out;
  }
  const Term& t = sf.term;
  if (sf.is_true()) {
    if (logic.t) linear(Rule::E, {SignedFormula::t(a)});
    if (logic.d && a.is(FormulaKind::Bottom)) linear(Rule::EBot, {SignedFormula::t(a)});
    return out;
  }
  switch (t.kind()) {
    case TermKind::Sum:
      linear(Rule::SumL, {SignedFormula::fe(t.lhs(), a)});
      linear(Rule::SumR, {SignedFormula::fe(t.rhs(), a)});
      break;
    case TermKind::Bang:  // F [!t, t:A] => F [t, A]
      if (logic.four && a.is(FormulaKind::Just) && a.term() == t.inner()) {
        linear(Rule::Bang, {SignedFormula::fe(t.inner(), a.body())});
      }
      break;
    case TermKind::WQuery:  // F [??t, ~t:A] => T A
      if (logic.b && a.is(FormulaKind::Neg) && a.inner().is(FormulaKind::Just) &&
          a.inner().term() == t.inner()) {
        linear(Rule::WQuery, {SignedFormula::t(a.inner().body())});
      }
      break;
    case TermKind::Query:  // F [?t, ~t:A] => T [t, A]
      if (logic.five && a.is(FormulaKind::Neg) && a.inner().is(FormulaKind::Just) &&
          a.inner().term() == t.inner()) {
        linear(Rule::Query, {SignedFormula::te(t.inner(), a.inner().body())});
      }
      break;
    default:
      break;
  }
  return out;
}

/// (*) from T [s, A->B] and T [t, A], subject to its side conditions.
inline std::optional<RuleInstance> app_instance(const SignedFormula& imp, const SignedFormula& arg,
                                                const AnalyticScope& scope) {
  if (!imp.evidential() || !arg.evidential() || !imp.is_true() || !arg.is_true()) return std::nullopt;
  if (!imp.body.is(FormulaKind::Implies) || imp.body.lhs() != arg.body) return std::nullopt;
  Term st = Term::app(imp.term, arg.term);
  if (!scope.has_formula(imp.body) || !scope.has_term(st)) return std::nullopt;
  return RuleInstance{Rule::App, {imp, arg}, {{SignedFormula::te(st, imp.body.rhs())}}};
}

inline RuleInstance pb_instance(const Formula& pivot) {
  return {Rule::PB, {}, {{SignedFormula::t(pivot)}, {SignedFormula::f(pivot)}}};
}

inline RuleInstance pbe_instance(const Term& t, const Formula& a) {
  return {Rule::PBe, {}, {{SignedFormula::te(t, a)}, {SignedFormula::fe(t, a)}}};
}

inline bool pb_allowed(const Formula& pivot, const AnalyticScope& scope) {
  return scope.has_formula(pivot);
}

inline bool pbe_allowed(const Term& t, const Formula& a, const AnalyticScope& scope) {
  return scope.has_formula(a) && scope.has_term(t);
}

// ---------------------------------------------------------------------------
// Closure
// ---------------------------------------------------------------------------

enum class Closure : std::uint8_t { Open, Pair, Evidential, Bottom, Cs };

inline std::string to_string(Closure c) {
  switch (c) {
    case Closure::Open: return "open";
    case Closure::Pair: return "pair";
    case Closure::Evidential: return "evidential";
    case Closure::Bottom: return "bottom";
    case Closure::Cs: return "cs";
  }
  return "?";
}

/// Unsigned reading of a JL signed formula: T A is A, F A is ~A.
inline Formula unsigned_form(const SignedFormula& sf) {
  return sf.is_true() ? sf.body : Formula::neg(sf.body);
}

namespace detail {
template <class Has>
bool in_unsigned(const Formula& x, const Has& has) {
  if (has(SignedFormula::t(x))) return true;
  return x.is(FormulaKind::Neg) && has(SignedFormula::f(x.inner()));
}
}  // namespace detail

/// Does `sf`, together with formulas for which `has` holds, close a branch?
/// JL-formulas are compared through their unsigned reading, so T A / F A,
/// T A / T ~A and F A / F ~A all close.
template <class Has>
Closure closes_with(const SignedFormula& sf, const Has& has, const ConstantSpecification& cs) {
  if (sf.evidential()) return has(sf.conjugate()) ? Closure::Evidential : Closure::Open;
  Formula u = unsigned_form(sf);
  if (u.is(FormulaKind::Bottom)) return Closure::Bottom;
  if (detail::in_unsigned(Formula::neg(u), has)) return Closure::Pair;
  if (u.is(FormulaKind::Neg) && detail::in_unsigned(u.inner(), has)) return Closure::Pair;
  if (u.is(FormulaKind::Neg) && u.inner().is(FormulaKind::Just) &&
      u.inner().term().kind() == TermKind::Const && cs.contains(u.inner())) {
    return Closure::Cs;
  }
  return Closure::Open;
}

/// Multiset of signed formulas on a branch with push/pop and incremental
/// closure tracking.
class BranchSet {
 public:
  explicit BranchSet(const ConstantSpecification& cs) : cs_(&cs) {}

  bool contains(const SignedFormula& sf) const {
    auto it = counts_.find(sf);
    return it != counts_.end() && it->second > 0;
  }

  /// Adds a formula; returns the closure reason it triggers (if any).
  Closure push(const SignedFormula& sf) {
    Closure c = closes_with(sf, [this](const SignedFormula& g) { return contains(g); }, *cs_);
    seq_.push_back(sf);
    ++counts_[sf];
    if (c != Closure::Open && closed_at_ == npos) closed_at_ = seq_.size();
    return c;
  }

  void pop() {
    if (closed_at_ == seq_.size()) closed_at_ = npos;
    auto it = counts_.find(seq_.back());
    if (--it->second == 0) counts_.erase(it);
    seq_.pop_back();
  }

  void truncate(std::size_t n) {
    while (seq_.size() > n) pop();
  }

  bool closed() const { return closed_at_ != npos; }
  std::size_t size() const { return seq_.size(); }
  const std::vector<SignedFormula>& sequence() const { return seq_; }
  const ConstantSpecification& cs() const { return *cs_; }

 private:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  const ConstantSpecification* cs_;
  std::vector<SignedFormula> seq_;
  std::unordered_map<SignedFormula, int> counts_;
  std::size_t closed_at_ = npos;
};

struct ClosureStatus {
  Closure reason = Closure::Open;
  bool closed() const { return reason != Closure::Open; }
};

/// Closed iff a complementary pair (formula or evidential), T _|_, or F c:F
/// with c:F in the CS occurs on the branch.
inline ClosureStatus closure_status(const std::vector<SignedFormula>& branch,
                                    const ConstantSpecification& cs) {
  BranchSet set(cs);
  for (const auto& sf : branch) {
    Closure c = set.push(sf);
    if (c != Closure::Open) return {c};
  }
  return {};
}

}  // namespace jtab
