#pragma once

// Independent certification of tableau proofs and the subformula audit.
// The checker re-derives every rule pattern itself rather than reusing the
// prover's rule tables.

#include <optional>
#include <string>
#include <vector>

#include "jtab/logic.hpp"
#include "jtab/tableau.hpp"

namespace jtab {

struct CheckResult {
  bool ok = true;
  std::string reason;

  static CheckResult accept() { return {}; }
  static CheckResult reject(std::string why) { return {false, std::move(why)}; }
  explicit operator bool() const { return ok; }
};

struct CheckOptions {
  /// Permit Cut nodes (used for intermediate tableaux during cut elimination).
  bool allow_cuts = false;
  /// Re-check the analytic side conditions of (*), (PB) and (PBe).
  bool side_conditions = true;
};

namespace detail {

// Expected product of a non-branching step, or nullopt when the premises do
// not fit the rule's pattern.
inline std::optional<SignedFormula> expected_linear(const Step& s, const AnalyticScope& scope,
                                                    const CheckOptions& opt, std::string& why) {
  const auto& p = s.premises;
  auto one = [&]() -> const SignedFormula* {
    if (p.size() != 1) {
      why = "wrong premise count";
      return nullptr;
    }
    return &p[0];
  };
  auto plain = [](const SignedFormula& sf, Sign sign, FormulaKind k) {
    return !sf.evidential() && sf.sign == sign && sf.body.is(k);
  };
  auto evid = [](const SignedFormula& sf, Sign sign) { return sf.evidential() && sf.sign == sign; };

  switch (s.rule) {
    case Rule::FNeg: {
      auto* a = one();
      if (!a || !plain(*a, Sign::F, FormulaKind::Neg) || s.part != 0) break;
      return SignedFormula::t(a->body.inner());
    }
    case Rule::TNeg: {
      auto* a = one();
      if (!a || !plain(*a, Sign::T, FormulaKind::Neg) || s.part != 0) break;
      return SignedFormula::f(a->body.inner());
    }
    case Rule::FImp: {
      auto* a = one();
      if (!a || !plain(*a, Sign::F, FormulaKind::Implies)) break;
      if (s.part == 0) return SignedFormula::t(a->body.lhs());
      if (s.part == 1) return SignedFormula::f(a->body.rhs());
      break;
    }
    case Rule::TE: {
      auto* a = one();
      if (!a || !plain(*a, Sign::T, FormulaKind::Just) || s.part != 0) break;
      return SignedFormula::te(a->body.term(), a->body.body());
    }
    case Rule::FE: {
      auto* a = one();
      if (!a || !plain(*a, Sign::F, FormulaKind::Just) || s.part != 0) break;
      return SignedFormula::fe(a->body.term(), a->body.body());
    }
    case Rule::SumL:
    case Rule::SumR: {
      auto* a = one();
      if (!a || !evid(*a, Sign::F) || a->term.kind() != TermKind::Sum || s.part != 0) break;
      return SignedFormula::fe(s.rule == Rule::SumL ? a->term.lhs() : a->term.rhs(), a->body);
    }
    case Rule::App: {
      if (p.size() != 2 || s.part != 0) {
        why = "wrong premise count";
        break;
      }
      const auto& imp = p[0];
      const auto& arg = p[1];
      if (!evid(imp, Sign::T) || !evid(arg, Sign::T) || !imp.body.is(FormulaKind::Implies) ||
          imp.body.lhs() != arg.body) {
        break;
      }
      Term st = Term::app(imp.term, arg.term);
      if (opt.side_conditions && (!scope.has_formula(imp.body) || !scope.has_term(st))) {
        why = "side condition of (*) violated";
        return std::nullopt;
      }
      return SignedFormula::te(st, imp.body.rhs());
    }
    case Rule::E: {
      auto* a = one();
      if (!a || !evid(*a, Sign::T) || s.part != 0) break;
      return SignedFormula::t(a->body);
    }
    case Rule::EBot: {
      auto* a = one();
      if (!a || !evid(*a, Sign::T) || !a->body.is(FormulaKind::Bottom) || s.part != 0) break;
      return SignedFormula::t(Formula::bottom());
    }
    case Rule::Bang: {
      auto* a = one();
      if (!a || !evid(*a, Sign::F) || a->term.kind() != TermKind::Bang || s.part != 0) break;
      if (!a->body.is(FormulaKind::Just) || a->body.term() != a->term.inner()) break;
      return SignedFormula::fe(a->term.inner(), a->body.body());
    }
    case Rule::WQuery:
    case Rule::Query: {
      auto* a = one();
      TermKind want = s.rule == Rule::Query ? TermKind::Query : TermKind::WQuery;
      if (!a || !evid(*a, Sign::F) || a->term.kind() != want || s.part != 0) break;
      const Formula& b = a->body;
      if (!b.is(FormulaKind::Neg) || !b.inner().is(FormulaKind::Just) ||
          b.inner().term() != a->term.inner()) {
        break;
      }
      if (s.rule == Rule::Query) return SignedFormula::te(a->term.inner(), b.inner().body());
      return SignedFormula::t(b.inner().body());
    }
    default:
      why = "not a linear rule";
      return std::nullopt;
  }
  if (why.empty()) why = "premises do not match rule pattern";
  return std::nullopt;
}

// Validates the two fork heads of a branching step.
inline std::optional<std::string> check_fork(const TabNode& left, const TabNode& right,
                                             const LogicSpec& logic, const AnalyticScope& scope,
                                             const CheckOptions& opt) {
  const Step& a = left.step;
  const Step& b = right.step;
  if (a.rule != b.rule || !is_branching(a.rule)) return "children of a branching node differ in rule";
  if (a.premises != b.premises) return "fork heads cite different premises";
  if (a.part != 0 || b.part != 1) return "fork heads out of order";
  if (a.rule == Rule::Cut && !opt.allow_cuts) return "cut node in a cut-free proof";
  if (a.rule != Rule::Cut && !rule_active(a.rule, logic)) return "rule not in calculus";
  const SignedFormula& l = left.formula;
  const SignedFormula& r = right.formula;
  switch (a.rule) {
    case Rule::TImp: {
      if (a.premises.size() != 1) return "wrong premise count";
      const auto& prem = a.premises[0];
      if (prem.evidential() || !prem.is_true() || !prem.body.is(FormulaKind::Implies)) {
        return "premises do not match rule pattern";
      }
      if (l != SignedFormula::f(prem.body.lhs()) || r != SignedFormula::t(prem.body.rhs())) {
        return "fork products do not match (T->)";
      }
      return std::nullopt;
    }
    case Rule::PB:
    case Rule::PBe:
    case Rule::Cut: {
      if (!a.premises.empty()) return "pivot rules take no premises";
      if (!l.is_true() || r != l.conjugate()) return "forks are not complementary";
      if (a.rule == Rule::PB) {
        if (l.evidential()) return "(PB) pivot is evidential";
        if (opt.side_conditions && !pb_allowed(l.body, scope)) return "side condition of (PB) violated";
      } else if (a.rule == Rule::PBe) {
        if (!l.evidential()) return "(PBe) pivot is not evidential";
        if (opt.side_conditions && !pbe_allowed(l.term, l.body, scope)) {
          return "side condition of (PBe) violated";
        }
      }
      return std::nullopt;
    }
    default:
      return "not a branching rule";
  }
}

struct CheckWalker {
  const LogicSpec& logic;
  const AnalyticScope& scope;
  const CheckOptions& opt;
  BranchSet branch;
  std::string failure;

  bool premises_present(const TabNode& n) {
    for (const auto& p : n.step.premises) {
      if (!branch.contains(p)) {
        failure = "premise " + render_signed(p) + " of " + render_signed(n.formula) +
                  " is not on its branch";
        return false;
      }
    }
    return true;
  }

  bool walk_children(const TabNode& parent) {
    const auto& ch = parent.children;
    if (ch.empty()) {
      if (!branch.closed()) {
        failure = "open leaf at " + render_signed(parent.formula);
        return false;
      }
      return true;
    }
    if (ch.size() == 1) {
      const TabNode& n = ch[0];
      if (n.step.rule == Rule::Root) {
        failure = "root-justified node below the root";
        return false;
      }
      if (is_branching(n.step.rule)) {
        failure = "branching rule with a single fork at " + render_signed(n.formula);
        return false;
      }
      if (!rule_active(n.step.rule, logic)) {
        failure = "rule " + to_string(n.step.rule) + " not in the calculus of " + logic.name();
        return false;
      }
      if (!premises_present(n)) return false;
      std::string why;
      auto expected = expected_linear(n.step, scope, opt, why);
      if (!expected) {
        failure = "bad " + to_string(n.step.rule) + " step at " + render_signed(n.formula) + ": " + why;
        return false;
      }
      if (*expected != n.formula) {
        failure = "product mismatch at " + render_signed(n.formula) + " (expected " +
                  render_signed(*expected) + ")";
        return false;
      }
      return walk(n);
    }
    if (ch.size() != 2) {
      failure = "node with more than two children";
      return false;
    }
    if (auto err = check_fork(ch[0], ch[1], logic, scope, opt)) {
      failure = *err + " below " + render_signed(parent.formula);
      return false;
    }
    if (!premises_present(ch[0])) return false;
    return walk(ch[0]) && walk(ch[1]);
  }

  bool walk(const TabNode& n) {
    branch.push(n.formula);
    bool ok = walk_children(n);
    branch.pop();
    return ok;
  }
};

}  // namespace detail

/// Accepts iff the root is F goal, every node is a legal rule application
/// with premises above it on its branch, and every branch is closed.
inline CheckResult check_proof(const Tableau& tableau, const Formula& goal, const LogicSpec& logic,
                               const ConstantSpecification& cs, const CheckOptions& opt = {}) {
  if (tableau.root.step.rule != Rule::Root || tableau.root.formula != SignedFormula::f(goal)) {
    return CheckResult::reject("root is not F " + render_formula(goal));
  }
  AnalyticScope scope(goal, cs);
  detail::CheckWalker w{logic, scope, opt, BranchSet(cs), {}};
  if (!w.walk(tableau.root)) return CheckResult::reject(w.failure);
  return CheckResult::accept();
}

namespace detail {
inline bool audit_walk(const TabNode& n, const std::set<Formula>& weak, const AnalyticScope& scope,
                       std::string& bad) {
  const auto& sf = n.formula;
  bool ok = sf.evidential() ? (scope.has_formula(sf.body) && scope.has_term(sf.term))
                            : weak.contains(unsigned_form(sf));
  if (!ok) {
    bad = render_signed(sf);
    return false;
  }
  for (const auto& c : n.children) {
    if (!audit_walk(c, weak, scope, bad)) return false;
  }
  return true;
}
}  // namespace detail

/// Every JL-formula is a weak CS-subformula of the root; every evidential
/// body is a CS-subformula and every evidential term occurs in root or CS.
inline CheckResult audit_subformula_property(const Tableau& tableau, const Formula& root,
                                             const ConstantSpecification& cs) {
  AnalyticScope scope(root, cs);
  auto weak = weak_cs_subformulas(root, cs);
  std::string bad;
  if (!detail::audit_walk(tableau.root, weak, scope, bad)) {
    return CheckResult::reject("node outside the analytic universe: " + bad);
  }
  return CheckResult::accept();
}

}  // namespace jtab
