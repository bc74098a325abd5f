#pragma once

// Finitely presented Mkrtychev models. All closure conditions on the
// evidence function are relativized to the model's finite term set and
// formula universe.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "jtab/logic.hpp"
#include "jtab/tableau.hpp"

namespace jtab {

struct Model {
  std::map<std::string, bool> valuation;
  std::set<EvidentialAtom> evidence;
  std::set<Formula> universe;
  std::set<Term> terms;

  bool has_evidence(const Term& t, const Formula& a) const { return evidence.contains({t, a}); }
};

inline bool eval(const Model& m, const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Bottom:
      return false;
    case FormulaKind::Prop: {
      auto it = m.valuation.find(f.name());
      return it != m.valuation.end() && it->second;
    }
    case FormulaKind::Neg:
      return !eval(m, f.inner());
    case FormulaKind::Implies:
      return !eval(m, f.lhs()) || eval(m, f.rhs());
    case FormulaKind::Just:
      return m.has_evidence(f.term(), f.body());
  }
  return false;
}

inline bool eval(const Model& m, const SignedFormula& sf) {
  bool v = sf.evidential() ? m.has_evidence(sf.term, sf.body) : eval(m, sf.body);
  return sf.is_true() ? v : !v;
}

namespace detail {

// Instances of the closure conditions E1, E2, E6 generated by the current
// evidence, restricted to terms x universe.
inline std::vector<EvidentialAtom> closure_demands(const Model& m, const LogicSpec& logic) {
  std::vector<EvidentialAtom> out;
  for (const auto& [s, imp] : m.evidence) {
    if (!imp.is(FormulaKind::Implies)) continue;
    for (const auto& [t, a] : m.evidence) {
      if (a != imp.lhs()) continue;
      Term st = Term::app(s, t);
      if (m.terms.contains(st) && m.universe.contains(imp.rhs())) out.push_back({st, imp.rhs()});
    }
  }
  for (const auto& u : m.terms) {
    if (u.kind() != TermKind::Sum) continue;
    for (const auto& [s, a] : m.evidence) {
      if (s == u.lhs() || s == u.rhs()) out.push_back({u, a});
    }
  }
  if (logic.four) {
    for (const auto& [t, a] : m.evidence) {
      Term bt = Term::bang(t);
      Formula ta = Formula::just(t, a);
      if (m.terms.contains(bt) && m.universe.contains(ta)) out.push_back({bt, ta});
    }
  }
  return out;
}

// E7/E8 instances whose hypotheses hold in the current model.
inline std::vector<EvidentialAtom> negative_demands(const Model& m, const LogicSpec& logic) {
  std::vector<EvidentialAtom> out;
  if (!logic.b && !logic.five) return out;
  for (const auto& f : m.universe) {
    if (!f.is(FormulaKind::Neg) || !f.inner().is(FormulaKind::Just)) continue;
    const Term& t = f.inner().term();
    const Formula& a = f.inner().body();
    if (logic.b) {
      Term qt = Term::wquery(t);
      if (m.terms.contains(qt) && !eval(m, a)) out.push_back({qt, f});
    }
    if (logic.five) {
      Term qt = Term::query(t);
      if (m.terms.contains(qt) && !m.has_evidence(t, a)) out.push_back({qt, f});
    }
  }
  return out;
}

}  // namespace detail

/// Lists every violated condition; empty means the model passes.
inline std::vector<std::string> verify_model(const Model& m, const LogicSpec& logic,
                                             const ConstantSpecification& cs) {
  std::vector<std::string> out;
  auto pair = [](const Term& t, const Formula& a) { return render_evidential(t, a); };
  for (const auto& [t, a] : m.evidence) {
    if (!m.terms.contains(t) || !m.universe.contains(a)) {
      out.push_back("evidence " + pair(t, a) + " outside terms x universe");
    }
  }
  for (const auto& e : detail::closure_demands(m, {})) {
    if (m.evidence.contains(e)) continue;
    out.push_back((e.term.kind() == TermKind::Sum ? "E2: missing " : "E1: missing ") +
                  pair(e.term, e.body));
  }
  for (const auto& entry : cs.entries()) {
    if (!m.has_evidence(entry.term(), entry.body())) {
      out.push_back("E3: missing " + pair(entry.term(), entry.body()));
    }
  }
  if (logic.t) {
    for (const auto& [t, a] : m.evidence) {
      if (!eval(m, a)) out.push_back("E4: " + pair(t, a) + " but " + render_formula(a) + " is false");
    }
  }
  if (logic.d) {
    for (const auto& [t, a] : m.evidence) {
      if (a.is(FormulaKind::Bottom)) out.push_back("E5: " + pair(t, a));
    }
  }
  if (logic.four) {
    for (const auto& [t, a] : m.evidence) {
      Term bt = Term::bang(t);
      Formula ta = Formula::just(t, a);
      if (m.terms.contains(bt) && m.universe.contains(ta) && !m.has_evidence(bt, ta)) {
        out.push_back("E6: missing " + pair(bt, ta));
      }
    }
  }
  for (const auto& e : detail::negative_demands(m, logic)) {
    if (!m.evidence.contains(e)) {
      out.push_back((e.term.kind() == TermKind::WQuery ? "E7: missing " : "E8: missing ") +
                    pair(e.term, e.body));
    }
  }
  return out;
}

struct Extraction {
  std::optional<Model> model;
  /// Why no model could be certified; empty on success.
  std::string failure;
  explicit operator bool() const { return model.has_value(); }
};

/// Builds a candidate model from an open branch: V(p)=1 iff T p is on the
/// branch; evidence is the least fixpoint of the branch's T-evidential atoms
/// and the CS under the closure conditions. The model is returned only if it
/// verifies and satisfies every formula of the branch.
inline Extraction extract_candidate_model(const std::vector<SignedFormula>& branch,
                                          const Formula& root, const LogicSpec& logic,
                                          const ConstantSpecification& cs) {
  Model m;
  m.universe = cs_subformulas(root, cs);
  m.terms = occurring_terms(root, cs);
  for (const auto& f : m.universe) {
    if (f.is(FormulaKind::Prop)) m.valuation[f.name()] = false;
  }
  std::set<EvidentialAtom> refuted;
  for (const auto& sf : branch) {
    if (sf.evidential()) {
      if (sf.is_true()) {
        m.evidence.insert(sf.atom());
      } else {
        refuted.insert(sf.atom());
      }
    } else if (sf.is_true() && sf.body.is(FormulaKind::Prop)) {
      m.valuation[sf.body.name()] = true;
    }
  }
  for (const auto& entry : cs.entries()) m.evidence.insert({entry.term(), entry.body()});

  // Evidence only grows, so the iteration terminates on the finite universe.
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& e : detail::closure_demands(m, logic)) changed |= m.evidence.insert(e).second;
    if (changed) continue;
    for (const auto& e : detail::negative_demands(m, logic)) changed |= m.evidence.insert(e).second;
  }

  for (const auto& r : refuted) {
    if (m.evidence.contains(r)) {
      return {std::nullopt, "evidence closure forces " + render_evidential(r.term, r.body) +
                                " refuted on the branch"};
    }
  }
  auto report = verify_model(m, logic, cs);
  if (!report.empty()) return {std::nullopt, "model fails verification: " + report.front()};
  for (const auto& sf : branch) {
    if (!eval(m, sf)) return {std::nullopt, "branch formula " + render_signed(sf) + " not satisfied"};
  }
  return {std::move(m), {}};
}

}  // namespace jtab
