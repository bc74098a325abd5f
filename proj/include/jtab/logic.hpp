#pragma once

// Logic configuration, axiom-instance recognition and constant specifications.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "jtab/syntax.hpp"

namespace jtab {

class SignatureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// J extended by any combination of jT, jD, j4, jB, j5. The term signature
/// follows from the axioms: `!` iff j4, `??` iff jB, `?` iff j5.
struct LogicSpec {
  bool t = false;
  bool d = false;
  bool four = false;
  bool b = false;
  bool five = false;

  static LogicSpec J() { return {}; }

  /// "J" followed by suffix letters in the order T, D, 4, B, 5; "LP" = JT4.
  static LogicSpec parse(std::string_view name) {
    if (name == "LP") return {true, false, true, false, false};
    if (name.empty() || name[0] != 'J') throw ConfigError("unknown logic '" + std::string(name) + "'");
    static constexpr std::string_view order = "TD4B5";
    LogicSpec spec;
    std::size_t next = 0;
    for (char c : name.substr(1)) {
      auto at = order.find(c, next);
      if (at == std::string_view::npos) {
        throw ConfigError("unknown logic '" + std::string(name) +
                          "' (suffixes must be drawn from T,D,4,B,5 in that order)");
      }
      next = at + 1;
      switch (c) {
        case 'T': spec.t = true; break;
        case 'D': spec.d = true; break;
        case '4': spec.four = true; break;
        case 'B': spec.b = true; break;
        case '5': spec.five = true; break;
      }
    }
    return spec;
  }

  std::string name() const {
    std::string n = "J";
    if (t) n += 'T';
    if (d) n += 'D';
    if (four) n += '4';
    if (b) n += 'B';
    if (five) n += '5';
    return n;
  }

  bool allows(TermKind k) const {
    switch (k) {
      case TermKind::Bang: return four;
      case TermKind::WQuery: return b;
      case TermKind::Query: return five;
      default: return true;
    }
  }

  friend bool operator==(const LogicSpec&, const LogicSpec&) = default;
};

namespace detail {
inline void check_term_signature(const Term& t, const LogicSpec& logic) {
  if (!logic.allows(t.kind())) {
    throw SignatureError("term '" + render_term(t) + "' uses an operator outside the signature of " +
                         logic.name());
  }
  if (t.lhs().valid()) check_term_signature(t.lhs(), logic);
  if (t.rhs().valid()) check_term_signature(t.rhs(), logic);
}
}  // namespace detail

/// Throws SignatureError if `f` uses a term operator the logic lacks.
inline void check_signature(const Formula& f, const LogicSpec& logic) {
  switch (f.kind()) {
    case FormulaKind::Prop:
    case FormulaKind::Bottom:
      return;
    case FormulaKind::Neg:
      return check_signature(f.lhs(), logic);
    case FormulaKind::Implies:
      check_signature(f.lhs(), logic);
      return check_signature(f.rhs(), logic);
    case FormulaKind::Just:
      detail::check_term_signature(f.term(), logic);
      return check_signature(f.body(), logic);
  }
}

inline bool within_signature(const Formula& f, const LogicSpec& logic) {
  try {
    check_signature(f, logic);
    return true;
  } catch (const SignatureError&) {
    return false;
  }
}

// ---------------------------------------------------------------------------
// Axioms
// ---------------------------------------------------------------------------

enum class AxiomName : std::uint8_t { Taut, SumLeft, SumRight, JK, JT, JD, J4, JB, J5 };

inline std::string to_string(AxiomName a) {
  switch (a) {
    case AxiomName::Taut: return "Taut";
    case AxiomName::SumLeft: return "Sum-left";
    case AxiomName::SumRight: return "Sum-right";
    case AxiomName::JK: return "jK";
    case AxiomName::JT: return "jT";
    case AxiomName::JD: return "jD";
    case AxiomName::J4: return "j4";
    case AxiomName::JB: return "jB";
    case AxiomName::J5: return "j5";
  }
  return "?";
}

namespace detail {
// Maximal Just-subformulas and atoms are the propositional atoms.
inline void collect_prop_atoms(const Formula& f, std::vector<Formula>& atoms) {
  switch (f.kind()) {
    case FormulaKind::Bottom:
      return;
    case FormulaKind::Prop:
    case FormulaKind::Just:
      if (std::find(atoms.begin(), atoms.end(), f) == atoms.end()) atoms.push_back(f);
      return;
    case FormulaKind::Neg:
      return collect_prop_atoms(f.lhs(), atoms);
    case FormulaKind::Implies:
      collect_prop_atoms(f.lhs(), atoms);
      return collect_prop_atoms(f.rhs(), atoms);
  }
}

inline bool eval_prop(const Formula& f, const std::vector<Formula>& atoms, std::uint64_t row) {
  switch (f.kind()) {
    case FormulaKind::Bottom:
      return false;
    case FormulaKind::Prop:
    case FormulaKind::Just: {
      auto i = std::find(atoms.begin(), atoms.end(), f) - atoms.begin();
      return (row >> i) & 1U;
    }
    case FormulaKind::Neg:
      return !eval_prop(f.lhs(), atoms, row);
    case FormulaKind::Implies:
      return !eval_prop(f.lhs(), atoms, row) || eval_prop(f.rhs(), atoms, row);
  }
  return false;
}
}  // namespace detail

/// Truth-table check treating atoms and maximal t:B subformulas as variables.
inline bool is_tautology(const Formula& f) {
  std::vector<Formula> atoms;
  detail::collect_prop_atoms(f, atoms);
  if (atoms.size() > 24) throw std::length_error("too many atoms for truth-table check");
  const std::uint64_t rows = std::uint64_t{1} << atoms.size();
  for (std::uint64_t row = 0; row < rows; ++row) {
    if (!detail::eval_prop(f, atoms, row)) return false;
  }
  return true;
}

/// Structural match of `f` against one named scheme (Taut via truth table).
inline bool matches_scheme(const Formula& f, AxiomName name) {
  if (name == AxiomName::Taut) return is_tautology(f);
  if (!f.is(FormulaKind::Implies)) return false;
  const Formula& l = f.lhs();
  const Formula& r = f.rhs();
  switch (name) {
    case AxiomName::SumLeft:  // s:A -> (s+t):A
    case AxiomName::SumRight: {  // s:A -> (t+s):A
      if (!l.is(FormulaKind::Just) || !r.is(FormulaKind::Just)) return false;
      if (l.body() != r.body() || r.term().kind() != TermKind::Sum) return false;
      const Term& part = name == AxiomName::SumLeft ? r.term().lhs() : r.term().rhs();
      return part == l.term();
    }
    case AxiomName::JK: {  // s:(A->B) -> (t:A -> (s*t):B)
      if (!l.is(FormulaKind::Just) || !l.body().is(FormulaKind::Implies)) return false;
      if (!r.is(FormulaKind::Implies)) return false;
      const Formula& ta = r.lhs();
      const Formula& stb = r.rhs();
      if (!ta.is(FormulaKind::Just) || !stb.is(FormulaKind::Just)) return false;
      return ta.body() == l.body().lhs() && stb.body() == l.body().rhs() &&
             stb.term() == Term::app(l.term(), ta.term());
    }
    case AxiomName::JT:  // t:A -> A
      return l.is(FormulaKind::Just) && l.body() == r;
    case AxiomName::JD:  // t:_|_ -> _|_
      return l.is(FormulaKind::Just) && l.body().is(FormulaKind::Bottom) &&
             r.is(FormulaKind::Bottom);
    case AxiomName::J4:  // t:A -> !t:t:A
      return l.is(FormulaKind::Just) && r.is(FormulaKind::Just) &&
             r.term() == Term::bang(l.term()) && r.body() == l;
    case AxiomName::JB: {  // ~A -> ??t:~t:A
      if (!l.is(FormulaKind::Neg) || !r.is(FormulaKind::Just)) return false;
      if (r.term().kind() != TermKind::WQuery) return false;
      const Formula& nt = r.body();
      return nt.is(FormulaKind::Neg) && nt.inner().is(FormulaKind::Just) &&
             nt.inner().term() == r.term().inner() && nt.inner().body() == l.inner();
    }
    case AxiomName::J5: {  // ~t:A -> ?t:~t:A
      if (!l.is(FormulaKind::Neg) || !l.inner().is(FormulaKind::Just)) return false;
      if (!r.is(FormulaKind::Just) || r.term().kind() != TermKind::Query) return false;
      return r.term().inner() == l.inner().term() && r.body() == l;
    }
    case AxiomName::Taut:
      break;
  }
  return false;
}

inline bool scheme_available(AxiomName name, const LogicSpec& logic) {
  switch (name) {
    case AxiomName::JT: return logic.t;
    case AxiomName::JD: return logic.d;
    case AxiomName::J4: return logic.four;
    case AxiomName::JB: return logic.b;
    case AxiomName::J5: return logic.five;
    default: return true;
  }
}

/// First matching scheme among Taut, Sum-left, Sum-right, jK and the logic's
/// extra axioms. Throws SignatureError for operators outside the signature.
inline std::optional<AxiomName> is_axiom_instance(const Formula& f, const LogicSpec& logic) {
  check_signature(f, logic);
  for (AxiomName a : {AxiomName::Taut, AxiomName::SumLeft, AxiomName::SumRight, AxiomName::JK,
                      AxiomName::JT, AxiomName::JD, AxiomName::J4, AxiomName::JB, AxiomName::J5}) {
    if (scheme_available(a, logic) && matches_scheme(f, a)) return a;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Constant specifications
// ---------------------------------------------------------------------------

/// Finite set of formulas c_n:...:c_1:A. Insertion order is kept for
/// deterministic iteration.
class ConstantSpecification {
 public:
  ConstantSpecification() = default;
  ConstantSpecification(std::initializer_list<Formula> entries) {
    for (const auto& e : entries) add(e);
  }

  void add(const Formula& f) {
    if (set_.insert(f).second) entries_.push_back(f);
  }

  bool contains(const Formula& f) const { return set_.contains(f); }
  const std::vector<Formula>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

 private:
  std::vector<Formula> entries_;
  std::set<Formula> set_;
};

struct CsViolation {
  Formula entry;
  std::string reason;
};

/// Empty result means the specification is well-formed and downward closed.
inline std::vector<CsViolation> validate_cs(const ConstantSpecification& cs, const LogicSpec& logic) {
  std::vector<CsViolation> out;
  for (const Formula& e : cs.entries()) {
    if (!within_signature(e, logic)) {
      out.push_back({e, "uses a term operator outside the signature of " + logic.name()});
      continue;
    }
    if (!e.is(FormulaKind::Just) || e.term().kind() != TermKind::Const) {
      out.push_back({e, "not of the form c:F with c a constant"});
      continue;
    }
    const Formula& inner = e.body();
    if (inner.is(FormulaKind::Just)) {
      if (inner.term().kind() != TermKind::Const) {
        out.push_back({e, "nested justification term is not a constant"});
      } else if (!cs.contains(inner)) {
        out.push_back({e, "not downward closed: missing " + render_formula(inner)});
      }
      continue;
    }
    if (!is_axiom_instance(inner, logic)) {
      out.push_back({e, "body " + render_formula(inner) + " is not an axiom instance of " +
                            logic.name()});
    }
  }
  return out;
}

/// One formula per line; '#' starts a comment. Syntax errors carry the line.
inline ConstantSpecification parse_cs(std::string_view text) {
  ConstantSpecification cs;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      cs.add(parse_formula(line));
    } catch (const SyntaxError& e) {
      throw ConfigError("constant specification line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return cs;
}

/// Parses and validates; throws ConfigError listing every violation.
inline ConstantSpecification load_cs(std::string_view text, const LogicSpec& logic) {
  auto cs = parse_cs(text);
  auto violations = validate_cs(cs, logic);
  if (!violations.empty()) {
    std::string msg = "invalid constant specification:";
    for (const auto& v : violations) msg += "\n  " + render_formula(v.entry) + ": " + v.reason;
    throw ConfigError(msg);
  }
  return cs;
}

/// Sub({root} u CS).
inline std::set<Formula> cs_subformulas(const Formula& root, const ConstantSpecification& cs) {
  std::set<Formula> out;
  detail::collect_subformulas(root, out);
  for (const auto& e : cs.entries()) detail::collect_subformulas(e, out);
  return out;
}

/// CS-subformulas together with their negations.
inline std::set<Formula> weak_cs_subformulas(const Formula& root, const ConstantSpecification& cs) {
  auto out = cs_subformulas(root, cs);
  std::vector<Formula> negs;
  negs.reserve(out.size());
  for (const auto& f : out) negs.push_back(Formula::neg(f));
  out.insert(negs.begin(), negs.end());
  return out;
}

/// Subterm closure of every term in the root or in a CS entry.
inline std::set<Term> occurring_terms(const Formula& root, const ConstantSpecification& cs) {
  std::set<Term> out;
  detail::collect_formula_terms(root, out);
  for (const auto& e : cs.entries()) detail::collect_formula_terms(e, out);
  return out;
}

/// Precomputed analytic universe for one (root, CS) pair.
struct AnalyticScope {
  Formula root;
  std::set<Formula> subformulas;
  std::set<Term> terms;

  AnalyticScope() = default;
  AnalyticScope(const Formula& r, const ConstantSpecification& cs)
      : root(r), subformulas(cs_subformulas(r, cs)), terms(occurring_terms(r, cs)) {}

  bool has_formula(const Formula& f) const { return subformulas.contains(f); }
  bool has_term(const Term& t) const { return terms.contains(t); }
};

}  // namespace jtab
