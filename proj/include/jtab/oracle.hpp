#pragma once

// Cross-checks for the test harness: forgetful projection into modal logic,
// a small modal tableau decision procedure, and seeded generators for goals,
// constant specifications and Hilbert proofs.

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "jtab/cutelim.hpp"
#include "jtab/logic.hpp"
#include "jtab/syntax.hpp"

namespace jtab {

class UnsupportedLogic : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ModalKind : std::uint8_t { Prop, Bottom, Neg, Implies, Box };

class ModalFormula {
 public:
  static ModalFormula prop(std::string name) { return make(ModalKind::Prop, std::move(name), {}, {}); }
  static ModalFormula bottom() { return make(ModalKind::Bottom, {}, {}, {}); }
  static ModalFormula neg(const ModalFormula& a) { return make(ModalKind::Neg, {}, a, {}); }
  static ModalFormula implies(const ModalFormula& a, const ModalFormula& b) {
    return make(ModalKind::Implies, {}, a, b);
  }
  static ModalFormula box(const ModalFormula& a) { return make(ModalKind::Box, {}, a, {}); }

  ModalKind kind() const { return n_->kind; }
  const std::string& name() const { return n_->name; }
  const ModalFormula& lhs() const { return *n_->lhs; }
  const ModalFormula& rhs() const { return *n_->rhs; }
  const ModalFormula& inner() const { return *n_->lhs; }
  const std::string& text() const { return n_->text; }

  friend bool operator==(const ModalFormula& a, const ModalFormula& b) { return a.text() == b.text(); }
  friend auto operator<=>(const ModalFormula& a, const ModalFormula& b) { return a.text() <=> b.text(); }

 private:
  struct Node {
    ModalKind kind;
    std::string name;
    std::shared_ptr<const ModalFormula> lhs, rhs;
    std::string text;
  };

  static ModalFormula make(ModalKind k, std::string name, std::optional<ModalFormula> a,
                           std::optional<ModalFormula> b) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->name = std::move(name);
    if (a) n->lhs = std::make_shared<const ModalFormula>(*a);
    if (b) n->rhs = std::make_shared<const ModalFormula>(*b);
    switch (k) {
      case ModalKind::Prop: n->text = n->name; break;
      case ModalKind::Bottom: n->text = "_|_"; break;
      case ModalKind::Neg: n->text = "~" + n->lhs->text(); break;
      case ModalKind::Box: n->text = "[]" + n->lhs->text(); break;
      case ModalKind::Implies: n->text = "(" + n->lhs->text() + " -> " + n->rhs->text() + ")"; break;
    }
    ModalFormula f;
    f.n_ = std::move(n);
    return f;
  }

  ModalFormula() = default;
  std::shared_ptr<const Node> n_;
};

inline std::string render_modal(const ModalFormula& f) { return f.text(); }

/// t:A becomes []A; everything else is kept.
inline ModalFormula forgetful_projection(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Prop: return ModalFormula::prop(f.name());
    case FormulaKind::Bottom: return ModalFormula::bottom();
    case FormulaKind::Neg: return ModalFormula::neg(forgetful_projection(f.inner()));
    case FormulaKind::Implies:
      return ModalFormula::implies(forgetful_projection(f.lhs()), forgetful_projection(f.rhs()));
    case FormulaKind::Just: return ModalFormula::box(forgetful_projection(f.body()));
  }
  throw std::logic_error("unreachable");
}

enum class ModalLogic { K, T, D, K4, S4 };

inline std::string to_string(ModalLogic m) {
  switch (m) {
    case ModalLogic::K: return "K";
    case ModalLogic::T: return "T";
    case ModalLogic::D: return "D";
    case ModalLogic::K4: return "K4";
    case ModalLogic::S4: return "S4";
  }
  return "?";
}

/// Modal counterpart of J, JT, JD, J4 and JT4; other logics are not covered.
inline ModalLogic modal_counterpart(const LogicSpec& l) {
  if (l.b || l.five) throw UnsupportedLogic("no modal counterpart checked for " + l.name());
  if (!l.t && !l.d && !l.four) return ModalLogic::K;
  if (l.t && !l.d && !l.four) return ModalLogic::T;
  if (!l.t && l.d && !l.four) return ModalLogic::D;
  if (!l.t && !l.d && l.four) return ModalLogic::K4;
  if (l.t && !l.d && l.four) return ModalLogic::S4;
  throw UnsupportedLogic("no modal counterpart checked for " + l.name());
}

namespace detail {

using SignedModal = std::pair<bool, ModalFormula>;
using ModalSet = std::set<SignedModal>;

class ModalTableau {
 public:
  explicit ModalTableau(ModalLogic ml) : ml_(ml) {}

  bool satisfiable(const ModalSet& start) {
    std::vector<ModalSet> path{start};
    return sat(start, path);
  }

 private:
  bool reflexive() const { return ml_ == ModalLogic::T || ml_ == ModalLogic::S4; }
  bool transitive() const { return ml_ == ModalLogic::K4 || ml_ == ModalLogic::S4; }

  static bool closed(const ModalSet& g) {
    for (const auto& [sign, f] : g) {
      if (sign && f.kind() == ModalKind::Bottom) return true;
      if (sign && g.contains({false, f})) return true;
    }
    return false;
  }

  bool sat(ModalSet g, std::vector<ModalSet>& path) {
    for (bool grew = true; grew;) {
      grew = false;
      if (closed(g)) return false;
      for (const auto& [sign, f] : g) {
        std::vector<SignedModal> add;
        if (f.kind() == ModalKind::Neg) {
          add.push_back({!sign, f.inner()});
        } else if (f.kind() == ModalKind::Implies && !sign) {
          add.push_back({true, f.lhs()});
          add.push_back({false, f.rhs()});
        } else if (f.kind() == ModalKind::Box && sign && reflexive()) {
          add.push_back({true, f.inner()});
        } else if (f.kind() == ModalKind::Implies && sign) {
          SignedModal l{false, f.lhs()}, r{true, f.rhs()};
          if (g.contains(l) || g.contains(r)) continue;
          ModalSet gl = g, gr = g;
          gl.insert(l);
          gr.insert(r);
          return sat(std::move(gl), path) || sat(std::move(gr), path);
        }
        for (const auto& a : add) grew |= g.insert(a).second;
        if (grew) break;
      }
    }
    ModalSet boxed;
    bool any_diamond = false;
    for (const auto& [sign, f] : g) {
      if (sign && f.kind() == ModalKind::Box) {
        boxed.insert({true, f.inner()});
        if (transitive()) boxed.insert({true, f});
      }
    }
    auto visit = [&](ModalSet succ) {
      if (transitive()) {
        for (const auto& anc : path) {
          if (anc == succ) return true;
        }
      }
      path.push_back(succ);
      bool ok = sat(succ, path);
      path.pop_back();
      return ok;
    };
    for (const auto& [sign, f] : g) {
      if (sign || f.kind() != ModalKind::Box) continue;
      any_diamond = true;
      ModalSet succ = boxed;
      succ.insert({false, f.inner()});
      if (!visit(std::move(succ))) return false;
    }
    if (ml_ == ModalLogic::D && !any_diamond && !boxed.empty()) return visit(boxed);
    return true;
  }

  ModalLogic ml_;
};

}  // namespace detail

/// Validity in K, T, D, K4 or S4 by refutation of F f.
inline bool modal_prove(const ModalFormula& f, ModalLogic ml) {
  return !detail::ModalTableau(ml).satisfiable({{false, f}});
}

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

struct AtomPool {
  std::vector<std::string> props = {"P", "Q"};
  std::vector<std::string> vars = {"x", "y"};
  std::vector<std::string> consts = {"c"};
};

namespace detail {

class Gen {
 public:
  Gen(std::uint64_t seed, const LogicSpec& logic, const AtomPool& pool)
      : rng_(seed), logic_(logic), pool_(pool) {}

  std::size_t below(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }

  Term atom_term() {
    std::size_t n = pool_.vars.size() + pool_.consts.size();
    std::size_t k = below(n);
    return k < pool_.vars.size() ? Term::var(pool_.vars[k]) : Term::constant(pool_.consts[k - pool_.vars.size()]);
  }

  // A term with at most `budget` nodes, using only operators of the signature.
  Term term(std::size_t budget) {
    if (budget <= 1 || coin(0.5)) return atom_term();
    std::vector<TermKind> ops = {TermKind::App, TermKind::Sum};
    if (logic_.four) ops.push_back(TermKind::Bang);
    if (logic_.b) ops.push_back(TermKind::WQuery);
    if (logic_.five) ops.push_back(TermKind::Query);
    TermKind k = ops[below(ops.size())];
    if (k == TermKind::App || k == TermKind::Sum) {
      if (budget < 3) return atom_term();
      std::size_t l = 1 + below(budget - 2);
      Term a = term(l), b = term(budget - 1 - l);
      return k == TermKind::App ? Term::app(a, b) : Term::sum(a, b);
    }
    Term a = term(budget - 1);
    if (k == TermKind::Bang) return Term::bang(a);
    return k == TermKind::Query ? Term::query(a) : Term::wquery(a);
  }

  Formula prop() { return Formula::prop(pool_.props[below(pool_.props.size())]); }

  // A formula whose size (formula plus term nodes) is at most `budget`.
  Formula formula(std::size_t budget) {
    if (budget <= 1) return coin(0.08) ? Formula::bottom() : prop();
    switch (below(budget >= 3 ? 4 : 2)) {
      case 0: return prop();
      case 1: return Formula::neg(formula(budget - 1));
      case 2: {
        std::size_t l = 1 + below(budget - 2);
        return Formula::implies(formula(l), formula(budget - 1 - l));
      }
      default: {
        std::size_t ts = 1 + below(std::min<std::size_t>(3, budget - 2));
        Term t = term(ts);
        return Formula::just(t, formula(budget - 1 - t.size()));
      }
    }
  }

  std::vector<AxiomName> schemes(bool with_taut) const {
    std::vector<AxiomName> out;
    for (AxiomName a : {AxiomName::Taut, AxiomName::SumLeft, AxiomName::SumRight, AxiomName::JK, AxiomName::JT,
                        AxiomName::JD, AxiomName::J4, AxiomName::JB, AxiomName::J5}) {
      if ((with_taut || a != AxiomName::Taut) && scheme_available(a, logic_)) out.push_back(a);
    }
    return out;
  }

  Formula tautology(std::size_t budget) {
    Formula a = formula(budget), b = formula(budget);
    switch (below(4)) {
      case 0: return Formula::implies(a, Formula::implies(b, a));
      case 1: return Formula::implies(a, a);
      case 2: return Formula::implies(Formula::neg(Formula::neg(a)), a);
      default: {
        Formula c = formula(budget);
        return Formula::implies(Formula::implies(a, Formula::implies(b, c)),
                                Formula::implies(Formula::implies(a, b), Formula::implies(a, c)));
      }
    }
  }

  Formula axiom(AxiomName name, std::size_t fbudget = 2, std::size_t tbudget = 1) {
    Term s = term(tbudget), t = term(tbudget);
    Formula a = formula(fbudget), b = formula(fbudget);
    switch (name) {
      case AxiomName::Taut: return tautology(fbudget);
      case AxiomName::SumLeft: return Formula::implies(Formula::just(s, a), Formula::just(Term::sum(s, t), a));
      case AxiomName::SumRight: return Formula::implies(Formula::just(s, a), Formula::just(Term::sum(t, s), a));
      case AxiomName::JK:
        return Formula::implies(Formula::just(s, Formula::implies(a, b)),
                                Formula::implies(Formula::just(t, a), Formula::just(Term::app(s, t), b)));
      case AxiomName::JT: return Formula::implies(Formula::just(t, a), a);
      case AxiomName::JD: return Formula::implies(Formula::just(t, Formula::bottom()), Formula::bottom());
      case AxiomName::J4: return Formula::implies(Formula::just(t, a), Formula::just(Term::bang(t), Formula::just(t, a)));
      case AxiomName::JB:
        return Formula::implies(Formula::neg(a),
                                Formula::just(Term::wquery(t), Formula::neg(Formula::just(t, a))));
      case AxiomName::J5:
        return Formula::implies(Formula::neg(Formula::just(t, a)),
                                Formula::just(Term::query(t), Formula::neg(Formula::just(t, a))));
    }
    throw std::logic_error("unreachable");
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
  LogicSpec logic_;
  AtomPool pool_;
};

}  // namespace detail

/// Deterministic random formula of size at most `size_bound` within the
/// signature of `logic`.
inline Formula random_goal(std::uint64_t seed, std::size_t size_bound, const LogicSpec& logic,
                           const AtomPool& pool = {}) {
  detail::Gen g(seed, logic, pool);
  return g.formula(std::max<std::size_t>(1, size_bound));
}

/// Up to `max_entries` entries c:A with A an axiom instance of `logic`,
/// using the pool's constants.
inline ConstantSpecification random_cs(std::uint64_t seed, std::size_t max_entries, const LogicSpec& logic,
                                       const AtomPool& pool = {}) {
  detail::Gen g(seed, logic, pool);
  ConstantSpecification cs;
  std::size_t n = max_entries == 0 ? 0 : g.below(max_entries + 1);
  auto schemes = g.schemes(true);
  for (std::size_t k = 0; k < n && !pool.consts.empty(); ++k) {
    Formula a = g.axiom(schemes[g.below(schemes.size())], 1, 1);
    Term c = Term::constant(pool.consts[g.below(pool.consts.size())]);
    cs.add(Formula::just(c, a));
  }
  return cs;
}

struct RandomHilbert {
  HilbertProof proof;
  ConstantSpecification cs;
};

/// A valid Hilbert proof of at most `max_lines` lines and modus ponens depth
/// at most `max_depth`. Its last line is the goal.
inline RandomHilbert random_hilbert(std::uint64_t seed, const LogicSpec& logic, std::size_t max_lines = 8,
                                    std::size_t max_depth = 4, const AtomPool& pool = {}) {
  detail::Gen g(seed, logic, pool);
  RandomHilbert out;
  auto& lines = out.proof.lines;
  std::vector<std::size_t> depth;
  auto push = [&](HilbertLine l, std::size_t d) {
    lines.push_back(std::move(l));
    depth.push_back(d);
    return lines.size();
  };
  auto axiom_line = [&](AxiomName a, Formula f) {
    HilbertLine l{std::move(f), HilbertLine::Kind::Axiom, {}, 0, 0};
    switch (a) {
      case AxiomName::Taut: l.axiom = "Taut"; break;
      case AxiomName::SumLeft:
      case AxiomName::SumRight: l.axiom = "Sum"; break;
      case AxiomName::JK: l.axiom = "jK"; break;
      case AxiomName::JT: l.axiom = "jT"; break;
      case AxiomName::JD: l.axiom = "jD"; break;
      case AxiomName::J4: l.axiom = "j4"; break;
      case AxiomName::JB: l.axiom = "jB"; break;
      case AxiomName::J5: l.axiom = "j5"; break;
    }
    return l;
  };
  auto mp = [&](std::size_t i, std::size_t j) {
    const Formula& imp = lines[j - 1].formula;
    return push(HilbertLine{imp.rhs(), HilbertLine::Kind::MP, {}, i, j},
                1 + std::max(depth[i - 1], depth[j - 1]));
  };
  auto schemes = g.schemes(false);
  const std::string c = pool.consts.empty() ? "c" : pool.consts[0];

  // Seed line: an axiom, or an IAN entry followed by jK when possible.
  AxiomName first = schemes[g.below(schemes.size())];
  Formula body = g.axiom(first);
  std::size_t seed_kind = g.below(3);
  if (seed_kind == 2) {
    Formula entry = Formula::just(Term::constant(c), body);
    out.cs.add(entry);
    push(HilbertLine{entry, HilbertLine::Kind::IAN, {}, 0, 0}, 0);
  } else if (seed_kind == 1 && body.is(FormulaKind::Implies) && lines.size() + 3 <= max_lines) {
    Formula entry = Formula::just(Term::constant(c), body);
    out.cs.add(entry);
    std::size_t i = push(HilbertLine{entry, HilbertLine::Kind::IAN, {}, 0, 0}, 0);
    Term t = g.atom_term();
    Formula k = Formula::implies(entry, Formula::implies(Formula::just(t, body.lhs()),
                                                         Formula::just(Term::app(Term::constant(c), t), body.rhs())));
    std::size_t j = push(axiom_line(AxiomName::JK, k), 0);
    mp(i, j);
  } else {
    push(axiom_line(first, body), 0);
  }

  // Extend by modus ponens against tautologies built from earlier lines.
  while (lines.size() + 2 <= max_lines) {
    std::size_t i = lines.size();
    if (depth[i - 1] >= max_depth) break;
    const Formula b = lines[i - 1].formula;
    if (b.is(FormulaKind::Just) && g.coin(0.6)) {
      // Evidence step: an axiom with antecedent b, then modus ponens.
      const Term& t = b.term();
      const Formula& body = b.body();
      std::vector<std::pair<AxiomName, Formula>> steps;
      steps.push_back({AxiomName::SumLeft, Formula::just(Term::sum(t, g.atom_term()), body)});
      if (logic.t) steps.push_back({AxiomName::JT, body});
      if (logic.four) steps.push_back({AxiomName::J4, Formula::just(Term::bang(t), b)});
      if (body.is(FormulaKind::Implies)) {
        Term u = g.atom_term();
        steps.push_back({AxiomName::JK, Formula::implies(Formula::just(u, body.lhs()),
                                                         Formula::just(Term::app(t, u), body.rhs()))});
      }
      auto [name, a] = steps[g.below(steps.size())];
      std::size_t j = push(axiom_line(name, Formula::implies(b, a)), 0);
      mp(i, j);
      continue;
    }
    Formula a = b;
    switch (g.below(4)) {
      case 0: a = Formula::implies(g.formula(2), b); break;
      case 1: a = Formula::neg(Formula::neg(b)); break;
      case 2:
        if (b.is(FormulaKind::Implies)) {
          a = Formula::implies(Formula::neg(b.rhs()), Formula::neg(b.lhs()));
          break;
        }
        a = Formula::implies(Formula::neg(b), g.formula(2));
        break;
      default:
        a = Formula::implies(g.formula(1), b);
        break;
    }
    Formula taut = Formula::implies(b, a);
    std::size_t j = push(axiom_line(AxiomName::Taut, taut), 0);
    mp(i, j);
    if (g.coin(0.25)) break;
  }
  return out;
}

}  // namespace jtab
