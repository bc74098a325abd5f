#pragma once

// Hilbert-to-tableau compilation and cut elimination.
//
// A cut is a node X whose two children are Cut-justified fork heads T phi and
// F phi. Rewrites always act on a leftmost-innermost minimal cut; the
// subtableaux below its fork heads are cut-free.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "jtab/checker.hpp"
#include "jtab/logic.hpp"
#include "jtab/prover.hpp"
#include "jtab/tableau.hpp"

namespace jtab {

class InvalidProof : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MalformedCut : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CutBudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Rank
// ---------------------------------------------------------------------------

inline std::size_t rank(const Term& t) {
  switch (t.kind()) {
    case TermKind::Var:
    case TermKind::Const:
      return 0;
    case TermKind::App:
    case TermKind::Sum:
      return rank(t.lhs()) + rank(t.rhs()) + 1;
    default:
      return rank(t.inner()) + 1;
  }
}

inline std::size_t rank(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Prop:
    case FormulaKind::Bottom:
      return 0;
    case FormulaKind::Neg:
      return rank(f.inner()) + 1;
    case FormulaKind::Implies:
      return rank(f.lhs()) + rank(f.rhs()) + 1;
    case FormulaKind::Just:
      return rank(f.term()) + rank(f.body()) + 1;
  }
  return 0;
}

inline std::size_t rank(const EvidentialAtom& e) { return rank(e.term) + rank(e.body); }

inline std::size_t rank(const SignedFormula& sf) {
  return sf.evidential() ? rank(sf.atom()) : rank(sf.body);
}

// ---------------------------------------------------------------------------
// Hilbert proofs
// ---------------------------------------------------------------------------

struct HilbertLine {
  enum class Kind { Axiom, MP, IAN };
  Formula formula;
  Kind kind = Kind::Axiom;
  std::string axiom;  // Taut, Sum, jK, jT, jD, j4, jB, j5
  std::size_t i = 0;  // MP premises, 1-based
  std::size_t j = 0;
};

struct HilbertProof {
  std::vector<HilbertLine> lines;
};

namespace detail {

inline std::string trim(std::string s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline bool axiom_matches(const Formula& f, const std::string& name, const LogicSpec& logic) {
  auto has = [&](AxiomName a) { return scheme_available(a, logic) && matches_scheme(f, a); };
  if (name == "Taut") return has(AxiomName::Taut);
  if (name == "Sum") return has(AxiomName::SumLeft) || has(AxiomName::SumRight);
  if (name == "jK") return has(AxiomName::JK);
  if (name == "jT") return has(AxiomName::JT);
  if (name == "jD") return has(AxiomName::JD);
  if (name == "j4") return has(AxiomName::J4);
  if (name == "jB") return has(AxiomName::JB);
  if (name == "j5") return has(AxiomName::J5);
  return false;
}

}  // namespace detail

/// Parses lines `<n>. <formula> <justification>`; the justification may be
/// wrapped in square brackets. Blank lines and `#` comments are skipped.
inline HilbertProof parse_hilbert(std::string_view text) {
  HilbertProof hp;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    if (auto h = raw.find('#'); h != std::string::npos) raw.erase(h);
    std::string line = detail::trim(raw);
    if (line.empty()) continue;
    auto where = [&](const std::string& msg) {
      return InvalidProof("line " + std::to_string(lineno) + ": " + msg);
    };
    auto dot = line.find('.');
    if (dot == std::string::npos) throw where("missing line number");
    std::size_t n = 0;
    try {
      n = std::stoul(line.substr(0, dot));
    } catch (const std::exception&) {
      throw where("bad line number");
    }
    if (n != hp.lines.size() + 1) throw where("lines must be numbered 1, 2, ...");
    std::string rest = detail::trim(line.substr(dot + 1));
    std::string just;
    if (!rest.empty() && rest.back() == ']') {
      auto open = rest.rfind('[');
      if (open == std::string::npos) throw where("unbalanced justification bracket");
      just = detail::trim(rest.substr(open + 1, rest.size() - open - 2));
      rest = detail::trim(rest.substr(0, open));
    } else {
      std::vector<std::string> words;
      std::istringstream ws(rest);
      for (std::string w; ws >> w;) words.push_back(w);
      std::size_t take = 1;
      if (words.size() >= 3 && words[words.size() - 3] == "MP") take = 3;
      if (words.size() < take + 1) throw where("missing formula or justification");
      for (std::size_t k = words.size() - take; k < words.size(); ++k) {
        just += (just.empty() ? "" : " ") + words[k];
      }
      auto cut = rest.rfind(words[words.size() - take]);
      rest = detail::trim(rest.substr(0, cut));
    }
    HilbertLine hl;
    try {
      hl.formula = parse_formula(rest);
    } catch (const SyntaxError& e) {
      throw where(std::string("formula: ") + e.what());
    }
    std::istringstream js(just);
    std::string head;
    js >> head;
    if (head == "MP") {
      hl.kind = HilbertLine::Kind::MP;
      if (!(js >> hl.i >> hl.j)) throw where("MP needs two line numbers");
    } else if (head == "IAN") {
      hl.kind = HilbertLine::Kind::IAN;
    } else {
      hl.kind = HilbertLine::Kind::Axiom;
      hl.axiom = head;
    }
    std::string extra;
    if (js >> extra) throw where("trailing text after justification");
    hp.lines.push_back(std::move(hl));
  }
  return hp;
}

inline std::string render_hilbert(const HilbertProof& hp) {
  std::string out;
  for (std::size_t k = 0; k < hp.lines.size(); ++k) {
    const auto& l = hp.lines[k];
    out += std::to_string(k + 1) + ". " + render_formula(l.formula) + " [";
    switch (l.kind) {
      case HilbertLine::Kind::Axiom: out += l.axiom; break;
      case HilbertLine::Kind::MP: out += "MP " + std::to_string(l.i) + " " + std::to_string(l.j); break;
      case HilbertLine::Kind::IAN: out += "IAN"; break;
    }
    out += "]\n";
  }
  return out;
}

/// Throws InvalidProof on the first line that fails its justification.
inline void validate_hilbert(const HilbertProof& hp, const LogicSpec& logic,
                             const ConstantSpecification& cs) {
  for (std::size_t k = 0; k < hp.lines.size(); ++k) {
    const auto& l = hp.lines[k];
    auto fail = [&](const std::string& msg) {
      return InvalidProof("line " + std::to_string(k + 1) + ": " + msg);
    };
    if (!within_signature(l.formula, logic)) throw fail("formula outside the signature of " + logic.name());
    switch (l.kind) {
      case HilbertLine::Kind::Axiom:
        if (!detail::axiom_matches(l.formula, l.axiom, logic)) {
          throw fail("not an instance of " + l.axiom + " in " + logic.name());
        }
        break;
      case HilbertLine::Kind::IAN:
        if (!cs.contains(l.formula)) throw fail("IAN formula is not in the constant specification");
        break;
      case HilbertLine::Kind::MP: {
        if (l.i == 0 || l.j == 0 || l.i > k || l.j > k) throw fail("MP must cite earlier lines");
        const Formula& b = hp.lines[l.i - 1].formula;
        if (hp.lines[l.j - 1].formula != Formula::implies(b, l.formula)) {
          throw fail("line " + std::to_string(l.j) + " is not line " + std::to_string(l.i) + " -> this line");
        }
        break;
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Cut measures
// ---------------------------------------------------------------------------

struct CutMeasure {
  std::size_t rank = 0;
  std::size_t weight = 0;
  bool at_branch_end = false;

  friend bool operator<(const CutMeasure& a, const CutMeasure& b) {
    return a.rank != b.rank ? a.rank < b.rank : a.weight < b.weight;
  }
};

inline bool is_cut(const TabNode& n) {
  return n.children.size() == 2 && n.children[0].step.rule == Rule::Cut;
}

inline CutMeasure cut_measure(const TabNode& x) {
  const auto& h = x.children;
  std::size_t w1 = count_nodes(h[0].children);
  std::size_t w2 = count_nodes(h[1].children);
  return {rank(h[0].formula), w1 + w2, w1 == 0 || w2 == 0};
}

struct CutSite {
  std::vector<std::size_t> path;  // child indices from the root to the node carrying the cut
  SignedFormula pivot;
  CutMeasure measure;
};

namespace detail {
inline bool find_minimal(const TabNode& n, std::vector<std::size_t>& cur,
                         std::optional<std::vector<std::size_t>>& found) {
  bool below = false;
  for (std::size_t i = 0; i < n.children.size(); ++i) {
    cur.push_back(i);
    below |= find_minimal(n.children[i], cur, found);
    cur.pop_back();
    if (found) return true;
  }
  if (is_cut(n)) {
    found = cur;
    return true;
  }
  return below;
}

inline std::size_t count_cuts(const TabNode& n) {
  std::size_t k = is_cut(n) ? 1 : 0;
  for (const auto& c : n.children) k += count_cuts(c);
  return k;
}
}  // namespace detail

/// Leftmost-innermost cut whose subtableaux are cut-free.
inline std::optional<CutSite> find_minimal_cut(const Tableau& t) {
  std::vector<std::size_t> cur;
  std::optional<std::vector<std::size_t>> found;
  detail::find_minimal(t.root, cur, found);
  if (!found) return std::nullopt;
  const TabNode* n = &t.root;
  for (auto i : *found) n = &n->children[i];
  return CutSite{*found, n->children[0].formula, cut_measure(*n)};
}

inline std::size_t count_cuts(const Tableau& t) { return detail::count_cuts(t.root); }

// ---------------------------------------------------------------------------
// Subtableau surgery
// ---------------------------------------------------------------------------

namespace detail {

inline TabNode cut_head(const SignedFormula& f, int part, std::vector<TabNode> children = {}) {
  return TabNode{f, Step{Rule::Cut, {}, part}, std::move(children)};
}

inline std::vector<TabNode> make_cut(const SignedFormula& pivot, std::vector<TabNode> t_side,
                                     std::vector<TabNode> f_side) {
  std::vector<TabNode> out;
  out.push_back(cut_head(pivot, 0, std::move(t_side)));
  out.push_back(cut_head(pivot.conjugate(), 1, std::move(f_side)));
  return out;
}

// Drops nodes whose formula is already on the branch, resolves branchings
// whose fork head is already present, and truncates below closure. Premises
// are held by content, so every dropped node is still available above.
inline std::vector<TabNode> normalize(BranchSet& b, std::vector<TabNode> ch) {
  if (b.closed() || ch.empty()) return {};
  if (ch.size() == 1) {
    TabNode n = std::move(ch[0]);
    if (b.contains(n.formula)) return normalize(b, std::move(n.children));
    b.push(n.formula);
    n.children = normalize(b, std::move(n.children));
    b.pop();
    std::vector<TabNode> out;
    out.push_back(std::move(n));
    return out;
  }
  for (auto& h : ch) {
    if (b.contains(h.formula)) return normalize(b, std::move(h.children));
  }
  for (auto& h : ch) {
    b.push(h.formula);
    h.children = normalize(b, std::move(h.children));
    b.pop();
  }
  return ch;
}

// Formulas of a closed branch that witness its earliest closure.
inline std::vector<SignedFormula> closure_witness(const std::vector<SignedFormula>& seq,
                                                  const ConstantSpecification& cs) {
  BranchSet b(cs);
  for (const auto& sf : seq) {
    Closure c = b.push(sf);
    if (c == Closure::Open) continue;
    if (c == Closure::Bottom || c == Closure::Cs) return {sf};
    if (c == Closure::Evidential) return {sf, sf.conjugate()};
    Formula u = unsigned_form(sf);
    std::vector<SignedFormula> partners = {SignedFormula::t(Formula::neg(u)), SignedFormula::f(u)};
    if (u.is(FormulaKind::Neg)) {
      partners.push_back(SignedFormula::t(u.inner()));
      if (u.inner().is(FormulaKind::Neg)) partners.push_back(SignedFormula::f(u.inner().inner()));
    }
    for (const auto& p : partners) {
      if (p != sf && b.contains(p)) return {sf, p};
    }
    return {sf};
  }
  return {};
}

using Needs = std::unordered_set<SignedFormula>;

// Removes nodes that neither serve as a premise below them nor take part in
// the closure of a leaf below them. Returns the formulas the list needs from
// the branch above.
inline Needs prune(BranchSet& b, std::vector<TabNode>& ch) {
  if (ch.empty()) {
    auto w = closure_witness(b.sequence(), b.cs());
    return Needs(w.begin(), w.end());
  }
  if (ch.size() == 1) {
    TabNode& n = ch[0];
    b.push(n.formula);
    Needs below = prune(b, n.children);
    b.pop();
    if (!below.contains(n.formula)) {
      std::vector<TabNode> rest = std::move(n.children);
      ch = std::move(rest);
      return below;
    }
    below.erase(n.formula);
    below.insert(n.step.premises.begin(), n.step.premises.end());
    return below;
  }
  Needs below[2];
  for (int k = 0; k < 2; ++k) {
    b.push(ch[k].formula);
    below[k] = prune(b, ch[k].children);
    b.pop();
  }
  for (int k = 0; k < 2; ++k) {
    if (!below[k].contains(ch[k].formula)) {
      std::vector<TabNode> rest = std::move(ch[k].children);
      ch = std::move(rest);
      return below[k];
    }
  }
  Needs out;
  for (int k = 0; k < 2; ++k) {
    below[k].erase(ch[k].formula);
    out.insert(below[k].begin(), below[k].end());
  }
  out.insert(ch[0].step.premises.begin(), ch[0].step.premises.end());
  return out;
}

// Do all premises resolve and all leaves close in this context?
inline bool valid_in(BranchSet& b, const std::vector<TabNode>& ch) {
  if (ch.empty()) return b.closed();
  for (const auto& n : ch) {
    for (const auto& p : n.step.premises) {
      if (!b.contains(p)) return false;
    }
    b.push(n.formula);
    bool ok = valid_in(b, n.children);
    b.pop();
    if (!ok) return false;
  }
  return true;
}

// Bounded linear saturation of the branch. Returns a chain of linear steps
// that closes the branch (or, with `target`, derives it, with `tail` placed
// below), pruned to the steps actually needed.
inline std::optional<std::vector<TabNode>> saturate(BranchSet& b, const LogicSpec& logic,
                                                    const AnalyticScope& scope,
                                                    const std::optional<SignedFormula>& target = {},
                                                    std::vector<TabNode> tail = {},
                                                    std::size_t max_new = 256) {
  const std::size_t base = b.size();
  std::vector<std::pair<SignedFormula, Step>> chain;
  auto done = [&]() { return target ? b.contains(*target) : b.closed(); };
  auto add = [&](const SignedFormula& sf, Step st) {
    if (b.contains(sf) || chain.size() >= max_new) return;
    b.push(sf);
    chain.push_back({sf, std::move(st)});
  };
  for (std::size_t cur = 0; cur < b.size() && !done() && chain.size() < max_new; ++cur) {
    SignedFormula sf = b.sequence()[cur];
    for (const auto& inst : unary_instances(sf, logic)) {
      if (inst.branching()) continue;
      for (std::size_t k = 0; k < inst.forks[0].size() && !done(); ++k) {
        add(inst.forks[0][k], Step{inst.rule, inst.premises, static_cast<int>(k)});
      }
    }
    if (sf.evidential() && sf.is_true()) {
      for (std::size_t j = 0; j < cur && !done(); ++j) {
        const SignedFormula other = b.sequence()[j];
        for (auto inst : {app_instance(other, sf, scope), app_instance(sf, other, scope)}) {
          if (inst && !done()) add(inst->forks[0][0], Step{Rule::App, inst->premises, 0});
        }
      }
    }
  }
  bool ok = done();
  b.truncate(base);
  if (!ok) return std::nullopt;
  if (target) {
    // Keep the chain up to the target; the tail needs it.
    auto it = std::find_if(chain.begin(), chain.end(), [&](const auto& p) { return p.first == *target; });
    if (it == chain.end()) return std::nullopt;
    chain.erase(it + 1, chain.end());
  }
  std::vector<TabNode> out;
  if (chain.empty()) {
    out = std::move(tail);
  } else {
    out.push_back(make_chain(std::move(chain), std::move(tail)));
  }
  Needs n = prune(b, out);
  (void)n;
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Hilbert compilation
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<TabNode> compile_line(const HilbertProof& hp, std::size_t k, const LogicSpec& logic,
                                         const ConstantSpecification& cs,
                                         std::vector<std::optional<std::vector<TabNode>>>& memo) {
  if (memo[k]) return *memo[k];
  const auto& l = hp.lines[k];
  std::vector<TabNode> out;
  switch (l.kind) {
    case HilbertLine::Kind::IAN:
      break;  // F c:F closes by the CS condition
    case HilbertLine::Kind::Axiom: {
      Verdict v = prove(l.formula, logic, cs, Limits{200000, 10.0},
                        ProverOptions{.analytic_cut = false, .model_guidance = false});
      if (!v.valid()) {
        throw InvalidProof("line " + std::to_string(k + 1) + ": axiom has no cut-free refutation");
      }
      out = std::move(v.proof->root.children);
      break;
    }
    case HilbertLine::Kind::MP: {
      const Formula& a = l.formula;
      const Formula& b = hp.lines[l.i - 1].formula;
      Formula ba = Formula::implies(b, a);
      auto sb = SignedFormula::t(b);
      auto sba = SignedFormula::t(ba);
      std::vector<TabNode> imp;
      imp.push_back(TabNode{SignedFormula::f(b), Step{Rule::TImp, {sba}, 0}, {}});
      imp.push_back(TabNode{SignedFormula::t(a), Step{Rule::TImp, {sba}, 1}, {}});
      auto inner = make_cut(sba, std::move(imp), compile_line(hp, l.j - 1, logic, cs, memo));
      out = make_cut(sb, std::move(inner), compile_line(hp, l.i - 1, logic, cs, memo));
      break;
    }
  }
  memo[k] = out;
  return out;
}

}  // namespace detail

/// Closed tableau (with Cut nodes) for line `goal_index` (0-based), built by
/// induction on the Hilbert proof: axioms by cut-free refutation, modus
/// ponens by two cuts, IAN by the CS closure condition.
inline Tableau hilbert_to_tableau(const HilbertProof& hp, std::size_t goal_index, const LogicSpec& logic,
                                  const ConstantSpecification& cs) {
  if (goal_index >= hp.lines.size()) throw InvalidProof("goal index out of range");
  validate_hilbert(hp, logic, cs);
  std::vector<std::optional<std::vector<TabNode>>> memo(hp.lines.size());
  Tableau t{TabNode{SignedFormula::f(hp.lines[goal_index].formula), Step{}, {}}};
  t.root.children = detail::compile_line(hp, goal_index, logic, cs, memo);
  return t;
}

// ---------------------------------------------------------------------------
// Cut elimination
// ---------------------------------------------------------------------------

struct TraceEntry {
  std::string label;  // I, II, or III followed by the principal rule pair
  SignedFormula pivot;
  CutMeasure before;
  std::vector<std::pair<SignedFormula, CutMeasure>> after;

  /// Every replacement cut is smaller in (rank, weight); an empty list means
  /// the number of cuts went down.
  bool decreases() const {
    return std::all_of(after.begin(), after.end(), [&](const auto& p) { return p.second < before; });
  }
};

inline std::string render_pivot(const SignedFormula& sf) {
  return sf.evidential() ? render_evidential(sf.term, sf.body) : render_formula(sf.body);
}

inline std::string render_trace_line(const TraceEntry& e) {
  std::string out = "case=" + e.label + " pivot=" + render_pivot(e.pivot) +
                    " rank=" + std::to_string(e.before.rank) + " weight=" + std::to_string(e.before.weight) +
                    " → [";
  for (std::size_t k = 0; k < e.after.size(); ++k) {
    if (k) out += ", ";
    out += render_pivot(e.after[k].first) + " rank=" + std::to_string(e.after[k].second.rank) +
           " weight=" + std::to_string(e.after[k].second.weight);
  }
  return out + "]";
}

struct CutElimOptions {
  std::size_t max_steps = 1'000'000;
  std::size_t max_nodes = 5'000'000;
  /// Re-check the whole tableau (cuts allowed) after every rewrite.
  bool verify_steps = false;
};

struct CutElimResult {
  Tableau tableau;
  std::vector<TraceEntry> trace;
};

namespace detail {

class CutEliminator {
 public:
  CutEliminator(const Tableau& t, const LogicSpec& logic, const ConstantSpecification& cs,
                const CutElimOptions& opt)
      : tab_(t), logic_(logic), cs_(cs), opt_(opt), scope_(t.root.formula.body, cs) {}

  CutElimResult run() {
    while (auto site = find_minimal_cut(tab_)) {
      if (trace_.size() >= opt_.max_steps) {
        throw CutBudgetExceeded("cut elimination exceeded " + std::to_string(opt_.max_steps) + " steps");
      }
      step(*site);
      if (count_nodes(tab_.root) > opt_.max_nodes) {
        throw CutBudgetExceeded("cut elimination exceeded " + std::to_string(opt_.max_nodes) + " nodes");
      }
      if (opt_.verify_steps) {
        auto r = check_proof(tab_, tab_.root.formula.body, logic_, cs_, CheckOptions{true, false});
        if (!r) throw MalformedCut("rewrite " + trace_.back().label + " broke the tableau: " + r.reason);
      }
    }
    BranchSet b(cs_);
    b.push(tab_.root.formula);
    tab_.root.children = normalize(b, std::move(tab_.root.children));
    prune(b, tab_.root.children);
    return {std::move(tab_), std::move(trace_)};
  }

 private:
  void collect_cuts(const std::vector<TabNode>& ch, std::vector<std::pair<SignedFormula, CutMeasure>>& out) {
    for (const auto& n : ch) collect_cuts(n.children, out);
    if (ch.size() == 2 && ch[0].step.rule == Rule::Cut) {
      TabNode x{ch[0].formula, Step{}, {}};
      x.children = ch;
      out.push_back({ch[0].formula, cut_measure(x)});
    }
  }

  void record(const std::string& label, const CutSite& site, const std::vector<TabNode>& result) {
    TraceEntry e{label, site.pivot, site.measure, {}};
    collect_cuts(result, e.after);
    trace_.push_back(std::move(e));
  }

  static bool uses_head(const TabNode& head) {
    if (head.children.empty()) return false;
    const auto& p = head.children[0].step.premises;
    return std::find(p.begin(), p.end(), head.formula) != p.end();
  }

  void step(const CutSite& site) {
    BranchSet theta(cs_);
    TabNode* x = &tab_.root;
    theta.push(x->formula);
    for (auto i : site.path) {
      x = &x->children[i];
      theta.push(x->formula);
    }
    std::vector<TabNode> result = rewrite(theta, std::move(x->children), site);
    x->children = std::move(result);
  }

  std::vector<TabNode> rewrite(BranchSet& theta, std::vector<TabNode> cut, const CutSite& site) {
    const SignedFormula phi = cut[0].formula;
    cut = normalize(theta, std::move(cut));
    prune(theta, cut);
    if (cut.size() != 2 || cut[0].step.rule != Rule::Cut) {
      record("I", site, cut);
      return cut;
    }
    std::vector<TabNode>& t1 = cut[0].children;
    std::vector<TabNode>& t2 = cut[1].children;

    if (t1.empty() || t2.empty()) {
      if (auto closed = saturate(theta, logic_, scope_)) {
        record("I", site, *closed);
        return std::move(*closed);
      }
      if (reclassify(cut)) {
        record("I", site, cut);
        return cut;
      }
      for (int s = 0; s < 2; ++s) {
        if (!cut[s].children.empty() || cut[1 - s].children.empty()) continue;
        TabNode& other = cut[1 - s];
        if (auto d = saturate(theta, logic_, scope_, other.formula, other.children)) {
          std::vector<TabNode> out = normalize(theta, std::move(*d));
          if (valid_in(theta, out)) {
            record("I", site, out);
            return out;
          }
        }
        std::vector<TabNode> dropped = normalize(theta, other.children);
        if (valid_in(theta, dropped)) {
          record("I", site, dropped);
          return dropped;
        }
      }
    }

    for (int s = 0; s < 2; ++s) {
      if (!cut[s].children.empty() && !uses_head(cut[s])) {
        auto out = permute(theta, std::move(cut), s);
        record("II", site, out);
        return out;
      }
    }

    if (t1.empty() || t2.empty()) {
      throw MalformedCut("branch-end cut on " + render_signed(phi) + " admits no reduction");
    }

    std::string label;
    auto comps = components(cut, label);
    if (label == "IIIapp" && reclassify(cut)) {
      record(label, site, cut);
      return cut;
    }
    Sigma sigma{std::move(t1), std::move(t2), phi, site.measure.weight, std::move(comps)};
    auto out = build(theta, sigma, 0);
    record(label, site, out);
    return out;
  }

  bool reclassify(std::vector<TabNode>& cut) const {
    const SignedFormula& p = cut[0].formula;
    Rule r;
    if (p.evidential()) {
      if (!pbe_allowed(p.term, p.body, scope_)) return false;
      r = Rule::PBe;
    } else {
      if (!pb_allowed(p.body, scope_)) return false;
      r = Rule::PB;
    }
    cut[0].step.rule = r;
    cut[1].step.rule = r;
    return true;
  }

  // Moves the first rule application of side `s` above the cut.
  std::vector<TabNode> permute(BranchSet& theta, std::vector<TabNode> cut, int s) {
    const SignedFormula phi = cut[0].formula;
    std::vector<TabNode> first = std::move(cut[s].children);
    std::vector<TabNode> other = std::move(cut[1 - s].children);
    auto rebuild = [&](std::vector<TabNode> side) {
      return s == 0 ? make_cut(phi, std::move(side), other) : make_cut(phi, other, std::move(side));
    };
    if (first.size() == 1) {
      TabNode n = std::move(first[0]);
      theta.push(n.formula);
      n.children = normalize(theta, rebuild(std::move(n.children)));
      theta.pop();
      std::vector<TabNode> out;
      out.push_back(std::move(n));
      return out;
    }
    for (auto& g : first) {
      theta.push(g.formula);
      g.children = normalize(theta, rebuild(std::move(g.children)));
      theta.pop();
    }
    return first;
  }

  // Formulas to cut on, of rank below the pivot's, chosen by the principal
  // rule pair of the cut.
  std::vector<SignedFormula> components(const std::vector<TabNode>& cut, std::string& label) const {
    const SignedFormula& p = cut[0].formula;
    if (!p.evidential()) {
      const Formula& f = p.body;
      switch (f.kind()) {
        case FormulaKind::Neg:
          label = "IIIneg";
          return {SignedFormula::t(f.inner())};
        case FormulaKind::Implies:
          label = "IIIimp";
          return {SignedFormula::t(f.lhs()), SignedFormula::t(f.rhs())};
        case FormulaKind::Just:
          label = "IIIjust";
          return {SignedFormula::te(f.term(), f.body())};
        default:
          label = "IIIatom";
          return {};
      }
    }
    const TabNode& t_first = cut[0].children[0];
    const TabNode& f_first = cut[1].children[0];
    auto positive = [](const SignedFormula& sf) {
      return sf.is_true() ? sf : sf.conjugate();
    };
    std::vector<SignedFormula> out;
    switch (f_first.step.rule) {
      case Rule::SumL:
      case Rule::SumR: label = "IIIsum"; break;
      case Rule::Bang: label = "IIIbang"; break;
      case Rule::Query: label = "IIIquery"; break;
      case Rule::WQuery:
        label = "IIIwquery";
        out.push_back(SignedFormula::t(p.body.inner()));
        break;
      default: label = "III"; break;
    }
    out.push_back(positive(f_first.formula));
    if (t_first.step.rule == Rule::App) {
      label = "IIIapp";
    } else {
      if (t_first.step.rule == Rule::EBot) label += "bot";
      out.push_back(positive(t_first.formula));
    }
    return out;
  }

  struct Sigma {
    std::vector<TabNode> t1, t2;
    SignedFormula phi;
    std::size_t weight;
    std::vector<SignedFormula> comps;
  };

  std::vector<TabNode> build(BranchSet& ctx, const Sigma& sg, std::size_t idx) {
    if (ctx.closed()) return {};
    if (auto c = saturate(ctx, logic_, scope_)) return std::move(*c);
    for (const auto* side : {&sg.t1, &sg.t2}) {
      auto cand = normalize(ctx, *side);
      if (valid_in(ctx, cand)) {
        prune(ctx, cand);
        return cand;
      }
    }
    while (idx < sg.comps.size() &&
           (ctx.contains(sg.comps[idx]) || ctx.contains(sg.comps[idx].conjugate()))) {
      ++idx;
    }
    if (idx < sg.comps.size()) {
      const SignedFormula& c = sg.comps[idx];
      std::vector<TabNode> forks[2];
      for (int k = 0; k < 2; ++k) {
        ctx.push(k == 0 ? c : c.conjugate());
        forks[k] = build(ctx, sg, idx + 1);
        ctx.pop();
      }
      return make_cut(c, std::move(forks[0]), std::move(forks[1]));
    }
    ctx.push(sg.phi);
    auto a = normalize(ctx, sg.t1);
    ctx.pop();
    ctx.push(sg.phi.conjugate());
    auto b = normalize(ctx, sg.t2);
    ctx.pop();
    if (count_nodes(a) + count_nodes(b) >= sg.weight) {
      throw MalformedCut("residual cut on " + render_signed(sg.phi) + " does not lose weight");
    }
    return make_cut(sg.phi, std::move(a), std::move(b));
  }

  Tableau tab_;
  LogicSpec logic_;
  const ConstantSpecification& cs_;
  CutElimOptions opt_;
  AnalyticScope scope_;
  std::vector<TraceEntry> trace_;
};

}  // namespace detail

/// Rewrites minimal cuts until none remain. The root sequence is unchanged
/// and every intermediate tableau stays closed.
inline CutElimResult eliminate_cuts(const Tableau& t, const LogicSpec& logic, const ConstantSpecification& cs,
                                    const CutElimOptions& opt = {}) {
  return detail::CutEliminator(t, logic, cs, opt).run();
}

inline std::vector<TraceEntry> cut_step_trace(const Tableau& t, const LogicSpec& logic,
                                              const ConstantSpecification& cs, const CutElimOptions& opt = {}) {
  return eliminate_cuts(t, logic, cs, opt).trace;
}

}  // namespace jtab
