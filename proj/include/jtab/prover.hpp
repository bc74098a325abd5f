#pragma once

// Terminating proof search for finite constant specifications.
//
// Rule priority on a branch: linear rules (oldest premise first), then (PB)
// on CS entries, then (T->), then (PBe) on pivots that feed a pending (*)
// step, then the remaining (PBe) and (PB) pivots. A rule instance is skipped
// when one of its forks adds nothing new, so every pivot fires at most once
// per branch and the search is bounded by the analytic universe.

#include <chrono>
#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "jtab/checker.hpp"
#include "jtab/logic.hpp"
#include "jtab/semantics.hpp"
#include "jtab/tableau.hpp"

namespace jtab {

class IllegalApplication : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Limits {
  std::size_t max_nodes = 2'000'000;
  double max_seconds = 10.0;
};

struct ProverOptions {
  /// Allow (PB)/(PBe). Axiom refutations are found without them.
  bool analytic_cut = true;
  /// Once an open branch yields a certified model, explore forks it satisfies first.
  bool model_guidance = true;
  /// Admit goals whose terms use operators outside the logic's signature.
  /// Such operators are uninterpreted: no rule or closure condition mentions them.
  bool admit_foreign_operators = false;
};

enum class VerdictKind { Valid, Invalid, ResourceOut };

inline std::string to_string(VerdictKind k) {
  switch (k) {
    case VerdictKind::Valid: return "valid";
    case VerdictKind::Invalid: return "invalid";
    case VerdictKind::ResourceOut: return "resource-out";
  }
  return "?";
}

struct Verdict {
  VerdictKind kind = VerdictKind::ResourceOut;
  std::optional<Tableau> proof;
  std::vector<SignedFormula> open_branch;
  Extraction model;
  std::string limit;
  std::size_t nodes_explored = 0;

  bool valid() const { return kind == VerdictKind::Valid; }
  bool invalid() const { return kind == VerdictKind::Invalid; }
};

namespace detail {

class Search {
 public:
  Search(const Formula& goal, const LogicSpec& logic, const ConstantSpecification& cs,
         const Limits& limits, const ProverOptions& opt, std::vector<SignedFormula> start = {})
      : goal_(goal), logic_(logic), cs_(cs), limits_(limits), opt_(opt), scope_(goal, cs),
        branch_(cs_), start_seq_(std::move(start)) {
    if (start_seq_.empty()) start_seq_.push_back(SignedFormula::f(goal_));
    for (const auto& f : scope_.subformulas) {
      if (f.is(FormulaKind::Implies)) antecedents_[f.rhs()].push_back(f.lhs());
    }
    if (opt_.analytic_cut) {
      for (const auto& t : scope_.terms) {
        for (const auto& a : scope_.subformulas) pbe_pivots_.push_back({t, a});
      }
      pb_pivots_.assign(scope_.subformulas.begin(), scope_.subformulas.end());
    }
    start_ = std::chrono::steady_clock::now();
  }

  Verdict run() {
    Verdict v;
    Closure c = Closure::Open;
    std::vector<std::pair<SignedFormula, Step>> roots;
    for (const auto& sf : start_seq_) {
      if (c != Closure::Open) break;
      c = push(sf);
      ++nodes_;
      roots.push_back({sf, Step{}});
    }
    auto finish_valid = [&](std::vector<TabNode> below) {
      v.kind = VerdictKind::Valid;
      v.proof = Tableau{make_chain(std::move(roots), std::move(below))};
    };
    if (c != Closure::Open) {
      finish_valid({});
      v.nodes_explored = nodes_;
      return v;
    }
    std::vector<TabNode> below;
    switch (search(below)) {
      case Outcome::Closed:
        finish_valid(std::move(below));
        break;
      case Outcome::Open:
        v.kind = VerdictKind::Invalid;
        v.open_branch = branch_.sequence();
        v.model = extract_candidate_model(v.open_branch, goal_, logic_, cs_);
        break;
      case Outcome::Out:
        v.kind = VerdictKind::ResourceOut;
        v.limit = limit_hit_;
        break;
    }
    v.nodes_explored = nodes_;
    return v;
  }

 private:
  enum class Outcome { Closed, Open, Out };

  struct Saved {
    std::size_t branch_size, cursor, tevid, pbe, pb;
    std::optional<Model> guide;
  };

  Saved save() const {
    return {branch_.size(), cursor_, tevid_.size(), pbe_cursor_, pb_cursor_, guide_};
  }

  void restore(const Saved& s) {
    branch_.truncate(s.branch_size);
    cursor_ = s.cursor;
    tevid_.resize(s.tevid);
    pbe_cursor_ = s.pbe;
    pb_cursor_ = s.pb;
    guide_ = s.guide;
  }

  Closure push(const SignedFormula& sf) {
    Closure c = branch_.push(sf);
    if (sf.evidential() && sf.is_true()) tevid_.push_back(branch_.size() - 1);
    return c;
  }

  bool out_of_budget() {
    if (nodes_ > limits_.max_nodes) {
      limit_hit_ = "max-nodes";
      return true;
    }
    if ((nodes_ & 255U) == 0) {
      std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start_;
      if (dt.count() > limits_.max_seconds) {
        limit_hit_ = "max-seconds";
        return true;
      }
    }
    return false;
  }

  bool present(const SignedFormula& sf) const { return branch_.contains(sf); }

  bool decided(const SignedFormula& sf) const { return present(sf) || present(sf.conjugate()); }

  // Appends `products` of one linear instance; true if the branch closed.
  bool add_linear(const RuleInstance& inst, std::vector<std::pair<SignedFormula, Step>>& chain) {
    const auto& products = inst.forks[0];
    for (std::size_t k = 0; k < products.size(); ++k) {
      if (present(products[k])) continue;
      ++nodes_;
      Closure c = push(products[k]);
      chain.push_back({products[k], Step{inst.rule, inst.premises, static_cast<int>(k)}});
      if (c != Closure::Open) return true;
    }
    return false;
  }

  Outcome finish(std::vector<std::pair<SignedFormula, Step>>& chain, std::vector<TabNode> tail,
                 std::vector<TabNode>& out) {
    if (chain.empty()) {
      out = std::move(tail);
    } else {
      out.clear();
      out.push_back(make_chain(std::move(chain), std::move(tail)));
    }
    return Outcome::Closed;
  }

  bool fork_satisfied(const std::vector<SignedFormula>& products) const {
    if (!guide_) return false;
    for (const auto& p : products) {
      if (!eval(*guide_, p)) return false;
    }
    return true;
  }

  Outcome branch_on(const RuleInstance& inst, std::vector<std::pair<SignedFormula, Step>>& chain,
                    std::vector<TabNode>& out) {
    int order[2] = {0, 1};
    if (!fork_satisfied(inst.forks[0]) && fork_satisfied(inst.forks[1])) {
      order[0] = 1;
      order[1] = 0;
    }
    std::vector<TabNode> heads(2);
    for (int f : order) {
      Saved s = save();
      const SignedFormula& product = inst.forks[f][0];
      ++nodes_;
      Closure c = push(product);
      TabNode head{product, Step{inst.rule, inst.premises, f}, {}};
      if (c == Closure::Open) {
        Outcome r = search(head.children);
        if (r != Outcome::Closed) return r;
      }
      restore(s);
      heads[f] = std::move(head);
    }
    return finish(chain, std::move(heads), out);
  }

  Outcome search(std::vector<TabNode>& out) {
    std::vector<std::pair<SignedFormula, Step>> chain;
    const auto& seq = branch_.sequence();
    for (;;) {
      if (out_of_budget()) return Outcome::Out;

      // Linear rules, oldest premise first.
      while (cursor_ < seq.size()) {
        SignedFormula sf = seq[cursor_];
        for (const auto& inst : unary_instances(sf, logic_)) {
          if (inst.branching()) continue;
          if (add_linear(inst, chain)) return finish(chain, {}, out);
        }
        if (sf.evidential() && sf.is_true()) {
          for (std::size_t k = 0; k < tevid_.size() && tevid_[k] < cursor_; ++k) {
            SignedFormula other = seq[tevid_[k]];
            for (auto inst : {app_instance(other, sf, scope_), app_instance(sf, other, scope_)}) {
              if (inst && add_linear(*inst, chain)) return finish(chain, {}, out);
            }
          }
        }
        ++cursor_;
        if (out_of_budget()) return Outcome::Out;
      }

      // Constant specification entries: the F fork closes at once.
      if (opt_.analytic_cut) {
        for (const auto& entry : cs_.entries()) {
          if (!decided(SignedFormula::t(entry))) return branch_on(pb_instance(entry), chain, out);
        }
      }

      for (const auto& sf : seq) {
        if (sf.evidential() || !sf.is_true() || !sf.body.is(FormulaKind::Implies)) continue;
        auto l = SignedFormula::f(sf.body.lhs());
        auto r = SignedFormula::t(sf.body.rhs());
        if (present(l) || present(r)) continue;
        return branch_on({Rule::TImp, {sf}, {{l}, {r}}}, chain, out);
      }

      if (!opt_.analytic_cut) return Outcome::Open;

      if (opt_.model_guidance && !guide_ && !guide_failed_at_.contains(seq.size())) {
        auto ex = extract_candidate_model(seq, goal_, logic_, cs_);
        if (ex) {
          guide_ = std::move(ex.model);
        } else {
          guide_failed_at_.insert(seq.size());
        }
      }

      // (PBe) pivots that would feed a (*) step towards a refuted atom.
      for (const auto& sf : seq) {
        if (!sf.evidential() || sf.is_true() || sf.term.kind() != TermKind::App) continue;
        auto it = antecedents_.find(sf.body);
        if (it == antecedents_.end()) continue;
        const Term& s = sf.term.lhs();
        const Term& t = sf.term.rhs();
        for (const auto& a : it->second) {
          Formula imp = Formula::implies(a, sf.body);
          if (pbe_allowed(s, imp, scope_) && !decided(SignedFormula::te(s, imp))) {
            return branch_on(pbe_instance(s, imp), chain, out);
          }
          if (pbe_allowed(t, a, scope_) && !decided(SignedFormula::te(t, a))) {
            return branch_on(pbe_instance(t, a), chain, out);
          }
        }
      }

      while (pbe_cursor_ < pbe_pivots_.size()) {
        const auto& [t, a] = pbe_pivots_[pbe_cursor_];
        if (!decided(SignedFormula::te(t, a))) return branch_on(pbe_instance(t, a), chain, out);
        ++pbe_cursor_;
      }
      while (pb_cursor_ < pb_pivots_.size()) {
        const auto& a = pb_pivots_[pb_cursor_];
        if (!decided(SignedFormula::t(a))) return branch_on(pb_instance(a), chain, out);
        ++pb_cursor_;
      }
      return Outcome::Open;
    }
  }

  Formula goal_;
  LogicSpec logic_;
  const ConstantSpecification& cs_;
  Limits limits_;
  ProverOptions opt_;
  AnalyticScope scope_;
  BranchSet branch_;
  std::vector<SignedFormula> start_seq_;
  std::map<Formula, std::vector<Formula>> antecedents_;
  std::vector<EvidentialAtom> pbe_pivots_;
  std::vector<Formula> pb_pivots_;

  std::size_t cursor_ = 0;
  std::vector<std::size_t> tevid_;
  std::size_t pbe_cursor_ = 0;
  std::size_t pb_cursor_ = 0;
  std::optional<Model> guide_;
  std::set<std::size_t> guide_failed_at_;

  std::size_t nodes_ = 0;
  std::string limit_hit_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace detail

/// Decides `goal` in logic_CS. Throws ConfigError for an invalid CS or a goal
/// outside the logic's signature.
inline Verdict prove(const Formula& goal, const LogicSpec& logic, const ConstantSpecification& cs,
                     const Limits& limits = {}, const ProverOptions& opt = {}) {
  if (auto v = validate_cs(cs, logic); !v.empty()) {
    throw ConfigError("invalid constant specification: " + render_formula(v.front().entry) + ": " +
                      v.front().reason);
  }
  if (!opt.admit_foreign_operators) {
    try {
      check_signature(goal, logic);
    } catch (const SignatureError& e) {
      throw ConfigError(e.what());
    }
  }
  return detail::Search(goal, logic, cs, limits, opt).run();
}

/// Searches for a closed tableau whose root sequence is `start`. Side
/// conditions are taken relative to `root`.
inline Verdict refute(const std::vector<SignedFormula>& start, const Formula& root, const LogicSpec& logic,
                      const ConstantSpecification& cs, const Limits& limits = {},
                      const ProverOptions& opt = {}) {
  if (start.empty()) throw ConfigError("empty root sequence");
  return detail::Search(root, logic, cs, limits, opt, start).run();
}

/// Rule instances applicable on an open branch, in the prover's priority
/// order. Instances with a fork that adds nothing new are omitted.
inline std::vector<RuleInstance> applicable_rules(const std::vector<SignedFormula>& branch,
                                                  const Formula& root, const LogicSpec& logic,
                                                  const ConstantSpecification& cs) {
  AnalyticScope scope(root, cs);
  std::set<SignedFormula> on(branch.begin(), branch.end());
  auto has = [&](const SignedFormula& sf) { return on.contains(sf); };
  auto decided = [&](const SignedFormula& sf) { return has(sf) || has(sf.conjugate()); };
  auto fresh = [&](const std::vector<SignedFormula>& fork) {
    for (const auto& p : fork) {
      if (!has(p)) return true;
    }
    return false;
  };
  std::vector<RuleInstance> linear, imps;
  for (std::size_t i = 0; i < branch.size(); ++i) {
    for (auto& inst : unary_instances(branch[i], logic)) {
      if (inst.branching()) {
        if (fresh(inst.forks[0]) && fresh(inst.forks[1])) imps.push_back(std::move(inst));
      } else if (fresh(inst.forks[0])) {
        linear.push_back(std::move(inst));
      }
    }
    for (std::size_t j = 0; j < i; ++j) {
      for (auto inst : {app_instance(branch[j], branch[i], scope), app_instance(branch[i], branch[j], scope)}) {
        if (inst && fresh(inst->forks[0])) linear.push_back(std::move(*inst));
      }
    }
  }
  std::vector<RuleInstance> out = std::move(linear);
  for (const auto& entry : cs.entries()) {
    if (!decided(SignedFormula::t(entry))) out.push_back(pb_instance(entry));
  }
  out.insert(out.end(), imps.begin(), imps.end());
  for (const auto& t : scope.terms) {
    for (const auto& a : scope.subformulas) {
      if (!decided(SignedFormula::te(t, a))) out.push_back(pbe_instance(t, a));
    }
  }
  for (const auto& a : scope.subformulas) {
    if (!decided(SignedFormula::t(a)) && !cs.contains(a)) out.push_back(pb_instance(a));
  }
  return out;
}

namespace detail {
inline TabNode* node_at(TabNode& root, const std::vector<std::size_t>& path) {
  TabNode* n = &root;
  for (auto i : path) {
    if (i >= n->children.size()) throw IllegalApplication("no node at the given path");
    n = &n->children[i];
  }
  return n;
}
}  // namespace detail

/// Extends the leaf at `leaf_path` (child indices from the root) with the
/// products of `inst`. Throws IllegalApplication unless `inst` is among the
/// applicable rules of that branch.
inline Tableau apply_rule(const Tableau& tableau, const std::vector<std::size_t>& leaf_path,
                          const RuleInstance& inst, const Formula& root, const LogicSpec& logic,
                          const ConstantSpecification& cs) {
  Tableau out = tableau;
  std::vector<SignedFormula> branch;
  TabNode* n = &out.root;
  branch.push_back(n->formula);
  for (auto i : leaf_path) {
    if (i >= n->children.size()) throw IllegalApplication("no node at the given path");
    n = &n->children[i];
    branch.push_back(n->formula);
  }
  if (!n->children.empty()) throw IllegalApplication("target is not a leaf");
  if (closure_status(branch, cs).closed()) throw IllegalApplication("branch is closed");
  auto legal = applicable_rules(branch, root, logic, cs);
  if (std::find(legal.begin(), legal.end(), inst) == legal.end()) {
    throw IllegalApplication("rule instance " + to_string(inst.rule) + " is not applicable here");
  }
  if (inst.branching()) {
    for (int f = 0; f < 2; ++f) {
      n->children.push_back(TabNode{inst.forks[f][0], Step{inst.rule, inst.premises, f}, {}});
    }
    return out;
  }
  std::vector<std::pair<SignedFormula, Step>> chain;
  for (std::size_t k = 0; k < inst.forks[0].size(); ++k) {
    chain.push_back({inst.forks[0][k], Step{inst.rule, inst.premises, static_cast<int>(k)}});
  }
  n->children.push_back(make_chain(std::move(chain)));
  return out;
}

}  // namespace jtab
