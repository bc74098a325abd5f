#include <gtest/gtest.h>

#include "jtab/checker.hpp"
#include "jtab/cutelim.hpp"
#include "jtab/oracle.hpp"
#include "jtab/prover.hpp"

using namespace jtab;

namespace {

Formula F(const char* s) { return parse_formula(s); }
SignedFormula S(const char* s) { return parse_signed(s); }
Term Tm(const char* s) { return parse_term(s); }

const LogicSpec J = LogicSpec::parse("J");

const char* kMp =
    "1. P -> (Q -> P) [Taut]\n"
    "2. (P -> (Q -> P)) -> (P -> P) [Taut]\n"
    "3. P -> P [MP 1 2]\n";

bool same_tree(const TabNode& a, const TabNode& b) {
  if (a.formula != b.formula || !(a.step == b.step) || a.children.size() != b.children.size()) return false;
  for (std::size_t i = 0; i < a.children.size(); ++i) {
    if (!same_tree(a.children[i], b.children[i])) return false;
  }
  return true;
}

void collect_rules(const TabNode& n, std::set<Rule>& out) {
  out.insert(n.step.rule);
  for (const auto& c : n.children) collect_rules(c, out);
}

// Attaches a cut on `pivot` under `n`.
void add_cut(TabNode& n, const Formula& pivot, std::vector<TabNode> left, std::vector<TabNode> right) {
  n.children.push_back(TabNode{SignedFormula::t(pivot), {Rule::Cut, {}, 0}, std::move(left)});
  n.children.push_back(TabNode{SignedFormula::f(pivot), {Rule::Cut, {}, 1}, std::move(right)});
}

}  // namespace

TEST(Rank, Examples) {
  EXPECT_EQ(rank(Tm("x")), 0u);
  EXPECT_EQ(rank(Tm("c*x")), 1u);
  EXPECT_EQ(rank(S("T [c*x,Q->P]")), 2u);
  EXPECT_EQ(rank(F("x:P")), 1u);
}

TEST(Rank, StrictOnProperParts) {
  for (const char* s : {"x:(P->Q) -> (y:P -> x*y:Q)", "~!x:x:P", "?\?(x+y):~c:(P->P)"}) {
    auto f = F(s);
    for (const auto& g : subformulas(f)) {
      if (g != f) {
        EXPECT_LT(rank(g), rank(f)) << render_formula(g);
      }
    }
    for (const auto& t : terms_of(f)) {
      for (const auto& u : subterms(t)) {
        if (u != t) {
          EXPECT_LT(rank(u), rank(t));
        }
      }
    }
  }
}

TEST(Hilbert, ParseRenderRoundTrip) {
  auto hp = parse_hilbert(kMp);
  ASSERT_EQ(hp.lines.size(), 3u);
  EXPECT_EQ(hp.lines[2].kind, HilbertLine::Kind::MP);
  EXPECT_EQ(hp.lines[2].i, 1u);
  EXPECT_EQ(hp.lines[2].j, 2u);
  auto again = parse_hilbert(render_hilbert(hp));
  ASSERT_EQ(again.lines.size(), 3u);
  for (std::size_t k = 0; k < 3; ++k) EXPECT_EQ(again.lines[k].formula, hp.lines[k].formula);
}

TEST(Hilbert, Validation) {
  EXPECT_NO_THROW(validate_hilbert(parse_hilbert(kMp), J, {}));
  auto broken = parse_hilbert("1. P -> (Q -> P) [Taut]\n2. (P -> (Q -> P)) -> (P -> P) [Taut]\n3. P -> P [MP 1 5]\n");
  EXPECT_THROW(validate_hilbert(broken, J, {}), InvalidProof);
  EXPECT_THROW(validate_hilbert(parse_hilbert("1. x:P -> P [jT]\n"), J, {}), InvalidProof);
  EXPECT_NO_THROW(validate_hilbert(parse_hilbert("1. x:P -> P [jT]\n"), LogicSpec::parse("JT"), {}));
  EXPECT_THROW(validate_hilbert(parse_hilbert("1. c:(P -> (Q -> P)) [IAN]\n"), J, {}), InvalidProof);
  EXPECT_THROW(validate_hilbert(parse_hilbert("1. P -> P [Frobnicate]\n"), J, {}), InvalidProof);
}

TEST(Compile, ModusPonensUsesTwoCuts) {
  auto hp = parse_hilbert(kMp);
  auto t = hilbert_to_tableau(hp, 2, J, {});
  EXPECT_EQ(count_cuts(t), 2u);
  EXPECT_TRUE(check_proof(t, F("P -> P"), J, {}, CheckOptions{true, true}));
  EXPECT_FALSE(check_proof(t, F("P -> P"), J, {}));
}

TEST(Compile, IanIsOneNode) {
  ConstantSpecification cs{F("c:(P -> (Q -> P))")};
  auto t = hilbert_to_tableau(parse_hilbert("1. c:(P -> (Q -> P)) [IAN]\n"), 0, J, cs);
  EXPECT_EQ(count_nodes(t.root), 1u);
  EXPECT_TRUE(check_proof(t, F("c:(P -> (Q -> P))"), J, cs));
}

TEST(Compile, SumAxiomIsCutFree) {
  auto t = hilbert_to_tableau(parse_hilbert("1. s:P -> (s+t):P [Sum]\n"), 0, J, {});
  EXPECT_EQ(count_cuts(t), 0u);
  EXPECT_TRUE(check_proof(t, F("s:P -> (s+t):P"), J, {}));
  std::set<Rule> used;
  collect_rules(t.root, used);
  for (Rule r : {Rule::FE, Rule::SumL, Rule::TE}) EXPECT_TRUE(used.contains(r)) << to_string(r);
}

TEST(FindCut, CutFreeHasNone) {
  auto v = prove(F("x:P -> (x+y):P"), J, {});
  ASSERT_TRUE(v.valid());
  EXPECT_FALSE(find_minimal_cut(*v.proof));
}

TEST(FindCut, NestedPicksInnermost) {
  auto root = S("F P -> P");
  auto body = [&] {
    return make_chain({{S("T P"), {Rule::FImp, {root}, 0}}, {S("F P"), {Rule::FImp, {root}, 1}}});
  };
  TabNode inner_host{S("T Q"), {Rule::Cut, {}, 0}, {}};
  add_cut(inner_host, F("Q -> Q"), {body()}, {body()});
  Tableau t{TabNode{root, {}, {}}};
  t.root.children.push_back(std::move(inner_host));
  t.root.children.push_back(TabNode{S("F Q"), {Rule::Cut, {}, 1}, {body()}});
  EXPECT_EQ(count_cuts(t), 2u);
  auto site = find_minimal_cut(t);
  ASSERT_TRUE(site);
  EXPECT_EQ(site->pivot.body, F("Q -> Q"));
  EXPECT_EQ(site->path, (std::vector<std::size_t>{0}));

  auto out = eliminate_cuts(t, J, {});
  EXPECT_EQ(count_cuts(out.tableau), 0u);
  EXPECT_TRUE(check_proof(out.tableau, F("P -> P"), J, {}));
}

TEST(Eliminate, ModusPonensPipeline) {
  auto t = hilbert_to_tableau(parse_hilbert(kMp), 2, J, {});
  auto out = eliminate_cuts(t, J, {}, CutElimOptions{.verify_steps = true});
  EXPECT_EQ(count_cuts(out.tableau), 0u);
  EXPECT_EQ(out.tableau.root.formula, S("F P -> P"));
  auto r = check_proof(out.tableau, F("P -> P"), J, {});
  EXPECT_TRUE(r) << r.reason;
  EXPECT_TRUE(audit_subformula_property(out.tableau, F("P -> P"), {}));
  EXPECT_GE(out.trace.size(), 2u);
  for (const auto& e : out.trace) EXPECT_TRUE(e.decreases()) << render_trace_line(e);
}

TEST(Eliminate, PaperExampleViaHilbert) {
  ConstantSpecification cs{F("c:(P -> (Q -> P))")};
  auto hp = parse_hilbert(
      "1. c:(P -> (Q -> P)) [IAN]\n"
      "2. c:(P -> (Q -> P)) -> (x:P -> c*x:(Q -> P)) [jK]\n"
      "3. x:P -> c*x:(Q -> P) [MP 1 2]\n");
  auto t = hilbert_to_tableau(hp, 2, J, cs);
  auto out = eliminate_cuts(t, J, cs, CutElimOptions{.verify_steps = true});
  auto goal = F("x:P -> c*x:(Q->P)");
  EXPECT_TRUE(check_proof(out.tableau, goal, J, cs)) << check_proof(out.tableau, goal, J, cs).reason;
  EXPECT_TRUE(audit_subformula_property(out.tableau, goal, cs));
}

TEST(Eliminate, CutFreeUnchanged) {
  ConstantSpecification cs{F("c:(P -> (Q -> P))")};
  auto v = prove(F("x:P -> c*x:(Q->P)"), J, cs);
  ASSERT_TRUE(v.valid());
  auto out = eliminate_cuts(*v.proof, J, cs);
  EXPECT_TRUE(out.trace.empty());
  EXPECT_TRUE(same_tree(out.tableau.root, v.proof->root));
}

TEST(Eliminate, BranchEndCutAbsorbed) {
  // T [x,P] is already on the branch; the cut only repeats it.
  auto root = S("F x:P -> x:P");
  auto chain = make_chain({{root, {}},
                           {S("T x:P"), {Rule::FImp, {root}, 0}},
                           {S("F x:P"), {Rule::FImp, {root}, 1}},
                           {S("T [x,P]"), {Rule::TE, {S("T x:P")}, 0}}});
  Tableau t{chain};
  TabNode* leaf = &t.root;
  while (!leaf->children.empty()) leaf = &leaf->children[0];
  leaf->children.push_back(TabNode{S("T [x,P]"), {Rule::Cut, {}, 0}, {}});
  leaf->children.push_back(TabNode{S("F [x,P]"), {Rule::Cut, {}, 1}, {}});
  ASSERT_EQ(count_cuts(t), 1u);
  auto out = eliminate_cuts(t, J, {});
  EXPECT_EQ(count_cuts(out.tableau), 0u);
  ASSERT_EQ(out.trace.size(), 1u);
  EXPECT_EQ(out.trace[0].label.substr(0, 1), "I");
  EXPECT_TRUE(out.trace[0].after.empty());
  EXPECT_TRUE(check_proof(out.tableau, F("x:P -> x:P"), J, {}));
}

TEST(Eliminate, StepBudget) {
  auto t = hilbert_to_tableau(parse_hilbert(kMp), 2, J, {});
  EXPECT_THROW(eliminate_cuts(t, J, {}, CutElimOptions{.max_steps = 1}), CutBudgetExceeded);
}

TEST(Eliminate, RandomHilbertProofs) {
  const char* logics[] = {"J", "JT", "JD", "J4", "JT4", "JB", "J5", "JT45"};
  int n = 0;
  for (std::uint64_t seed = 1; seed <= 120; ++seed) {
    auto logic = LogicSpec::parse(logics[seed % 8]);
    auto rh = random_hilbert(seed, logic);
    std::size_t goal = rh.proof.lines.size() - 1;
    auto t = hilbert_to_tableau(rh.proof, goal, logic, rh.cs);
    auto out = eliminate_cuts(t, logic, rh.cs, CutElimOptions{.verify_steps = true});
    const auto& g = rh.proof.lines[goal].formula;
    EXPECT_EQ(count_cuts(out.tableau), 0u);
    EXPECT_TRUE(check_proof(out.tableau, g, logic, rh.cs)) << seed << " " << render_formula(g);
    EXPECT_TRUE(audit_subformula_property(out.tableau, g, rh.cs)) << seed;
    for (const auto& e : out.trace) EXPECT_TRUE(e.decreases()) << seed << " " << render_trace_line(e);
    ++n;
  }
  EXPECT_EQ(n, 120);
}
