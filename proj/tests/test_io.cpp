#include <gtest/gtest.h>

#include "jtab/checker.hpp"
#include "jtab/io.hpp"
#include "jtab/oracle.hpp"

using namespace jtab;

namespace {

Formula F(const char* s) { return parse_formula(s); }

const LogicSpec J = LogicSpec::parse("J");
ConstantSpecification example_cs() { return {F("c:(P->(Q->P))")}; }

bool same_tree(const TabNode& a, const TabNode& b) {
  if (a.formula != b.formula || !(a.step == b.step) || a.children.size() != b.children.size()) return false;
  for (std::size_t i = 0; i < a.children.size(); ++i) {
    if (!same_tree(a.children[i], b.children[i])) return false;
  }
  return true;
}

}  // namespace

TEST(ProofJson, Schema) {
  auto v = prove(F("x:P -> c*x:(Q->P)"), J, example_cs());
  ASSERT_TRUE(v.valid());
  auto j = proof_to_json(*v.proof, example_cs());
  ASSERT_TRUE(j.at("nodes").is_array());
  std::size_t closed = 0;
  for (const auto& n : j["nodes"]) {
    for (const char* key : {"id", "sign", "kind", "payload", "rule", "premises", "children"}) {
      EXPECT_TRUE(n.contains(key)) << key;
    }
    EXPECT_TRUE(n["sign"] == "T" || n["sign"] == "F");
    EXPECT_TRUE(n["kind"] == "formula" || n["kind"] == "evidential");
    for (const auto& p : n["premises"]) EXPECT_LT(p.get<std::size_t>(), n["id"].get<std::size_t>());
    if (n["children"].empty()) {
      EXPECT_TRUE(n["closed"].get<bool>());
      ++closed;
    }
  }
  EXPECT_GE(closed, 1u);
  EXPECT_EQ(j["nodes"][0]["rule"], "root");
}

TEST(ProofJson, RoundTrip) {
  const std::pair<const char*, const char*> cases[] = {
      {"J", "x:P -> c*x:(Q->P)"}, {"JT", "x:(P->Q) -> x:P -> Q"}, {"J4", "x:P -> !x:x:P"},
      {"J", "x:(P->Q) -> (y:P -> x*y:Q)"}, {"JD", "~x:_|_"}};
  for (const auto& [ln, g] : cases) {
    auto logic = LogicSpec::parse(ln);
    auto cs = std::string(ln) == "J" ? example_cs() : ConstantSpecification{};
    auto v = prove(F(g), logic, cs);
    ASSERT_TRUE(v.valid()) << g;
    auto back = proof_from_json(json::parse(proof_to_json(*v.proof, cs).dump()));
    EXPECT_TRUE(same_tree(back.root, v.proof->root)) << g;
    EXPECT_TRUE(check_proof(back, F(g), logic, cs)) << g;
  }
}

TEST(ProofJson, RoundTripAfterCutElimination) {
  for (std::uint64_t s = 1; s <= 40; ++s) {
    auto logic = LogicSpec::parse(s % 2 ? "J" : "JT4");
    auto rh = random_hilbert(s, logic);
    auto t = eliminate_cuts(hilbert_to_tableau(rh.proof, rh.proof.lines.size() - 1, logic, rh.cs), logic, rh.cs);
    auto back = proof_from_json(proof_to_json(t.tableau, rh.cs));
    EXPECT_TRUE(same_tree(back.root, t.tableau.root)) << s;
  }
}

TEST(ProofJson, Malformed) {
  EXPECT_THROW(proof_from_json(json::parse("{}")), FormatError);
  EXPECT_THROW(proof_from_json(json::parse(R"({"nodes": []})")), FormatError);
  EXPECT_THROW(proof_from_json(json::parse(
                   R"({"nodes":[{"id":0,"sign":"F","kind":"formula","payload":"P ->","rule":"root","premises":[],"children":[]}]})")),
               FormatError);
  EXPECT_THROW(proof_from_json(json::parse(
                   R"({"nodes":[{"id":0,"sign":"F","kind":"formula","payload":"P","rule":"root","premises":[],"children":[4]}]})")),
               FormatError);
  EXPECT_THROW(proof_from_json(json::parse(
                   R"({"nodes":[{"id":0,"sign":"F","kind":"evidential","payload":"P","rule":"root","premises":[],"children":[]}]})")),
               FormatError);
}

TEST(Dot, HasClosureMarks) {
  auto v = prove(F("x:P -> c*x:(Q->P)"), J, example_cs());
  auto dot = proof_to_dot(*v.proof, example_cs());
  EXPECT_EQ(dot.rfind("digraph", 0), 0u);
  EXPECT_NE(dot.find("⊗"), std::string::npos);
  EXPECT_NE(dot.find("n0 -> n1"), std::string::npos);
}

TEST(Text, OneLinePerNode) {
  auto v = prove(F("x:P -> c*x:(Q->P)"), J, example_cs());
  auto txt = proof_to_text(*v.proof, example_cs());
  EXPECT_EQ(static_cast<std::size_t>(std::count(txt.begin(), txt.end(), '\n')), count_nodes(v.proof->root));
  EXPECT_EQ(txt.rfind("0. F ", 0), 0u);
}

TEST(ModelJson, RoundTrip) {
  auto v = prove(F("x:(P->Q) -> y:P -> x*y:Q -> P"), J, {});
  ASSERT_TRUE(v.invalid());
  ASSERT_TRUE(v.model);
  auto j = model_to_json(*v.model.model);
  for (const char* key : {"valuation", "evidence", "universe", "terms"}) EXPECT_TRUE(j.contains(key));
  auto back = model_from_json(json::parse(j.dump()));
  EXPECT_EQ(back.valuation, v.model.model->valuation);
  EXPECT_EQ(back.evidence, v.model.model->evidence);
  EXPECT_EQ(back.universe, v.model.model->universe);
  EXPECT_EQ(back.terms, v.model.model->terms);
  EXPECT_THROW(model_from_json(json::parse(R"({"valuation": 3})")), FormatError);
}

TEST(TraceJson, Fields) {
  auto hp = parse_hilbert("1. P -> (Q -> P) [Taut]\n2. (P -> (Q -> P)) -> (P -> P) [Taut]\n3. P -> P [MP 1 2]\n");
  auto out = eliminate_cuts(hilbert_to_tableau(hp, 2, J, {}), J, {});
  auto j = trace_to_json(out.trace);
  ASSERT_EQ(j.size(), out.trace.size());
  for (const auto& e : j) {
    for (const char* key : {"case", "pivot", "rank", "weight", "replacements"}) EXPECT_TRUE(e.contains(key));
  }
  auto line = render_trace_line(out.trace.front());
  EXPECT_EQ(line.rfind("case=", 0), 0u);
  EXPECT_NE(line.find(" → ["), std::string::npos);
}
