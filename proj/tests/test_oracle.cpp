#include <gtest/gtest.h>

#include "jtab/oracle.hpp"
#include "jtab/prover.hpp"

using namespace jtab;

namespace {

Formula F(const char* s) { return parse_formula(s); }

ModalFormula box(const ModalFormula& a) { return ModalFormula::box(a); }
ModalFormula imp(const ModalFormula& a, const ModalFormula& b) { return ModalFormula::implies(a, b); }
const ModalFormula P = ModalFormula::prop("P");
const ModalFormula Q = ModalFormula::prop("Q");

// Brute-force Kripke semantics over frames of up to three worlds.
struct Frame {
  int n;
  unsigned rel;  // bit i*n+j: world i sees world j
  bool sees(int i, int j) const { return (rel >> (i * n + j)) & 1; }
};

bool holds(const ModalFormula& f, const Frame& fr, unsigned val, int w) {
  switch (f.kind()) {
    case ModalKind::Prop: return (val >> (w * 2 + (f.name() == "P" ? 0 : 1))) & 1;
    case ModalKind::Bottom: return false;
    case ModalKind::Neg: return !holds(f.lhs(), fr, val, w);
    case ModalKind::Implies: return !holds(f.lhs(), fr, val, w) || holds(f.rhs(), fr, val, w);
    case ModalKind::Box:
      for (int v = 0; v < fr.n; ++v) {
        if (fr.sees(w, v) && !holds(f.lhs(), fr, val, v)) return false;
      }
      return true;
  }
  return false;
}

bool frame_in_class(const Frame& fr, ModalLogic ml) {
  bool refl = true, serial = true, trans = true;
  for (int i = 0; i < fr.n; ++i) {
    refl &= fr.sees(i, i);
    bool any = false;
    for (int j = 0; j < fr.n; ++j) {
      any |= fr.sees(i, j);
      for (int k = 0; k < fr.n; ++k) {
        if (fr.sees(i, j) && fr.sees(j, k) && !fr.sees(i, k)) trans = false;
      }
    }
    serial &= any;
  }
  switch (ml) {
    case ModalLogic::K: return true;
    case ModalLogic::T: return refl;
    case ModalLogic::D: return serial;
    case ModalLogic::K4: return trans;
    case ModalLogic::S4: return refl && trans;
  }
  return false;
}

bool small_countermodel(const ModalFormula& f, ModalLogic ml) {
  for (int n = 1; n <= 3; ++n) {
    for (unsigned rel = 0; rel < (1u << (n * n)); ++rel) {
      Frame fr{n, rel};
      if (!frame_in_class(fr, ml)) continue;
      for (unsigned val = 0; val < (1u << (2 * n)); ++val) {
        if (!holds(f, fr, val, 0)) return true;
      }
    }
  }
  return false;
}

}  // namespace

TEST(Projection, Examples) {
  EXPECT_EQ(forgetful_projection(F("x:P -> c*x:(Q->P)")), imp(box(P), box(imp(Q, P))));
  EXPECT_EQ(forgetful_projection(F("P")), P);
  EXPECT_EQ(forgetful_projection(F("!t:t:P")), box(box(P)));
}

TEST(Counterpart, Mapping) {
  EXPECT_EQ(modal_counterpart(LogicSpec::parse("J")), ModalLogic::K);
  EXPECT_EQ(modal_counterpart(LogicSpec::parse("JT")), ModalLogic::T);
  EXPECT_EQ(modal_counterpart(LogicSpec::parse("JD")), ModalLogic::D);
  EXPECT_EQ(modal_counterpart(LogicSpec::parse("J4")), ModalLogic::K4);
  EXPECT_EQ(modal_counterpart(LogicSpec::parse("LP")), ModalLogic::S4);
  EXPECT_THROW(modal_counterpart(LogicSpec::parse("JT45")), UnsupportedLogic);
  EXPECT_THROW(modal_counterpart(LogicSpec::parse("JB")), UnsupportedLogic);
}

TEST(ModalProve, Examples) {
  EXPECT_TRUE(modal_prove(imp(box(P), box(imp(Q, P))), ModalLogic::K));
  EXPECT_FALSE(modal_prove(imp(box(P), P), ModalLogic::K));
  EXPECT_TRUE(modal_prove(imp(box(P), P), ModalLogic::T));
  EXPECT_FALSE(modal_prove(imp(box(P), box(box(P))), ModalLogic::T));
  EXPECT_TRUE(modal_prove(imp(box(P), box(box(P))), ModalLogic::S4));
  EXPECT_TRUE(modal_prove(imp(box(P), box(box(P))), ModalLogic::K4));
  EXPECT_TRUE(modal_prove(ModalFormula::neg(box(ModalFormula::bottom())), ModalLogic::D));
  EXPECT_FALSE(modal_prove(ModalFormula::neg(box(ModalFormula::bottom())), ModalLogic::K));
}

TEST(ModalProve, AgreesWithSmallFrames) {
  // A small countermodel refutes validity; on these depth-bounded formulas
  // three worlds are also enough to find one whenever the tableau fails.
  const ModalLogic all[] = {ModalLogic::K, ModalLogic::T, ModalLogic::D, ModalLogic::K4, ModalLogic::S4};
  int checked = 0;
  for (std::uint64_t seed = 1; seed <= 150; ++seed) {
    auto f = forgetful_projection(random_goal(seed, 8, LogicSpec::parse("J")));
    for (auto ml : all) {
      bool valid = modal_prove(f, ml);
      bool cm = small_countermodel(f, ml);
      if (cm) {
        EXPECT_FALSE(valid) << render_modal(f) << " in " << to_string(ml);
      }
      if (!valid) {
        EXPECT_TRUE(cm) << render_modal(f) << " in " << to_string(ml);
      }
      ++checked;
    }
  }
  EXPECT_EQ(checked, 750);
}

TEST(Generators, Deterministic) {
  auto J4 = LogicSpec::parse("J4");
  for (std::uint64_t s = 1; s < 50; ++s) {
    EXPECT_EQ(random_goal(s, 10, J4), random_goal(s, 10, J4));
    EXPECT_EQ(random_cs(s, 3, J4).entries(), random_cs(s, 3, J4).entries());
    auto a = random_hilbert(s, J4), b = random_hilbert(s, J4);
    EXPECT_EQ(render_hilbert(a.proof), render_hilbert(b.proof));
  }
}

TEST(Generators, BoundsAndSignature) {
  for (const char* ln : {"J", "JT", "J4", "JT45", "JB"}) {
    auto logic = LogicSpec::parse(ln);
    std::set<std::string> atoms = {"x", "y", "c"};
    for (std::uint64_t s = 1; s <= 200; ++s) {
      auto g = random_goal(s, 12, logic);
      EXPECT_LE(g.size(), 12u);
      EXPECT_TRUE(within_signature(g, logic)) << render_formula(g);
      for (const auto& t : terms_of(g)) {
        for (const auto& u : subterms(t)) {
          if (u.is_atomic()) {
            EXPECT_TRUE(atoms.contains(u.name()));
          }
        }
      }
      auto cs = random_cs(s, 3, logic);
      EXPECT_LE(cs.size(), 3u);
      EXPECT_TRUE(validate_cs(cs, logic).empty());
    }
    EXPECT_LE(random_goal(1, 3, logic).size(), 3u);
  }
}

TEST(Generators, HilbertProofsAreValid) {
  for (const char* ln : {"J", "JT", "JD", "J4", "JT4", "JB", "J5", "JT45"}) {
    auto logic = LogicSpec::parse(ln);
    for (std::uint64_t s = 1; s <= 100; ++s) {
      auto rh = random_hilbert(s, logic, 8, 4);
      EXPECT_LE(rh.proof.lines.size(), 8u);
      EXPECT_NO_THROW(validate_hilbert(rh.proof, logic, rh.cs)) << ln << " " << s;
      EXPECT_TRUE(validate_cs(rh.cs, logic).empty());
      std::vector<std::size_t> depth;
      for (const auto& l : rh.proof.lines) {
        depth.push_back(l.kind == HilbertLine::Kind::MP ? 1 + std::max(depth[l.i - 1], depth[l.j - 1]) : 0);
      }
      EXPECT_LE(*std::max_element(depth.begin(), depth.end()), 4u);
    }
  }
}

TEST(ProjectionSoundness, SmallCorpus) {
  for (const char* ln : {"J", "JT", "JD", "J4", "JT4"}) {
    auto logic = LogicSpec::parse(ln);
    auto ml = modal_counterpart(logic);
    for (std::uint64_t s = 1; s <= 100; ++s) {
      auto goal = random_goal(s, 10, logic);
      auto cs = random_cs(s, 2, logic);
      auto v = prove(goal, logic, cs);
      if (v.valid()) {
        EXPECT_TRUE(modal_prove(forgetful_projection(goal), ml)) << ln << " " << render_formula(goal);
      }
    }
  }
}
