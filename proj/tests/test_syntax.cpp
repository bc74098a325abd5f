#include <gtest/gtest.h>

#include <random>

#include "jtab/syntax.hpp"

using namespace jtab;

namespace {

Formula P() { return Formula::prop("P"); }
Formula Q() { return Formula::prop("Q"); }
Term x() { return Term::var("x"); }
Term y() { return Term::var("y"); }
Term c() { return Term::constant("c"); }

Term rand_term(std::mt19937_64& g, int depth) {
  int k = depth <= 0 ? static_cast<int>(g() % 3) : static_cast<int>(g() % 8);
  switch (k) {
    case 0: return x();
    case 1: return y();
    case 2: return c();
    case 3: return Term::app(rand_term(g, depth - 1), rand_term(g, depth - 1));
    case 4: return Term::sum(rand_term(g, depth - 1), rand_term(g, depth - 1));
    case 5: return Term::bang(rand_term(g, depth - 1));
    case 6: return Term::query(rand_term(g, depth - 1));
    default: return Term::wquery(rand_term(g, depth - 1));
  }
}

Formula rand_formula(std::mt19937_64& g, int depth) {
  int k = depth <= 0 ? static_cast<int>(g() % 3) : static_cast<int>(g() % 6);
  switch (k) {
    case 0: return P();
    case 1: return Q();
    case 2: return Formula::bottom();
    case 3: return Formula::neg(rand_formula(g, depth - 1));
    case 4: return Formula::implies(rand_formula(g, depth - 1), rand_formula(g, depth - 1));
    default: return Formula::just(rand_term(g, depth - 1), rand_formula(g, depth - 1));
  }
}

}  // namespace

TEST(Parse, PaperGoal) {
  auto f = parse_formula("x:P -> c*x:(Q->P)");
  auto want = Formula::implies(Formula::just(x(), P()),
                               Formula::just(Term::app(c(), x()), Formula::implies(Q(), P())));
  EXPECT_EQ(f, want);
}

TEST(Parse, Atom) { EXPECT_EQ(parse_formula("P"), P()); }

TEST(Parse, NegativeIntrospection) {
  auto t = Term::var("t");
  auto tp = Formula::just(t, P());
  auto want = Formula::implies(Formula::neg(tp), Formula::just(Term::query(t), Formula::neg(tp)));
  EXPECT_EQ(parse_formula("~t:P -> ?t:~t:P"), want);
}

TEST(Parse, ImplicationAssociatesRight) {
  EXPECT_EQ(parse_formula("P -> Q -> P"), Formula::implies(P(), Formula::implies(Q(), P())));
}

TEST(Parse, ConstantsAndVariablesByInitial) {
  EXPECT_EQ(parse_term("c").kind(), TermKind::Const);
  EXPECT_EQ(parse_term("r1").kind(), TermKind::Const);
  EXPECT_EQ(parse_term("s").kind(), TermKind::Var);
  EXPECT_EQ(parse_term("z2").kind(), TermKind::Var);
}

TEST(Parse, WeakQuery) {
  EXPECT_EQ(parse_term("??x"), Term::wquery(x()));
  EXPECT_EQ(parse_term("?(?x)"), Term::query(Term::query(x())));
}

TEST(Parse, SignedForms) {
  EXPECT_EQ(parse_signed("T P"), SignedFormula::t(P()));
  EXPECT_EQ(parse_signed("F [x+y,P]"), SignedFormula::fe(Term::sum(x(), y()), P()));
}

TEST(Parse, ErrorsCarryPosition) {
  try {
    parse_formula("P -> ");
    FAIL() << "expected SyntaxError";
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.position(), 5u);
  }
  EXPECT_THROW(parse_formula("P & Q"), SyntaxError);
  EXPECT_THROW(parse_formula("(P -> Q"), SyntaxError);
  EXPECT_THROW(parse_formula(""), SyntaxError);
}

TEST(Render, Examples) {
  EXPECT_EQ(render_formula(Formula::just(x(), P())), "x:P");
  EXPECT_EQ(render_formula(Formula::implies(Formula::bottom(), P())), "_|_ -> P");
  auto t = Term::var("t");
  EXPECT_EQ(render_formula(Formula::just(Term::bang(t), Formula::just(t, P()))), "!t:t:P");
}

TEST(Render, RoundTripRandom) {
  std::mt19937_64 g(7);
  for (int i = 0; i < 2000; ++i) {
    auto f = rand_formula(g, 4);
    auto text = render_formula(f);
    EXPECT_EQ(parse_formula(text), f) << text;
  }
}

TEST(Render, TermRoundTripRandom) {
  std::mt19937_64 g(11);
  for (int i = 0; i < 2000; ++i) {
    auto t = rand_term(g, 4);
    auto text = render_term(t);
    EXPECT_EQ(parse_term(text), t) << text;
  }
}

TEST(Subformulas, Examples) {
  auto t = Term::var("t");
  EXPECT_EQ(subformulas(Formula::just(t, P())), (std::set<Formula>{Formula::just(t, P()), P()}));
  EXPECT_EQ(subformulas(Formula::bottom()), (std::set<Formula>{Formula::bottom()}));
  auto pq = Formula::implies(P(), Q());
  EXPECT_EQ(subformulas(pq), (std::set<Formula>{pq, P(), Q()}));
}

TEST(Subformulas, ClosedUnderSub) {
  std::mt19937_64 g(3);
  for (int i = 0; i < 300; ++i) {
    auto f = rand_formula(g, 4);
    auto sub = subformulas(f);
    EXPECT_TRUE(sub.contains(f));
    for (const auto& s : sub) {
      for (const auto& ss : subformulas(s)) EXPECT_TRUE(sub.contains(ss));
    }
  }
}

TEST(Subterms, Examples) {
  auto cx = Term::app(c(), x());
  EXPECT_EQ(subterms(cx), (std::set<Term>{cx, c(), x()}));
  EXPECT_EQ(subterms(x()), (std::set<Term>{x()}));
  auto s = Term::sum(x(), y());
  EXPECT_EQ(subterms(Term::bang(s)), (std::set<Term>{Term::bang(s), s, x(), y()}));
}

TEST(Equality, HashConsedStructure) {
  EXPECT_EQ(parse_formula("x:(P->Q)"), parse_formula("x : ( P -> Q )"));
  EXPECT_NE(parse_formula("x:P"), parse_formula("y:P"));
  EXPECT_NE(SignedFormula::t(P()), SignedFormula::f(P()));
}
