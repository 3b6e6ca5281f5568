#include "doctest.h"

#include <set>

#include "finitax/theorem.hpp"
#include "support.hpp"

using namespace finitax;
using namespace finitax::testing;

namespace {

Formula xyFormula(unsigned mask, const Term& l, const Term& r) {
  std::vector<Formula::PrefixEntry> prefix = {
      {mask & 1 ? Quantifier::Exists : Quantifier::ForAll, "x", "Nat"},
      {mask & 2 ? Quantifier::Exists : Quantifier::ForAll, "y", "Nat"}};
  return Formula(prefix, l, r);
}

AlgebraPtr trivialZ1(const AlgebraPtr& a2) {
  return std::make_shared<FiniteAlgebra>(
      a2->signature(),
      std::map<std::string, std::vector<std::string>>{{"Nat", {"0"}}},
      std::vector<TableFact>{{"0", {}, "0"}, {"+", {"0", "0"}, "0"}}, "z1");
}

}  // namespace

TEST_CASE("behavior classes of a2 over (x,y)") {
  AlgebraPtr a2 = loadAlgebra("a2.alg");
  BehaviorGrammar bg({a2}, xyTuple());
  auto nat = bg.classesOfSort("Nat");
  REQUIRE(nat.size() == 4);
  std::set<std::string> names;
  for (int c : nat) names.insert(bg.base().nt(c).name);
  CHECK(names == std::set<std::string>{"N0000", "N0011", "N0101", "N0110"});
  CHECK(is_deterministic(bg.base()));
}

TEST_CASE("behavior classes over one variable") {
  AlgebraPtr a2 = loadAlgebra("a2.alg");
  BehaviorGrammar bg({a2}, makeTuple({{"x", "Nat"}}));
  REQUIRE(bg.classCount() == 2);
  Term x = Term::var("x", "Nat");
  Term zero = Term::app("0", "Nat", {});
  Term xx = Term::app("+", "Nat", {x, x});
  CHECK(bg.classOfTerm(zero) == bg.classOfTerm(xx));
  CHECK(bg.classOfTerm(x) != bg.classOfTerm(zero));
}

TEST_CASE("one-element algebra has one class per sort") {
  AlgebraPtr one = loadAlgebra("one.alg");
  BehaviorGrammar bg({one}, makeTuple({{"x", "S"}}));
  CHECK(bg.classCount() == 1);
  Term x = Term::var("x", "S");
  Term c = Term::app("c", "S", {});
  Term gx = Term::app("g", "S", {x});
  int cls = bg.classOfTerm(x);
  CHECK(bg.classOfTerm(c) == cls);
  CHECK(bg.classOfTerm(gx) == cls);
}

TEST_CASE("behavior classes partition the fragment") {
  AlgebraPtr a2 = loadAlgebra("a2.alg");
  BehaviorGrammar bg({a2}, xyTuple());
  for (const auto& t :
       termsByDepth(oracleSymbols(*a2->signature(), xyTuple()), "Nat", 3)) {
    std::vector<int> classes = member_classes(bg.base(), t);
    CHECK(classes.size() == 1);
  }
}

TEST_CASE("admitted pairs per prefix") {
  AlgebraPtr a2 = loadAlgebra("a2.alg");
  BehaviorGrammar bg({a2}, xyTuple());
  auto id = [&](const std::string& n) { return bg.base().find(n); };

  // forall forall admits the diagonal only
  auto aa = admitted_pairs(bg, 0);
  CHECK(aa.size() == 4);
  for (const auto& [c1, c2] : aa) CHECK(c1 == c2);

  // forall x exists y admits (x+y, 0)
  CHECK(bg.admitted(id("N0110"), id("N0000"), 2));
  CHECK_FALSE(bg.admitted(id("N0101"), id("N0110"), 2));  // y = x+y

  // exists exists: one agreeing assignment suffices; every pair agrees at
  // x=0,y=0 where each term evaluates to 0
  auto ee = admitted_pairs(bg, 3);
  CHECK(ee.size() == 16);
}

TEST_CASE("theorem grammar membership on the paper formulas") {
  AlgebraPtr a2 = loadAlgebra("a2.alg");
  const Signature& sig = *a2->signature();
  TheoremGrammarPtr tg = build_theorem_grammar({a2}, xyTuple());

  Term x = Term::var("x", "Nat");
  Term y = Term::var("y", "Nat");
  Term zero = Term::app(sig, "0", {});
  Term xy = Term::app(sig, "+", {x, y});
  Term yx = Term::app(sig, "+", {y, x});

  CHECK(tg->contains(xyFormula(0, xy, yx)));       // commutativity
  CHECK(tg->contains(xyFormula(2, xy, zero)));     // forall x exists y
  CHECK_FALSE(tg->contains(xyFormula(2, y, xy)));  // forbidden
  CHECK(tg->contains(xyFormula(1, y, xy)));        // exists x forall y
  Term xyy = Term::app(sig, "+", {xy, y});
  CHECK(tg->contains(xyFormula(0, x, xyy)));
  CHECK(tg->contains(xyFormula(0, x, x)));

  // A formula mentioning a symbol outside the signature is out of fragment.
  auto wider = std::make_shared<Signature>(
      std::vector<std::string>{"Nat"},
      std::vector<SymbolDecl>{
          {"0", {}, "Nat"}, {"1", {}, "Nat"}, {"+", {"Nat", "Nat"}, "Nat"}});
  Term one = Term::app(*wider, "1", {});
  CHECK_THROWS_AS(tg->contains(xyFormula(2, xy, one)), OutOfFragment);

  // Different tuple: out of fragment.
  Formula zFormula(
      {{Quantifier::ForAll, "x", "Nat"}, {Quantifier::ForAll, "z", "Nat"}},
      x, x);
  CHECK_THROWS_AS(tg->contains(zFormula), OutOfFragment);
}

TEST_CASE("theorem grammar of a class intersects the member theories") {
  AlgebraPtr a2 = loadAlgebra("a2.alg");
  AlgebraPtr z1 = trivialZ1(a2);
  const Signature& sig = *a2->signature();
  TheoremGrammarPtr both = build_theorem_grammar({a2, z1}, xyTuple());

  Term x = Term::var("x", "Nat");
  Term y = Term::var("y", "Nat");
  Term zero = Term::app(sig, "0", {});

  CHECK(both->contains(xyFormula(0, Term::app(sig, "+", {x, y}),
                                 Term::app(sig, "+", {y, x}))));
  // x = 0 holds only in the one-element algebra
  Formula collapse = xyFormula(0, x, zero);
  CHECK_FALSE(both->contains(collapse));
  CHECK_FALSE(sat(*a2, collapse));
  CHECK(sat(*z1, collapse));

  // agreement with the two satisfaction oracles on a sample
  auto terms = termsByDepth(oracleSymbols(sig, xyTuple()), "Nat", 2);
  int step = 0;
  for (const auto& l : terms) {
    for (const auto& r : terms) {
      if (++step % 17 != 0) continue;
      for (unsigned mask = 0; mask < 4; ++mask) {
        Formula phi = xyFormula(mask, l, r);
        CHECK(both->contains(phi) == (sat(*a2, phi) && sat(*z1, phi)));
      }
    }
  }
}

TEST_CASE("externing picks the minimal normal forms") {
  AlgebraPtr a2 = loadAlgebra("a2.alg");
  BehaviorGrammar bg({a2}, xyTuple());
  ExternResult er = externalize(bg);

  std::set<std::string> nfs;
  for (std::size_t c = 0; c < er.classCount(); ++c)
    nfs.insert(termKey(er.normalForm(static_cast<int>(c))));
  CHECK(nfs == std::set<std::string>{"0", "x", "y", "+(x,y)"});

  // 19 chain-free alternatives, of which 4 produce trivial nf = nf rows
  CHECK(er.equations().size() == 15);
  bool foundXX = false;
  for (const auto& eq : er.equations()) {
    if (termKey(eq.nf) == "0" && termKey(eq.pattern) == "+(x,x)")
      foundXX = true;
    CHECK(termKey(eq.nf) != termKey(eq.pattern));
  }
  CHECK(foundXX);
}

TEST_CASE("normalize rewrites into the class normal form") {
  AlgebraPtr a2 = loadAlgebra("a2.alg");
  const Signature& sig = *a2->signature();
  BehaviorGrammar bg({a2}, xyTuple());
  ExternResult er = externalize(bg);

  Term x = Term::var("x", "Nat");
  Term y = Term::var("y", "Nat");
  Term zero = Term::app(sig, "0", {});
  Term xy = Term::app(sig, "+", {x, y});
  Term xyy = Term::app(sig, "+", {xy, y});

  CHECK(termKey(er.normalize(xyy)) == "x");
  CHECK(termKey(er.normalize(x)) == "x");
  CHECK(termKey(er.normalize(Term::app(sig, "+", {zero, xy}))) == "+(x,y)");

  // idempotent, and the result stays in the source class
  for (const auto& t :
       termsByDepth(oracleSymbols(sig, xyTuple()), "Nat", 3)) {
    if (hgOf(t) > 3) continue;
    Term n = er.normalize(t);
    CHECK(er.normalize(n) == n);
    CHECK(bg.classOfTerm(t) == bg.classOfTerm(n));
  }
}

TEST_CASE("axiom set contents") {
  AlgebraPtr a2 = loadAlgebra("a2.alg");
  const Signature& sig = *a2->signature();
  AxiomSet ax = build_axioms({a2}, xyTuple());

  auto hasFormula = [](const std::vector<Formula>& fs, const Formula& want) {
    for (const auto& f : fs)
      if (f == want) return true;
    return false;
  };

  Term x = Term::var("x", "Nat");
  Term y = Term::var("y", "Nat");
  Term zero = Term::app(sig, "0", {});
  Term xy = Term::app(sig, "+", {x, y});

  // forall x exists y : 0 = x + y
  const auto& feBlock = ax.existentialBlocks().at(2);
  CHECK(hasFormula(feBlock, xyFormula(2, zero, xy)));
  // the forbidden cross-class pair is absent
  CHECK_FALSE(hasFormula(feBlock, xyFormula(2, y, xy)));
  CHECK_FALSE(hasFormula(feBlock, xyFormula(2, xy, y)));

  // exists exists block: all six unordered pairs of the four normal forms
  const auto& eeBlock = ax.existentialBlocks().at(3);
  CHECK(eeBlock.size() == 6);

  // soundness before and after reduction
  CHECK(sat_class({a2}, ax.allFormulas()));
  CHECK(sat_class({a2}, ax.reduced().allFormulas()));
}

TEST_CASE("reduce drops instances, flips and reflexive equations") {
  AlgebraPtr a2 = loadAlgebra("a2.alg");
  const Signature& sig = *a2->signature();
  AxiomSet red = build_axioms({a2}, xyTuple()).reduced();

  Term x = Term::var("x", "Nat");
  Term y = Term::var("y", "Nat");
  Term zero = Term::app(sig, "0", {});

  // instances are gone: 0 = y + y was emitted but is an instance of 0 = x+x
  Formula yy = xyFormula(0, zero, Term::app(sig, "+", {y, y}));
  bool present = false;
  bool subsumed = false;
  for (const auto& f : red.universal()) {
    if (f == yy) present = true;
    if (subsumes(f, yy)) subsumed = true;
  }
  CHECK_FALSE(present);
  CHECK(subsumed);

  // reflexive formulas never survive
  for (const auto& f : red.allFormulas()) CHECK_FALSE(f.lhs() == f.rhs());

  // symmetric flip: y + x = x + y is subsumed by commutativity
  Formula flip = xyFormula(0, Term::app(sig, "+", {y, x}),
                           Term::app(sig, "+", {x, y}));
  bool flipSubsumed = false;
  for (const auto& f : red.universal())
    if (subsumes(f, flip)) flipSubsumed = true;
  CHECK(flipSubsumed);
}

TEST_CASE("derive mirrors membership") {
  AlgebraPtr a2 = loadAlgebra("a2.alg");
  const Signature& sig = *a2->signature();
  AxiomSet ax = build_axioms({a2}, xyTuple());

  Term x = Term::var("x", "Nat");
  Term y = Term::var("y", "Nat");
  Term zero = Term::app(sig, "0", {});
  Term xy = Term::app(sig, "+", {x, y});

  Derivation d1 = derive(ax, xyFormula(2, xy, zero));
  CHECK(d1.success);
  CHECK_FALSE(d1.byEqualNF);
  CHECK(termKey(d1.lhsNF) == "+(x,y)");
  CHECK(termKey(d1.rhsNF) == "0");

  Derivation d2 = derive(ax, xyFormula(2, y, xy));
  CHECK_FALSE(d2.success);

  Derivation d3 = derive(ax, xyFormula(0, zero, zero));
  CHECK(d3.success);
  CHECK(d3.lhsSteps.empty());
  CHECK(d3.rhsSteps.empty());

  // commutativity: one rewrite on the right side
  Derivation d4 = derive(ax, xyFormula(0, xy, Term::app(sig, "+", {y, x})));
  CHECK(d4.success);
  CHECK(d4.byEqualNF);
  CHECK(d4.rhsSteps.size() == 1);
}

TEST_CASE("contains, derive and sat agree up to height 2") {
  AlgebraPtr a2 = loadAlgebra("a2.alg");
  const Signature& sig = *a2->signature();
  TheoremGrammarPtr tg = build_theorem_grammar({a2}, xyTuple());
  AxiomSet ax = build_axioms({a2}, xyTuple());

  std::vector<Term> terms;
  for (const auto& t : termsByDepth(oracleSymbols(sig, xyTuple()), "Nat", 2))
    if (hgOf(t) <= 2) terms.push_back(t);

  for (const auto& l : terms) {
    for (const auto& r : terms) {
      for (unsigned mask = 0; mask < 4; ++mask) {
        Formula phi = xyFormula(mask, l, r);
        bool oracle = bruteSat(*a2, phi);
        CHECK(tg->contains(phi) == oracle);
        CHECK(derive(ax, phi).success == oracle);
        CHECK(sat(*a2, phi) == oracle);
      }
    }
  }
}

TEST_CASE("reduction does not change what derive proves") {
  AlgebraPtr a2 = loadAlgebra("a2.alg");
  const Signature& sig = *a2->signature();
  AxiomSet ax = build_axioms({a2}, xyTuple());
  AxiomSet red = ax.reduced();
  auto terms = termsByDepth(oracleSymbols(sig, xyTuple()), "Nat", 2);
  int step = 0;
  for (const auto& l : terms) {
    for (const auto& r : terms) {
      if (++step % 13 != 0) continue;
      for (unsigned mask = 0; mask < 4; ++mask) {
        Formula phi = xyFormula(mask, l, r);
        CHECK(derive(ax, phi).success == derive(red, phi).success);
      }
    }
  }
}

TEST_CASE("variety sequence over growing tuples") {
  AlgebraPtr a2 = loadAlgebra("a2.alg");
  const Signature& sig = *a2->signature();
  auto steps = variety_sequence({a2}, 3, {"Nat"});
  REQUIRE(steps.size() == 3);

  auto x1 = Term::var("x1", "Nat");
  auto x2 = Term::var("x2", "Nat");
  auto x3 = Term::var("x3", "Nat");
  Formula comm({{Quantifier::ForAll, "x1", "Nat"},
                {Quantifier::ForAll, "x2", "Nat"}},
               Term::app(sig, "+", {x1, x2}), Term::app(sig, "+", {x2, x1}));

  auto anySubsumes = [](const std::vector<Formula>& fs, const Formula& want) {
    for (const auto& f : fs)
      if (subsumes(f, want)) return true;
    return false;
  };

  CHECK_FALSE(anySubsumes(steps[0].axioms, comm));  // needs two variables
  CHECK(anySubsumes(steps[1].axioms, comm));

  Formula assoc({{Quantifier::ForAll, "x1", "Nat"},
                 {Quantifier::ForAll, "x2", "Nat"},
                 {Quantifier::ForAll, "x3", "Nat"}},
                Term::app(sig, "+", {Term::app(sig, "+", {x1, x2}), x3}),
                Term::app(sig, "+", {x1, Term::app(sig, "+", {x2, x3})}));
  CHECK(anySubsumes(steps[2].axioms, assoc));

  for (const auto& s : steps) CHECK(sat_class({a2}, s.axioms));

  // step 2 must report subsuming some step-1 axiom
  CHECK_FALSE(steps[1].subsumedPrevious.empty());
}

TEST_CASE("variety collapse equations on the one-element algebra") {
  AlgebraPtr one = loadAlgebra("one.alg");
  auto steps = variety_sequence({one}, 1, {"S"});
  REQUIRE(steps.size() == 1);
  // everything equals x1: collapse equations like x1 = c, x1 = g(x1)
  CHECK(!steps[0].axioms.empty());
  for (const auto& f : steps[0].axioms) {
    CHECK(f.lhs().isVar());
    CHECK(sat(*one, f));
  }
}
