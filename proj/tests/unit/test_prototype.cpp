#include "doctest.h"

#include <random>

#include "finitax/prototype.hpp"
#include "finitax/text.hpp"
#include "support.hpp"

using namespace finitax;
using namespace finitax::testing;

TEST_CASE("setup succeeds for the characteristic-2 group axioms") {
  AlgebraPtr a2 = loadAlgebra("a2.alg");
  std::vector<Formula> theory =
      parse_theory(readDataFile("group_c2.theory"), *a2->signature());
  REQUIRE(theory.size() == 4);
  PrototypeSetup ps = setup_prototype({a2}, theory, xyTuple());
  CHECK(ps.obligationStatus() == ObligationStatus::Unverified);
  // the setup's own algebras satisfy the attached obligations
  CHECK(sat_class({a2}, ps.obligations().allFormulas()));
}

TEST_CASE("setup reports a countermodel for a failing theory") {
  AlgebraPtr a2 = loadAlgebra("a2.alg");
  const Signature& sig = *a2->signature();
  std::vector<Formula> bad = {
      parse_formula("forall x forall y : x =_Nat y", sig)};
  try {
    setup_prototype({a2}, bad, xyTuple());
    FAIL("expected TheoryFails");
  } catch (const TheoryFails& e) {
    CHECK(e.algebraName == "a2");
    REQUIRE(e.witness.bindings().size() == 2);
    Assignment w = e.witness;
    CHECK(eval(*a2, w, e.phi.lhs()) != eval(*a2, w, e.phi.rhs()));
  }
}

TEST_CASE("empty theory still yields obligations") {
  AlgebraPtr a2 = loadAlgebra("a2.alg");
  PrototypeSetup ps = setup_prototype({a2}, {}, xyTuple());
  CHECK(!export_obligations(ps).empty());
}

TEST_CASE("decide matches the satisfaction oracle") {
  AlgebraPtr a2 = loadAlgebra("a2.alg");
  const Signature& sig = *a2->signature();
  std::vector<Formula> theory =
      parse_theory(readDataFile("group_c2.theory"), sig);
  PrototypeSetup ps = setup_prototype({a2}, theory, xyTuple());

  Formula good = parse_formula("forall x forall y : x = (x + y) + y", sig,
                               xyTuple());
  Verdict v1 = decide(ps, good);
  CHECK(v1.entailed);

  Formula bad = parse_formula("forall x forall y : x + y = 0", sig, xyTuple());
  Verdict v2 = decide(ps, bad);
  CHECK_FALSE(v2.entailed);
  CHECK(v2.algebraName == "a2");
  CHECK(eval(*a2, v2.witness, bad.lhs()) != eval(*a2, v2.witness, bad.rhs()));

  Formula trivial = parse_formula("forall x forall y : x =_Nat x", sig,
                                  xyTuple());
  CHECK(decide(ps, trivial).entailed);

  // random sample against the oracle
  auto terms = termsByDepth(oracleSymbols(sig, xyTuple()), "Nat", 2);
  std::mt19937 rng(23);
  std::uniform_int_distribution<std::size_t> pick(0, terms.size() - 1);
  for (int i = 0; i < 100; ++i) {
    std::vector<Formula::PrefixEntry> prefix = {
        {rng() % 2 ? Quantifier::Exists : Quantifier::ForAll, "x", "Nat"},
        {rng() % 2 ? Quantifier::Exists : Quantifier::ForAll, "y", "Nat"}};
    Formula phi(prefix, terms[pick(rng)], terms[pick(rng)]);
    CHECK(decide(ps, phi).entailed == bruteSat(*a2, phi));
  }
}

TEST_CASE("decide against the theorem grammar route") {
  AlgebraPtr a2 = loadAlgebra("a2.alg");
  const Signature& sig = *a2->signature();
  PrototypeSetup ps = setup_prototype({a2}, {}, xyTuple());
  TheoremGrammarPtr tg = build_theorem_grammar({a2}, xyTuple());
  auto terms = termsByDepth(oracleSymbols(sig, xyTuple()), "Nat", 2);
  int step = 0;
  for (const auto& l : terms) {
    for (const auto& r : terms) {
      if (++step % 23 != 0) continue;
      for (unsigned mask = 0; mask < 4; ++mask) {
        std::vector<Formula::PrefixEntry> prefix = {
            {mask & 1 ? Quantifier::Exists : Quantifier::ForAll, "x", "Nat"},
            {mask & 2 ? Quantifier::Exists : Quantifier::ForAll, "y", "Nat"}};
        Formula phi(prefix, l, r);
        CHECK(decide(ps, phi).entailed == tg->contains(phi));
      }
    }
  }
}

TEST_CASE("decide rejects out-of-fragment formulas") {
  AlgebraPtr a2 = loadAlgebra("a2.alg");
  PrototypeSetup ps = setup_prototype({a2}, {}, xyTuple());
  Formula zFormula(
      {{Quantifier::ForAll, "x", "Nat"}, {Quantifier::ForAll, "z", "Nat"}},
      Term::var("x", "Nat"), Term::var("z", "Nat"));
  CHECK_THROWS_AS(decide(ps, zFormula), OutOfFragment);
}

TEST_CASE("exported obligations subsume the reference axiom set") {
  AlgebraPtr a2 = loadAlgebra("a2.alg");
  const Signature& sig = *a2->signature();
  PrototypeSetup ps = setup_prototype({a2}, {}, xyTuple());
  std::vector<Formula> obligations = export_obligations(ps);

  std::vector<std::string> expected = {
      "forall x : 0 = x + x",
      "forall x : x = x + 0",
      "forall x forall y : x + y = y + x",
      "forall x forall y : x = (x + y) + y",
      "forall x exists y : 0 = x + y",
  };
  for (const auto& text : expected) {
    Formula want = parse_formula(text, sig, xyTuple());
    bool covered = false;
    for (const auto& f : obligations)
      if (f == want || subsumes(f, want)) covered = true;
    CHECK_MESSAGE(covered, text);
  }
}

TEST_CASE("one-element algebra exports collapse axioms only") {
  AlgebraPtr one = loadAlgebra("one.alg");
  PrototypeSetup ps =
      setup_prototype({one}, {}, makeTuple({{"x", "S"}}));
  auto obligations = export_obligations(ps);
  CHECK(!obligations.empty());
  for (const auto& f : obligations) {
    // every equation identifies something with the variable class
    CHECK(sat(*one, f));
    CHECK((f.lhs().isVar() || f.rhs().isVar()));
  }
}

TEST_CASE("bool-sorted obligations for the nmod2 algebra") {
  AlgebraPtr nmod2 = loadAlgebra("nmod2.alg");
  const Signature& sig = *nmod2->signature();
  PrototypeSetup ps = setup_prototype({nmod2}, {}, xyTuple());
  auto obligations = export_obligations(ps);

  // the paper-style exchange law:  x + y < x  iff  0 < x and 0 < y
  Formula want = parse_formula(
      "forall x forall y : ((x + y) < x) = ((0 < x) and (0 < y))", sig,
      xyTuple());
  bool covered = false;
  for (const auto& f : obligations)
    if (f == want || subsumes(f, want)) covered = true;
  CHECK(covered);

  bool sawBool = false;
  for (const auto& f : obligations) {
    CHECK(sat(*nmod2, f));
    if (f.eqSort() == "Bool") sawBool = true;
  }
  CHECK(sawBool);
}

TEST_CASE("obligation status flows into verdicts") {
  AlgebraPtr a2 = loadAlgebra("a2.alg");
  const Signature& sig = *a2->signature();
  PrototypeSetup ps = setup_prototype({a2}, {}, xyTuple());
  ps.setObligationStatus(ObligationStatus::Assumed);
  Verdict v = decide(ps, parse_formula("forall x : x + x = 0", sig, xyTuple()));
  CHECK(v.entailed);
  CHECK(v.obligationStatus == ObligationStatus::Assumed);
}
