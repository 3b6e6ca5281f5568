#include "doctest.h"

#include <random>
#include <set>

#include "finitax/grammar.hpp"
#include "support.hpp"

using namespace finitax;
using namespace finitax::testing;

namespace {

// Alternatives of one rule as printable strings, order-insensitive.
std::multiset<std::string> altSet(const TreeGrammar& g, const std::string& nt) {
  std::multiset<std::string> out;
  int id = g.find(nt);
  REQUIRE(id >= 0);
  for (const auto& alt : g.rules(id)) {
    if (alt.isChain) {
      out.insert("->" + g.nt(alt.chainTarget).name);
      continue;
    }
    std::string s = g.alphabet().at(alt.sym).name;
    s += "(";
    for (std::size_t i = 0; i < alt.args.size(); ++i) {
      if (i) s += ",";
      s += g.nt(alt.args[i]).name;
    }
    s += ")";
    out.insert(s);
  }
  return out;
}

Assignment xyAssignment(const std::string& xv, const std::string& yv) {
  return Assignment({{"x", "Nat", xv}, {"y", "Nat", yv}});
}

// The four lifted-and-restricted copies of the a2 table grammar.
std::vector<TreeGrammar> a2Components(const AlgebraPtr& a2) {
  TreeGrammar g0 = incorporate(*a2);
  VariableTuple tuple = xyTuple();
  std::vector<TreeGrammar> out;
  for (const auto& xv : {"0", "1"})
    for (const auto& yv : {"0", "1"})
      out.push_back(restrict(lift(g0, xyAssignment(xv, yv)),
                             *a2->signature(), tuple));
  return out;
}

}  // namespace

TEST_CASE("incorporate transcribes the table") {
  AlgebraPtr a2 = loadAlgebra("a2.alg");
  TreeGrammar g = incorporate(*a2);
  CHECK(g.nonterminalCount() == 2);
  CHECK(altSet(g, "N0") ==
        std::multiset<std::string>{"0()", "+(N0,N0)", "+(N1,N1)"});
  CHECK(altSet(g, "N1") ==
        std::multiset<std::string>{"1()", "+(N0,N1)", "+(N1,N0)"});
  // five table rows plus the bare element constant 1 (0 coincides with the
  // constant symbol's row)
  CHECK(g.size() == 6);
}

TEST_CASE("incorporate language equals the congruence classes") {
  AlgebraPtr a2 = loadAlgebra("a2.alg");
  TreeGrammar g = incorporate(*a2);
  // ground terms over the extended alphabet, by structural depth
  std::vector<OracleSym> syms = oracleSymbols(*a2->signature(), {});
  syms.push_back({"1", {}, "Nat", false});
  for (const auto& t : termsByDepth(syms, "Nat", 3)) {
    std::string value = evalExt(*a2, Assignment{}, t);
    CHECK(member(g, g.find("N" + value), t));
    CHECK_FALSE(member(g, g.find(value == "0" ? "N1" : "N0"), t));
  }
}

TEST_CASE("incorporate on a one-element algebra") {
  AlgebraPtr one = loadAlgebra("one.alg");
  TreeGrammar g = incorporate(*one);
  CHECK(altSet(g, "Na") ==
        std::multiset<std::string>{"a()", "c()", "g(Na)"});
}

TEST_CASE("lift adds variables to the classes of their values") {
  AlgebraPtr a2 = loadAlgebra("a2.alg");
  TreeGrammar g0 = incorporate(*a2);

  TreeGrammar g = lift(g0, xyAssignment("0", "0"));
  CHECK(altSet(g, "N0").count("x()") == 1);
  CHECK(altSet(g, "N0").count("y()") == 1);
  CHECK(altSet(g, "N1").count("x()") == 0);

  TreeGrammar gx = lift(g0, Assignment({{"x", "Nat", "1"}}));
  CHECK(altSet(gx, "N1").count("x()") == 1);

  TreeGrammar same = lift(g0, Assignment{});
  CHECK(same.size() == g0.size());

  CHECK_THROWS_AS(lift(g0, Assignment({{"x", "Oops", "1"}})), Error);
}

TEST_CASE("lift language: membership after substitution") {
  AlgebraPtr a2 = loadAlgebra("a2.alg");
  TreeGrammar g0 = incorporate(*a2);
  Assignment sigma = xyAssignment("0", "1");
  TreeGrammar g = lift(g0, sigma);

  std::vector<OracleSym> syms = oracleSymbols(*a2->signature(), xyTuple());
  syms.push_back({"1", {}, "Nat", false});
  for (const auto& t : termsByDepth(syms, "Nat", 2)) {
    std::string value = evalExt(*a2, sigma, t);
    CHECK(member(g, g.find("N" + value), t));
  }
}

TEST_CASE("restrict drops foreign symbols") {
  AlgebraPtr a2 = loadAlgebra("a2.alg");
  TreeGrammar lifted = lift(incorporate(*a2), xyAssignment("0", "1"));
  VariableTuple tuple = xyTuple();
  TreeGrammar r = restrict(lifted, *a2->signature(), tuple);

  // The bare element constant 1 goes; the constant 0 stays (it is a symbol).
  CHECK(altSet(r, "N1") ==
        std::multiset<std::string>{"+(N0,N1)", "+(N1,N0)", "y()"});
  CHECK(altSet(r, "N0").count("0()") == 1);

  // Restriction to the full alphabet changes nothing.
  TreeGrammar nop = restrict(r, *a2->signature(), tuple);
  CHECK(nop.size() == r.size());

  // Restriction to an empty signature leaves nothing.
  Signature empty({}, {});
  TreeGrammar none = restrict(lifted, empty, {});
  CHECK(none.size() == 0);
}

TEST_CASE("intersect builds exactly the four nonempty product classes") {
  AlgebraPtr a2 = loadAlgebra("a2.alg");
  auto components = a2Components(a2);
  TreeGrammar product = intersect(components);

  REQUIRE(product.nonterminalCount() == 4);
  CHECK(product.find("N0000") >= 0);
  CHECK(product.find("N0011") >= 0);
  CHECK(product.find("N0101") >= 0);
  CHECK(product.find("N0110") >= 0);

  CHECK(altSet(product, "N0000") ==
        std::multiset<std::string>{"0()", "+(N0000,N0000)", "+(N0011,N0011)",
                                   "+(N0101,N0101)", "+(N0110,N0110)"});
  CHECK(altSet(product, "N0011") ==
        std::multiset<std::string>{"x()", "+(N0000,N0011)", "+(N0011,N0000)",
                                   "+(N0101,N0110)", "+(N0110,N0101)"});
  CHECK(altSet(product, "N0101") ==
        std::multiset<std::string>{"y()", "+(N0000,N0101)", "+(N0011,N0110)",
                                   "+(N0101,N0000)", "+(N0110,N0011)"});
  CHECK(altSet(product, "N0110") ==
        std::multiset<std::string>{"+(N0000,N0110)", "+(N0011,N0101)",
                                   "+(N0101,N0011)", "+(N0110,N0000)"});

  CHECK(product.size() <= components[0].size() * components[1].size() *
                              components[2].size() * components[3].size());
}

TEST_CASE("unary product preserves the language") {
  AlgebraPtr a2 = loadAlgebra("a2.alg");
  TreeGrammar g =
      restrict(lift(incorporate(*a2), xyAssignment("0", "1")),
               *a2->signature(), xyTuple());
  TreeGrammar p = intersect(std::vector<const TreeGrammar*>{&g});
  for (const auto& t :
       termsByDepth(oracleSymbols(*a2->signature(), xyTuple()), "Nat", 2)) {
    bool inG = member(g, g.find("N0"), t);
    bool inP = member(p, p.find("N0"), t);
    CHECK(inG == inP);
  }
}

TEST_CASE("empty component annihilates the product") {
  AlgebraPtr a2 = loadAlgebra("a2.alg");
  TreeGrammar g = restrict(lift(incorporate(*a2), xyAssignment("0", "1")),
                           *a2->signature(), xyTuple());
  // same alphabet, but no alternatives anywhere
  GrammarBuilder b(g.alphabet());
  b.addNonterminal("E", "Nat");
  TreeGrammar dead = b.build();
  TreeGrammar p = intersect(std::vector<const TreeGrammar*>{&g, &dead});
  CHECK(p.nonterminalCount() == 0);
}

TEST_CASE("unite holds the union of the languages") {
  AlgebraPtr a2 = loadAlgebra("a2.alg");
  VariableTuple tuple = xyTuple();
  TreeGrammar g = restrict(lift(incorporate(*a2), xyAssignment("0", "1")),
                           *a2->signature(), tuple);

  auto withStart = [&](const std::string& nt) {
    GrammarBuilder b(g.alphabet());
    for (std::size_t i = 0; i < g.nonterminalCount(); ++i)
      b.addNonterminal(g.nt(static_cast<int>(i)).name,
                       g.nt(static_cast<int>(i)).sort);
    for (std::size_t i = 0; i < g.nonterminalCount(); ++i)
      for (const auto& alt : g.rules(static_cast<int>(i)))
        b.addFunc(static_cast<int>(i), alt.sym, alt.args);
    b.setStart(b.find(nt));
    return b.build();
  };
  TreeGrammar g0 = withStart("N0");
  TreeGrammar g1 = withStart("N1");
  TreeGrammar u = unite(std::vector<TreeGrammar>{g0, g1});

  REQUIRE(u.start().has_value());
  for (const auto& t :
       termsByDepth(oracleSymbols(*a2->signature(), tuple), "Nat", 2)) {
    bool in0 = member(g0, *g0.start(), t);
    bool in1 = member(g1, *g1.start(), t);
    CHECK(member(u, *u.start(), t) == (in0 || in1));
  }

  TreeGrammar uu = unite(std::vector<TreeGrammar>{g0});
  for (const auto& t :
       termsByDepth(oracleSymbols(*a2->signature(), tuple), "Nat", 2))
    CHECK(member(uu, *uu.start(), t) == member(g0, *g0.start(), t));
}

TEST_CASE("tag wraps a tuple of classes") {
  AlgebraPtr a2 = loadAlgebra("a2.alg");
  auto components = a2Components(a2);
  TreeGrammar product = intersect(components);
  int n0110 = product.find("N0110");

  auto [tagged, eqNt] = tag(product, {"=_Nat", {"Nat", "Nat"}, "_Eq", false},
                            {n0110, n0110}, "N_eq");
  CHECK(tagged.size() == product.size() + 1);
  Term xy = Term::app("+", "Nat", {Term::var("x", "Nat"), Term::var("y", "Nat")});
  Term yx = Term::app("+", "Nat", {Term::var("y", "Nat"), Term::var("x", "Nat")});
  Term eq = Term::app("=_Nat", "_Eq", {xy, yx});
  CHECK(member(tagged, eqNt, eq));

  // constant tag
  auto [ctag, cNt] = tag(product, {"c9", {}, "Nat", false}, {}, "N_c");
  CHECK(member(ctag, cNt, Term::app("c9", "Nat", {})));

  CHECK_THROWS_AS(tag(product, {"=_Nat", {"Nat", "Nat"}, "_Eq", false},
                      {n0110}, "N_bad"),
                  ArityMismatch);
}

TEST_CASE("heights on the product grammar") {
  AlgebraPtr a2 = loadAlgebra("a2.alg");
  auto components = a2Components(a2);
  TreeGrammar product = intersect(components);
  HeightMap hm = heights_naive(product, Weights::defaults(product.alphabet()));
  CHECK(hm.at(product.find("N0011")) == 0);  // witness x
  CHECK(hm.at(product.find("N0101")) == 0);  // witness y
  CHECK(hm.at(product.find("N0000")) == 1);  // witness 0
  CHECK(hm.at(product.find("N0110")) == 1);  // witness x + y
}

TEST_CASE("height corner cases") {
  Alphabet a({{"c", {}, "S", false}});
  GrammarBuilder b(a);
  int n = b.addNonterminal("N", "S");
  int m = b.addNonterminal("M", "S");
  int k = b.addNonterminal("K", "S");
  b.addChain(n, m);
  b.addChain(m, n);
  b.addFunc(k, "c", {});
  TreeGrammar g = b.build();

  for (auto f : {heights_naive, heights_liquid}) {
    HeightMap hm = f(g, Weights::defaults(g.alphabet()));
    CHECK(hm.at(0) == kInfiniteHeight);
    CHECK(hm.at(1) == kInfiniteHeight);
    CHECK(hm.at(2) == 1);
  }
}

TEST_CASE("liquid and naive heights agree on random grammars") {
  std::mt19937 rng(42);
  for (int round = 0; round < 120; ++round) {
    // random single-sort grammar with random weights
    std::vector<GrammarSymbol> syms;
    int nConsts = 1 + static_cast<int>(rng() % 3);
    int nUnary = rng() % 3;
    int nBinary = rng() % 3;
    for (int i = 0; i < nConsts; ++i)
      syms.push_back({"c" + std::to_string(i), {}, "S", i % 2 == 0});
    for (int i = 0; i < nUnary; ++i)
      syms.push_back({"u" + std::to_string(i), {"S"}, "S", false});
    for (int i = 0; i < nBinary; ++i)
      syms.push_back({"b" + std::to_string(i), {"S", "S"}, "S", false});
    Alphabet alphabet(syms);

    GrammarBuilder b(alphabet);
    int nNts = 2 + static_cast<int>(rng() % 38);
    for (int i = 0; i < nNts; ++i)
      b.addNonterminal("N" + std::to_string(i), "S");
    int nAlts = static_cast<int>(rng() % 120);
    for (int i = 0; i < nAlts; ++i) {
      int head = static_cast<int>(rng() % nNts);
      if (rng() % 5 == 0) {
        b.addChain(head, static_cast<int>(rng() % nNts));
        continue;
      }
      int sym = static_cast<int>(rng() % alphabet.size());
      std::vector<int> args;
      for (std::size_t k2 = 0; k2 < alphabet.at(sym).argSorts.size(); ++k2)
        args.push_back(static_cast<int>(rng() % nNts));
      b.addFunc(head, sym, std::move(args));
    }
    TreeGrammar g = b.build();

    Weights w;
    w.bySymbol.resize(alphabet.size());
    for (std::size_t i = 0; i < alphabet.size(); ++i)
      w.bySymbol[i] = rng() % 4;  // weights 0..3 incl. zero-weight constants

    HeightMap naive = heights_naive(g, w);
    HeightMap liquid = heights_liquid(g, w);
    CHECK(naive.byNonterminal == liquid.byNonterminal);
  }
}

TEST_CASE("enumerate in nondecreasing height without duplicates") {
  AlgebraPtr a2 = loadAlgebra("a2.alg");
  auto components = a2Components(a2);
  TreeGrammar product = intersect(components);
  HeightMap hm = heights_liquid(product, Weights::defaults(product.alphabet()));

  int n0110 = product.find("N0110");
  auto terms = enumerate_terms(product, n0110, hm, 3, 100000);
  REQUIRE(terms.size() >= 2);
  CHECK(termKey(terms[0]) == "+(x,y)");
  CHECK(termKey(terms[1]) == "+(y,x)");

  std::uint64_t last = 0;
  std::set<std::string> seen;
  for (const auto& t : terms) {
    CHECK(hgOf(t) >= last);
    last = hgOf(t);
    CHECK(seen.insert(termKey(t)).second);
  }

  // maxHeight 0 keeps only the variable
  int n0011 = product.find("N0011");
  auto only = enumerate_terms(product, n0011, hm, 0, 10);
  REQUIRE(only.size() == 1);
  CHECK(only[0].isVar());
  CHECK(only[0].head() == "x");

  // empty class
  GrammarBuilder b(product.alphabet());
  int dead = b.addNonterminal("Dead", "Nat");
  (void)dead;
  TreeGrammar g2 = b.build();
  HeightMap hm2 = heights_liquid(g2, Weights::defaults(g2.alphabet()));
  CHECK(enumerate_terms(g2, 0, hm2, 5, 10).empty());
}

TEST_CASE("enumerate matches brute force per class up to height 3") {
  AlgebraPtr a2 = loadAlgebra("a2.alg");
  auto components = a2Components(a2);
  TreeGrammar product = intersect(components);
  HeightMap hm = heights_liquid(product, Weights::defaults(product.alphabet()));

  // brute force: all terms with hg <= 3, classified by their four values
  std::map<std::string, std::set<std::string>> expected;
  for (const auto& t :
       termsByDepth(oracleSymbols(*a2->signature(), xyTuple()), "Nat", 3)) {
    if (hgOf(t) > 3) continue;
    std::string vec;
    for (const auto& xv : {"0", "1"})
      for (const auto& yv : {"0", "1"})
        vec += evalExt(*a2, xyAssignment(xv, yv), t);
    expected["N" + vec].insert(termKey(t));
  }
  for (const auto& [cls, want] : expected) {
    int id = product.find(cls);
    REQUIRE(id >= 0);
    std::set<std::string> got;
    for (const auto& t : enumerate_terms(product, id, hm, 3, 1000000))
      got.insert(termKey(t));
    CHECK(got == want);
  }
}

TEST_CASE("member and determinism") {
  AlgebraPtr a2 = loadAlgebra("a2.alg");
  auto components = a2Components(a2);
  TreeGrammar product = intersect(components);

  Term x = Term::var("x", "Nat");
  Term y = Term::var("y", "Nat");
  Term xy = Term::app("+", "Nat", {x, y});
  CHECK(member(product, product.find("N0110"), xy));
  CHECK_FALSE(member(product, product.find("N0000"), x));
  CHECK_FALSE(member(product, product.find("N0000"),
                     Term::app("unknown", "Nat", {})));

  CHECK(is_deterministic(product));
  CHECK(is_deterministic(incorporate(*a2)));

  TreeGrammar g = restrict(lift(incorporate(*a2), xyAssignment("0", "1")),
                           *a2->signature(), xyTuple());
  auto withStart = [&](const std::string& nt) {
    GrammarBuilder b(g.alphabet());
    for (std::size_t i = 0; i < g.nonterminalCount(); ++i)
      b.addNonterminal(g.nt(static_cast<int>(i)).name,
                       g.nt(static_cast<int>(i)).sort);
    for (std::size_t i = 0; i < g.nonterminalCount(); ++i)
      for (const auto& alt : g.rules(static_cast<int>(i)))
        b.addFunc(static_cast<int>(i), alt.sym, alt.args);
    b.setStart(b.find(nt));
    return b.build();
  };
  TreeGrammar u = unite(
      std::vector<TreeGrammar>{withStart("N0"), withStart("N0")});
  CHECK_FALSE(is_deterministic(u));
}

TEST_CASE("empty language iff infinite height iff nothing enumerated") {
  std::mt19937 rng(5);
  for (int round = 0; round < 40; ++round) {
    std::vector<GrammarSymbol> syms = {{"x", {}, "S", true},
                                       {"c", {}, "S", false},
                                       {"f", {"S", "S"}, "S", false}};
    Alphabet alphabet(syms);
    GrammarBuilder b(alphabet);
    int nNts = 2 + static_cast<int>(rng() % 10);
    for (int i = 0; i < nNts; ++i)
      b.addNonterminal("N" + std::to_string(i), "S");
    int nAlts = static_cast<int>(rng() % 20);
    for (int i = 0; i < nAlts; ++i) {
      int head = static_cast<int>(rng() % nNts);
      int sym = static_cast<int>(rng() % alphabet.size());
      std::vector<int> args;
      for (std::size_t k2 = 0; k2 < alphabet.at(sym).argSorts.size(); ++k2)
        args.push_back(static_cast<int>(rng() % nNts));
      b.addFunc(head, sym, std::move(args));
    }
    TreeGrammar g = b.build();
    HeightMap hm = heights_liquid(g, Weights::defaults(g.alphabet()));
    // pumping bound: |N| * (1 + max weight)
    height_t bound = g.nonterminalCount() * 2;
    for (int n = 0; n < nNts; ++n) {
      bool empty = hm.at(n) == kInfiniteHeight;
      auto terms = enumerate_terms(g, n, hm, bound, 1);
      CHECK(empty == terms.empty());
    }
  }
}
