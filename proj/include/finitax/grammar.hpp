#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "finitax/algebra.hpp"

namespace finitax {

/// Alphabet entry of a tree grammar. Tuple variables appear as nullary
/// symbols with `isVariable` set; domain elements appear as plain constants.
struct GrammarSymbol {
  std::string name;
  std::vector<std::string> argSorts;
  std::string resultSort;
  bool isVariable = false;

  bool operator==(const GrammarSymbol& o) const {
    return name == o.name && argSorts == o.argSorts &&
           resultSort == o.resultSort && isVariable == o.isVariable;
  }
};

/// Ordered symbol set shared by the grammars entering a product or union.
class Alphabet {
 public:
  Alphabet() = default;
  explicit Alphabet(std::vector<GrammarSymbol> symbols);

  static Alphabet fromSignature(const Signature& sig);
  Alphabet extendedWith(std::vector<GrammarSymbol> extra) const;

  std::size_t size() const { return symbols_.size(); }
  const GrammarSymbol& at(int id) const { return symbols_.at(id); }
  const std::vector<GrammarSymbol>& symbols() const { return symbols_; }
  /// Id of the symbol named `name`, or -1.
  int id(const std::string& name) const;
  bool sameAs(const Alphabet& o) const { return symbols_ == o.symbols_; }

 private:
  std::vector<GrammarSymbol> symbols_;
  std::unordered_map<std::string, int> index_;
};

/// Rule alternative: either a function form f(N1,...,Nk) or a chain
/// reference to another nonterminal.
struct Alternative {
  bool isChain = false;
  int sym = -1;               // function form
  std::vector<int> args;      // function form
  int chainTarget = -1;       // chain form

  bool operator==(const Alternative& o) const {
    return isChain == o.isChain && sym == o.sym && args == o.args &&
           chainTarget == o.chainTarget;
  }
};

struct Nonterminal {
  std::string name;
  std::string sort;
};

/// Chain-expanded function alternative.
struct EffectiveAlt {
  int sym;
  std::vector<int> args;

  bool operator==(const EffectiveAlt& o) const {
    return sym == o.sym && args == o.args;
  }
  bool operator<(const EffectiveAlt& o) const {
    if (sym != o.sym) return sym < o.sym;
    return args < o.args;
  }
};

class GrammarBuilder;

/// Sorted regular tree grammar. Immutable after construction; chain-expanded
/// alternative indices are precomputed for membership and products.
class TreeGrammar {
 public:
  TreeGrammar() = default;

  const Alphabet& alphabet() const { return alphabet_; }
  std::size_t nonterminalCount() const { return nts_.size(); }
  const Nonterminal& nt(int id) const { return nts_.at(id); }
  /// Id of the nonterminal named `name`, or -1.
  int find(const std::string& name) const;
  const std::vector<Alternative>& rules(int nt) const { return rules_.at(nt); }
  std::optional<int> start() const { return start_; }

  /// Total number of alternatives across all rules.
  std::size_t size() const;

  /// Chain-expanded function alternatives of `nt`, sorted.
  const std::vector<EffectiveAlt>& effectiveAlts(int nt) const {
    return effective_.at(nt);
  }
  /// Heads that carry the chain-expanded alternative sym(args), sorted.
  const std::vector<int>& headsOf(int sym, const std::vector<int>& args) const;

 private:
  friend class GrammarBuilder;
  void finalize();

  Alphabet alphabet_;
  std::vector<Nonterminal> nts_;
  std::vector<std::vector<Alternative>> rules_;
  std::optional<int> start_;
  std::unordered_map<std::string, int> ntIndex_;

  std::vector<std::vector<EffectiveAlt>> effective_;
  std::map<std::pair<int, std::vector<int>>, std::vector<int>> altIndex_;
};

/// Incremental construction with sort checking; build() freezes the grammar.
class GrammarBuilder {
 public:
  explicit GrammarBuilder(Alphabet alphabet);

  int addNonterminal(const std::string& name, const std::string& sort);
  void addFunc(int head, int sym, std::vector<int> args);
  void addFunc(int head, const std::string& sym, std::vector<int> args);
  void addChain(int head, int target);
  bool hasAlternative(int head, const Alternative& alt) const;
  void setStart(int nt);
  int find(const std::string& name) const;
  const Alphabet& alphabet() const { return g_.alphabet_; }

  TreeGrammar build();

 private:
  TreeGrammar g_;
  bool built_ = false;
};

// ---------------------------------------------------------------------------
// Heights

using height_t = std::uint64_t;
inline constexpr height_t kInfiniteHeight = ~height_t{0};

/// Per-symbol generalized-height weights.
struct Weights {
  std::vector<height_t> bySymbol;

  /// Variables weigh 0, every other symbol 1.
  static Weights defaults(const Alphabet& a);
  height_t of(int sym) const { return bySymbol.at(sym); }
};

/// Minimal generalized height per nonterminal; kInfiniteHeight exactly for
/// empty languages.
struct HeightMap {
  std::vector<height_t> byNonterminal;
  Weights weights;

  height_t at(int nt) const { return byNonterminal.at(nt); }
};

// ---------------------------------------------------------------------------
// Operations

inline constexpr std::size_t kDefaultProductCap = 200000;

/// One nonterminal per domain element; one alternative per table row plus
/// the element's own constant form. Accepts partial tables.
TreeGrammar incorporate(const SignaturePtr& sig,
                        const std::map<std::string, std::vector<std::string>>& domains,
                        const std::vector<TableFact>& facts);
TreeGrammar incorporate(const FiniteAlgebra& alg);

/// Name of the nonterminal incorporate() creates for a domain element.
std::string elementNonterminalName(const std::string& elem);

/// Adds each assigned variable as a constant alternative on the class of its
/// value; the variables join the alphabet.
TreeGrammar lift(const TreeGrammar& g, const Assignment& sigma);

/// Product grammar together with the component tuple behind each state.
struct ProductResult {
  TreeGrammar grammar;
  std::vector<std::vector<int>> states;  // per product nt: component nt ids
};

/// Bottom-up product over grammars sharing one alphabet. Only nonempty
/// (producible) product states are created, so the result needs no
/// emptiness pruning. Throws ResourceLimit when `maxStates` is exceeded.
ProductResult intersect_product(const std::vector<const TreeGrammar*>& gs,
                                std::size_t maxStates = kDefaultProductCap);
TreeGrammar intersect(const std::vector<const TreeGrammar*>& gs,
                      std::size_t maxStates = kDefaultProductCap);
TreeGrammar intersect(const std::vector<TreeGrammar>& gs,
                      std::size_t maxStates = kDefaultProductCap);

/// Drops every function alternative whose symbol is neither in `sig` nor a
/// variable of `vars`; the alphabet shrinks to exactly those symbols.
TreeGrammar restrict(const TreeGrammar& g, const Signature& sig,
                     const VariableTuple& vars);

/// Disjoint union of the rule sets plus a fresh start with one chain per
/// input start.
TreeGrammar unite(const std::vector<const TreeGrammar*>& gs);
TreeGrammar unite(const std::vector<TreeGrammar>& gs);

/// Adds a fresh nonterminal with the single alternative sym(args); the
/// symbol joins the alphabet when new. Returns the grammar and the id of
/// the fresh nonterminal.
std::pair<TreeGrammar, int> tag(const TreeGrammar& g, const GrammarSymbol& sym,
                                const std::vector<int>& args,
                                const std::string& ntName);

/// Grammar of the full term universe over `sig` and `vars`: one nonterminal
/// per sort generating every well-sorted term.
TreeGrammar universe(const Signature& sig, const VariableTuple& vars);
std::string universeNonterminalName(const std::string& sort);

/// Least fixpoint by repeated sweeps.
HeightMap heights_naive(const TreeGrammar& g, Weights weights);

/// Worklist algorithm finalizing nonterminals in nondecreasing value order;
/// agrees with heights_naive; near-linear for unit weights.
HeightMap heights_liquid(const TreeGrammar& g, Weights weights);

/// Members of L(nt) in nondecreasing generalized height, ties broken by
/// term size then lexicographically; stops at `maxHeight` or `maxCount`.
/// Requires every non-nullary symbol to have positive weight.
std::vector<Term> enumerate_terms(const TreeGrammar& g, int nt,
                                  const HeightMap& hm, height_t maxHeight,
                                  std::size_t maxCount);

/// Sorted ids of all nonterminals generating `t` (empty for foreign symbols).
std::vector<int> member_classes(const TreeGrammar& g, const Term& t);
bool member(const TreeGrammar& g, int nt, const Term& t);

/// True iff after chain expansion no two distinct heads share an alternative.
bool is_deterministic(const TreeGrammar& g);

}  // namespace finitax
