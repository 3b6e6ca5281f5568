#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "finitax/grammar.hpp"

namespace finitax {

/// Quantifier prefixes over a k-tuple are encoded as bitmasks: bit i set
/// means position i is existential.
using PrefixMask = std::uint32_t;

/// "A"/"E" string for a prefix mask, leftmost variable first.
std::string prefixMaskString(PrefixMask mask, std::size_t k);

/// Grammar whose nonterminals are the nonempty behavior classes of terms
/// over the signature and a variable tuple: two terms share a class iff
/// they evaluate identically under every assignment in every algebra.
class BehaviorGrammar {
 public:
  BehaviorGrammar(std::vector<AlgebraPtr> algebras, VariableTuple tuple,
                  std::size_t maxClasses = kDefaultProductCap);

  const TreeGrammar& base() const { return base_; }
  const std::vector<AlgebraPtr>& algebras() const { return algebras_; }
  const VariableTuple& tuple() const { return tuple_; }
  const SignaturePtr& signature() const {
    return algebras_.front()->signature();
  }

  std::size_t classCount() const { return base_.nonterminalCount(); }
  const std::string& classSort(int cls) const { return base_.nt(cls).sort; }
  std::vector<int> classesOfSort(const std::string& sort) const;
  /// Value vector of a class: one component nonterminal id per
  /// (algebra, assignment) slot.
  const std::vector<int>& classVector(int cls) const {
    return classVectors_.at(cls);
  }

  /// Assignments of one algebra in enumeration order (last tuple variable
  /// varies fastest).
  const std::vector<Assignment>& assignments(std::size_t algebraIdx) const {
    return assignments_.at(algebraIdx);
  }

  /// Folds the prefix over the equality matrix of two same-sort classes:
  /// true iff every algebra admits the pair under the prefix.
  bool admitted(int cls1, int cls2, PrefixMask mask) const;

  /// The unique class containing `t`, or -1 when `t` is outside the
  /// fragment.
  int classOfTerm(const Term& t) const;

 private:
  std::vector<AlgebraPtr> algebras_;
  VariableTuple tuple_;
  TreeGrammar base_;
  std::vector<std::vector<int>> classVectors_;
  std::vector<std::vector<Assignment>> assignments_;
  // Per algebra: first slot offset and per-position domain strides.
  std::vector<std::size_t> slotOffset_;
  std::vector<std::vector<std::size_t>> radices_;
};

BehaviorGrammar build_behavior(const AlgebraPtr& alg, const VariableTuple& x,
                               std::size_t maxClasses = kDefaultProductCap);

/// All ordered same-sort class pairs admitted under `mask`, sorted.
std::vector<std::pair<int, int>> admitted_pairs(const BehaviorGrammar& bg,
                                                PrefixMask mask);

/// Behavior grammar wrapped into a grammar of whole formulas: one
/// equation nonterminal per prefix holding the admitted class pairs, a
/// start rule over all prefixes, and fresh equation / prefix symbols.
class TheoremGrammar {
 public:
  TheoremGrammar(std::vector<AlgebraPtr> algebras, VariableTuple tuple,
                 std::size_t maxClasses = kDefaultProductCap);

  const BehaviorGrammar& behavior() const { return behavior_; }
  const TreeGrammar& wrapped() const { return wrapped_; }
  int startNonterminal() const { return start_; }

  const std::vector<std::pair<int, int>>& equationRules(PrefixMask mask) const {
    return pairsByMask_.at(mask);
  }
  bool admittedPair(PrefixMask mask, int cls1, int cls2) const;

  /// Membership of the formula in the generated language, computed on the
  /// wrapped grammar. Throws OutOfFragment for foreign symbols or a
  /// different tuple.
  bool contains(const Formula& phi) const;

  /// Formula encoded as a term over the extended alphabet.
  Term encode(const Formula& phi) const;

  /// Throws OutOfFragment unless the formula is over the signature and the
  /// exact variable tuple.
  void requireInFragment(const Formula& phi) const;

  std::string equationSymbolName(const std::string& sort) const;
  std::string prefixSymbolName(PrefixMask mask) const;

 private:
  BehaviorGrammar behavior_;
  std::vector<std::vector<std::pair<int, int>>> pairsByMask_;
  TreeGrammar wrapped_;
  int start_ = -1;
};

using TheoremGrammarPtr = std::shared_ptr<const TheoremGrammar>;

TheoremGrammarPtr build_theorem_grammar(
    std::vector<AlgebraPtr> algebras, VariableTuple tuple,
    std::size_t maxClasses = kDefaultProductCap);

/// One rewrite application during normalization: the redex at `path`
/// (root path is empty) is replaced using the ground equation nf = pattern.
struct RewriteStep {
  std::vector<int> path;
  Term from;
  Term to;
};

/// Ground equation emitted for one rule alternative: the class normal form
/// equals the alternative with every argument replaced by its normal form.
struct GroundEquation {
  Term nf;
  Term pattern;
  int headClass;
};

/// Result of converting the deterministic behavior grammar into ground
/// equations with one chosen normal form per class. Two fragment terms are
/// equal under the equations iff they share a behavior class; innermost
/// rewriting reaches the class normal form.
class ExternResult {
 public:
  explicit ExternResult(const BehaviorGrammar& bg);

  const std::vector<GroundEquation>& equations() const { return equations_; }
  const Term& normalForm(int cls) const { return classNF_.at(cls); }
  std::size_t classCount() const { return classNF_.size(); }

  /// Innermost rewriting to the normal form; optionally records each step.
  Term normalize(const Term& t, std::vector<RewriteStep>* steps = nullptr) const;
  /// Like normalize but also yields the behavior class.
  std::pair<Term, int> normalizeToClass(
      const Term& t, std::vector<RewriteStep>* steps = nullptr) const;

 private:
  std::vector<Term> classNF_;
  std::vector<GroundEquation> equations_;
  std::unordered_map<std::string, int> symId_;
  std::vector<GrammarSymbol> symbols_;
  std::map<std::pair<int, std::vector<int>>, int> rewrite_;
};

ExternResult externalize(const BehaviorGrammar& bg);

/// Finite axiom set: externed ground equations under the all-universal
/// prefix plus, per prefix with an existential, the equations between
/// distinct admitted normal forms.
class AxiomSet {
 public:
  AxiomSet(TheoremGrammarPtr tg);

  const VariableTuple& tuple() const;
  const std::vector<Formula>& universal() const { return universal_; }
  const std::map<PrefixMask, std::vector<Formula>>& existentialBlocks() const {
    return existential_;
  }
  std::vector<Formula> allFormulas() const;

  const ExternResult& provenance() const { return *extern_; }
  const TheoremGrammarPtr& theoremGrammar() const { return tg_; }

  /// Replaces the formula lists by a subsumption-reduced selection;
  /// provenance and derivation behavior are unchanged.
  AxiomSet reduced() const;
  bool isReduced() const { return reduced_; }

 private:
  TheoremGrammarPtr tg_;
  std::shared_ptr<const ExternResult> extern_;
  std::vector<Formula> universal_;
  std::map<PrefixMask, std::vector<Formula>> existential_;
  bool reduced_ = false;
};

AxiomSet build_axioms(std::vector<AlgebraPtr> algebras, VariableTuple tuple,
                      std::size_t maxClasses = kDefaultProductCap);

/// True when `candidate` is redundant given `keeper`: same prefix and the
/// candidate's equation is a substitution instance of the keeper's (or of
/// its flipped form), instantiating universally quantified variables only.
bool subsumes(const Formula& keeper, const Formula& candidate);

/// Subsumption reduction: reflexive equations are dropped; a formula is
/// dropped when an already kept one subsumes it; shorter formulas first.
AxiomSet reduce(const AxiomSet& ax);

struct Derivation {
  bool success = false;
  Term lhsNF;
  Term rhsNF;
  int lhsClass = -1;
  int rhsClass = -1;
  std::vector<RewriteStep> lhsSteps;
  std::vector<RewriteStep> rhsSteps;
  PrefixMask mask = 0;
  /// True when the derivation closes by equal normal forms rather than an
  /// existential-block equation.
  bool byEqualNF = false;
};

/// Rewrites both sides to normal form with step records; succeeds iff the
/// normal forms coincide or the prefix admits the class pair.
Derivation derive(const AxiomSet& ax, const Formula& phi);

struct VarietyStep {
  VariableTuple tuple;
  std::vector<Formula> axioms;  // reduced universal fragment
  /// Axioms of the previous step subsumed by an axiom of this step.
  std::vector<std::pair<Formula, Formula>> subsumedPrevious;
};

/// Universal-fragment axiom sets for growing variable tuples x1..xi,
/// i = 1..n, with a per-step subsumption report.
std::vector<VarietyStep> variety_sequence(
    const std::vector<AlgebraPtr>& algebras, std::size_t n,
    const std::vector<std::string>& varSorts,
    std::size_t maxClasses = kDefaultProductCap);

}  // namespace finitax
