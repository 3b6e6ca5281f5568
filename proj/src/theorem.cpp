#include "finitax/theorem.hpp"

#include <algorithm>
#include <functional>

namespace finitax {

std::string prefixMaskString(PrefixMask mask, std::size_t k) {
  std::string s(k, 'A');
  for (std::size_t i = 0; i < k; ++i)
    if ((mask >> i) & 1u) s[i] = 'E';
  return s;
}

// ---------------------------------------------------------------------------
// BehaviorGrammar

BehaviorGrammar::BehaviorGrammar(std::vector<AlgebraPtr> algebras,
                                 VariableTuple tuple, std::size_t maxClasses)
    : algebras_(std::move(algebras)), tuple_(std::move(tuple)) {
  if (algebras_.empty())
    throw Error("behavior grammar needs at least one algebra");
  for (std::size_t i = 1; i < algebras_.size(); ++i) {
    if (!algebras_[i]->signature()->sameAs(*algebras_[0]->signature()))
      throw SignatureMismatch("algebras " + algebras_[0]->name() + " and " +
                              algebras_[i]->name() +
                              " have different signatures");
  }
  const Signature& sig = *algebras_[0]->signature();
  for (const auto& e : tuple_.entries()) {
    if (!sig.hasSort(e.sort))
      throw SortMismatch("tuple variable " + e.name + " has undeclared sort " +
                         e.sort);
  }

  const std::size_t k = tuple_.size();
  std::size_t offset = 0;
  assignments_.resize(algebras_.size());
  radices_.resize(algebras_.size());
  slotOffset_.resize(algebras_.size());
  for (std::size_t a = 0; a < algebras_.size(); ++a) {
    const FiniteAlgebra& alg = *algebras_[a];
    radices_[a].resize(k);
    std::size_t count = 1;
    for (std::size_t p = 0; p < k; ++p) {
      radices_[a][p] = alg.domain(tuple_.at(p).sort).size();
      count *= radices_[a][p];
    }
    slotOffset_[a] = offset;
    offset += count;
    // Last tuple variable varies fastest.
    for (std::size_t idx = 0; idx < count; ++idx) {
      std::vector<Assignment::Binding> bindings(k);
      std::size_t rest = idx;
      for (std::size_t p = k; p-- > 0;) {
        const auto& entry = tuple_.at(p);
        const auto& dom = alg.domain(entry.sort);
        bindings[p] = {entry.name, entry.sort, dom[rest % radices_[a][p]]};
        rest /= radices_[a][p];
      }
      assignments_[a].emplace_back(std::move(bindings));
    }
  }

  std::vector<TreeGrammar> components;
  components.reserve(offset);
  for (std::size_t a = 0; a < algebras_.size(); ++a) {
    TreeGrammar g0 = incorporate(*algebras_[a]);
    for (const auto& asg : assignments_[a])
      components.push_back(restrict(lift(g0, asg), sig, tuple_));
  }
  std::vector<const TreeGrammar*> ptrs;
  ptrs.reserve(components.size());
  for (const auto& g : components) ptrs.push_back(&g);
  ProductResult pr = intersect_product(ptrs, maxClasses);
  base_ = std::move(pr.grammar);
  classVectors_ = std::move(pr.states);
}

std::vector<int> BehaviorGrammar::classesOfSort(const std::string& sort) const {
  std::vector<int> out;
  for (std::size_t i = 0; i < classCount(); ++i)
    if (classSort(static_cast<int>(i)) == sort)
      out.push_back(static_cast<int>(i));
  return out;
}

bool BehaviorGrammar::admitted(int cls1, int cls2, PrefixMask mask) const {
  if (classSort(cls1) != classSort(cls2)) return false;
  const auto& v1 = classVectors_[cls1];
  const auto& v2 = classVectors_[cls2];
  const std::size_t k = tuple_.size();
  for (std::size_t a = 0; a < algebras_.size(); ++a) {
    const auto& radix = radices_[a];
    std::function<bool(std::size_t, std::size_t)> fold =
        [&](std::size_t pos, std::size_t idx) -> bool {
      if (pos == k) {
        std::size_t slot = slotOffset_[a] + idx;
        return v1[slot] == v2[slot];
      }
      bool existential = (mask >> pos) & 1u;
      for (std::size_t d = 0; d < radix[pos]; ++d) {
        bool sub = fold(pos + 1, idx * radix[pos] + d);
        if (existential && sub) return true;
        if (!existential && !sub) return false;
      }
      return !existential;
    };
    if (!fold(0, 0)) return false;
  }
  return true;
}

int BehaviorGrammar::classOfTerm(const Term& t) const {
  std::vector<int> classes = member_classes(base_, t);
  return classes.size() == 1 ? classes[0] : -1;
}

BehaviorGrammar build_behavior(const AlgebraPtr& alg, const VariableTuple& x,
                               std::size_t maxClasses) {
  return BehaviorGrammar({alg}, x, maxClasses);
}

std::vector<std::pair<int, int>> admitted_pairs(const BehaviorGrammar& bg,
                                                PrefixMask mask) {
  std::vector<std::pair<int, int>> out;
  const int n = static_cast<int>(bg.classCount());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (bg.classSort(i) == bg.classSort(j) && bg.admitted(i, j, mask))
        out.emplace_back(i, j);
  return out;
}

// ---------------------------------------------------------------------------
// TheoremGrammar

TheoremGrammar::TheoremGrammar(std::vector<AlgebraPtr> algebras,
                               VariableTuple tuple, std::size_t maxClasses)
    : behavior_(std::move(algebras), std::move(tuple), maxClasses) {
  const std::size_t k = behavior_.tuple().size();
  const std::size_t maskCount = std::size_t{1} << k;
  pairsByMask_.resize(maskCount);
  for (std::size_t m = 0; m < maskCount; ++m)
    pairsByMask_[m] = admitted_pairs(behavior_, static_cast<PrefixMask>(m));

  const Signature& sig = *behavior_.signature();
  for (const auto& s : sig.sorts())
    if (s == "_Eq" || s == "_Form")
      throw Error("sort name " + s + " is reserved");

  std::vector<GrammarSymbol> extra;
  for (const auto& s : sig.sorts())
    extra.push_back({"=_" + s, {s, s}, "_Eq", false});
  for (std::size_t m = 0; m < maskCount; ++m)
    extra.push_back({"Q_" + prefixMaskString(static_cast<PrefixMask>(m), k),
                     {"_Eq"},
                     "_Form",
                     false});

  const TreeGrammar& base = behavior_.base();
  GrammarBuilder b(base.alphabet().extendedWith(extra));
  for (std::size_t i = 0; i < base.nonterminalCount(); ++i)
    b.addNonterminal(base.nt(static_cast<int>(i)).name,
                     base.nt(static_cast<int>(i)).sort);
  for (std::size_t i = 0; i < base.nonterminalCount(); ++i)
    for (const auto& alt : base.rules(static_cast<int>(i)))
      b.addFunc(static_cast<int>(i), alt.sym, alt.args);

  std::vector<int> maskNts;
  for (std::size_t m = 0; m < maskCount; ++m)
    maskNts.push_back(b.addNonterminal(
        "N_" + prefixMaskString(static_cast<PrefixMask>(m), k), "_Eq"));
  int start = b.addNonterminal("N", "_Form");
  for (std::size_t m = 0; m < maskCount; ++m)
    for (const auto& [c1, c2] : pairsByMask_[m])
      b.addFunc(maskNts[m], "=_" + behavior_.classSort(c1), {c1, c2});
  for (std::size_t m = 0; m < maskCount; ++m)
    b.addFunc(start,
              "Q_" + prefixMaskString(static_cast<PrefixMask>(m), k),
              {maskNts[m]});
  b.setStart(start);
  wrapped_ = b.build();
  start_ = start;
}

bool TheoremGrammar::admittedPair(PrefixMask mask, int cls1, int cls2) const {
  const auto& pairs = pairsByMask_.at(mask);
  return std::binary_search(pairs.begin(), pairs.end(),
                            std::make_pair(cls1, cls2));
}

std::string TheoremGrammar::equationSymbolName(const std::string& sort) const {
  return "=_" + sort;
}

std::string TheoremGrammar::prefixSymbolName(PrefixMask mask) const {
  return "Q_" + prefixMaskString(mask, behavior_.tuple().size());
}

namespace {

void checkTermInFragment(const Signature& sig, const VariableTuple& tuple,
                         const Term& t) {
  if (t.isVar()) {
    int pos = tuple.indexOf(t.head());
    if (pos < 0)
      throw OutOfFragment("variable " + t.head() + " is not in the tuple");
    if (tuple.at(pos).sort != t.sort())
      throw OutOfFragment("variable " + t.head() + " has sort " + t.sort() +
                          ", tuple declares " + tuple.at(pos).sort);
    return;
  }
  if (sig.symbolId(t.head()) < 0)
    throw OutOfFragment("symbol " + t.head() + " is not in the signature");
  for (const auto& a : t.args()) checkTermInFragment(sig, tuple, a);
}

}  // namespace

void TheoremGrammar::requireInFragment(const Formula& phi) const {
  if (!(phi.tuple() == behavior_.tuple()))
    throw OutOfFragment("formula is over a different variable tuple");
  checkTermInFragment(*behavior_.signature(), behavior_.tuple(), phi.lhs());
  checkTermInFragment(*behavior_.signature(), behavior_.tuple(), phi.rhs());
}

Term TheoremGrammar::encode(const Formula& phi) const {
  Term eq = Term::app(equationSymbolName(phi.eqSort()), "_Eq",
                      {phi.lhs(), phi.rhs()});
  return Term::app(prefixSymbolName(phi.prefixMask()), "_Form", {eq});
}

bool TheoremGrammar::contains(const Formula& phi) const {
  requireInFragment(phi);
  return member(wrapped_, start_, encode(phi));
}

TheoremGrammarPtr build_theorem_grammar(std::vector<AlgebraPtr> algebras,
                                        VariableTuple tuple,
                                        std::size_t maxClasses) {
  return std::make_shared<TheoremGrammar>(std::move(algebras),
                                          std::move(tuple), maxClasses);
}

// ---------------------------------------------------------------------------
// ExternResult

namespace {

Term symbolTerm(const GrammarSymbol& s, std::vector<Term> args) {
  if (s.isVariable) return Term::var(s.name, s.resultSort);
  return Term::app(s.name, s.resultSort, std::move(args));
}

}  // namespace

ExternResult::ExternResult(const BehaviorGrammar& bg) {
  const TreeGrammar& base = bg.base();
  if (!is_deterministic(base))
    throw NondeterministicGrammar("class grammar is not deterministic");
  HeightMap hm = heights_liquid(base, Weights::defaults(base.alphabet()));
  const int n = static_cast<int>(base.nonterminalCount());
  classNF_.resize(n);
  for (int c = 0; c < n; ++c) {
    auto first = enumerate_terms(base, c, hm, hm.at(c), 1);
    if (first.empty())
      throw Error("behavior class " + base.nt(c).name + " is empty");
    classNF_[c] = first[0];
  }
  symbols_ = base.alphabet().symbols();
  for (std::size_t i = 0; i < symbols_.size(); ++i)
    symId_.emplace(symbols_[i].name, static_cast<int>(i));
  for (int c = 0; c < n; ++c)
    for (const auto& alt : base.effectiveAlts(c))
      rewrite_[{alt.sym, alt.args}] = c;

  for (int c = 0; c < n; ++c) {
    for (const auto& alt : base.effectiveAlts(c)) {
      std::vector<Term> args;
      args.reserve(alt.args.size());
      for (int a : alt.args) args.push_back(classNF_[a]);
      Term pattern = symbolTerm(symbols_[alt.sym], std::move(args));
      if (pattern == classNF_[c]) continue;  // trivial nf = nf
      equations_.push_back({classNF_[c], pattern, c});
    }
  }
}

std::pair<Term, int> ExternResult::normalizeToClass(
    const Term& t, std::vector<RewriteStep>* steps) const {
  std::vector<int> path;
  std::function<std::pair<Term, int>(const Term&)> rec =
      [&](const Term& u) -> std::pair<Term, int> {
    auto it = symId_.find(u.head());
    if (it == symId_.end())
      throw OutOfFragment("symbol " + u.head() +
                          " is outside the externed fragment");
    int sym = it->second;
    const GrammarSymbol& decl = symbols_[sym];
    std::size_t arity = u.isVar() ? 0 : u.args().size();
    if (decl.argSorts.size() != arity)
      throw OutOfFragment("arity mismatch for " + u.head());

    std::vector<Term> nargs;
    std::vector<int> argCls(arity);
    bool changed = false;
    for (std::size_t i = 0; i < arity; ++i) {
      path.push_back(static_cast<int>(i));
      auto [nt, c] = rec(u.args()[i]);
      path.pop_back();
      if (!(nt == u.args()[i])) changed = true;
      nargs.push_back(std::move(nt));
      argCls[i] = c;
    }
    auto rit = rewrite_.find({sym, argCls});
    if (rit == rewrite_.end())
      throw Error("no class for " + u.head() + " at its argument classes");
    int cls = rit->second;
    Term redex =
        changed ? Term::app(decl.name, decl.resultSort, std::move(nargs)) : u;
    if (redex == classNF_[cls]) return {redex, cls};
    if (steps) steps->push_back({path, redex, classNF_[cls]});
    return {classNF_[cls], cls};
  };
  return rec(t);
}

Term ExternResult::normalize(const Term& t,
                             std::vector<RewriteStep>* steps) const {
  return normalizeToClass(t, steps).first;
}

ExternResult externalize(const BehaviorGrammar& bg) { return ExternResult(bg); }

// ---------------------------------------------------------------------------
// AxiomSet

AxiomSet::AxiomSet(TheoremGrammarPtr tg) : tg_(std::move(tg)) {
  extern_ = std::make_shared<ExternResult>(tg_->behavior());
  const VariableTuple& tuple = tg_->behavior().tuple();
  const std::size_t k = tuple.size();

  std::vector<Formula::PrefixEntry> allForall;
  for (const auto& e : tuple.entries())
    allForall.push_back({Quantifier::ForAll, e.name, e.sort});
  for (const auto& eq : extern_->equations())
    universal_.emplace_back(allForall, eq.nf, eq.pattern);

  for (PrefixMask mask = 1; mask < (PrefixMask{1} << k); ++mask) {
    std::vector<Formula::PrefixEntry> prefix;
    for (std::size_t i = 0; i < k; ++i) {
      prefix.push_back({((mask >> i) & 1u) ? Quantifier::Exists
                                           : Quantifier::ForAll,
                        tuple.at(i).name, tuple.at(i).sort});
    }
    std::vector<Formula> block;
    for (const auto& [c1, c2] : tg_->equationRules(mask)) {
      if (c1 >= c2) continue;  // each unordered pair once
      const Term& a = extern_->normalForm(c1);
      const Term& b = extern_->normalForm(c2);
      bool aFirst = Term::compare(a, b) <= 0;
      block.emplace_back(prefix, aFirst ? a : b, aFirst ? b : a);
    }
    if (!block.empty()) existential_[mask] = std::move(block);
  }
}

const VariableTuple& AxiomSet::tuple() const {
  return tg_->behavior().tuple();
}

std::vector<Formula> AxiomSet::allFormulas() const {
  std::vector<Formula> out = universal_;
  for (const auto& [mask, block] : existential_)
    out.insert(out.end(), block.begin(), block.end());
  return out;
}

AxiomSet build_axioms(std::vector<AlgebraPtr> algebras, VariableTuple tuple,
                      std::size_t maxClasses) {
  return AxiomSet(
      build_theorem_grammar(std::move(algebras), std::move(tuple), maxClasses));
}

// ---------------------------------------------------------------------------
// Subsumption / reduce

namespace {

bool matchTerm(const Term& pattern, const Term& subject,
               const std::vector<Formula::PrefixEntry>& prefix,
               std::map<std::string, Term>& binding) {
  if (pattern.isVar()) {
    int pos = -1;
    for (std::size_t i = 0; i < prefix.size(); ++i)
      if (prefix[i].var == pattern.head()) pos = static_cast<int>(i);
    if (pos < 0) return false;
    if (prefix[pos].q == Quantifier::Exists) return subject == pattern;
    if (subject.sort() != pattern.sort()) return false;
    auto it = binding.find(pattern.head());
    if (it != binding.end()) return it->second == subject;
    binding.emplace(pattern.head(), subject);
    return true;
  }
  if (subject.isVar()) return false;
  if (pattern.head() != subject.head()) return false;
  if (pattern.args().size() != subject.args().size()) return false;
  for (std::size_t i = 0; i < pattern.args().size(); ++i)
    if (!matchTerm(pattern.args()[i], subject.args()[i], prefix, binding))
      return false;
  return true;
}

// Instantiating a universal variable at position p is sound only when the
// image mentions variables quantified earlier or universally.
bool imagesSound(const std::map<std::string, Term>& binding,
                 const std::vector<Formula::PrefixEntry>& prefix) {
  auto posOf = [&prefix](const std::string& v) {
    for (std::size_t i = 0; i < prefix.size(); ++i)
      if (prefix[i].var == v) return static_cast<int>(i);
    return -1;
  };
  for (const auto& [var, image] : binding) {
    int p = posOf(var);
    for (const auto& u : image.variables()) {
      int up = posOf(u);
      if (up < 0) return false;
      if (prefix[up].q != Quantifier::ForAll && up >= p) return false;
    }
  }
  return true;
}

bool subsumesOriented(const Term& pl, const Term& pr, const Formula& cand,
                      const std::vector<Formula::PrefixEntry>& prefix) {
  std::map<std::string, Term> binding;
  if (!matchTerm(pl, cand.lhs(), prefix, binding)) return false;
  if (!matchTerm(pr, cand.rhs(), prefix, binding)) return false;
  return imagesSound(binding, prefix);
}

std::size_t distinctVarCount(const Formula& f) {
  auto vs = f.lhs().variables();
  for (const auto& v : f.rhs().variables())
    if (std::find(vs.begin(), vs.end(), v) == vs.end()) vs.push_back(v);
  return vs.size();
}

}  // namespace

bool subsumes(const Formula& keeper, const Formula& candidate) {
  const auto& kp = keeper.prefix();
  const auto& cp = candidate.prefix();
  if (kp.size() != cp.size()) return false;
  for (std::size_t i = 0; i < kp.size(); ++i) {
    if (kp[i].var != cp[i].var || kp[i].sort != cp[i].sort) return false;
    // A quantifier over a variable the keeper never mentions is vacuous
    // (domains are nonempty), so only occurring positions must agree.
    if (kp[i].q != cp[i].q &&
        (keeper.lhs().mentionsVariable(kp[i].var) ||
         keeper.rhs().mentionsVariable(kp[i].var)))
      return false;
  }
  return subsumesOriented(keeper.lhs(), keeper.rhs(), candidate, cp) ||
         subsumesOriented(keeper.rhs(), keeper.lhs(), candidate, cp);
}

AxiomSet AxiomSet::reduced() const {
  struct Item {
    Formula f;
    PrefixMask mask;
  };
  std::vector<Item> items;
  for (const auto& f : universal_) items.push_back({f, 0});
  for (const auto& [mask, block] : existential_)
    for (const auto& f : block) items.push_back({f, mask});

  std::stable_sort(items.begin(), items.end(),
                   [](const Item& a, const Item& b) {
                     std::size_t sa = a.f.lhs().size() + a.f.rhs().size();
                     std::size_t sb = b.f.lhs().size() + b.f.rhs().size();
                     if (sa != sb) return sa < sb;
                     std::size_t va = distinctVarCount(a.f);
                     std::size_t vb = distinctVarCount(b.f);
                     if (va != vb) return va > vb;
                     if (a.mask != b.mask) return a.mask < b.mask;
                     if (int c = Term::compare(a.f.lhs(), b.f.lhs()); c != 0)
                       return c < 0;
                     return Term::compare(a.f.rhs(), b.f.rhs()) < 0;
                   });

  std::vector<Item> kept;
  for (const auto& item : items) {
    if (item.f.lhs() == item.f.rhs()) continue;
    bool redundant = false;
    for (const auto& k : kept) {
      if (subsumes(k.f, item.f)) {
        redundant = true;
        break;
      }
    }
    if (!redundant) kept.push_back(item);
  }

  AxiomSet out = *this;
  out.universal_.clear();
  out.existential_.clear();
  for (const auto& k : kept) {
    if (k.mask == 0)
      out.universal_.push_back(k.f);
    else
      out.existential_[k.mask].push_back(k.f);
  }
  out.reduced_ = true;
  return out;
}

AxiomSet reduce(const AxiomSet& ax) { return ax.reduced(); }

// ---------------------------------------------------------------------------
// derive / variety

Derivation derive(const AxiomSet& ax, const Formula& phi) {
  ax.theoremGrammar()->requireInFragment(phi);
  Derivation d;
  d.mask = phi.prefixMask();
  auto [l, lc] = ax.provenance().normalizeToClass(phi.lhs(), &d.lhsSteps);
  auto [r, rc] = ax.provenance().normalizeToClass(phi.rhs(), &d.rhsSteps);
  d.lhsNF = l;
  d.rhsNF = r;
  d.lhsClass = lc;
  d.rhsClass = rc;
  if (lc == rc) {
    d.success = true;
    d.byEqualNF = true;
  } else if (d.mask != 0 &&
             ax.theoremGrammar()->admittedPair(d.mask, lc, rc)) {
    d.success = true;
  }
  return d;
}

std::vector<VarietyStep> variety_sequence(
    const std::vector<AlgebraPtr>& algebras, std::size_t n,
    const std::vector<std::string>& varSorts, std::size_t maxClasses) {
  if (n < 1) throw Error("variety sequence needs n >= 1");
  if (varSorts.empty())
    throw Error("variety sequence needs the variable sorts");
  auto sortAt = [&varSorts](std::size_t i) {
    return varSorts.size() == 1 ? varSorts[0] : varSorts.at(i);
  };
  if (varSorts.size() != 1 && varSorts.size() < n)
    throw Error("variable sort list must name one sort or at least n");

  std::vector<VarietyStep> steps;
  std::vector<Formula> prev;
  for (std::size_t i = 1; i <= n; ++i) {
    std::vector<VariableTuple::Entry> entries;
    for (std::size_t j = 0; j < i; ++j)
      entries.push_back({"x" + std::to_string(j + 1), sortAt(j)});
    VariableTuple tuple(entries);

    AxiomSet red = build_axioms(algebras, tuple, maxClasses).reduced();
    VarietyStep step;
    step.tuple = tuple;
    step.axioms = red.universal();

    for (const auto& p : prev) {
      // Extend the previous formula with trailing vacuous universals.
      std::vector<Formula::PrefixEntry> prefix = p.prefix();
      for (std::size_t j = prefix.size(); j < i; ++j)
        prefix.push_back({Quantifier::ForAll, entries[j].name, entries[j].sort});
      Formula extended(prefix, p.lhs(), p.rhs());
      for (const auto& a : step.axioms) {
        if (subsumes(a, extended)) {
          step.subsumedPrevious.emplace_back(p, a);
          break;
        }
      }
    }
    prev = step.axioms;
    steps.push_back(std::move(step));
  }
  return steps;
}

}  // namespace finitax
