#include "finitax/barzdin.hpp"

#include <algorithm>
#include <set>

namespace finitax {

BarzdinSample::BarzdinSample(
    SignaturePtr sig, std::map<std::string, std::vector<std::string>> domains,
    std::vector<TableFact> facts, std::string name)
    : sig_(std::move(sig)),
      domains_(std::move(domains)),
      facts_(std::move(facts)),
      name_(std::move(name)) {
  for (const auto& [sortName, dom] : domains_) {
    if (!sig_->hasSort(sortName))
      throw Error("domain given for undeclared sort " + sortName);
    if (dom.empty()) throw Error("empty domain for sort " + sortName);
  }
  std::set<std::pair<std::string, std::vector<std::string>>> seen;
  for (const auto& f : facts_) {
    int id = sig_->symbolId(f.symbol);
    if (id < 0) throw UnknownSymbol(f.symbol);
    const SymbolDecl& decl = sig_->symbol(id);
    if (decl.argSorts.size() != f.args.size())
      throw ArityMismatch("fact for " + f.symbol + " has " +
                          std::to_string(f.args.size()) + " arguments");
    for (std::size_t i = 0; i < f.args.size(); ++i)
      if (!hasElement(decl.argSorts[i], f.args[i]))
        throw UnknownElement(f.args[i], decl.argSorts[i]);
    if (!hasElement(decl.resultSort, f.result))
      throw UnknownElement(f.result, decl.resultSort);
    if (!seen.insert({f.symbol, f.args}).second)
      throw Error("conflicting facts for " + f.symbol);
  }
}

bool BarzdinSample::hasElement(const std::string& sort,
                               const std::string& elem) const {
  auto it = domains_.find(sort);
  if (it == domains_.end()) return false;
  return std::find(it->second.begin(), it->second.end(), elem) !=
         it->second.end();
}

namespace {

std::string targetClassName(const std::vector<std::string>& elems) {
  bool allSingle = true;
  for (const auto& e : elems)
    if (e.size() != 1) allSingle = false;
  std::string out = "N";
  for (const auto& e : elems) {
    if (!allSingle) out += "_";
    out += e;
  }
  return out;
}

}  // namespace

ConsistentTerms consistent_terms(
    const BarzdinSample& sample,
    const std::vector<ExampleConstraint>& constraints,
    const std::string& resultSort, const VariableTuple& vars,
    std::size_t maxStates) {
  const Signature& sig = *sample.signature();
  if (!sig.hasSort(resultSort))
    throw SortMismatch("undeclared result sort " + resultSort);
  for (const auto& v : vars.entries())
    if (!sig.hasSort(v.sort))
      throw SortMismatch("variable " + v.name + " has undeclared sort " +
                         v.sort);

  for (const auto& c : constraints) {
    if (c.assignment.bindings().size() != vars.size())
      throw Error("constraint must assign exactly the tuple variables");
    for (const auto& e : vars.entries()) {
      const Assignment::Binding* b = c.assignment.find(e.name);
      if (!b) throw Error("constraint misses variable " + e.name);
      if (b->sort != e.sort)
        throw SortMismatch("constraint assigns " + e.name + " at sort " +
                           b->sort + ", tuple declares " + e.sort);
      if (!sample.hasElement(e.sort, b->elem))
        throw UnknownElement(b->elem, e.sort);
    }
    if (!sample.hasElement(resultSort, c.target))
      throw UnknownElement(c.target, resultSort);
  }

  if (constraints.empty()) {
    TreeGrammar u = universe(sig, vars);
    int target = u.find(universeNonterminalName(resultSort));
    return {std::move(u), target};
  }

  TreeGrammar g0 = incorporate(sample.signature(), sample.domains(),
                               sample.facts());
  std::vector<TreeGrammar> components;
  components.reserve(constraints.size());
  for (const auto& c : constraints)
    components.push_back(restrict(lift(g0, c.assignment), sig, vars));

  std::vector<const TreeGrammar*> ptrs;
  for (const auto& g : components) ptrs.push_back(&g);
  ProductResult pr = intersect_product(ptrs, maxStates);

  std::vector<int> key;
  key.reserve(constraints.size());
  for (const auto& c : constraints) {
    int nt = components[0].find(elementNonterminalName(c.target));
    key.push_back(nt);
  }
  for (std::size_t i = 0; i < pr.states.size(); ++i)
    if (pr.states[i] == key)
      return {std::move(pr.grammar), static_cast<int>(i)};

  // The class is empty: add an explicit alternative-free nonterminal.
  GrammarBuilder b(pr.grammar.alphabet());
  for (std::size_t i = 0; i < pr.grammar.nonterminalCount(); ++i)
    b.addNonterminal(pr.grammar.nt(static_cast<int>(i)).name,
                     pr.grammar.nt(static_cast<int>(i)).sort);
  for (std::size_t i = 0; i < pr.grammar.nonterminalCount(); ++i)
    for (const auto& alt : pr.grammar.rules(static_cast<int>(i))) {
      if (alt.isChain)
        b.addChain(static_cast<int>(i), alt.chainTarget);
      else
        b.addFunc(static_cast<int>(i), alt.sym, alt.args);
    }
  std::vector<std::string> elems;
  for (const auto& c : constraints) elems.push_back(c.target);
  std::string name = targetClassName(elems);
  while (b.find(name) >= 0) name += "_e";
  int target = b.addNonterminal(name, resultSort);
  return {b.build(), target};
}

std::vector<Term> enumerate_hypotheses(
    const BarzdinSample& sample,
    const std::vector<ExampleConstraint>& constraints,
    const std::string& resultSort, const VariableTuple& vars,
    height_t maxHeight, std::size_t maxCount, std::size_t maxStates) {
  ConsistentTerms ct =
      consistent_terms(sample, constraints, resultSort, vars, maxStates);
  HeightMap hm =
      heights_liquid(ct.grammar, Weights::defaults(ct.grammar.alphabet()));
  return enumerate_terms(ct.grammar, ct.target, hm, maxHeight, maxCount);
}

}  // namespace finitax
