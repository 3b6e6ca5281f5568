#include "finitax/grammar.hpp"

#include <algorithm>
#include <functional>
#include <queue>
#include <set>

namespace finitax {

// ---------------------------------------------------------------------------
// Alphabet

Alphabet::Alphabet(std::vector<GrammarSymbol> symbols)
    : symbols_(std::move(symbols)) {
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    if (!index_.emplace(symbols_[i].name, static_cast<int>(i)).second)
      throw Error("duplicate alphabet symbol: " + symbols_[i].name);
  }
}

Alphabet Alphabet::fromSignature(const Signature& sig) {
  std::vector<GrammarSymbol> syms;
  for (const auto& s : sig.symbols())
    syms.push_back({s.name, s.argSorts, s.resultSort, false});
  return Alphabet(std::move(syms));
}

Alphabet Alphabet::extendedWith(std::vector<GrammarSymbol> extra) const {
  std::vector<GrammarSymbol> syms = symbols_;
  for (auto& e : extra) syms.push_back(std::move(e));
  return Alphabet(std::move(syms));
}

int Alphabet::id(const std::string& name) const {
  auto it = index_.find(name);
  return it == index_.end() ? -1 : it->second;
}

// ---------------------------------------------------------------------------
// TreeGrammar

int TreeGrammar::find(const std::string& name) const {
  auto it = ntIndex_.find(name);
  return it == ntIndex_.end() ? -1 : it->second;
}

std::size_t TreeGrammar::size() const {
  std::size_t n = 0;
  for (const auto& r : rules_) n += r.size();
  return n;
}

const std::vector<int>& TreeGrammar::headsOf(
    int sym, const std::vector<int>& args) const {
  static const std::vector<int> kEmpty;
  auto it = altIndex_.find({sym, args});
  return it == altIndex_.end() ? kEmpty : it->second;
}

void TreeGrammar::finalize() {
  ntIndex_.clear();
  for (std::size_t i = 0; i < nts_.size(); ++i)
    ntIndex_.emplace(nts_[i].name, static_cast<int>(i));

  // Chain-down closure per nonterminal.
  const int n = static_cast<int>(nts_.size());
  effective_.assign(n, {});
  for (int i = 0; i < n; ++i) {
    std::vector<bool> seen(n, false);
    std::vector<int> stack{i};
    seen[i] = true;
    std::set<EffectiveAlt> alts;
    while (!stack.empty()) {
      int cur = stack.back();
      stack.pop_back();
      for (const auto& alt : rules_[cur]) {
        if (alt.isChain) {
          if (!seen[alt.chainTarget]) {
            seen[alt.chainTarget] = true;
            stack.push_back(alt.chainTarget);
          }
        } else {
          alts.insert({alt.sym, alt.args});
        }
      }
    }
    effective_[i].assign(alts.begin(), alts.end());
  }

  altIndex_.clear();
  for (int i = 0; i < n; ++i)
    for (const auto& alt : effective_[i])
      altIndex_[{alt.sym, alt.args}].push_back(i);
}

// ---------------------------------------------------------------------------
// GrammarBuilder

GrammarBuilder::GrammarBuilder(Alphabet alphabet) {
  g_.alphabet_ = std::move(alphabet);
}

int GrammarBuilder::addNonterminal(const std::string& name,
                                   const std::string& sort) {
  if (g_.ntIndex_.count(name))
    throw Error("duplicate nonterminal: " + name);
  int id = static_cast<int>(g_.nts_.size());
  g_.nts_.push_back({name, sort});
  g_.rules_.emplace_back();
  g_.ntIndex_.emplace(name, id);
  return id;
}

void GrammarBuilder::addFunc(int head, int sym, std::vector<int> args) {
  const GrammarSymbol& s = g_.alphabet_.at(sym);
  if (s.argSorts.size() != args.size())
    throw ArityMismatch("alternative " + s.name + " expects " +
                        std::to_string(s.argSorts.size()) + " arguments");
  if (s.resultSort != g_.nts_.at(head).sort)
    throw SortMismatch("alternative " + s.name + " has sort " + s.resultSort +
                       " but rule head " + g_.nts_[head].name + " has sort " +
                       g_.nts_[head].sort);
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (g_.nts_.at(args[i]).sort != s.argSorts[i])
      throw SortMismatch("argument " + std::to_string(i + 1) + " of " +
                         s.name + " must have sort " + s.argSorts[i]);
  }
  Alternative alt;
  alt.sym = sym;
  alt.args = std::move(args);
  g_.rules_[head].push_back(std::move(alt));
}

void GrammarBuilder::addFunc(int head, const std::string& sym,
                             std::vector<int> args) {
  int id = g_.alphabet_.id(sym);
  if (id < 0) throw UnknownSymbol(sym);
  addFunc(head, id, std::move(args));
}

void GrammarBuilder::addChain(int head, int target) {
  if (g_.nts_.at(head).sort != g_.nts_.at(target).sort)
    throw SortMismatch("chain from " + g_.nts_[head].name + " to " +
                       g_.nts_[target].name + " crosses sorts");
  Alternative alt;
  alt.isChain = true;
  alt.chainTarget = target;
  g_.rules_[head].push_back(std::move(alt));
}

bool GrammarBuilder::hasAlternative(int head, const Alternative& alt) const {
  const auto& r = g_.rules_.at(head);
  return std::find(r.begin(), r.end(), alt) != r.end();
}

void GrammarBuilder::setStart(int nt) {
  if (nt < 0 || nt >= static_cast<int>(g_.nts_.size()))
    throw Error("start nonterminal out of range");
  g_.start_ = nt;
}

int GrammarBuilder::find(const std::string& name) const {
  auto it = g_.ntIndex_.find(name);
  return it == g_.ntIndex_.end() ? -1 : it->second;
}

TreeGrammar GrammarBuilder::build() {
  if (built_) throw Error("GrammarBuilder::build called twice");
  built_ = true;
  g_.finalize();
  return std::move(g_);
}

// ---------------------------------------------------------------------------
// incorporate / lift

std::string elementNonterminalName(const std::string& elem) {
  return "N" + elem;
}

TreeGrammar incorporate(
    const SignaturePtr& sig,
    const std::map<std::string, std::vector<std::string>>& domains,
    const std::vector<TableFact>& facts) {
  // Elements share one namespace with symbols: names must be globally
  // unique, and an element may coincide only with a constant of its sort.
  std::map<std::string, std::string> elemSort;
  for (const auto& sortName : sig->sorts()) {
    auto it = domains.find(sortName);
    if (it == domains.end()) continue;
    for (const auto& e : it->second) {
      if (!elemSort.emplace(e, sortName).second)
        throw Error("element name '" + e + "' used in more than one sort");
      int symId = sig->symbolId(e);
      if (symId >= 0) {
        const SymbolDecl& d = sig->symbol(symId);
        if (!d.argSorts.empty() || d.resultSort != sortName)
          throw Error("element '" + e +
                      "' collides with a non-constant symbol");
      }
    }
  }

  std::vector<GrammarSymbol> extra;
  for (const auto& sortName : sig->sorts()) {
    auto it = domains.find(sortName);
    if (it == domains.end()) continue;
    for (const auto& e : it->second)
      if (sig->symbolId(e) < 0) extra.push_back({e, {}, sortName, false});
  }
  Alphabet alphabet = Alphabet::fromSignature(*sig).extendedWith(extra);

  GrammarBuilder b(alphabet);
  for (const auto& sortName : sig->sorts()) {
    auto it = domains.find(sortName);
    if (it == domains.end()) continue;
    for (const auto& e : it->second)
      b.addNonterminal(elementNonterminalName(e), sortName);
  }

  // Each element generates at least its own constant form.
  for (const auto& sortName : sig->sorts()) {
    auto it = domains.find(sortName);
    if (it == domains.end()) continue;
    for (const auto& e : it->second)
      b.addFunc(b.find(elementNonterminalName(e)), e, {});
  }

  std::set<std::pair<std::string, std::vector<std::string>>> seen;
  for (const auto& fact : facts) {
    int symId = alphabet.id(fact.symbol);
    if (symId < 0 || sig->symbolId(fact.symbol) < 0)
      throw UnknownSymbol(fact.symbol);
    if (!seen.insert({fact.symbol, fact.args}).second)
      throw Error("duplicate table entry for " + fact.symbol);
    auto resolve = [&](const std::string& e) {
      int nt = b.find(elementNonterminalName(e));
      if (nt < 0) throw UnknownElement(e, "?");
      return nt;
    };
    int head = resolve(fact.result);
    std::vector<int> args;
    args.reserve(fact.args.size());
    for (const auto& a : fact.args) args.push_back(resolve(a));
    Alternative alt;
    alt.sym = symId;
    alt.args = args;
    if (!b.hasAlternative(head, alt))  // shared-name constants only
      b.addFunc(head, symId, std::move(args));
  }
  return b.build();
}

TreeGrammar incorporate(const FiniteAlgebra& alg) {
  std::map<std::string, std::vector<std::string>> domains;
  for (const auto& s : alg.signature()->sorts()) domains[s] = alg.domain(s);
  return incorporate(alg.signature(), domains, alg.facts());
}

TreeGrammar lift(const TreeGrammar& g, const Assignment& sigma) {
  std::vector<GrammarSymbol> vars;
  for (const auto& bnd : sigma.bindings()) {
    if (g.alphabet().id(bnd.var) >= 0)
      throw Error("variable '" + bnd.var + "' collides with a symbol");
    vars.push_back({bnd.var, {}, bnd.sort, true});
  }
  GrammarBuilder b(g.alphabet().extendedWith(vars));
  for (std::size_t i = 0; i < g.nonterminalCount(); ++i)
    b.addNonterminal(g.nt(static_cast<int>(i)).name,
                     g.nt(static_cast<int>(i)).sort);
  for (std::size_t i = 0; i < g.nonterminalCount(); ++i) {
    for (const auto& alt : g.rules(static_cast<int>(i))) {
      if (alt.isChain)
        b.addChain(static_cast<int>(i), alt.chainTarget);
      else
        b.addFunc(static_cast<int>(i), alt.sym, alt.args);
    }
  }
  for (const auto& bnd : sigma.bindings()) {
    int cls = b.find(elementNonterminalName(bnd.elem));
    if (cls < 0) throw UnknownElement(bnd.elem, bnd.sort);
    int symId = b.alphabet().id(bnd.var);
    // The class carries the element's sort; it must match the variable's.
    b.addFunc(cls, symId, {});
  }
  if (g.start()) b.setStart(*g.start());
  return b.build();
}

// ---------------------------------------------------------------------------
// intersect

namespace {

std::string productStateName(const std::vector<const TreeGrammar*>& gs,
                             const std::vector<int>& comps) {
  std::vector<std::string> cores;
  bool allSingle = true;
  for (std::size_t i = 0; i < comps.size(); ++i) {
    std::string name = gs[i]->nt(comps[i]).name;
    if (name.size() > 1 && name[0] == 'N') name = name.substr(1);
    if (name.size() != 1) allSingle = false;
    cores.push_back(std::move(name));
  }
  std::string out = "N";
  for (std::size_t i = 0; i < cores.size(); ++i) {
    if (!allSingle) out += "_";
    out += cores[i];
  }
  return out;
}

}  // namespace

ProductResult intersect_product(const std::vector<const TreeGrammar*>& gs,
                                std::size_t maxStates) {
  if (gs.empty()) throw Error("intersect of zero grammars");
  for (std::size_t i = 1; i < gs.size(); ++i)
    if (!gs[i]->alphabet().sameAs(gs[0]->alphabet()))
      throw AlphabetMismatch("grammars entering a product share no alphabet");
  const Alphabet& alphabet = gs[0]->alphabet();
  const std::size_t n = gs.size();

  std::map<std::vector<int>, int> stateIds;
  std::vector<std::vector<int>> states;
  std::vector<std::string> stateSorts;
  std::map<std::string, std::vector<int>> bySort;
  std::vector<std::set<EffectiveAlt>> alts;

  auto getOrCreate = [&](const std::vector<int>& comps,
                         const std::string& sort) {
    auto it = stateIds.find(comps);
    if (it != stateIds.end()) return it->second;
    if (states.size() >= maxStates)
      throw ResourceLimit("product nonterminals", maxStates);
    int id = static_cast<int>(states.size());
    stateIds.emplace(comps, id);
    states.push_back(comps);
    stateSorts.push_back(sort);
    bySort[sort].push_back(id);
    alts.emplace_back();
    return id;
  };

  // Enumerates head combinations (one head choice per grammar).
  auto forEachCombo = [&](const std::vector<const std::vector<int>*>& headSets,
                          const std::function<void(const std::vector<int>&)>& f) {
    std::vector<std::size_t> idx(headSets.size(), 0);
    std::vector<int> combo(headSets.size());
    while (true) {
      for (std::size_t i = 0; i < headSets.size(); ++i)
        combo[i] = (*headSets[i])[idx[i]];
      f(combo);
      std::size_t i = headSets.size();
      while (i > 0) {
        --i;
        if (++idx[i] < headSets[i]->size()) break;
        idx[i] = 0;
        if (i == 0) return;
      }
    }
  };

  auto applySymbol = [&](int sym, const std::vector<int>& argStates) {
    std::vector<const std::vector<int>*> headSets(n);
    std::vector<int> compArgs(argStates.size());
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t a = 0; a < argStates.size(); ++a)
        compArgs[a] = states[argStates[a]][j];
      const std::vector<int>& heads = gs[j]->headsOf(sym, compArgs);
      if (heads.empty()) return;
      headSets[j] = &heads;
    }
    const std::string& sort = alphabet.at(sym).resultSort;
    forEachCombo(headSets, [&](const std::vector<int>& combo) {
      int id = getOrCreate(combo, sort);
      alts[id].insert({sym, argStates});
    });
  };

  // Nullary pass.
  for (int sym = 0; sym < static_cast<int>(alphabet.size()); ++sym)
    if (alphabet.at(sym).argSorts.empty()) applySymbol(sym, {});

  // Saturation passes; a tuple is reprocessed only while it contains a
  // state created since the previous pass.
  std::map<std::string, std::size_t> processed;
  while (true) {
    std::map<std::string, std::size_t> current;
    for (const auto& [sort, ids] : bySort) current[sort] = ids.size();
    bool anyNew = false;
    for (const auto& [sort, cnt] : current)
      if (cnt != processed[sort]) anyNew = true;
    if (!anyNew) break;

    for (int sym = 0; sym < static_cast<int>(alphabet.size()); ++sym) {
      const GrammarSymbol& decl = alphabet.at(sym);
      const std::size_t arity = decl.argSorts.size();
      if (arity == 0) continue;
      std::vector<const std::vector<int>*> pools(arity);
      std::vector<std::size_t> limits(arity);
      std::vector<std::size_t> oldLimits(arity);
      bool feasible = true;
      for (std::size_t i = 0; i < arity; ++i) {
        auto it = bySort.find(decl.argSorts[i]);
        if (it == bySort.end()) {
          feasible = false;
          break;
        }
        pools[i] = &it->second;
        limits[i] = std::min(current[decl.argSorts[i]], it->second.size());
        oldLimits[i] = processed.count(decl.argSorts[i])
                           ? processed[decl.argSorts[i]]
                           : 0;
      }
      if (!feasible) continue;
      std::vector<std::size_t> idx(arity, 0);
      std::vector<int> argStates(arity);
      bool done = false;
      while (!done) {
        bool allOld = true;
        for (std::size_t i = 0; i < arity; ++i)
          if (idx[i] >= oldLimits[i]) allOld = false;
        if (!allOld) {
          for (std::size_t i = 0; i < arity; ++i)
            argStates[i] = (*pools[i])[idx[i]];
          applySymbol(sym, argStates);
        }
        std::size_t i = arity;
        while (true) {
          if (i == 0) {
            done = true;
            break;
          }
          --i;
          if (++idx[i] < limits[i]) break;
          idx[i] = 0;
        }
      }
    }
    processed = current;
  }

  // Assemble. States keep creation order; used names stay unique.
  GrammarBuilder b(alphabet);
  std::set<std::string> used;
  for (std::size_t i = 0; i < states.size(); ++i) {
    std::string name = productStateName(gs, states[i]);
    while (used.count(name)) name += "_" + std::to_string(i);
    used.insert(name);
    b.addNonterminal(name, stateSorts[i]);
  }
  for (std::size_t i = 0; i < states.size(); ++i)
    for (const auto& alt : alts[i])
      b.addFunc(static_cast<int>(i), alt.sym, alt.args);

  bool allStarts = true;
  std::vector<int> startTuple;
  for (const auto* g : gs) {
    if (!g->start()) {
      allStarts = false;
      break;
    }
    startTuple.push_back(*g->start());
  }
  if (allStarts) {
    auto it = stateIds.find(startTuple);
    if (it != stateIds.end()) b.setStart(it->second);
  }
  return {b.build(), std::move(states)};
}

TreeGrammar intersect(const std::vector<const TreeGrammar*>& gs,
                      std::size_t maxStates) {
  return intersect_product(gs, maxStates).grammar;
}

TreeGrammar intersect(const std::vector<TreeGrammar>& gs,
                      std::size_t maxStates) {
  std::vector<const TreeGrammar*> ptrs;
  for (const auto& g : gs) ptrs.push_back(&g);
  return intersect(ptrs, maxStates);
}

// ---------------------------------------------------------------------------
// restrict / unite / tag / universe

TreeGrammar restrict(const TreeGrammar& g, const Signature& sig,
                     const VariableTuple& vars) {
  std::vector<GrammarSymbol> syms;
  for (const auto& s : sig.symbols())
    syms.push_back({s.name, s.argSorts, s.resultSort, false});
  for (const auto& v : vars.entries())
    syms.push_back({v.name, {}, v.sort, true});
  Alphabet target(syms);

  std::vector<int> remap(g.alphabet().size(), -1);
  for (std::size_t i = 0; i < g.alphabet().size(); ++i) {
    const GrammarSymbol& old = g.alphabet().at(static_cast<int>(i));
    int nid = target.id(old.name);
    if (nid >= 0 && target.at(nid) == old) remap[i] = nid;
  }

  GrammarBuilder b(target);
  for (std::size_t i = 0; i < g.nonterminalCount(); ++i)
    b.addNonterminal(g.nt(static_cast<int>(i)).name,
                     g.nt(static_cast<int>(i)).sort);
  for (std::size_t i = 0; i < g.nonterminalCount(); ++i) {
    for (const auto& alt : g.rules(static_cast<int>(i))) {
      if (alt.isChain)
        b.addChain(static_cast<int>(i), alt.chainTarget);
      else if (remap[alt.sym] >= 0)
        b.addFunc(static_cast<int>(i), remap[alt.sym], alt.args);
    }
  }
  if (g.start()) b.setStart(*g.start());
  return b.build();
}

TreeGrammar unite(const std::vector<const TreeGrammar*>& gs) {
  if (gs.empty()) throw Error("unite of zero grammars");
  for (std::size_t i = 1; i < gs.size(); ++i)
    if (!gs[i]->alphabet().sameAs(gs[0]->alphabet()))
      throw AlphabetMismatch("grammars entering a union share no alphabet");
  std::string sort;
  for (const auto* g : gs) {
    if (!g->start()) throw Error("unite requires a start in every grammar");
    const std::string& s = g->nt(*g->start()).sort;
    if (sort.empty())
      sort = s;
    else if (sort != s)
      throw SortMismatch("united starts have sorts " + sort + " and " + s);
  }

  GrammarBuilder b(gs[0]->alphabet());
  std::set<std::string> used;
  auto freshName = [&used](std::string base) {
    while (used.count(base)) base += "_u";
    used.insert(base);
    return base;
  };
  int startNt = b.addNonterminal(freshName("U"), sort);

  std::vector<std::vector<int>> remap(gs.size());
  for (std::size_t gi = 0; gi < gs.size(); ++gi) {
    const TreeGrammar& g = *gs[gi];
    remap[gi].resize(g.nonterminalCount());
    for (std::size_t i = 0; i < g.nonterminalCount(); ++i) {
      std::string base = g.nt(static_cast<int>(i)).name;
      if (used.count(base)) base += "_" + std::to_string(gi);
      remap[gi][i] =
          b.addNonterminal(freshName(base), g.nt(static_cast<int>(i)).sort);
    }
  }
  for (std::size_t gi = 0; gi < gs.size(); ++gi) {
    const TreeGrammar& g = *gs[gi];
    for (std::size_t i = 0; i < g.nonterminalCount(); ++i) {
      for (const auto& alt : g.rules(static_cast<int>(i))) {
        if (alt.isChain) {
          b.addChain(remap[gi][i], remap[gi][alt.chainTarget]);
        } else {
          std::vector<int> args;
          for (int a : alt.args) args.push_back(remap[gi][a]);
          b.addFunc(remap[gi][i], alt.sym, std::move(args));
        }
      }
    }
  }
  for (std::size_t gi = 0; gi < gs.size(); ++gi)
    b.addChain(startNt, remap[gi][*gs[gi]->start()]);
  b.setStart(startNt);
  return b.build();
}

TreeGrammar unite(const std::vector<TreeGrammar>& gs) {
  std::vector<const TreeGrammar*> ptrs;
  for (const auto& g : gs) ptrs.push_back(&g);
  return unite(ptrs);
}

std::pair<TreeGrammar, int> tag(const TreeGrammar& g, const GrammarSymbol& sym,
                                const std::vector<int>& args,
                                const std::string& ntName) {
  if (sym.argSorts.size() != args.size())
    throw ArityMismatch("tag symbol " + sym.name + " expects " +
                        std::to_string(sym.argSorts.size()) + " arguments");
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] < 0 || args[i] >= static_cast<int>(g.nonterminalCount()))
      throw Error("tag argument out of range");
    if (g.nt(args[i]).sort != sym.argSorts[i])
      throw ArityMismatch("tag argument " + std::to_string(i + 1) +
                          " has sort " + g.nt(args[i]).sort + ", expected " +
                          sym.argSorts[i]);
  }

  Alphabet alphabet = g.alphabet();
  int symId = alphabet.id(sym.name);
  if (symId >= 0) {
    if (!(alphabet.at(symId) == sym))
      throw Error("tag symbol " + sym.name +
                  " conflicts with an existing alphabet entry");
  } else {
    alphabet = alphabet.extendedWith({sym});
    symId = alphabet.id(sym.name);
  }

  GrammarBuilder b(alphabet);
  for (std::size_t i = 0; i < g.nonterminalCount(); ++i)
    b.addNonterminal(g.nt(static_cast<int>(i)).name,
                     g.nt(static_cast<int>(i)).sort);
  for (std::size_t i = 0; i < g.nonterminalCount(); ++i) {
    for (const auto& alt : g.rules(static_cast<int>(i))) {
      if (alt.isChain)
        b.addChain(static_cast<int>(i), alt.chainTarget);
      else
        b.addFunc(static_cast<int>(i), alt.sym, alt.args);
    }
  }
  int fresh = b.addNonterminal(ntName.empty() ? "T" + sym.name : ntName,
                               sym.resultSort);
  b.addFunc(fresh, symId, args);
  if (g.start()) b.setStart(*g.start());
  return {b.build(), fresh};
}

std::string universeNonterminalName(const std::string& sort) {
  return "U_" + sort;
}

TreeGrammar universe(const Signature& sig, const VariableTuple& vars) {
  std::vector<GrammarSymbol> syms;
  for (const auto& s : sig.symbols())
    syms.push_back({s.name, s.argSorts, s.resultSort, false});
  for (const auto& v : vars.entries()) {
    if (!sig.hasSort(v.sort))
      throw SortMismatch("variable " + v.name + " has undeclared sort " +
                         v.sort);
    syms.push_back({v.name, {}, v.sort, true});
  }
  GrammarBuilder b(Alphabet{syms});
  for (const auto& s : sig.sorts()) b.addNonterminal(universeNonterminalName(s), s);
  for (const auto& gsym : syms) {
    int head = b.find(universeNonterminalName(gsym.resultSort));
    std::vector<int> args;
    for (const auto& a : gsym.argSorts)
      args.push_back(b.find(universeNonterminalName(a)));
    b.addFunc(head, gsym.name, std::move(args));
  }
  return b.build();
}

// ---------------------------------------------------------------------------
// Heights

Weights Weights::defaults(const Alphabet& a) {
  Weights w;
  w.bySymbol.resize(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    w.bySymbol[i] = a.at(static_cast<int>(i)).isVariable ? 0 : 1;
  return w;
}

namespace {

height_t altValue(const Alternative& alt, const std::vector<height_t>& h,
                  const Weights& w) {
  if (alt.isChain) return h[alt.chainTarget];
  height_t m = 0;
  for (int a : alt.args) {
    if (h[a] == kInfiniteHeight) return kInfiniteHeight;
    m = std::max(m, h[a]);
  }
  height_t weight = w.of(alt.sym);
  return m > kInfiniteHeight - weight ? kInfiniteHeight : m + weight;
}

}  // namespace

HeightMap heights_naive(const TreeGrammar& g, Weights weights) {
  const int n = static_cast<int>(g.nonterminalCount());
  std::vector<height_t> h(n, kInfiniteHeight);
  bool changed = true;
  while (changed) {
    changed = false;
    for (int i = 0; i < n; ++i) {
      for (const auto& alt : g.rules(i)) {
        height_t v = altValue(alt, h, weights);
        if (v < h[i]) {
          h[i] = v;
          changed = true;
        }
      }
    }
  }
  return {std::move(h), std::move(weights)};
}

HeightMap heights_liquid(const TreeGrammar& g, Weights weights) {
  const int n = static_cast<int>(g.nonterminalCount());
  std::vector<height_t> h(n, kInfiniteHeight);

  struct AltRef {
    int head;
    const Alternative* alt;
    std::size_t remaining;
    height_t maxArg = 0;
  };
  std::vector<AltRef> alts;
  std::vector<std::vector<std::size_t>> occurs(n);  // nt -> alt indices

  using Entry = std::pair<height_t, int>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> queue;

  for (int i = 0; i < n; ++i) {
    for (const auto& alt : g.rules(i)) {
      std::size_t id = alts.size();
      std::size_t deps = alt.isChain ? 1 : alt.args.size();
      alts.push_back({i, &alt, deps});
      if (alt.isChain) {
        occurs[alt.chainTarget].push_back(id);
      } else {
        for (int a : alt.args) occurs[a].push_back(id);
      }
      if (deps == 0) queue.push({weights.of(alt.sym), i});
    }
  }

  while (!queue.empty()) {
    auto [val, nt] = queue.top();
    queue.pop();
    if (h[nt] != kInfiniteHeight) continue;  // already final
    h[nt] = val;
    for (std::size_t ai : occurs[nt]) {
      AltRef& ar = alts[ai];
      ar.maxArg = std::max(ar.maxArg, val);
      if (--ar.remaining == 0) {
        height_t w = ar.alt->isChain ? 0 : weights.of(ar.alt->sym);
        height_t v =
            ar.maxArg > kInfiniteHeight - w ? kInfiniteHeight : ar.maxArg + w;
        if (h[ar.head] == kInfiniteHeight) queue.push({v, ar.head});
      }
    }
  }
  return {std::move(h), std::move(weights)};
}

// ---------------------------------------------------------------------------
// Enumeration

namespace {

Term termFor(const Alphabet& a, int sym, std::vector<Term> args) {
  const GrammarSymbol& s = a.at(sym);
  if (s.isVariable) return Term::var(s.name, s.resultSort);
  return Term::app(s.name, s.resultSort, std::move(args));
}

class Enumerator {
 public:
  Enumerator(const TreeGrammar& g, const HeightMap& hm) : g_(g), hm_(hm) {}

  const std::vector<Term>& exact(int nt, height_t h) {
    auto key = std::make_pair(nt, h);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;

    std::vector<Term> out;
    if (hm_.at(nt) != kInfiniteHeight && h >= hm_.at(nt)) {
      for (const auto& alt : g_.effectiveAlts(nt)) {
        height_t w = hm_.weights.of(alt.sym);
        if (w > h) continue;
        height_t target = h - w;
        if (alt.args.empty()) {
          if (target == 0) out.push_back(termFor(g_.alphabet(), alt.sym, {}));
          continue;
        }
        // Prune alternatives that cannot complete within the target.
        height_t minCompletion = 0;
        bool dead = false;
        for (int a : alt.args) {
          if (hm_.at(a) == kInfiniteHeight) {
            dead = true;
            break;
          }
          minCompletion = std::max(minCompletion, hm_.at(a));
        }
        if (dead || minCompletion > target) continue;

        std::vector<std::vector<std::pair<Term, height_t>>> pools(
            alt.args.size());
        bool empty = false;
        for (std::size_t i = 0; i < alt.args.size(); ++i) {
          for (height_t ah = hm_.at(alt.args[i]); ah <= target; ++ah)
            for (const auto& t : exact(alt.args[i], ah))
              pools[i].push_back({t, ah});
          if (pools[i].empty()) empty = true;
        }
        if (empty) continue;

        std::vector<std::size_t> idx(pools.size(), 0);
        while (true) {
          height_t maxh = 0;
          for (std::size_t i = 0; i < pools.size(); ++i)
            maxh = std::max(maxh, pools[i][idx[i]].second);
          if (maxh == target) {
            std::vector<Term> args;
            args.reserve(pools.size());
            for (std::size_t i = 0; i < pools.size(); ++i)
              args.push_back(pools[i][idx[i]].first);
            out.push_back(termFor(g_.alphabet(), alt.sym, std::move(args)));
          }
          std::size_t i = pools.size();
          bool done = false;
          while (true) {
            if (i == 0) {
              done = true;
              break;
            }
            --i;
            if (++idx[i] < pools[i].size()) break;
            idx[i] = 0;
          }
          if (done) break;
        }
      }
      std::sort(out.begin(), out.end(),
                [](const Term& a, const Term& b) { return Term::compare(a, b) < 0; });
      out.erase(std::unique(out.begin(), out.end()), out.end());
    }
    return memo_.emplace(key, std::move(out)).first->second;
  }

 private:
  const TreeGrammar& g_;
  const HeightMap& hm_;
  std::map<std::pair<int, height_t>, std::vector<Term>> memo_;
};

}  // namespace

std::vector<Term> enumerate_terms(const TreeGrammar& g, int nt,
                                  const HeightMap& hm, height_t maxHeight,
                                  std::size_t maxCount) {
  for (std::size_t i = 0; i < g.alphabet().size(); ++i) {
    const GrammarSymbol& s = g.alphabet().at(static_cast<int>(i));
    if (!s.argSorts.empty() && hm.weights.of(static_cast<int>(i)) == 0)
      throw InvalidWeights("enumeration requires positive weight for " +
                           s.name);
  }
  std::vector<Term> out;
  if (maxCount == 0 || hm.at(nt) == kInfiniteHeight) return out;
  Enumerator e(g, hm);
  for (height_t h = hm.at(nt); h <= maxHeight; ++h) {
    for (const auto& t : e.exact(nt, h)) {
      out.push_back(t);
      if (out.size() >= maxCount) return out;
    }
    if (h == maxHeight) break;  // guard against overflow on ++h
  }
  return out;
}

// ---------------------------------------------------------------------------
// Membership / determinism

namespace {

void classesRec(const TreeGrammar& g, const Term& t, std::vector<int>& out) {
  out.clear();
  int sym = g.alphabet().id(t.head());
  if (sym < 0) return;
  const GrammarSymbol& decl = g.alphabet().at(sym);
  std::size_t arity = t.isVar() ? 0 : t.args().size();
  if (decl.argSorts.size() != arity) return;

  if (arity == 0) {
    out = g.headsOf(sym, {});
    return;
  }
  std::vector<std::vector<int>> argClasses(arity);
  for (std::size_t i = 0; i < arity; ++i) {
    classesRec(g, t.args()[i], argClasses[i]);
    if (argClasses[i].empty()) return;
  }
  std::set<int> heads;
  std::vector<std::size_t> idx(arity, 0);
  std::vector<int> combo(arity);
  while (true) {
    for (std::size_t i = 0; i < arity; ++i) combo[i] = argClasses[i][idx[i]];
    for (int h : g.headsOf(sym, combo)) heads.insert(h);
    std::size_t i = arity;
    bool done = false;
    while (true) {
      if (i == 0) {
        done = true;
        break;
      }
      --i;
      if (++idx[i] < argClasses[i].size()) break;
      idx[i] = 0;
    }
    if (done) break;
  }
  out.assign(heads.begin(), heads.end());
}

}  // namespace

std::vector<int> member_classes(const TreeGrammar& g, const Term& t) {
  std::vector<int> out;
  classesRec(g, t, out);
  return out;
}

bool member(const TreeGrammar& g, int nt, const Term& t) {
  std::vector<int> classes = member_classes(g, t);
  return std::binary_search(classes.begin(), classes.end(), nt);
}

bool is_deterministic(const TreeGrammar& g) {
  std::map<std::pair<int, std::vector<int>>, int> seen;
  for (std::size_t i = 0; i < g.nonterminalCount(); ++i) {
    for (const auto& alt : g.effectiveAlts(static_cast<int>(i))) {
      auto [it, fresh] =
          seen.emplace(std::make_pair(alt.sym, alt.args), static_cast<int>(i));
      if (!fresh && it->second != static_cast<int>(i)) return false;
    }
  }
  return true;
}

}  // namespace finitax
