#pragma once

#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "finitax/algebra.hpp"
#include "finitax/text.hpp"

namespace finitax::testing {

inline std::string readDataFile(const std::string& name) {
  std::ifstream in(std::string(FINITAX_DATA_DIR) + "/" + name,
                   std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline AlgebraPtr loadAlgebra(const std::string& name) {
  return parse_algebra(readDataFile(name), name.substr(0, name.find('.')));
}

// ---------------------------------------------------------------------------
// Brute-force oracles. These live in test code only and avoid the grammar
// machinery on purpose: terms are generated by structural depth and heights
// are recomputed directly.

struct OracleSym {
  std::string name;
  std::vector<std::string> argSorts;
  std::string resultSort;
  bool isVar = false;
};

inline std::vector<OracleSym> oracleSymbols(const Signature& sig,
                                            const VariableTuple& vars) {
  std::vector<OracleSym> out;
  for (const auto& s : sig.symbols())
    out.push_back({s.name, s.argSorts, s.resultSort, false});
  for (const auto& v : vars.entries()) out.push_back({v.name, {}, v.sort, true});
  return out;
}

/// All terms of the sort with structural depth <= depth (leaves at 0).
inline std::vector<Term> termsByDepth(const std::vector<OracleSym>& syms,
                                      const std::string& sort, int depth) {
  std::map<std::pair<std::string, int>, std::vector<Term>> memo;
  std::function<const std::vector<Term>&(const std::string&, int)> gen =
      [&](const std::string& s, int d) -> const std::vector<Term>& {
    auto key = std::make_pair(s, d);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    std::vector<Term> out;
    for (const auto& sym : syms) {
      if (sym.resultSort != s) continue;
      if (sym.argSorts.empty()) {
        out.push_back(sym.isVar ? Term::var(sym.name, sym.resultSort)
                                : Term::app(sym.name, sym.resultSort, {}));
        continue;
      }
      if (d == 0) continue;
      std::vector<const std::vector<Term>*> pools;
      for (const auto& a : sym.argSorts) pools.push_back(&gen(a, d - 1));
      bool any = true;
      for (const auto* p : pools) any = any && !p->empty();
      if (!any) continue;
      std::vector<std::size_t> idx(pools.size(), 0);
      while (true) {
        std::vector<Term> args;
        int maxDepth = 0;
        for (std::size_t i = 0; i < pools.size(); ++i)
          args.push_back((*pools[i])[idx[i]]);
        (void)maxDepth;
        out.push_back(Term::app(sym.name, sym.resultSort, std::move(args)));
        std::size_t i = pools.size();
        bool done = false;
        while (true) {
          if (i == 0) {
            done = true;
            break;
          }
          --i;
          if (++idx[i] < pools[i]->size()) break;
          idx[i] = 0;
        }
        if (done) break;
      }
    }
    return memo.emplace(key, std::move(out)).first->second;
  };
  return gen(sort, depth);
}

/// Generalized height with weight 0 for variables and 1 for symbols.
inline std::uint64_t hgOf(const Term& t) {
  if (t.isVar()) return 0;
  std::uint64_t m = 0;
  for (const auto& a : t.args()) m = std::max(m, hgOf(a));
  return m + 1;
}

/// Independent satisfaction check by assignment enumeration.
inline bool bruteSat(const FiniteAlgebra& alg, const Formula& phi,
                     std::size_t pos = 0,
                     std::vector<Assignment::Binding> bound = {}) {
  if (pos == phi.prefix().size()) {
    Assignment asg(bound);
    return eval(alg, asg, phi.lhs()) == eval(alg, asg, phi.rhs());
  }
  const auto& pe = phi.prefix()[pos];
  bool isAll = pe.q == Quantifier::ForAll;
  for (const auto& e : alg.domain(pe.sort)) {
    auto next = bound;
    next.push_back({pe.var, pe.sort, e});
    bool sub = bruteSat(alg, phi, pos + 1, next);
    if (isAll && !sub) return false;
    if (!isAll && sub) return true;
  }
  return isAll;
}

/// eval extended to terms mentioning domain elements as constants.
inline std::string evalExt(const FiniteAlgebra& alg, const Assignment& asg,
                           const Term& t) {
  if (t.isVar()) {
    const Assignment::Binding* b = asg.find(t.head());
    REQUIRE(b != nullptr);
    return b->elem;
  }
  if (alg.signature()->symbolId(t.head()) < 0) {
    // must be a bare element constant
    REQUIRE(alg.elementIndex(t.sort(), t.head()) >= 0);
    return t.head();
  }
  std::vector<std::string> args;
  for (const auto& a : t.args()) args.push_back(evalExt(alg, asg, a));
  return alg.applyName(t.head(), args);
}

inline Term substitute(const Term& t, const Assignment& asg) {
  if (t.isVar()) {
    const Assignment::Binding* b = asg.find(t.head());
    REQUIRE(b != nullptr);
    return Term::app(b->elem, b->sort, {});
  }
  std::vector<Term> args;
  for (const auto& a : t.args()) args.push_back(substitute(a, asg));
  return Term::app(t.head(), t.sort(), std::move(args));
}

inline VariableTuple xyTuple() {
  return VariableTuple({{"x", "Nat"}, {"y", "Nat"}});
}

inline VariableTuple makeTuple(std::vector<VariableTuple::Entry> entries) {
  return VariableTuple(std::move(entries));
}

/// Canonical prefix form used as a set key in tests.
inline std::string termKey(const Term& t) {
  if (t.isVar() || t.args().empty()) return t.head();
  std::string s = t.head() + "(";
  for (std::size_t i = 0; i < t.args().size(); ++i) {
    if (i) s += ",";
    s += termKey(t.args()[i]);
  }
  return s + ")";
}

}  // namespace finitax::testing
