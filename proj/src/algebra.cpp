#include "finitax/algebra.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

namespace finitax {

namespace {

// UTF-8 sequences of the permitted junctor characters.
const char* kJunctors[] = {"¬", "∧", "∨", "→", "↔"};

bool isAsciiIdentChar(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9') || c == '+' || c == '*' || c == '<' ||
         c == '=' || c == '_';
}

std::string joinTuple(const std::vector<std::string>& parts) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) os << ",";
    os << parts[i];
  }
  os << ")";
  return os.str();
}

}  // namespace

bool is_valid_identifier(const std::string& s) {
  if (s.empty()) return false;
  std::size_t i = 0;
  while (i < s.size()) {
    if (isAsciiIdentChar(s[i])) {
      ++i;
      continue;
    }
    bool matched = false;
    for (const char* j : kJunctors) {
      std::size_t len = std::char_traits<char>::length(j);
      if (s.compare(i, len, j) == 0) {
        i += len;
        matched = true;
        break;
      }
    }
    if (!matched) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Signature

Signature::Signature(std::vector<std::string> sorts,
                     std::vector<SymbolDecl> symbols)
    : Signature(std::move(sorts), std::move(symbols), {}, nullptr) {}

Signature::Signature(std::vector<std::string> sorts,
                     std::vector<SymbolDecl> symbols,
                     std::vector<std::string> fixedSorts,
                     std::shared_ptr<const FiniteAlgebra> fixedFragment)
    : sorts_(std::move(sorts)),
      symbols_(std::move(symbols)),
      fixedSorts_(std::move(fixedSorts)),
      fixedFragment_(std::move(fixedFragment)) {
  index();
  for (const auto& s : sorts_) {
    if (!is_valid_identifier(s)) throw Error("invalid sort name: " + s);
  }
  for (const auto& sym : symbols_) {
    if (!is_valid_identifier(sym.name))
      throw Error("invalid symbol name: " + sym.name);
    if (!hasSort(sym.resultSort))
      throw Error("symbol " + sym.name + " has undeclared result sort " +
                  sym.resultSort);
    for (const auto& a : sym.argSorts) {
      if (!hasSort(a))
        throw Error("symbol " + sym.name + " has undeclared argument sort " +
                    a);
    }
  }
  for (const auto& fs : fixedSorts_) {
    if (!hasSort(fs)) throw Error("undeclared fixed sort " + fs);
  }
  if (!fixedSorts_.empty() && !fixedFragment_)
    throw Error("fixed sorts declared without a fixed fragment");
}

void Signature::index() {
  for (std::size_t i = 0; i < sorts_.size(); ++i) {
    if (!sortIndex_.emplace(sorts_[i], static_cast<int>(i)).second)
      throw Error("duplicate sort: " + sorts_[i]);
  }
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    if (!symbolIndex_.emplace(symbols_[i].name, static_cast<int>(i)).second)
      throw Error("duplicate symbol: " + symbols_[i].name);
  }
}

bool Signature::hasSort(const std::string& name) const {
  return sortIndex_.count(name) != 0;
}

bool Signature::hasSymbol(const std::string& name) const {
  return symbolIndex_.count(name) != 0;
}

int Signature::symbolId(const std::string& name) const {
  auto it = symbolIndex_.find(name);
  return it == symbolIndex_.end() ? -1 : it->second;
}

bool Signature::sameAs(const Signature& other) const {
  return sorts_ == other.sorts_ && symbols_ == other.symbols_ &&
         fixedSorts_ == other.fixedSorts_;
}

std::vector<SymbolDecl> Signature::fixedSymbols() const {
  std::set<std::string> fixed(fixedSorts_.begin(), fixedSorts_.end());
  std::vector<SymbolDecl> out;
  for (const auto& sym : symbols_) {
    if (!fixed.count(sym.resultSort)) continue;
    bool all = true;
    for (const auto& a : sym.argSorts)
      if (!fixed.count(a)) all = false;
    if (all) out.push_back(sym);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Term

struct Term::Node {
  bool isVar;
  std::string name;
  std::string sort;
  std::vector<Term> args;
  std::size_t size;
  std::size_t hashValue;
};

namespace {
std::size_t combineHash(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}
}  // namespace

Term Term::var(std::string name, std::string sort) {
  auto n = std::make_shared<Node>();
  n->isVar = true;
  n->name = std::move(name);
  n->sort = std::move(sort);
  n->size = 1;
  n->hashValue = combineHash(std::hash<std::string>{}(n->name), 1);
  return Term(std::move(n));
}

Term Term::app(std::string symbol, std::string sort, std::vector<Term> args) {
  auto n = std::make_shared<Node>();
  n->isVar = false;
  n->name = std::move(symbol);
  n->sort = std::move(sort);
  n->args = std::move(args);
  n->size = 1;
  std::size_t h = std::hash<std::string>{}(n->name);
  for (const auto& a : n->args) {
    n->size += a.size();
    h = combineHash(h, a.hash());
  }
  n->hashValue = h;
  return Term(std::move(n));
}

Term Term::app(const Signature& sig, const std::string& symbol,
               std::vector<Term> args) {
  int id = sig.symbolId(symbol);
  if (id < 0) throw UnknownSymbol(symbol);
  const SymbolDecl& decl = sig.symbol(id);
  if (decl.argSorts.size() != args.size())
    throw ArityMismatch("symbol " + symbol + " expects " +
                        std::to_string(decl.argSorts.size()) + " arguments");
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i].sort() != decl.argSorts[i])
      throw SortMismatch("argument " + std::to_string(i + 1) + " of " +
                         symbol + " has sort " + args[i].sort() +
                         ", expected " + decl.argSorts[i]);
  }
  return app(symbol, decl.resultSort, std::move(args));
}

bool Term::isVar() const { return node_->isVar; }
const std::string& Term::head() const { return node_->name; }
const std::string& Term::sort() const { return node_->sort; }
const std::vector<Term>& Term::args() const { return node_->args; }
std::size_t Term::size() const { return node_->size; }
std::size_t Term::hash() const { return node_->hashValue; }

bool Term::operator==(const Term& o) const {
  if (node_ == o.node_) return true;
  if (!node_ || !o.node_) return false;
  if (node_->hashValue != o.node_->hashValue) return false;
  if (node_->isVar != o.node_->isVar || node_->name != o.node_->name)
    return false;
  if (node_->args.size() != o.node_->args.size()) return false;
  for (std::size_t i = 0; i < node_->args.size(); ++i)
    if (!(node_->args[i] == o.node_->args[i])) return false;
  return true;
}

int Term::compare(const Term& a, const Term& b) {
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  if (int c = a.head().compare(b.head()); c != 0) return c < 0 ? -1 : 1;
  const auto& as = a.args();
  const auto& bs = b.args();
  if (as.size() != bs.size()) return as.size() < bs.size() ? -1 : 1;
  for (std::size_t i = 0; i < as.size(); ++i)
    if (int c = compare(as[i], bs[i]); c != 0) return c;
  return 0;
}

std::vector<std::string> Term::variables() const {
  std::vector<std::string> out;
  std::function<void(const Term&)> walk = [&](const Term& t) {
    if (t.isVar()) {
      if (std::find(out.begin(), out.end(), t.head()) == out.end())
        out.push_back(t.head());
    } else {
      for (const auto& a : t.args()) walk(a);
    }
  };
  walk(*this);
  return out;
}

bool Term::mentionsVariable(const std::string& name) const {
  if (isVar()) return head() == name;
  for (const auto& a : args())
    if (a.mentionsVariable(name)) return true;
  return false;
}

// ---------------------------------------------------------------------------
// VariableTuple / Formula / Assignment

VariableTuple::VariableTuple(std::vector<Entry> entries)
    : entries_(std::move(entries)) {
  for (std::size_t i = 0; i < entries_.size(); ++i)
    for (std::size_t j = i + 1; j < entries_.size(); ++j)
      if (entries_[i].name == entries_[j].name)
        throw Error("duplicate tuple variable: " + entries_[i].name);
}

int VariableTuple::indexOf(const std::string& name) const {
  for (std::size_t i = 0; i < entries_.size(); ++i)
    if (entries_[i].name == name) return static_cast<int>(i);
  return -1;
}

Formula::Formula(std::vector<PrefixEntry> prefix, Term lhs, Term rhs)
    : prefix_(std::move(prefix)), lhs_(std::move(lhs)), rhs_(std::move(rhs)) {
  if (lhs_.sort() != rhs_.sort())
    throw SortMismatch("equation sides have sorts " + lhs_.sort() + " and " +
                       rhs_.sort());
  eqSort_ = lhs_.sort();
  std::vector<VariableTuple::Entry> entries;
  for (const auto& p : prefix_) entries.push_back({p.var, p.sort});
  VariableTuple check(std::move(entries));  // rejects duplicates
  for (const auto& v : lhs_.variables())
    if (check.indexOf(v) < 0) throw Error("free variable not in prefix: " + v);
  for (const auto& v : rhs_.variables())
    if (check.indexOf(v) < 0) throw Error("free variable not in prefix: " + v);
}

VariableTuple Formula::tuple() const {
  std::vector<VariableTuple::Entry> entries;
  for (const auto& p : prefix_) entries.push_back({p.var, p.sort});
  return VariableTuple(std::move(entries));
}

std::uint32_t Formula::prefixMask() const {
  std::uint32_t m = 0;
  for (std::size_t i = 0; i < prefix_.size(); ++i)
    if (prefix_[i].q == Quantifier::Exists) m |= (1u << i);
  return m;
}

bool Formula::operator==(const Formula& o) const {
  if (prefix_.size() != o.prefix_.size()) return false;
  for (std::size_t i = 0; i < prefix_.size(); ++i) {
    if (prefix_[i].q != o.prefix_[i].q || prefix_[i].var != o.prefix_[i].var ||
        prefix_[i].sort != o.prefix_[i].sort)
      return false;
  }
  return lhs_ == o.lhs_ && rhs_ == o.rhs_;
}

Assignment::Assignment(std::vector<Binding> bindings)
    : bindings_(std::move(bindings)) {
  for (std::size_t i = 0; i < bindings_.size(); ++i)
    for (std::size_t j = i + 1; j < bindings_.size(); ++j)
      if (bindings_[i].var == bindings_[j].var)
        throw Error("duplicate assignment for " + bindings_[i].var);
}

const Assignment::Binding* Assignment::find(const std::string& var) const {
  for (const auto& b : bindings_)
    if (b.var == var) return &b;
  return nullptr;
}

// ---------------------------------------------------------------------------
// FiniteAlgebra

FiniteAlgebra::FiniteAlgebra(
    SignaturePtr sig, std::map<std::string, std::vector<std::string>> domains,
    std::vector<TableFact> facts, std::string name)
    : sig_(std::move(sig)), name_(std::move(name)) {
  const auto& sorts = sig_->sorts();
  domains_.resize(sorts.size());
  elemIndex_.resize(sorts.size());
  for (auto& [sortName, elems] : domains) {
    if (!sig_->hasSort(sortName))
      throw Error("domain given for undeclared sort " + sortName);
    int sid = sortId(sortName);
    domains_[sid] = elems;
  }
  // Elements and symbols share one namespace: element names are globally
  // unique, and may coincide only with a constant of their own sort.
  std::unordered_map<std::string, std::size_t> elemSort;
  for (std::size_t s = 0; s < sorts.size(); ++s) {
    if (domains_[s].empty())
      throw Error("empty domain for sort " + sorts[s]);
    for (std::size_t i = 0; i < domains_[s].size(); ++i) {
      const std::string& e = domains_[s][i];
      if (!is_valid_identifier(e)) throw Error("invalid element name: " + e);
      if (!elemIndex_[s].emplace(e, static_cast<int>(i)).second)
        throw Error("duplicate element '" + e + "' in sort " + sorts[s]);
      if (!elemSort.emplace(e, s).second)
        throw Error("element name '" + e + "' used in more than one sort");
      int f = sig_->symbolId(e);
      if (f >= 0) {
        const SymbolDecl& d = sig_->symbol(f);
        if (!d.argSorts.empty() || d.resultSort != sorts[s])
          throw Error("element '" + e +
                      "' collides with a non-constant symbol");
      }
    }
  }

  // Allocate one slot per symbol and argument tuple, mixed radix.
  const auto& symbols = sig_->symbols();
  tables_.resize(symbols.size());
  sortIds_.resize(symbols.size());
  for (std::size_t f = 0; f < symbols.size(); ++f) {
    std::size_t rows = 1;
    for (const auto& a : symbols[f].argSorts) rows *= domains_[sortId(a)].size();
    tables_[f].assign(rows, -1);
    sortIds_[f] = sortId(symbols[f].resultSort);
  }

  for (const auto& fact : facts) {
    int f = sig_->symbolId(fact.symbol);
    if (f < 0) throw UnknownSymbol(fact.symbol);
    const SymbolDecl& decl = sig_->symbol(f);
    if (fact.args.size() != decl.argSorts.size())
      throw ArityMismatch("table entry for " + fact.symbol + " has " +
                          std::to_string(fact.args.size()) + " arguments");
    std::size_t slot = 0;
    for (std::size_t i = 0; i < fact.args.size(); ++i) {
      int sid = sortId(decl.argSorts[i]);
      int e = elementIndex(decl.argSorts[i], fact.args[i]);
      if (e < 0) throw UnknownElement(fact.args[i], decl.argSorts[i]);
      slot = slot * domains_[sid].size() + static_cast<std::size_t>(e);
    }
    int r = elementIndex(decl.resultSort, fact.result);
    if (r < 0) throw UnknownElement(fact.result, decl.resultSort);
    if (tables_[f][slot] != -1)
      throw Error("duplicate table entry for " + fact.symbol +
                  joinTuple(fact.args));
    tables_[f][slot] = r;
  }

  // Totality: every slot filled.
  for (std::size_t f = 0; f < symbols.size(); ++f) {
    for (std::size_t slot = 0; slot < tables_[f].size(); ++slot) {
      if (tables_[f][slot] != -1) continue;
      // Decode the missing tuple for the message.
      std::vector<std::string> parts(symbols[f].argSorts.size());
      std::size_t rest = slot;
      for (std::size_t i = symbols[f].argSorts.size(); i-- > 0;) {
        int sid = sortId(symbols[f].argSorts[i]);
        std::size_t n = domains_[sid].size();
        parts[i] = domains_[sid][rest % n];
        rest /= n;
      }
      throw TotalityError(symbols[f].name, joinTuple(parts));
    }
  }

  // A constant sharing its name with a domain element of its result sort
  // must denote that element.
  for (std::size_t f = 0; f < symbols.size(); ++f) {
    if (!symbols[f].argSorts.empty()) continue;
    int sid = sortIds_[f];
    auto it = elemIndex_[sid].find(symbols[f].name);
    if (it != elemIndex_[sid].end() && tables_[f][0] != it->second)
      throw Error("constant " + symbols[f].name +
                  " shares its name with a domain element but denotes " +
                  domains_[sid][tables_[f][0]]);
  }
}

int FiniteAlgebra::sortId(const std::string& sort) const {
  const auto& sorts = sig_->sorts();
  for (std::size_t i = 0; i < sorts.size(); ++i)
    if (sorts[i] == sort) return static_cast<int>(i);
  throw Error("undeclared sort " + sort);
}

const std::vector<std::string>& FiniteAlgebra::domain(
    const std::string& sort) const {
  return domains_[sortId(sort)];
}

int FiniteAlgebra::elementIndex(const std::string& sort,
                                const std::string& elem) const {
  const auto& idx = elemIndex_[sortId(sort)];
  auto it = idx.find(elem);
  return it == idx.end() ? -1 : it->second;
}

int FiniteAlgebra::apply(int symbolId, const std::vector<int>& args) const {
  const SymbolDecl& decl = sig_->symbol(symbolId);
  std::size_t slot = 0;
  for (std::size_t i = 0; i < args.size(); ++i) {
    std::size_t n = domains_[sortId(decl.argSorts[i])].size();
    slot = slot * n + static_cast<std::size_t>(args[i]);
  }
  return tables_[symbolId][slot];
}

const std::string& FiniteAlgebra::applyName(
    const std::string& symbol, const std::vector<std::string>& args) const {
  int f = sig_->symbolId(symbol);
  if (f < 0) throw UnknownSymbol(symbol);
  const SymbolDecl& decl = sig_->symbol(f);
  if (args.size() != decl.argSorts.size())
    throw ArityMismatch("symbol " + symbol + " expects " +
                        std::to_string(decl.argSorts.size()) + " arguments");
  std::vector<int> ids(args.size());
  for (std::size_t i = 0; i < args.size(); ++i) {
    ids[i] = elementIndex(decl.argSorts[i], args[i]);
    if (ids[i] < 0) throw UnknownElement(args[i], decl.argSorts[i]);
  }
  int r = apply(f, ids);
  return domains_[sortIds_[f]][r];
}

std::vector<TableFact> FiniteAlgebra::facts() const {
  std::vector<TableFact> out;
  const auto& symbols = sig_->symbols();
  for (std::size_t f = 0; f < symbols.size(); ++f) {
    const auto& decl = symbols[f];
    std::vector<int> args(decl.argSorts.size(), 0);
    for (std::size_t slot = 0; slot < tables_[f].size(); ++slot) {
      std::size_t rest = slot;
      std::vector<std::string> names(decl.argSorts.size());
      for (std::size_t i = decl.argSorts.size(); i-- > 0;) {
        int sid = sortId(decl.argSorts[i]);
        std::size_t n = domains_[sid].size();
        names[i] = domains_[sid][rest % n];
        rest /= n;
      }
      out.push_back({decl.name, std::move(names),
                     domains_[sortIds_[f]][tables_[f][slot]]});
    }
  }
  return out;
}

std::size_t FiniteAlgebra::tableEntryCount() const {
  std::size_t n = 0;
  for (const auto& t : tables_) n += t.size();
  return n;
}

bool FiniteAlgebra::sameDomainsAndTables(const FiniteAlgebra& other) const {
  if (!sig_->sameAs(*other.sig_)) return false;
  return domains_ == other.domains_ && tables_ == other.tables_;
}

// ---------------------------------------------------------------------------
// eval / sat

int evalIndex(const FiniteAlgebra& alg, const Assignment& asg, const Term& t) {
  if (t.isVar()) {
    const Assignment::Binding* b = asg.find(t.head());
    if (!b) throw UnboundVariable(t.head());
    int e = alg.elementIndex(b->sort, b->elem);
    if (e < 0) throw UnknownElement(b->elem, b->sort);
    return e;
  }
  int f = alg.signature()->symbolId(t.head());
  if (f < 0) throw UnknownSymbol(t.head());
  std::vector<int> args;
  args.reserve(t.args().size());
  for (const auto& a : t.args()) args.push_back(evalIndex(alg, asg, a));
  return alg.apply(f, args);
}

std::string eval(const FiniteAlgebra& alg, const Assignment& asg,
                 const Term& t) {
  int e = evalIndex(alg, asg, t);
  return alg.domain(t.sort())[e];
}

namespace {

// Recursive prefix walk; `bindings` grows one entry per tuple position.
// On failure, fills `witness` with the universal bindings of a failing
// branch (existential positions are left out).
bool satRec(const FiniteAlgebra& alg, const Formula& phi, std::size_t pos,
            std::vector<Assignment::Binding>& bindings,
            std::vector<Assignment::Binding>* witness) {
  const auto& prefix = phi.prefix();
  if (pos == prefix.size()) {
    Assignment asg(bindings);
    return evalIndex(alg, asg, phi.lhs()) == evalIndex(alg, asg, phi.rhs());
  }
  const auto& entry = prefix[pos];
  const auto& dom = alg.domain(entry.sort);
  if (entry.q == Quantifier::ForAll) {
    for (const auto& e : dom) {
      bindings.push_back({entry.var, entry.sort, e});
      bool ok = satRec(alg, phi, pos + 1, bindings, witness);
      if (!ok) {
        if (witness) witness->insert(witness->begin(), bindings.back());
        bindings.pop_back();
        return false;
      }
      bindings.pop_back();
    }
    return true;
  }
  for (const auto& e : dom) {
    bindings.push_back({entry.var, entry.sort, e});
    bool ok = satRec(alg, phi, pos + 1, bindings, nullptr);
    bindings.pop_back();
    if (ok) return true;
  }
  return false;
}

}  // namespace

bool sat(const FiniteAlgebra& alg, const Formula& phi) {
  std::vector<Assignment::Binding> bindings;
  return satRec(alg, phi, 0, bindings, nullptr);
}

bool sat_witness(const FiniteAlgebra& alg, const Formula& phi,
                 Assignment* witness) {
  std::vector<Assignment::Binding> bindings;
  std::vector<Assignment::Binding> w;
  bool ok = satRec(alg, phi, 0, bindings, &w);
  if (!ok && witness) *witness = Assignment(std::move(w));
  return ok;
}

bool sat_class(const std::vector<AlgebraPtr>& algs,
               const std::vector<Formula>& theory) {
  for (std::size_t i = 1; i < algs.size(); ++i) {
    if (!algs[i]->signature()->sameAs(*algs[0]->signature()))
      throw SignatureMismatch("algebras " + algs[0]->name() + " and " +
                              algs[i]->name() +
                              " have different signatures");
  }
  for (const auto& a : algs)
    for (const auto& phi : theory)
      if (!sat(*a, phi)) return false;
  return true;
}

bool check_admitted(const FiniteAlgebra& alg) {
  const Signature& sig = *alg.signature();
  if (sig.fixedSorts().empty()) return true;
  const FiniteAlgebra& frag = *sig.fixedFragment();
  for (const auto& sort : sig.fixedSorts()) {
    const auto& d = alg.domain(sort);
    const auto& fd = frag.domain(sort);
    std::set<std::string> ds(d.begin(), d.end());
    std::set<std::string> fds(fd.begin(), fd.end());
    if (ds != fds) return false;
  }
  for (const auto& sym : sig.fixedSymbols()) {
    // Compare entry by entry over all argument tuples.
    std::vector<std::vector<std::string>> doms;
    for (const auto& a : sym.argSorts) doms.push_back(alg.domain(a));
    std::size_t total = 1;
    for (const auto& d : doms) total *= d.size();
    for (std::size_t slot = 0; slot < total; ++slot) {
      std::vector<std::string> args(doms.size());
      std::size_t rest = slot;
      for (std::size_t i = doms.size(); i-- > 0;) {
        args[i] = doms[i][rest % doms[i].size()];
        rest /= doms[i].size();
      }
      if (alg.applyName(sym.name, args) != frag.applyName(sym.name, args))
        return false;
    }
  }
  return true;
}

}  // namespace finitax
