#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "finitax/errors.hpp"

namespace finitax {

class FiniteAlgebra;

/// True iff `s` is a nonempty string over letters, digits, underscore and
/// the operator characters + * < = and the UTF-8 junctors ¬ ∧ ∨ → ↔.
bool is_valid_identifier(const std::string& s);

/// A function symbol with fixed argument and result sorts.
struct SymbolDecl {
  std::string name;
  std::vector<std::string> argSorts;
  std::string resultSort;

  bool operator==(const SymbolDecl& o) const {
    return name == o.name && argSorts == o.argSorts &&
           resultSort == o.resultSort;
  }
};

/// Many-sorted signature: a finite sort set plus function symbols.
/// Symbol names are unique (no overloading). A signature may designate
/// fixed sorts whose interpretation is prescribed by a fixed fragment
/// algebra over exactly the symbols whose sorts all lie in the fixed set.
class Signature {
 public:
  Signature(std::vector<std::string> sorts, std::vector<SymbolDecl> symbols);
  Signature(std::vector<std::string> sorts, std::vector<SymbolDecl> symbols,
            std::vector<std::string> fixedSorts,
            std::shared_ptr<const FiniteAlgebra> fixedFragment);

  const std::vector<std::string>& sorts() const { return sorts_; }
  const std::vector<SymbolDecl>& symbols() const { return symbols_; }
  const std::vector<std::string>& fixedSorts() const { return fixedSorts_; }
  const std::shared_ptr<const FiniteAlgebra>& fixedFragment() const {
    return fixedFragment_;
  }

  bool hasSort(const std::string& name) const;
  bool hasSymbol(const std::string& name) const;
  /// Index into symbols(), or -1 when absent.
  int symbolId(const std::string& name) const;
  const SymbolDecl& symbol(int id) const { return symbols_.at(id); }

  /// Structural equality on sorts and symbols (fixed parts included).
  bool sameAs(const Signature& other) const;

  /// Subset of the symbols whose argument and result sorts all lie in the
  /// fixed sort set.
  std::vector<SymbolDecl> fixedSymbols() const;

 private:
  void index();

  std::vector<std::string> sorts_;
  std::vector<SymbolDecl> symbols_;
  std::vector<std::string> fixedSorts_;
  std::shared_ptr<const FiniteAlgebra> fixedFragment_;
  std::unordered_map<std::string, int> symbolIndex_;
  std::unordered_map<std::string, int> sortIndex_;
};

using SignaturePtr = std::shared_ptr<const Signature>;

/// Immutable well-sorted term: a variable or a symbol application.
/// Nodes are shared; copying a Term is cheap.
class Term {
 public:
  Term() = default;

  static Term var(std::string name, std::string sort);
  /// Unchecked application; `sort` is the result sort.
  static Term app(std::string symbol, std::string sort, std::vector<Term> args);
  /// Checked application: validates arity and argument sorts against `sig`.
  static Term app(const Signature& sig, const std::string& symbol,
                  std::vector<Term> args);

  bool valid() const { return node_ != nullptr; }
  bool isVar() const;
  const std::string& head() const;  // variable name or symbol name
  const std::string& sort() const;
  const std::vector<Term>& args() const;
  std::size_t size() const;  // node count

  bool operator==(const Term& o) const;
  bool operator!=(const Term& o) const { return !(*this == o); }

  /// Total order: node count first, then lexicographic on head symbol
  /// names and argument positions left to right.
  static int compare(const Term& a, const Term& b);
  bool operator<(const Term& o) const { return compare(*this, o) < 0; }

  std::size_t hash() const;

  /// Collects variable names in first-occurrence order.
  std::vector<std::string> variables() const;
  bool mentionsVariable(const std::string& name) const;

 private:
  struct Node;
  explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

struct TermHash {
  std::size_t operator()(const Term& t) const { return t.hash(); }
};

/// Ordered tuple of distinct sorted variables.
class VariableTuple {
 public:
  struct Entry {
    std::string name;
    std::string sort;
    bool operator==(const Entry& o) const {
      return name == o.name && sort == o.sort;
    }
  };

  VariableTuple() = default;
  explicit VariableTuple(std::vector<Entry> entries);

  const std::vector<Entry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  const Entry& at(std::size_t i) const { return entries_.at(i); }
  /// Position of `name`, or -1.
  int indexOf(const std::string& name) const;
  bool operator==(const VariableTuple& o) const {
    return entries_ == o.entries_;
  }

 private:
  std::vector<Entry> entries_;
};

enum class Quantifier { ForAll, Exists };

/// Closed prefixed equation: quantifier prefix in tuple order over one
/// equation between terms of a common sort.
class Formula {
 public:
  struct PrefixEntry {
    Quantifier q;
    std::string var;
    std::string sort;
  };

  Formula(std::vector<PrefixEntry> prefix, Term lhs, Term rhs);

  const std::vector<PrefixEntry>& prefix() const { return prefix_; }
  const Term& lhs() const { return lhs_; }
  const Term& rhs() const { return rhs_; }
  const std::string& eqSort() const { return eqSort_; }
  VariableTuple tuple() const;
  /// Bitmask over prefix positions, bit i set when entry i is ∃.
  std::uint32_t prefixMask() const;

  bool operator==(const Formula& o) const;

 private:
  std::vector<PrefixEntry> prefix_;
  Term lhs_;
  Term rhs_;
  std::string eqSort_;
};

/// Sort-respecting map from variables to domain elements.
class Assignment {
 public:
  struct Binding {
    std::string var;
    std::string sort;
    std::string elem;
  };

  Assignment() = default;
  explicit Assignment(std::vector<Binding> bindings);

  const std::vector<Binding>& bindings() const { return bindings_; }
  /// Element bound to `var`, or nullptr.
  const Binding* find(const std::string& var) const;
  bool empty() const { return bindings_.empty(); }

 private:
  std::vector<Binding> bindings_;
};

/// One defining table row f(a1,...,an) = a.
struct TableFact {
  std::string symbol;
  std::vector<std::string> args;
  std::string result;
};

/// Finite many-sorted algebra in table form: nonempty finite domains per
/// sort and one defining entry per symbol and argument tuple.
class FiniteAlgebra {
 public:
  FiniteAlgebra(SignaturePtr sig,
                std::map<std::string, std::vector<std::string>> domains,
                std::vector<TableFact> facts, std::string name = "");

  const SignaturePtr& signature() const { return sig_; }
  const std::string& name() const { return name_; }

  const std::vector<std::string>& domain(const std::string& sort) const;
  /// Index of `elem` within its sort's domain, or -1.
  int elementIndex(const std::string& sort, const std::string& elem) const;

  /// Table lookup by element indices; `args` aligned with the symbol's
  /// argument sorts.
  int apply(int symbolId, const std::vector<int>& args) const;
  const std::string& applyName(const std::string& symbol,
                               const std::vector<std::string>& args) const;

  /// All table rows, in symbol order then row-major argument order.
  std::vector<TableFact> facts() const;
  std::size_t tableEntryCount() const;

  bool sameDomainsAndTables(const FiniteAlgebra& other) const;

 private:
  friend int evalIndex(const FiniteAlgebra&, const Assignment&, const Term&);

  SignaturePtr sig_;
  std::vector<std::vector<std::string>> domains_;  // by sort id
  std::vector<std::unordered_map<std::string, int>> elemIndex_;
  std::vector<std::vector<int>> tables_;  // by symbol id, mixed radix
  std::vector<int> sortIds_;              // by symbol id: result sort
  std::string name_;

  int sortId(const std::string& sort) const;
};

/// Evaluates `t` under `asg` by bottom-up table lookup; returns the element
/// name. Throws UnknownSymbol / UnboundVariable.
std::string eval(const FiniteAlgebra& alg, const Assignment& asg,
                 const Term& t);
/// Same, returning the element's index in its sort domain.
int evalIndex(const FiniteAlgebra& alg, const Assignment& asg, const Term& t);

/// Decides validity of `phi` in `alg`: recursion over the prefix, universal
/// positions as conjunction over the sort domain, existential positions as
/// disjunction, identity comparison at the leaves.
bool sat(const FiniteAlgebra& alg, const Formula& phi);

/// Like sat, but on failure also yields a falsifying assignment for the
/// leading universal variables along a failing branch.
bool sat_witness(const FiniteAlgebra& alg, const Formula& phi,
                 Assignment* witness);

/// True iff every formula holds in every algebra. Throws SignatureMismatch
/// when the algebras do not share one signature.
bool sat_class(const std::vector<std::shared_ptr<const FiniteAlgebra>>& algs,
               const std::vector<Formula>& theory);

/// True iff the algebra's fixed-sort domains and tables coincide with its
/// signature's fixed fragment; with no fixed sorts every algebra is admitted.
bool check_admitted(const FiniteAlgebra& alg);

using AlgebraPtr = std::shared_ptr<const FiniteAlgebra>;

}  // namespace finitax
