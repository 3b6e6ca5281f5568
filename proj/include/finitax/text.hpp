#pragma once

#include <map>
#include <string>
#include <vector>

#include "finitax/algebra.hpp"
#include "finitax/grammar.hpp"

namespace finitax {

/// Parses the line-oriented algebra format:
///
///   sort Nat
///   elems Nat: 0, 1
///   op 0 : -> Nat
///   op + : Nat, Nat -> Nat
///   table 0 = 0
///   table + (0,0) = 0
///
/// `#` starts a comment. An optional `bool-sort B` line fixes sort B to the
/// two-element Boolean algebra; table entries for its junctors and the
/// true/false constants are filled in automatically and checked when given
/// explicitly. Tables must be total.
AlgebraPtr parse_algebra(const std::string& text, const std::string& name = "");

/// Partially specified operation facts in the algebra file format; tables
/// need not be total.
struct SampleData {
  SignaturePtr signature;
  std::map<std::string, std::vector<std::string>> domains;
  std::vector<TableFact> facts;
  std::string name;
};

SampleData parse_sample(const std::string& text, const std::string& name = "");

/// Parses `x:Nat,y:Nat`.
VariableTuple parse_var_tuple(const std::string& text, const Signature& sig);

/// Parses a formula such as `forall x exists y : x + y = 0`. Variable sorts
/// are inferred from symbol positions; `=_Sort` pins the equation sort when
/// both sides are bare variables.
Formula parse_formula(const std::string& text, const Signature& sig);

/// Like above but against a fixed tuple: the prefix must list tuple
/// variables in tuple order; omitted variables become universal.
Formula parse_formula(const std::string& text, const Signature& sig,
                      const VariableTuple& tuple);

/// One formula per non-comment line.
std::vector<Formula> parse_theory(const std::string& text,
                                  const Signature& sig);

/// Constraint lines of the form `given x=0, y=1 expect 1`.
struct ConstraintLine {
  std::vector<std::pair<std::string, std::string>> given;  // var, element
  std::string expect;
};

std::vector<ConstraintLine> parse_constraints(const std::string& text);

std::string format_term(const Term& t);
/// Full prefix, equation infix; `=_S` only when neither side pins the sort.
std::string format_formula(const Formula& f);
/// Same but with vacuous quantifiers dropped.
std::string format_formula_short(const Formula& f);
std::string format_assignment(const Assignment& a);

/// Grammar dump: `sort N : S` headers, optional `start N`, then one
/// `N ::= alt | alt` line per nonterminal. Binary symbols print infix.
std::string dump_grammar(const TreeGrammar& g);

}  // namespace finitax
