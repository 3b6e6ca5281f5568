#pragma once

#include <map>
#include <string>
#include <vector>

#include "finitax/grammar.hpp"

namespace finitax {

/// Possibly incomplete set of ground operation facts over a signature:
/// at most one result per symbol and argument tuple, no totality demand.
class BarzdinSample {
 public:
  BarzdinSample(SignaturePtr sig,
                std::map<std::string, std::vector<std::string>> domains,
                std::vector<TableFact> facts, std::string name = "");

  const SignaturePtr& signature() const { return sig_; }
  const std::map<std::string, std::vector<std::string>>& domains() const {
    return domains_;
  }
  const std::vector<TableFact>& facts() const { return facts_; }
  const std::string& name() const { return name_; }

  bool hasElement(const std::string& sort, const std::string& elem) const;

 private:
  SignaturePtr sig_;
  std::map<std::string, std::vector<std::string>> domains_;
  std::vector<TableFact> facts_;
  std::string name_;
};

/// One example: under the assignment, a sought term must evaluate to
/// `target`.
struct ExampleConstraint {
  Assignment assignment;
  std::string target;
};

/// Grammar of all terms consistent with the sample and every constraint,
/// together with the nonterminal generating them. The nonterminal may be
/// explicitly empty when the constraints are contradictory.
struct ConsistentTerms {
  TreeGrammar grammar;
  int target = -1;
};

ConsistentTerms consistent_terms(const BarzdinSample& sample,
                                 const std::vector<ExampleConstraint>& constraints,
                                 const std::string& resultSort,
                                 const VariableTuple& vars,
                                 std::size_t maxStates = kDefaultProductCap);

/// Consistent terms in nondecreasing height (variables weigh 0, symbols 1).
std::vector<Term> enumerate_hypotheses(
    const BarzdinSample& sample,
    const std::vector<ExampleConstraint>& constraints,
    const std::string& resultSort, const VariableTuple& vars,
    height_t maxHeight, std::size_t maxCount,
    std::size_t maxStates = kDefaultProductCap);

}  // namespace finitax
