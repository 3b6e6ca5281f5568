#pragma once

#include <string>
#include <vector>

#include "finitax/theorem.hpp"

namespace finitax {

enum class ObligationStatus { Unverified, Assumed, ExternallyVerified };

std::string to_string(ObligationStatus s);

/// Entailment queries against the theory cannot be sound unless the theory
/// implies the exported axiom set; that premise needs an external prover,
/// so its trust state is tracked explicitly.
class TheoryFails : public Error {
 public:
  TheoryFails(Formula phi, std::string algebraName, Assignment witness);
  Formula phi;
  std::string algebraName;
  Assignment witness;
};

/// Validated prototype setup: the algebras satisfy the theory, and the
/// axiom set of the class is attached as proof obligations.
class PrototypeSetup {
 public:
  PrototypeSetup(std::vector<AlgebraPtr> algebras, std::vector<Formula> theory,
                 VariableTuple tuple,
                 std::size_t maxClasses = kDefaultProductCap);

  const std::vector<AlgebraPtr>& algebras() const { return algebras_; }
  const std::vector<Formula>& theory() const { return theory_; }
  const VariableTuple& tuple() const { return tuple_; }
  const AxiomSet& obligations() const { return obligations_; }

  ObligationStatus obligationStatus() const { return status_; }
  void setObligationStatus(ObligationStatus s) { status_ = s; }

 private:
  std::vector<AlgebraPtr> algebras_;
  std::vector<Formula> theory_;
  VariableTuple tuple_;
  AxiomSet obligations_;
  ObligationStatus status_ = ObligationStatus::Unverified;
};

struct Verdict {
  bool entailed = false;
  /// Filled on not-entailed: the falsifying algebra and assignment.
  std::string algebraName;
  Assignment witness;
  ObligationStatus obligationStatus = ObligationStatus::Unverified;
};

PrototypeSetup setup_prototype(std::vector<AlgebraPtr> algebras,
                               std::vector<Formula> theory,
                               VariableTuple tuple,
                               std::size_t maxClasses = kDefaultProductCap);

/// Tests the formula in every algebra of the class; sound for entailment
/// exactly when the obligations hold under the theory.
Verdict decide(const PrototypeSetup& ps, const Formula& phi);

/// The reduced axiom set, for discharge by an external prover.
std::vector<Formula> export_obligations(const PrototypeSetup& ps);

}  // namespace finitax
