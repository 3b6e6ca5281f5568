#include "finitax/prototype.hpp"

#include "finitax/text.hpp"

namespace finitax {

std::string to_string(ObligationStatus s) {
  switch (s) {
    case ObligationStatus::Unverified:
      return "unverified";
    case ObligationStatus::Assumed:
      return "assumed";
    case ObligationStatus::ExternallyVerified:
      return "externally-verified";
  }
  return "unverified";
}

TheoryFails::TheoryFails(Formula phi, std::string algebraName,
                         Assignment witness)
    : Error("theory formula '" + format_formula_short(phi) +
            "' fails in algebra " + algebraName +
            (witness.empty() ? "" : " at " + format_assignment(witness))),
      phi(std::move(phi)),
      algebraName(std::move(algebraName)),
      witness(std::move(witness)) {}

PrototypeSetup::PrototypeSetup(std::vector<AlgebraPtr> algebras,
                               std::vector<Formula> theory,
                               VariableTuple tuple, std::size_t maxClasses)
    : algebras_(std::move(algebras)),
      theory_(std::move(theory)),
      tuple_(std::move(tuple)),
      obligations_(build_theorem_grammar(algebras_, tuple_, maxClasses)) {
  for (const auto& a : algebras_) {
    if (!check_admitted(*a))
      throw Error("algebra " + a->name() + " is not admitted");
  }
  for (std::size_t i = 1; i < algebras_.size(); ++i)
    if (!algebras_[i]->signature()->sameAs(*algebras_[0]->signature()))
      throw SignatureMismatch("prototype algebras share no signature");
  for (const auto& phi : theory_) {
    for (const auto& a : algebras_) {
      Assignment witness;
      if (!sat_witness(*a, phi, &witness))
        throw TheoryFails(phi, a->name(), witness);
    }
  }
}

PrototypeSetup setup_prototype(std::vector<AlgebraPtr> algebras,
                               std::vector<Formula> theory,
                               VariableTuple tuple, std::size_t maxClasses) {
  return PrototypeSetup(std::move(algebras), std::move(theory),
                        std::move(tuple), maxClasses);
}

Verdict decide(const PrototypeSetup& ps, const Formula& phi) {
  ps.obligations().theoremGrammar()->requireInFragment(phi);
  Verdict v;
  v.obligationStatus = ps.obligationStatus();
  for (const auto& a : ps.algebras()) {
    Assignment witness;
    if (!sat_witness(*a, phi, &witness)) {
      v.entailed = false;
      v.algebraName = a->name();
      v.witness = std::move(witness);
      return v;
    }
  }
  v.entailed = true;
  return v;
}

std::vector<Formula> export_obligations(const PrototypeSetup& ps) {
  return ps.obligations().reduced().allFormulas();
}

}  // namespace finitax
