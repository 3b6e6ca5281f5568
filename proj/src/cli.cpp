#include "finitax/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "finitax/barzdin.hpp"
#include "finitax/prototype.hpp"
#include "finitax/text.hpp"
#include "finitax/theorem.hpp"
#include "json.hpp"

namespace finitax {

namespace {

using json = nlohmann::ordered_json;

constexpr height_t kDefaultMaxHeight = 6;
constexpr std::size_t kDefaultMaxCount = 10000;

std::string readFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string stem(const std::string& path) {
  auto slash = path.find_last_of("/\\");
  std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
  auto dot = base.find_last_of('.');
  return dot == std::string::npos ? base : base.substr(0, dot);
}

std::vector<AlgebraPtr> loadAlgebras(const std::vector<std::string>& paths) {
  std::vector<AlgebraPtr> out;
  for (const auto& p : paths) out.push_back(parse_algebra(readFile(p), stem(p)));
  return out;
}

// ALG... positionals may be followed by one formula; every formula contains
// an '=' while file paths do not.
std::string splitTrailingFormula(std::vector<std::string>& items) {
  if (!items.empty() && items.back().find('=') != std::string::npos) {
    std::string f = items.back();
    items.pop_back();
    return f;
  }
  return "";
}

std::string prefixText(const Formula& f) {
  std::string out;
  for (const auto& pe : f.prefix()) {
    if (!out.empty()) out += " ";
    out += (pe.q == Quantifier::ForAll ? "forall " : "exists ") + pe.var;
  }
  return out;
}

json formulaJson(const Formula& f, bool shortForm) {
  json j;
  j["prefix"] = prefixText(f);
  j["lhs"] = format_term(f.lhs());
  j["rhs"] = format_term(f.rhs());
  j["sort"] = f.eqSort();
  j["text"] = shortForm ? format_formula_short(f) : format_formula(f);
  return j;
}

json inputsJson(const std::vector<std::string>& algebraFiles) {
  json j;
  j["algebras"] = algebraFiles;
  return j;
}

void emitJson(std::ostream& out, const json& j) { out << j.dump(2) << "\n"; }

// Decodes a formula term enumerated from the wrapped grammar.
Formula decodeFormulaTerm(const TheoremGrammar& tg, const Term& t) {
  const VariableTuple& tuple = tg.behavior().tuple();
  const std::string& qname = t.head();
  std::string bits = qname.substr(2);  // after "Q_"
  std::vector<Formula::PrefixEntry> prefix;
  for (std::size_t i = 0; i < tuple.size(); ++i)
    prefix.push_back({bits.at(i) == 'E' ? Quantifier::Exists
                                        : Quantifier::ForAll,
                      tuple.at(i).name, tuple.at(i).sort});
  const Term& eq = t.args().at(0);
  return Formula(prefix, eq.args().at(0), eq.args().at(1));
}

struct CommonOpts {
  std::vector<std::string> algebraFiles;
  std::string vars;
  std::size_t maxClasses = kDefaultProductCap;
  bool jsonOut = false;
};

int cmdCheck(const std::string& algFile, const std::string& formulaText,
             bool jsonOut, std::ostream& out) {
  AlgebraPtr alg = parse_algebra(readFile(algFile), stem(algFile));
  Formula phi = parse_formula(formulaText, *alg->signature());
  Assignment witness;
  bool ok = sat_witness(*alg, phi, &witness);
  if (jsonOut) {
    json j;
    j["command"] = "check";
    j["inputs"] = inputsJson({algFile});
    j["inputs"]["formula"] = formulaText;
    json r;
    r["valid"] = ok;
    if (!ok && !witness.empty()) r["witness"] = format_assignment(witness);
    j["results"] = json::array({r});
    emitJson(out, j);
  } else {
    if (ok) {
      out << "valid\n";
    } else {
      out << "invalid";
      if (!witness.empty()) out << "  [" << format_assignment(witness) << "]";
      out << "\n";
    }
  }
  return ok ? 0 : 1;
}

int cmdGrammar(const CommonOpts& o, std::ostream& out) {
  std::vector<AlgebraPtr> algs = loadAlgebras(o.algebraFiles);
  VariableTuple tuple = parse_var_tuple(o.vars, *algs[0]->signature());
  TheoremGrammarPtr tg = build_theorem_grammar(algs, tuple, o.maxClasses);
  out << dump_grammar(tg->wrapped());
  return 0;
}

int cmdTheorems(const CommonOpts& o, height_t maxHeight, std::size_t count,
                std::ostream& out) {
  std::vector<AlgebraPtr> algs = loadAlgebras(o.algebraFiles);
  VariableTuple tuple = parse_var_tuple(o.vars, *algs[0]->signature());
  TheoremGrammarPtr tg = build_theorem_grammar(algs, tuple, o.maxClasses);
  const TreeGrammar& w = tg->wrapped();
  HeightMap hm = heights_liquid(w, Weights::defaults(w.alphabet()));
  std::vector<Term> terms =
      enumerate_terms(w, tg->startNonterminal(), hm, maxHeight, count);
  if (o.jsonOut) {
    json j;
    j["command"] = "theorems";
    j["inputs"] = inputsJson(o.algebraFiles);
    j["inputs"]["vars"] = o.vars;
    j["results"] = json::array();
    for (const auto& t : terms)
      j["results"].push_back(formulaJson(decodeFormulaTerm(*tg, t), false));
    emitJson(out, j);
  } else {
    for (const auto& t : terms)
      out << format_formula(decodeFormulaTerm(*tg, t)) << "\n";
  }
  return 0;
}

int cmdAxioms(const CommonOpts& o, bool noReduce, std::ostream& out) {
  std::vector<AlgebraPtr> algs = loadAlgebras(o.algebraFiles);
  VariableTuple tuple = parse_var_tuple(o.vars, *algs[0]->signature());
  AxiomSet ax = build_axioms(algs, tuple, o.maxClasses);
  if (!noReduce) ax = ax.reduced();
  bool shortForm = !noReduce;
  auto formulas = ax.allFormulas();
  if (o.jsonOut) {
    json j;
    j["command"] = "axioms";
    j["inputs"] = inputsJson(o.algebraFiles);
    j["inputs"]["vars"] = o.vars;
    j["inputs"]["reduce"] = !noReduce;
    j["results"] = json::array();
    for (const auto& f : formulas) j["results"].push_back(formulaJson(f, shortForm));
    emitJson(out, j);
  } else {
    for (const auto& f : formulas)
      out << (shortForm ? format_formula_short(f) : format_formula(f)) << "\n";
  }
  return 0;
}

void printSteps(std::ostream& out, const std::string& side,
                const Term& source, const std::vector<RewriteStep>& steps,
                const Term& nf) {
  out << side << ": " << format_term(source) << "\n";
  for (const auto& s : steps) {
    out << "  rewrite";
    if (!s.path.empty()) {
      out << " at ";
      for (std::size_t i = 0; i < s.path.size(); ++i)
        out << (i ? "." : "") << (s.path[i] + 1);
    }
    out << ": " << format_term(s.from) << " -> " << format_term(s.to) << "\n";
  }
  out << "  normal form: " << format_term(nf) << "\n";
}

int cmdDerive(const CommonOpts& o, const std::string& formulaText,
              std::ostream& out) {
  std::vector<AlgebraPtr> algs = loadAlgebras(o.algebraFiles);
  VariableTuple tuple = parse_var_tuple(o.vars, *algs[0]->signature());
  AxiomSet ax = build_axioms(algs, tuple, o.maxClasses);
  Formula phi = parse_formula(formulaText, *algs[0]->signature(), tuple);
  Derivation d = derive(ax, phi);
  if (o.jsonOut) {
    json j;
    j["command"] = "derive";
    j["inputs"] = inputsJson(o.algebraFiles);
    j["inputs"]["vars"] = o.vars;
    j["inputs"]["formula"] = formulaText;
    json r;
    r["derivable"] = d.success;
    r["lhs_nf"] = format_term(d.lhsNF);
    r["rhs_nf"] = format_term(d.rhsNF);
    r["closed_by"] = d.success
                         ? (d.byEqualNF ? "equal normal forms"
                                        : "admitted pair")
                         : "";
    auto stepsJson = [](const std::vector<RewriteStep>& steps) {
      json a = json::array();
      for (const auto& s : steps)
        a.push_back(format_term(s.from) + " -> " + format_term(s.to));
      return a;
    };
    r["lhs_steps"] = stepsJson(d.lhsSteps);
    r["rhs_steps"] = stepsJson(d.rhsSteps);
    j["results"] = json::array({r});
    emitJson(out, j);
    return d.success ? 0 : 1;
  }
  out << "formula: " << format_formula(phi) << "\n";
  printSteps(out, "lhs", phi.lhs(), d.lhsSteps, d.lhsNF);
  printSteps(out, "rhs", phi.rhs(), d.rhsSteps, d.rhsNF);
  if (d.success) {
    if (d.byEqualNF)
      out << "derivable: the normal forms coincide\n";
    else
      out << "derivable: " << format_term(d.lhsNF) << " = "
          << format_term(d.rhsNF) << " is admitted under the prefix\n";
  } else {
    out << "not derivable: the normal-form pair is not admitted under the "
           "prefix\n";
  }
  return d.success ? 0 : 1;
}

int cmdBarzdin(const std::string& algFile, const std::string& vars,
               const std::string& sort, const std::string& constraintsFile,
               height_t maxHeight, std::size_t count, std::size_t maxClasses,
               bool jsonOut, std::ostream& out) {
  SampleData sd = parse_sample(readFile(algFile), stem(algFile));
  BarzdinSample sample(sd.signature, sd.domains, sd.facts, sd.name);
  VariableTuple tuple = parse_var_tuple(vars, *sd.signature);
  std::vector<ExampleConstraint> constraints;
  for (const auto& line : parse_constraints(readFile(constraintsFile))) {
    std::vector<Assignment::Binding> bindings;
    for (const auto& [var, elem] : line.given) {
      int pos = tuple.indexOf(var);
      if (pos < 0) throw Error("constraint variable " + var +
                               " is not in the tuple");
      bindings.push_back({var, tuple.at(pos).sort, elem});
    }
    constraints.push_back({Assignment(bindings), line.expect});
  }
  std::vector<Term> terms = enumerate_hypotheses(sample, constraints, sort,
                                                 tuple, maxHeight, count,
                                                 maxClasses);
  if (jsonOut) {
    json j;
    j["command"] = "barzdin";
    j["inputs"] = inputsJson({algFile});
    j["inputs"]["vars"] = vars;
    j["inputs"]["sort"] = sort;
    j["inputs"]["constraints"] = constraintsFile;
    j["results"] = json::array();
    for (const auto& t : terms) j["results"].push_back(format_term(t));
    emitJson(out, j);
  } else {
    for (const auto& t : terms) out << format_term(t) << "\n";
  }
  return 0;
}

int cmdVariety(const std::vector<std::string>& algebraFiles, std::size_t maxVars,
               const std::string& varSorts, std::size_t maxClasses,
               bool jsonOut, std::ostream& out) {
  std::vector<AlgebraPtr> algs = loadAlgebras(algebraFiles);
  const Signature& sig = *algs[0]->signature();
  std::vector<std::string> sorts;
  if (varSorts.empty()) {
    if (sig.sorts().size() != 1)
      throw Error("--var-sorts is required for multi-sorted algebras");
    sorts.push_back(sig.sorts()[0]);
  } else {
    std::stringstream ss(varSorts);
    std::string piece;
    while (std::getline(ss, piece, ',')) {
      if (!sig.hasSort(piece)) throw Error("undeclared sort " + piece);
      sorts.push_back(piece);
    }
  }
  auto steps = variety_sequence(algs, maxVars, sorts, maxClasses);
  if (jsonOut) {
    json j;
    j["command"] = "variety";
    j["inputs"] = inputsJson(algebraFiles);
    j["inputs"]["max_vars"] = maxVars;
    j["results"] = json::array();
    for (std::size_t i = 0; i < steps.size(); ++i) {
      json s;
      s["step"] = i + 1;
      s["axioms"] = json::array();
      for (const auto& f : steps[i].axioms)
        s["axioms"].push_back(format_formula_short(f));
      s["subsumed_previous"] = json::array();
      for (const auto& [p, a] : steps[i].subsumedPrevious) {
        json e;
        e["previous"] = format_formula_short(p);
        e["by"] = format_formula_short(a);
        s["subsumed_previous"].push_back(e);
      }
      j["results"].push_back(s);
    }
    emitJson(out, j);
  } else {
    for (std::size_t i = 0; i < steps.size(); ++i) {
      out << "step " << (i + 1) << " (";
      for (std::size_t v = 0; v < steps[i].tuple.size(); ++v)
        out << (v ? "," : "") << steps[i].tuple.at(v).name << ":"
            << steps[i].tuple.at(v).sort;
      out << ")\n";
      for (const auto& f : steps[i].axioms)
        out << "  " << format_formula_short(f) << "\n";
      for (const auto& [p, a] : steps[i].subsumedPrevious)
        out << "  subsumes previous: " << format_formula_short(p) << "  [by "
            << format_formula_short(a) << "]\n";
    }
  }
  return 0;
}

int cmdPrototype(const CommonOpts& o, const std::string& theoryFile,
                 const std::string& formulaText, bool assumeObligations,
                 std::ostream& out) {
  std::vector<AlgebraPtr> algs = loadAlgebras(o.algebraFiles);
  const Signature& sig = *algs[0]->signature();
  VariableTuple tuple = parse_var_tuple(o.vars, sig);
  std::vector<Formula> theory = parse_theory(readFile(theoryFile), sig);
  PrototypeSetup ps = setup_prototype(algs, theory, tuple, o.maxClasses);
  if (assumeObligations) ps.setObligationStatus(ObligationStatus::Assumed);
  std::vector<Formula> obligations = export_obligations(ps);

  int exitCode = 0;
  if (o.jsonOut) {
    json j;
    j["command"] = "prototype";
    j["inputs"] = inputsJson(o.algebraFiles);
    j["inputs"]["theory"] = theoryFile;
    j["inputs"]["vars"] = o.vars;
    json r;
    r["theory_holds"] = true;
    r["obligation_status"] = to_string(ps.obligationStatus());
    r["obligations"] = json::array();
    for (const auto& f : obligations)
      r["obligations"].push_back(format_formula_short(f));
    if (!formulaText.empty()) {
      Formula phi = parse_formula(formulaText, sig, tuple);
      Verdict v = decide(ps, phi);
      r["formula"] = formulaText;
      r["entailed"] = v.entailed;
      if (!v.entailed) {
        r["falsified_in"] = v.algebraName;
        if (!v.witness.empty()) r["witness"] = format_assignment(v.witness);
      }
      exitCode = v.entailed ? 0 : 1;
    }
    j["results"] = json::array({r});
    emitJson(out, j);
    return exitCode;
  }

  out << "theory holds in every algebra of the class\n";
  out << "proof obligations (status: " << to_string(ps.obligationStatus())
      << "):\n";
  for (const auto& f : obligations)
    out << "  " << format_formula_short(f) << "\n";
  if (!formulaText.empty()) {
    Formula phi = parse_formula(formulaText, sig, tuple);
    Verdict v = decide(ps, phi);
    if (v.entailed) {
      out << "entailed: " << format_formula(phi) << "\n";
    } else {
      out << "not entailed: " << format_formula(phi) << "\n";
      out << "  falsified in " << v.algebraName;
      if (!v.witness.empty()) out << " at " << format_assignment(v.witness);
      out << "\n";
    }
    if (v.obligationStatus == ObligationStatus::Unverified)
      out << "  caveat: the proof obligations are unverified; entailment "
             "claims assume them\n";
    exitCode = v.entailed ? 0 : 1;
  }
  return exitCode;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out,
                std::ostream& err) {
  CLI::App app{"theories and axiom sets of finite algebras"};
  app.require_subcommand(1);

  // check
  std::string checkAlg, checkFormula;
  bool checkJson = false;
  auto* check = app.add_subcommand("check", "test a formula in an algebra");
  check->add_option("algebra", checkAlg)->required();
  check->add_option("formula", checkFormula)->required();
  check->add_flag("--json", checkJson);

  CommonOpts grammarOpts;
  auto* grammar = app.add_subcommand("grammar", "dump the theorem grammar");
  grammar->add_option("algebras", grammarOpts.algebraFiles)->required();
  grammar->add_option("--vars", grammarOpts.vars)->required();
  grammar->add_option("--max-classes", grammarOpts.maxClasses);

  CommonOpts theoremOpts;
  height_t theoremsMaxHeight = kDefaultMaxHeight;
  std::size_t theoremsCount = kDefaultMaxCount;
  auto* theorems =
      app.add_subcommand("theorems", "enumerate valid formulas by height");
  theorems->add_option("algebras", theoremOpts.algebraFiles)->required();
  theorems->add_option("--vars", theoremOpts.vars)->required();
  theorems->add_option("--max-height", theoremsMaxHeight);
  theorems->add_option("--count", theoremsCount);
  theorems->add_option("--max-classes", theoremOpts.maxClasses);
  theorems->add_flag("--json", theoremOpts.jsonOut);

  CommonOpts axiomOpts;
  bool noReduce = false;
  auto* axioms = app.add_subcommand("axioms", "print a finite axiom set");
  axioms->add_option("algebras", axiomOpts.algebraFiles)->required();
  axioms->add_option("--vars", axiomOpts.vars)->required();
  axioms->add_flag("--no-reduce", noReduce);
  axioms->add_flag("--json", axiomOpts.jsonOut);
  axioms->add_option("--max-classes", axiomOpts.maxClasses);

  CommonOpts deriveOpts;
  auto* deriveCmd =
      app.add_subcommand("derive", "replay a derivation of a formula");
  deriveCmd->add_option("algebras-and-formula", deriveOpts.algebraFiles)
      ->required();
  deriveCmd->add_option("--vars", deriveOpts.vars)->required();
  deriveCmd->add_flag("--json", deriveOpts.jsonOut);
  deriveCmd->add_option("--max-classes", deriveOpts.maxClasses);

  std::string barzdinAlg, barzdinVars, barzdinSort, barzdinConstraints;
  height_t barzdinMaxHeight = kDefaultMaxHeight;
  std::size_t barzdinCount = kDefaultMaxCount;
  std::size_t barzdinMaxClasses = kDefaultProductCap;
  bool barzdinJson = false;
  auto* barzdin = app.add_subcommand(
      "barzdin", "enumerate terms consistent with examples");
  barzdin->add_option("algebra", barzdinAlg)->required();
  barzdin->add_option("--vars", barzdinVars)->required();
  barzdin->add_option("--sort", barzdinSort)->required();
  barzdin->add_option("--constraints", barzdinConstraints)->required();
  barzdin->add_option("--max-height", barzdinMaxHeight);
  barzdin->add_option("--count", barzdinCount);
  barzdin->add_option("--max-classes", barzdinMaxClasses);
  barzdin->add_flag("--json", barzdinJson);

  std::vector<std::string> varietyAlgs;
  std::size_t varietyMaxVars = 1;
  std::string varietySorts;
  std::size_t varietyMaxClasses = kDefaultProductCap;
  bool varietyJson = false;
  auto* variety =
      app.add_subcommand("variety", "universal axiom sets per variable count");
  variety->add_option("algebras", varietyAlgs)->required();
  variety->add_option("--max-vars", varietyMaxVars)->required();
  variety->add_option("--var-sorts", varietySorts);
  variety->add_option("--max-classes", varietyMaxClasses);
  variety->add_flag("--json", varietyJson);

  CommonOpts protoOpts;
  std::string protoTheory;
  bool protoAssume = false;
  auto* prototype = app.add_subcommand(
      "prototype", "validate a prototype class and decide entailment");
  prototype->add_option("algebras-and-formula", protoOpts.algebraFiles)
      ->required();
  prototype->add_option("--theory", protoTheory)->required();
  prototype->add_option("--vars", protoOpts.vars)->required();
  prototype->add_flag("--assume-obligations", protoAssume);
  prototype->add_flag("--json", protoOpts.jsonOut);
  prototype->add_option("--max-classes", protoOpts.maxClasses);

  try {
    std::vector<std::string> argv(args);
    std::reverse(argv.begin(), argv.end());
    app.parse(argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*check) return cmdCheck(checkAlg, checkFormula, checkJson, out);
    if (*grammar) return cmdGrammar(grammarOpts, out);
    if (*theorems)
      return cmdTheorems(theoremOpts, theoremsMaxHeight, theoremsCount, out);
    if (*axioms) return cmdAxioms(axiomOpts, noReduce, out);
    if (*deriveCmd) {
      std::string formula = splitTrailingFormula(deriveOpts.algebraFiles);
      if (formula.empty() || deriveOpts.algebraFiles.empty()) {
        err << "error: derive needs algebra files and a formula\n";
        return 2;
      }
      return cmdDerive(deriveOpts, formula, out);
    }
    if (*barzdin)
      return cmdBarzdin(barzdinAlg, barzdinVars, barzdinSort,
                        barzdinConstraints, barzdinMaxHeight, barzdinCount,
                        barzdinMaxClasses, barzdinJson, out);
    if (*variety)
      return cmdVariety(varietyAlgs, varietyMaxVars, varietySorts,
                        varietyMaxClasses, varietyJson, out);
    if (*prototype) {
      std::string formula = splitTrailingFormula(protoOpts.algebraFiles);
      if (protoOpts.algebraFiles.empty()) {
        err << "error: prototype needs at least one algebra file\n";
        return 2;
      }
      return cmdPrototype(protoOpts, protoTheory, formula, protoAssume, out);
    }
  } catch (const ResourceLimit& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  err << "error: no subcommand\n";
  return 2;
}

}  // namespace finitax
