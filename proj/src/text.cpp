#include "finitax/text.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <sstream>

namespace finitax {

namespace {

struct Token {
  std::string text;
  int col;  // 1-based
};

bool isDelimiter(char c) {
  return c == ':' || c == ',' || c == '(' || c == ')';
}

// Splits on whitespace and the delimiters : , ( ) plus the arrow ->.
// Everything else accumulates into identifier-like tokens.
std::vector<Token> tokenizeLine(const std::string& line, int lineNo) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    char c = line[i];
    if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
      continue;
    }
    int col = static_cast<int>(i) + 1;
    if (isDelimiter(c)) {
      out.push_back({std::string(1, c), col});
      ++i;
      continue;
    }
    if (c == '-' && i + 1 < line.size() && line[i + 1] == '>') {
      out.push_back({"->", col});
      i += 2;
      continue;
    }
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' &&
           line[i] != '\r' && !isDelimiter(line[i]) &&
           !(line[i] == '-' && i + 1 < line.size() && line[i + 1] == '>'))
      ++i;
    std::string word = line.substr(start, i - start);
    if (!is_valid_identifier(word))
      throw ParseError(lineNo, col, "invalid token '" + word + "'");
    out.push_back({std::move(word), col});
  }
  return out;
}

std::string stripComment(const std::string& line) {
  auto pos = line.find('#');
  return pos == std::string::npos ? line : line.substr(0, pos);
}

std::vector<std::string> splitLines(const std::string& text) {
  std::vector<std::string> lines;
  std::string cur;
  for (char c : text) {
    if (c == '\n') {
      lines.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  lines.push_back(cur);
  return lines;
}

// ---------------------------------------------------------------------------
// Algebra files

struct FileData {
  std::vector<std::string> sorts;
  std::map<std::string, std::vector<std::string>> domains;
  std::vector<SymbolDecl> symbols;
  std::vector<TableFact> facts;
  std::string boolSort;
};

struct JunctorSpec {
  std::vector<std::string> names;  // accepted spellings
  int arity;
  // Truth table rows in argument order false,false / false,true / ...
  std::vector<std::string> results;
};

const std::vector<JunctorSpec>& booleanFragmentSpec() {
  static const std::vector<JunctorSpec> spec = {
      {{"true"}, 0, {"true"}},
      {{"false"}, 0, {"false"}},
      {{"not", "¬"}, 1, {"true", "false"}},
      {{"and", "∧"}, 2, {"false", "false", "false", "true"}},
      {{"or", "∨"}, 2, {"false", "true", "true", "true"}},
      {{"imp", "→"}, 2, {"true", "true", "false", "true"}},
      {{"iff", "↔"}, 2, {"true", "false", "false", "true"}},
  };
  return spec;
}

const JunctorSpec* junctorFor(const std::string& name) {
  for (const auto& j : booleanFragmentSpec())
    for (const auto& n : j.names)
      if (n == name) return &j;
  return nullptr;
}

std::vector<TableFact> junctorFacts(const SymbolDecl& sym,
                                    const JunctorSpec& spec) {
  static const std::vector<std::string> kBool = {"false", "true"};
  std::vector<TableFact> out;
  std::size_t rows = spec.results.size();
  for (std::size_t r = 0; r < rows; ++r) {
    std::vector<std::string> args(sym.argSorts.size());
    std::size_t rest = r;
    for (std::size_t i = sym.argSorts.size(); i-- > 0;) {
      args[i] = kBool[rest % 2];
      rest /= 2;
    }
    out.push_back({sym.name, std::move(args), spec.results[r]});
  }
  return out;
}

FileData parseFile(const std::string& text) {
  FileData fd;
  std::set<std::string> declaredSorts;
  auto lines = splitLines(text);
  for (std::size_t li = 0; li < lines.size(); ++li) {
    const int lineNo = static_cast<int>(li) + 1;
    std::string line = stripComment(lines[li]);
    // The directive is everything before the first whitespace; bool-sort
    // contains a '-' and is easier matched before tokenizing.
    std::size_t ws = line.find_first_not_of(" \t\r");
    if (ws == std::string::npos) continue;
    std::size_t end = line.find_first_of(" \t\r", ws);
    std::string directive = line.substr(ws, end == std::string::npos
                                                ? std::string::npos
                                                : end - ws);
    std::string rest = end == std::string::npos ? "" : line.substr(end);
    std::vector<Token> toks = tokenizeLine(rest, lineNo);
    std::size_t p = 0;
    auto expect = [&](const std::string& what) -> const Token& {
      if (p >= toks.size())
        throw ParseError(lineNo, static_cast<int>(line.size()) + 1,
                         "expected " + what);
      return toks[p++];
    };
    auto expectExact = [&](const std::string& t) {
      const Token& tok = expect("'" + t + "'");
      if (tok.text != t)
        throw ParseError(lineNo, tok.col,
                         "expected '" + t + "', found '" + tok.text + "'");
    };
    auto atEnd = [&]() { return p >= toks.size(); };

    if (directive == "sort") {
      const Token& name = expect("sort name");
      if (!declaredSorts.insert(name.text).second)
        throw ParseError(lineNo, name.col, "duplicate sort " + name.text);
      fd.sorts.push_back(name.text);
    } else if (directive == "elems") {
      const Token& sortName = expect("sort name");
      if (!declaredSorts.count(sortName.text))
        throw ParseError(lineNo, sortName.col,
                         "undeclared sort " + sortName.text);
      expectExact(":");
      auto& dom = fd.domains[sortName.text];
      if (!dom.empty())
        throw ParseError(lineNo, sortName.col,
                         "elements of " + sortName.text + " already given");
      while (!atEnd()) {
        const Token& e = expect("element");
        dom.push_back(e.text);
        if (atEnd()) break;
        expectExact(",");
      }
      if (dom.empty())
        throw ParseError(lineNo, sortName.col, "empty element list");
    } else if (directive == "op") {
      const Token& name = expect("symbol name");
      expectExact(":");
      SymbolDecl decl;
      decl.name = name.text;
      if (!atEnd() && toks[p].text != "->") {
        while (true) {
          const Token& s = expect("argument sort");
          if (!declaredSorts.count(s.text))
            throw ParseError(lineNo, s.col, "undeclared sort " + s.text);
          decl.argSorts.push_back(s.text);
          if (toks[p].text == "->") break;
          expectExact(",");
        }
      }
      expectExact("->");
      const Token& res = expect("result sort");
      if (!declaredSorts.count(res.text))
        throw ParseError(lineNo, res.col, "undeclared sort " + res.text);
      decl.resultSort = res.text;
      fd.symbols.push_back(std::move(decl));
    } else if (directive == "table") {
      const Token& name = expect("symbol name");
      TableFact fact;
      fact.symbol = name.text;
      if (!atEnd() && toks[p].text == "(") {
        ++p;
        while (true) {
          const Token& a = expect("argument element");
          fact.args.push_back(a.text);
          const Token& sep = expect("',' or ')'");
          if (sep.text == ")") break;
          if (sep.text != ",")
            throw ParseError(lineNo, sep.col, "expected ',' or ')'");
        }
      }
      expectExact("=");
      const Token& res = expect("result element");
      fact.result = res.text;
      fd.facts.push_back(std::move(fact));
    } else if (directive == "bool-sort") {
      const Token& name = expect("sort name");
      if (!declaredSorts.count(name.text))
        throw ParseError(lineNo, name.col, "undeclared sort " + name.text);
      if (!fd.boolSort.empty())
        throw ParseError(lineNo, name.col, "bool-sort given twice");
      fd.boolSort = name.text;
    } else {
      throw ParseError(lineNo, static_cast<int>(ws) + 1,
                       "unknown directive '" + directive + "'");
    }
    if (!atEnd())
      throw ParseError(lineNo, toks[p].col,
                       "unexpected trailing '" + toks[p].text + "'");
  }
  return fd;
}

// Builds a signature from the file data; with bool-sort set, attaches the
// two-element Boolean algebra over the declared fixed-sort symbols and
// fills in their table rows.
SignaturePtr buildSignature(FileData& fd) {
  if (fd.boolSort.empty())
    return std::make_shared<Signature>(fd.sorts, fd.symbols);

  const std::string& B = fd.boolSort;
  auto it = fd.domains.find(B);
  if (it == fd.domains.end())
    throw Error("bool-sort " + B + " has no elements");
  std::set<std::string> dom(it->second.begin(), it->second.end());
  if (dom != std::set<std::string>{"false", "true"})
    throw Error("bool-sort " + B + " must have elements false, true");

  std::vector<SymbolDecl> fixed;
  for (const auto& sym : fd.symbols) {
    bool allBool = sym.resultSort == B;
    for (const auto& a : sym.argSorts) allBool = allBool && a == B;
    if (!allBool) continue;
    const JunctorSpec* j = junctorFor(sym.name);
    if (!j || j->arity != static_cast<int>(sym.argSorts.size()))
      throw Error("symbol " + sym.name +
                  " is not part of the Boolean fragment");
    fixed.push_back(sym);
  }

  std::vector<TableFact> fragmentFacts;
  for (const auto& sym : fixed)
    for (auto& f : junctorFacts(sym, *junctorFor(sym.name)))
      fragmentFacts.push_back(std::move(f));

  // Provide the prescribed rows for the main algebra too, unless given.
  std::set<std::pair<std::string, std::vector<std::string>>> present;
  for (const auto& f : fd.facts) present.insert({f.symbol, f.args});
  for (const auto& f : fragmentFacts)
    if (!present.count({f.symbol, f.args})) fd.facts.push_back(f);

  auto fragSig = std::make_shared<Signature>(std::vector<std::string>{B},
                                             fixed);
  auto fragment = std::make_shared<FiniteAlgebra>(
      fragSig, std::map<std::string, std::vector<std::string>>{
                   {B, {"false", "true"}}},
      fragmentFacts, "bool");
  return std::make_shared<Signature>(fd.sorts, fd.symbols,
                                     std::vector<std::string>{B}, fragment);
}

}  // namespace

AlgebraPtr parse_algebra(const std::string& text, const std::string& name) {
  FileData fd = parseFile(text);
  SignaturePtr sig = buildSignature(fd);
  auto alg =
      std::make_shared<FiniteAlgebra>(sig, fd.domains, fd.facts, name);
  if (!check_admitted(*alg))
    throw Error("algebra " + name +
                " deviates from the prescribed Boolean fragment");
  return alg;
}

SampleData parse_sample(const std::string& text, const std::string& name) {
  FileData fd = parseFile(text);
  SignaturePtr sig = buildSignature(fd);
  // Partial tables: validate symbols, elements and functionality only.
  std::set<std::pair<std::string, std::vector<std::string>>> seen;
  for (const auto& f : fd.facts) {
    int id = sig->symbolId(f.symbol);
    if (id < 0) throw UnknownSymbol(f.symbol);
    const SymbolDecl& decl = sig->symbol(id);
    if (decl.argSorts.size() != f.args.size())
      throw ArityMismatch("table entry for " + f.symbol + " has " +
                          std::to_string(f.args.size()) + " arguments");
    auto inDomain = [&fd](const std::string& sort, const std::string& e) {
      auto it = fd.domains.find(sort);
      return it != fd.domains.end() &&
             std::find(it->second.begin(), it->second.end(), e) !=
                 it->second.end();
    };
    for (std::size_t i = 0; i < f.args.size(); ++i)
      if (!inDomain(decl.argSorts[i], f.args[i]))
        throw UnknownElement(f.args[i], decl.argSorts[i]);
    if (!inDomain(decl.resultSort, f.result))
      throw UnknownElement(f.result, decl.resultSort);
    if (!seen.insert({f.symbol, f.args}).second)
      throw Error("duplicate table entry for " + f.symbol);
  }
  return {sig, fd.domains, fd.facts, name};
}

// ---------------------------------------------------------------------------
// Variable tuples

VariableTuple parse_var_tuple(const std::string& text, const Signature& sig) {
  std::vector<VariableTuple::Entry> entries;
  std::vector<Token> toks = tokenizeLine(text, 1);
  std::size_t p = 0;
  while (p < toks.size()) {
    if (!entries.empty()) {
      if (toks[p].text != ",")
        throw ParseError(1, toks[p].col, "expected ','");
      ++p;
    }
    if (p >= toks.size()) throw ParseError(1, 1, "expected variable name");
    std::string var = toks[p++].text;
    if (p >= toks.size() || toks[p].text != ":")
      throw ParseError(1, p < toks.size() ? toks[p].col : 1,
                       "expected ':' after variable " + var);
    ++p;
    if (p >= toks.size())
      throw ParseError(1, 1, "expected sort for variable " + var);
    std::string sort = toks[p++].text;
    if (!sig.hasSort(sort))
      throw ParseError(1, toks[p - 1].col, "undeclared sort " + sort);
    if (sig.hasSymbol(var))
      throw ParseError(1, 1, "variable " + var + " collides with a symbol");
    entries.push_back({var, sort});
  }
  if (entries.empty()) throw ParseError(1, 1, "empty variable tuple");
  return VariableTuple(entries);
}

// ---------------------------------------------------------------------------
// Formulas

namespace {

struct RawTerm {
  std::string head;
  int col = 1;
  bool application = false;  // written with parentheses f(...)
  std::vector<RawTerm> args;
};

class FormulaParser {
 public:
  FormulaParser(const std::string& text, const Signature& sig,
                const VariableTuple* tuple)
      : sig_(sig), tuple_(tuple), toks_(tokenizeLine(text, 1)) {}

  Formula parse() {
    parsePrefix();
    RawTerm lhs = parseTerm();
    if (p_ >= toks_.size() || !isEqToken(toks_[p_].text))
      throw ParseError(1, p_ < toks_.size() ? toks_[p_].col : 1,
                       "expected '=' between the equation sides");
    std::string eq = toks_[p_++].text;
    std::optional<std::string> eqSort;
    if (eq.size() > 1) {
      eqSort = eq.substr(2);
      if (!sig_.hasSort(*eqSort))
        throw ParseError(1, toks_[p_ - 1].col, "undeclared sort " + *eqSort);
    }
    RawTerm rhs = parseTerm();
    if (p_ < toks_.size())
      throw ParseError(1, toks_[p_].col,
                       "unexpected trailing '" + toks_[p_].text + "'");
    return resolve(lhs, rhs, eqSort);
  }

 private:
  static bool isEqToken(const std::string& t) {
    return t == "=" || (t.size() > 2 && t[0] == '=' && t[1] == '_');
  }

  void parsePrefix() {
    while (p_ < toks_.size() &&
           (toks_[p_].text == "forall" || toks_[p_].text == "exists")) {
      Quantifier q = toks_[p_].text == "forall" ? Quantifier::ForAll
                                                : Quantifier::Exists;
      ++p_;
      if (p_ >= toks_.size())
        throw ParseError(1, 1, "expected variable after quantifier");
      prefix_.push_back({q, toks_[p_].text, ""});
      ++p_;
    }
    if (!prefix_.empty() || (p_ < toks_.size() && toks_[p_].text == ":")) {
      if (p_ >= toks_.size() || toks_[p_].text != ":")
        throw ParseError(1, p_ < toks_.size() ? toks_[p_].col : 1,
                         "expected ':' after the quantifier prefix");
      ++p_;
    }
    for (std::size_t i = 0; i < prefix_.size(); ++i)
      for (std::size_t j = i + 1; j < prefix_.size(); ++j)
        if (prefix_[i].var == prefix_[j].var)
          throw ParseError(1, 1, "variable " + prefix_[i].var +
                                     " quantified twice");
    if (tuple_) {
      // The written prefix must follow the tuple order; omitted variables
      // become universal.
      std::vector<Formula::PrefixEntry> full;
      std::size_t w = 0;
      for (const auto& e : tuple_->entries()) {
        if (w < prefix_.size() && prefix_[w].var == e.name) {
          full.push_back({prefix_[w].q, e.name, e.sort});
          ++w;
        } else {
          full.push_back({Quantifier::ForAll, e.name, e.sort});
        }
      }
      if (w != prefix_.size()) {
        // Either a foreign variable or a reordered prefix.
        for (const auto& pe : prefix_) {
          if (tuple_->indexOf(pe.var) < 0)
            throw ParseError(1, 1, "variable " + pe.var +
                                       " is not in the tuple");
        }
        throw ParseError(1, 1, "prefix must follow the tuple order");
      }
      prefix_ = std::move(full);
      for (const auto& pe : prefix_) varSorts_[pe.var] = pe.sort;
    } else {
      for (const auto& pe : prefix_) varSorts_[pe.var] = "";
    }
  }

  RawTerm parseOperand() {
    if (p_ >= toks_.size()) throw ParseError(1, 1, "expected a term");
    if (toks_[p_].text == "(") {
      ++p_;
      RawTerm t = parseTerm();
      if (p_ >= toks_.size() || toks_[p_].text != ")")
        throw ParseError(1, p_ < toks_.size() ? toks_[p_].col : 1,
                         "expected ')'");
      ++p_;
      return t;
    }
    const Token& head = toks_[p_];
    if (head.text == ")" || head.text == "," || head.text == ":" ||
        isEqToken(head.text))
      throw ParseError(1, head.col, "expected a term, found '" + head.text +
                                        "'");
    ++p_;
    RawTerm t;
    t.head = head.text;
    t.col = head.col;
    if (p_ < toks_.size() && toks_[p_].text == "(") {
      t.application = true;
      ++p_;
      if (p_ < toks_.size() && toks_[p_].text == ")") {
        ++p_;
        return t;
      }
      while (true) {
        t.args.push_back(parseTerm());
        if (p_ >= toks_.size())
          throw ParseError(1, 1, "expected ',' or ')'");
        if (toks_[p_].text == ")") {
          ++p_;
          break;
        }
        if (toks_[p_].text != ",")
          throw ParseError(1, toks_[p_].col, "expected ',' or ')'");
        ++p_;
      }
    }
    return t;
  }

  RawTerm parseTerm() {
    RawTerm first = parseOperand();
    if (p_ < toks_.size() && !isEqToken(toks_[p_].text)) {
      const std::string& next = toks_[p_].text;
      int sym = sig_.symbolId(next);
      if (sym >= 0 && sig_.symbol(sym).argSorts.size() == 2) {
        int col = toks_[p_].col;
        ++p_;
        RawTerm second = parseOperand();
        RawTerm combined;
        combined.head = next;
        combined.col = col;
        combined.application = true;
        combined.args.push_back(std::move(first));
        combined.args.push_back(std::move(second));
        return combined;
      }
    }
    return first;
  }

  // First pass: argument positions pin variable sorts.
  void assignVarSorts(const RawTerm& t,
                      const std::optional<std::string>& expected) {
    int sym = sig_.symbolId(t.head);
    if (sym >= 0) {
      const SymbolDecl& decl = sig_.symbol(sym);
      if (decl.argSorts.size() != t.args.size())
        throw ParseError(1, t.col,
                         "symbol " + t.head + " expects " +
                             std::to_string(decl.argSorts.size()) +
                             " arguments");
      if (expected && decl.resultSort != *expected)
        throw ParseError(1, t.col, "term " + t.head + " has sort " +
                                       decl.resultSort + ", expected " +
                                       *expected);
      for (std::size_t i = 0; i < t.args.size(); ++i)
        assignVarSorts(t.args[i], decl.argSorts[i]);
      return;
    }
    auto it = varSorts_.find(t.head);
    if (it == varSorts_.end())
      throw ParseError(1, t.col, "unknown identifier '" + t.head + "'");
    if (!t.args.empty() || t.application)
      throw ParseError(1, t.col, "variable " + t.head + " used as a symbol");
    if (expected) {
      if (it->second.empty())
        it->second = *expected;
      else if (it->second != *expected)
        throw ParseError(1, t.col, "variable " + t.head + " has sort " +
                                       it->second + ", expected " + *expected);
    }
  }

  std::optional<std::string> structuralSort(const RawTerm& t) const {
    int sym = sig_.symbolId(t.head);
    if (sym >= 0) return sig_.symbol(sym).resultSort;
    auto it = varSorts_.find(t.head);
    if (it != varSorts_.end() && !it->second.empty()) return it->second;
    return std::nullopt;
  }

  Term buildTerm(const RawTerm& t) const {
    int sym = sig_.symbolId(t.head);
    if (sym >= 0) {
      std::vector<Term> args;
      args.reserve(t.args.size());
      for (const auto& a : t.args) args.push_back(buildTerm(a));
      return Term::app(sig_, t.head, std::move(args));
    }
    return Term::var(t.head, varSorts_.at(t.head));
  }

  Formula resolve(const RawTerm& lhs, const RawTerm& rhs,
                  const std::optional<std::string>& eqSort) {
    assignVarSorts(lhs, eqSort);
    assignVarSorts(rhs, eqSort);
    std::optional<std::string> sort = eqSort;
    if (!sort) sort = structuralSort(lhs);
    if (!sort) sort = structuralSort(rhs);
    if (!sort)
      throw ParseError(1, 1,
                       "cannot infer the equation sort; annotate as =_Sort");
    assignVarSorts(lhs, sort);
    assignVarSorts(rhs, sort);
    for (auto& pe : prefix_) {
      const std::string& s = varSorts_.at(pe.var);
      // A variable absent from both sides is vacuous; validity does not
      // depend on its (nonempty) domain, so default it to the equation sort.
      pe.sort = s.empty() ? *sort : s;
    }
    try {
      return Formula(prefix_, buildTerm(lhs), buildTerm(rhs));
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(1, 1, e.what());
    }
  }

  const Signature& sig_;
  const VariableTuple* tuple_;
  std::vector<Token> toks_;
  std::size_t p_ = 0;
  std::vector<Formula::PrefixEntry> prefix_;
  std::map<std::string, std::string> varSorts_;  // "" = unknown
};

}  // namespace

Formula parse_formula(const std::string& text, const Signature& sig) {
  return FormulaParser(text, sig, nullptr).parse();
}

Formula parse_formula(const std::string& text, const Signature& sig,
                      const VariableTuple& tuple) {
  return FormulaParser(text, sig, &tuple).parse();
}

std::vector<Formula> parse_theory(const std::string& text,
                                  const Signature& sig) {
  std::vector<Formula> out;
  auto lines = splitLines(text);
  for (std::size_t li = 0; li < lines.size(); ++li) {
    std::string line = stripComment(lines[li]);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(parse_formula(line, sig));
    } catch (const ParseError& e) {
      throw ParseError(static_cast<int>(li) + 1, e.col, e.what());
    }
  }
  return out;
}

std::vector<ConstraintLine> parse_constraints(const std::string& text) {
  std::vector<ConstraintLine> out;
  auto lines = splitLines(text);
  for (std::size_t li = 0; li < lines.size(); ++li) {
    const int lineNo = static_cast<int>(li) + 1;
    std::string line = stripComment(lines[li]);
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    auto trim = [](std::string s) {
      auto b = s.find_first_not_of(" \t\r");
      auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    if (line.compare(first, 6, "given ") != 0)
      throw ParseError(lineNo, static_cast<int>(first) + 1,
                       "expected 'given'");
    std::string rest = line.substr(first + 6);
    auto expectPos = rest.find("expect");
    if (expectPos == std::string::npos)
      throw ParseError(lineNo, 1, "expected 'expect'");
    std::string bindingPart = rest.substr(0, expectPos);
    ConstraintLine c;
    c.expect = trim(rest.substr(expectPos + 6));
    if (c.expect.empty())
      throw ParseError(lineNo, 1, "expected an element after 'expect'");
    std::stringstream ss(bindingPart);
    std::string piece;
    while (std::getline(ss, piece, ',')) {
      piece = trim(piece);
      if (piece.empty()) continue;
      auto eq = piece.find('=');
      if (eq == std::string::npos)
        throw ParseError(lineNo, 1, "expected var=element, found '" + piece +
                                        "'");
      std::string var = trim(piece.substr(0, eq));
      std::string elem = trim(piece.substr(eq + 1));
      if (var.empty() || elem.empty())
        throw ParseError(lineNo, 1, "expected var=element, found '" + piece +
                                        "'");
      c.given.emplace_back(var, elem);
    }
    out.push_back(std::move(c));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Printing

namespace {

bool atomic(const Term& t) { return t.isVar() || t.args().empty(); }

void formatTermInto(const Term& t, std::string& out) {
  if (atomic(t)) {
    out += t.head();
    return;
  }
  if (t.args().size() == 2) {
    const Term& a = t.args()[0];
    const Term& b = t.args()[1];
    if (!atomic(a)) out += "(";
    formatTermInto(a, out);
    if (!atomic(a)) out += ")";
    out += " " + t.head() + " ";
    if (!atomic(b)) out += "(";
    formatTermInto(b, out);
    if (!atomic(b)) out += ")";
    return;
  }
  out += t.head() + "(";
  for (std::size_t i = 0; i < t.args().size(); ++i) {
    if (i) out += ",";
    formatTermInto(t.args()[i], out);
  }
  out += ")";
}

std::string formatFormulaImpl(const Formula& f, bool dropVacuous) {
  std::string out;
  for (const auto& pe : f.prefix()) {
    if (dropVacuous && !f.lhs().mentionsVariable(pe.var) &&
        !f.rhs().mentionsVariable(pe.var))
      continue;
    out += (pe.q == Quantifier::ForAll ? "forall " : "exists ");
    out += pe.var + " ";
  }
  if (!out.empty()) out += ": ";
  formatTermInto(f.lhs(), out);
  bool ambiguous = f.lhs().isVar() && f.rhs().isVar();
  out += ambiguous ? " =_" + f.eqSort() + " " : " = ";
  formatTermInto(f.rhs(), out);
  return out;
}

}  // namespace

std::string format_term(const Term& t) {
  std::string out;
  formatTermInto(t, out);
  return out;
}

std::string format_formula(const Formula& f) {
  return formatFormulaImpl(f, false);
}

std::string format_formula_short(const Formula& f) {
  return formatFormulaImpl(f, true);
}

std::string format_assignment(const Assignment& a) {
  std::string out;
  for (std::size_t i = 0; i < a.bindings().size(); ++i) {
    if (i) out += ", ";
    out += a.bindings()[i].var + " = " + a.bindings()[i].elem;
  }
  return out;
}

std::string dump_grammar(const TreeGrammar& g) {
  std::ostringstream os;
  for (std::size_t i = 0; i < g.nonterminalCount(); ++i)
    os << "sort " << g.nt(static_cast<int>(i)).name << " : "
       << g.nt(static_cast<int>(i)).sort << "\n";
  if (g.start()) os << "start " << g.nt(*g.start()).name << "\n";
  for (std::size_t i = 0; i < g.nonterminalCount(); ++i) {
    os << g.nt(static_cast<int>(i)).name << " ::=";
    const auto& rules = g.rules(static_cast<int>(i));
    for (std::size_t r = 0; r < rules.size(); ++r) {
      os << (r == 0 ? " " : " | ");
      const Alternative& alt = rules[r];
      if (alt.isChain) {
        os << g.nt(alt.chainTarget).name;
        continue;
      }
      const GrammarSymbol& sym = g.alphabet().at(alt.sym);
      if (alt.args.empty()) {
        os << sym.name;
      } else if (alt.args.size() == 2) {
        os << g.nt(alt.args[0]).name << " " << sym.name << " "
           << g.nt(alt.args[1]).name;
      } else {
        os << sym.name << "(";
        for (std::size_t a = 0; a < alt.args.size(); ++a) {
          if (a) os << ",";
          os << g.nt(alt.args[a]).name;
        }
        os << ")";
      }
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace finitax
