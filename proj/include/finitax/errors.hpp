#pragma once

#include <stdexcept>
#include <string>

namespace finitax {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class UnknownSymbol : public Error {
 public:
  explicit UnknownSymbol(const std::string& name)
      : Error("unknown symbol: " + name), symbol(name) {}
  std::string symbol;
};

class UnknownElement : public Error {
 public:
  UnknownElement(const std::string& elem, const std::string& sort)
      : Error("unknown element '" + elem + "' of sort " + sort),
        element(elem),
        sort(sort) {}
  std::string element;
  std::string sort;
};

class UnboundVariable : public Error {
 public:
  explicit UnboundVariable(const std::string& name)
      : Error("unbound variable: " + name), variable(name) {}
  std::string variable;
};

class SignatureMismatch : public Error {
 public:
  explicit SignatureMismatch(const std::string& msg) : Error(msg) {}
};

class SortMismatch : public Error {
 public:
  explicit SortMismatch(const std::string& msg) : Error(msg) {}
};

class AlphabetMismatch : public Error {
 public:
  explicit AlphabetMismatch(const std::string& msg) : Error(msg) {}
};

class ArityMismatch : public Error {
 public:
  explicit ArityMismatch(const std::string& msg) : Error(msg) {}
};

class OutOfFragment : public Error {
 public:
  explicit OutOfFragment(const std::string& msg) : Error(msg) {}
};

class NondeterministicGrammar : public Error {
 public:
  explicit NondeterministicGrammar(const std::string& msg) : Error(msg) {}
};

class InvalidWeights : public Error {
 public:
  explicit InvalidWeights(const std::string& msg) : Error(msg) {}
};

/// Raised when a configured cap is exceeded; carries the cap's name.
class ResourceLimit : public Error {
 public:
  ResourceLimit(const std::string& capName, std::size_t cap)
      : Error("resource cap exceeded: " + capName + " (limit " +
              std::to_string(cap) + ")"),
        capName(capName),
        cap(cap) {}
  std::string capName;
  std::size_t cap;
};

class ParseError : public Error {
 public:
  ParseError(int line, int col, const std::string& msg)
      : Error("parse error at " + std::to_string(line) + ":" +
              std::to_string(col) + ": " + msg),
        line(line),
        col(col) {}
  int line;
  int col;
};

class TotalityError : public Error {
 public:
  TotalityError(const std::string& symbol, const std::string& missingTuple)
      : Error("table for symbol '" + symbol + "' is not total, missing entry " +
              missingTuple),
        symbol(symbol),
        missingTuple(missingTuple) {}
  std::string symbol;
  std::string missingTuple;
};

}  // namespace finitax
