#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "popstar/term.hpp"

namespace popstar {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, int line, int col)
      : std::runtime_error(msg + " at line " + std::to_string(line) + ", column " +
                           std::to_string(col)),
        line(line),
        col(col) {}
  int line;
  int col;
};

enum class ProblemFormat { TpdbTrs, NativeAnnotated };

struct ParsedProblem {
  Trs trs;
  ProblemFormat format = ProblemFormat::TpdbTrs;
  // Only the native format declares a safe mapping (semicolon notation).
  std::optional<SafeMapping> safe_mapping;
};

// Classic TPDB text: optional (VAR ...) block, a (RULES l -> r ...) block,
// (COMMENT ...) and (STRATEGY ...) sections are skipped. Symbols are inferred
// with their arities from use; defined symbols are those at left-hand-side
// roots.
Trs parse_tpdb(const std::string& text);

// Native format: as TPDB plus semicolon-separated argument lists
// f(t1,...,tk ; tk+1,...,tk+l) declaring normal/safe positions, and an
// optional (DEFINED f g ...) block overriding kind inference.
ParsedProblem parse_native(const std::string& text);

// Dispatches on content: a (DEFINED ...) block or a semicolon inside an
// argument list selects the native format.
ParsedProblem parse_problem(const std::string& text);

std::string print_tpdb(const Trs& trs);
std::string print_native(const Trs& trs, const SafeMapping& sm);
std::string term_to_native(const Term& t, const Signature& sig, const SafeMapping& sm);

// Certificate files: one "rank <symbol> <int>" line per defined symbol and
// one "safe <symbol> <positions...>" line; blank lines and '#' comments ok.
Certificate parse_certificate(const std::string& text, const Signature& sig,
                              OrderKind order);
std::string print_certificate(const Certificate& cert, const Signature& sig);

}  // namespace popstar
