#include "popstar/parse.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>
#include <vector>

namespace popstar {

namespace {

struct Token {
  enum Kind { LParen, RParen, Comma, Semi, Arrow, Ident, End } kind;
  std::string text;
  int line, col;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) { advance(); }

  const Token& peek() const { return tok_; }
  Token next() {
    Token t = tok_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      bump();
    tok_.line = line_;
    tok_.col = col_;
    if (pos_ >= text_.size()) {
      tok_.kind = Token::End;
      tok_.text.clear();
      return;
    }
    char c = text_[pos_];
    if (c == '(') {
      tok_ = {Token::LParen, "(", line_, col_};
      bump();
      return;
    }
    if (c == ')') {
      tok_ = {Token::RParen, ")", line_, col_};
      bump();
      return;
    }
    if (c == ',') {
      tok_ = {Token::Comma, ",", line_, col_};
      bump();
      return;
    }
    if (c == ';') {
      tok_ = {Token::Semi, ";", line_, col_};
      bump();
      return;
    }
    if (c == '-' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') {
      tok_ = {Token::Arrow, "->", line_, col_};
      bump();
      bump();
      return;
    }
    std::string ident;
    int l = line_, cl = col_;
    while (pos_ < text_.size()) {
      char d = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(d)) || d == '(' || d == ')' ||
          d == ',' || d == ';')
        break;
      if (d == '-' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') break;
      ident.push_back(d);
      bump();
    }
    tok_ = {Token::Ident, ident, l, cl};
  }

  void bump() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  const std::string& text_;
  size_t pos_ = 0;
  int line_ = 1, col_ = 1;
  Token tok_{Token::End, "", 1, 1};
};

[[noreturn]] void fail(const Token& t, const std::string& msg) {
  throw ParseError(msg + (t.text.empty() ? "" : " (got '" + t.text + "')"), t.line, t.col);
}

// Raw term syntax before symbols and variables are resolved.
struct RawTerm {
  std::string head;
  bool parenthesised = false;
  std::vector<RawTerm> args;
  int semi_at = -1;  // number of arguments before ';', -1 when absent
  int line = 0, col = 0;
};

RawTerm parse_raw_term(Lexer& lx, bool allow_semi) {
  Token head = lx.next();
  if (head.kind != Token::Ident) fail(head, "expected a function symbol or variable");
  RawTerm t;
  t.head = head.text;
  t.line = head.line;
  t.col = head.col;
  if (lx.peek().kind == Token::LParen) {
    t.parenthesised = true;
    lx.next();
    if (lx.peek().kind == Token::RParen) {
      lx.next();
      return t;
    }
    if (lx.peek().kind == Token::Semi) {
      if (!allow_semi) fail(lx.peek(), "';' is only valid in the native format");
      t.semi_at = 0;
      lx.next();
      if (lx.peek().kind == Token::RParen) {
        lx.next();
        return t;
      }
    }
    while (true) {
      t.args.push_back(parse_raw_term(lx, allow_semi));
      Token sep = lx.next();
      if (sep.kind == Token::RParen) break;
      if (sep.kind == Token::Comma) continue;
      if (sep.kind == Token::Semi) {
        if (!allow_semi) fail(sep, "';' is only valid in the native format");
        if (t.semi_at >= 0) fail(sep, "second ';' in argument list");
        t.semi_at = static_cast<int>(t.args.size());
        if (lx.peek().kind == Token::RParen) {
          lx.next();
          break;
        }
        continue;
      }
      fail(sep, "expected ',', ';' or ')'");
    }
  }
  return t;
}

struct RawRule {
  RawTerm lhs, rhs;
};

struct RawProblem {
  std::vector<std::string> var_names;
  std::vector<std::string> declared_defined;
  std::vector<RawRule> rules;
  bool has_defined_block = false;
};

void skip_balanced(Lexer& lx) {
  int level = 1;
  while (level > 0) {
    Token t = lx.next();
    if (t.kind == Token::End) fail(t, "unterminated section");
    if (t.kind == Token::LParen) ++level;
    if (t.kind == Token::RParen) --level;
  }
}

RawProblem parse_raw_problem(const std::string& text, bool allow_semi) {
  Lexer lx(text);
  RawProblem p;
  while (lx.peek().kind != Token::End) {
    Token open = lx.next();
    if (open.kind != Token::LParen) fail(open, "expected '(' opening a section");
    Token name = lx.next();
    if (name.kind != Token::Ident) fail(name, "expected a section name");
    if (name.text == "VAR") {
      while (lx.peek().kind == Token::Ident) p.var_names.push_back(lx.next().text);
      Token close = lx.next();
      if (close.kind != Token::RParen) fail(close, "expected ')' after VAR block");
    } else if (name.text == "DEFINED") {
      if (!allow_semi) fail(name, "unknown section 'DEFINED'");
      p.has_defined_block = true;
      while (lx.peek().kind == Token::Ident) p.declared_defined.push_back(lx.next().text);
      Token close = lx.next();
      if (close.kind != Token::RParen) fail(close, "expected ')' after DEFINED block");
    } else if (name.text == "RULES") {
      while (lx.peek().kind != Token::RParen) {
        RawRule r;
        r.lhs = parse_raw_term(lx, allow_semi);
        Token arrow = lx.next();
        if (arrow.kind != Token::Arrow) fail(arrow, "expected '->'");
        r.rhs = parse_raw_term(lx, allow_semi);
        p.rules.push_back(std::move(r));
      }
      lx.next();
    } else if (name.text == "COMMENT" || name.text == "STRATEGY") {
      skip_balanced(lx);
    } else {
      fail(name, "unknown section '" + name.text + "'");
    }
  }
  return p;
}

struct Resolver {
  Signature sig;
  SafeMapping sm;
  std::map<std::string, int> arity;  // first-seen arity per symbol
  std::map<std::string, std::set<int>> safe;
  std::map<std::string, bool> saw_semi;
  std::set<std::string> vars;
  std::set<std::string> lhs_roots;

  void scan(const RawTerm& t, bool at_lhs_root) {
    if (vars.count(t.head)) {
      if (t.parenthesised || !t.args.empty())
        throw ParseError("variable '" + t.head + "' applied to arguments", t.line, t.col);
      if (at_lhs_root)
        throw ParseError("left-hand side is a variable", t.line, t.col);
      return;
    }
    int n = static_cast<int>(t.args.size());
    auto it = arity.find(t.head);
    if (it == arity.end()) {
      arity[t.head] = n;
    } else if (it->second != n) {
      throw ParseError("arity clash for symbol '" + t.head + "': " +
                           std::to_string(it->second) + " vs " + std::to_string(n),
                       t.line, t.col);
    }
    if (t.semi_at >= 0) {
      std::set<int> s;
      for (int i = t.semi_at + 1; i <= n; ++i) s.insert(i);
      auto [pos, inserted] = safe.emplace(t.head, s);
      if (!inserted && saw_semi[t.head] && pos->second != s)
        throw ParseError("inconsistent normal/safe annotation for '" + t.head + "'",
                         t.line, t.col);
      pos->second = s;
      saw_semi[t.head] = true;
    }
    if (at_lhs_root) lhs_roots.insert(t.head);
    for (const RawTerm& a : t.args) scan(a, false);
  }

  Term build(const RawTerm& t) const {
    if (vars.count(t.head)) return Term::var(t.head);
    std::vector<Term> args;
    args.reserve(t.args.size());
    for (const RawTerm& a : t.args) args.push_back(build(a));
    return Term::app(sig.id(t.head), std::move(args));
  }
};

ParsedProblem resolve(const RawProblem& raw, ProblemFormat format) {
  Resolver rs;
  rs.vars.insert(raw.var_names.begin(), raw.var_names.end());
  for (const RawRule& r : raw.rules) {
    rs.scan(r.lhs, true);
    rs.scan(r.rhs, false);
  }

  std::set<std::string> defined = rs.lhs_roots;
  if (raw.has_defined_block)
    defined = std::set<std::string>(raw.declared_defined.begin(),
                                    raw.declared_defined.end());

  for (const auto& [name, n] : rs.arity) {
    SymbolKind kind = defined.count(name) ? SymbolKind::Defined : SymbolKind::Constructor;
    rs.sig.add(name, n, kind);
  }

  ParsedProblem out;
  out.format = format;
  out.trs.signature = rs.sig;
  for (const RawRule& r : raw.rules)
    out.trs.rules.push_back(Rule{rs.build(r.lhs), rs.build(r.rhs)});
  out.trs.validate();

  if (format == ProblemFormat::NativeAnnotated) {
    SafeMapping sm;
    for (SymbolId f : rs.sig.defined_symbols()) {
      auto it = rs.safe.find(rs.sig.name(f));
      // Unannotated defined symbols default to all-normal.
      sm.set(f, it == rs.safe.end() ? std::set<int>{} : it->second);
    }
    out.safe_mapping = sm;
  }
  return out;
}

}  // namespace

Trs parse_tpdb(const std::string& text) {
  return resolve(parse_raw_problem(text, false), ProblemFormat::TpdbTrs).trs;
}

ParsedProblem parse_native(const std::string& text) {
  return resolve(parse_raw_problem(text, true), ProblemFormat::NativeAnnotated);
}

ParsedProblem parse_problem(const std::string& text) {
  bool native = text.find("(DEFINED") != std::string::npos ||
                text.find(';') != std::string::npos;
  if (native) return parse_native(text);
  ParsedProblem p;
  p.trs = parse_tpdb(text);
  p.format = ProblemFormat::TpdbTrs;
  return p;
}

std::string print_tpdb(const Trs& trs) {
  std::set<std::string> vs;
  for (const Rule& r : trs.rules) {
    collect_vars(r.lhs, vs);
    collect_vars(r.rhs, vs);
  }
  std::ostringstream os;
  os << "(VAR";
  for (const auto& v : vs) os << " " << v;
  os << ")\n(RULES\n";
  for (const Rule& r : trs.rules)
    os << "  " << to_string(r.lhs, trs.signature) << " -> "
       << to_string(r.rhs, trs.signature) << "\n";
  os << ")\n";
  return os.str();
}

std::string term_to_native(const Term& t, const Signature& sig, const SafeMapping& sm) {
  if (t.is_var()) return t.var_name();
  std::string out = sig.name(t.sym());
  int n = static_cast<int>(t.args().size());
  if (n == 0 && sig.is_constructor(t.sym())) return out;
  if (n == 0) return out + "(;)";
  out += "(";
  bool semi_done = false;
  for (int i = 1; i <= n; ++i) {
    bool safe = sm.is_safe(sig, t.sym(), i);
    if (!safe && semi_done)
      throw SignatureError("safe positions of '" + sig.name(t.sym()) +
                           "' are not a suffix; not expressible in semicolon notation");
    if (safe && !semi_done) {
      out += ";";
      semi_done = true;
    } else if (i > 1) {
      out += ",";
    }
    out += term_to_native(t.args()[static_cast<size_t>(i - 1)], sig, sm);
  }
  if (!semi_done) out += ";";
  out += ")";
  return out;
}

std::string print_native(const Trs& trs, const SafeMapping& sm) {
  std::set<std::string> vs;
  for (const Rule& r : trs.rules) {
    collect_vars(r.lhs, vs);
    collect_vars(r.rhs, vs);
  }
  std::ostringstream os;
  os << "(VAR";
  for (const auto& v : vs) os << " " << v;
  os << ")\n(DEFINED";
  for (SymbolId f : trs.signature.defined_symbols()) os << " " << trs.signature.name(f);
  os << ")\n(RULES\n";
  for (const Rule& r : trs.rules)
    os << "  " << term_to_native(r.lhs, trs.signature, sm) << " -> "
       << term_to_native(r.rhs, trs.signature, sm) << "\n";
  os << ")\n";
  return os.str();
}

Certificate parse_certificate(const std::string& text, const Signature& sig,
                              OrderKind order) {
  Certificate cert;
  cert.order_kind = order;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ls(line);
    std::string kw;
    if (!(ls >> kw)) continue;
    std::string sym;
    if (!(ls >> sym)) throw ParseError("missing symbol after '" + kw + "'", lineno, 1);
    if (!sig.contains(sym)) throw ParseError("unknown symbol '" + sym + "'", lineno, 1);
    SymbolId f = sig.id(sym);
    if (kw == "rank") {
      if (!sig.is_defined(f))
        throw ParseError("constructor '" + sym + "' cannot carry a rank", lineno, 1);
      int r;
      if (!(ls >> r)) throw ParseError("missing rank value", lineno, 1);
      cert.precedence.set_rank(f, r);
    } else if (kw == "safe") {
      if (!sig.is_defined(f))
        throw ParseError("constructor '" + sym + "' is implicitly all-safe", lineno, 1);
      std::set<int> s;
      int p;
      while (ls >> p) {
        if (p < 1 || p > sig.arity(f))
          throw ParseError("safe position out of range for '" + sym + "'", lineno, 1);
        s.insert(p);
      }
      cert.safe_mapping.set(f, s);
    } else {
      throw ParseError("unknown keyword '" + kw + "'", lineno, 1);
    }
  }
  return cert;
}

std::string print_certificate(const Certificate& cert, const Signature& sig) {
  std::ostringstream os;
  for (const auto& [f, r] : cert.precedence.ranks())
    os << "rank " << sig.name(f) << " " << r << "\n";
  for (SymbolId f : sig.defined_symbols()) {
    if (!cert.safe_mapping.has(f)) continue;
    os << "safe " << sig.name(f);
    for (int p : cert.safe_mapping.safe_set(sig, f)) os << " " << p;
    os << "\n";
  }
  return os.str();
}

}  // namespace popstar
