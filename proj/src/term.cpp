#include "popstar/term.hpp"

#include <algorithm>
#include <functional>

namespace popstar {

SymbolId Signature::add(const std::string& name, int arity, SymbolKind kind) {
  if (by_name_.count(name))
    throw SignatureError("duplicate symbol declaration: " + name);
  SymbolId id = static_cast<SymbolId>(symbols_.size());
  symbols_.push_back(Symbol{name, arity, kind});
  by_name_[name] = id;
  return id;
}

SymbolId Signature::ensure(const std::string& name, int arity, SymbolKind kind) {
  auto it = by_name_.find(name);
  if (it == by_name_.end()) return add(name, arity, kind);
  const Symbol& s = symbols_[static_cast<size_t>(it->second)];
  if (s.arity != arity)
    throw SignatureError("arity clash for symbol '" + name + "': " +
                         std::to_string(s.arity) + " vs " + std::to_string(arity));
  if (s.kind != kind)
    throw SignatureError("kind clash for symbol '" + name + "'");
  return it->second;
}

SymbolId Signature::id(const std::string& name) const {
  auto it = by_name_.find(name);
  if (it == by_name_.end()) throw SignatureError("unknown symbol: " + name);
  return it->second;
}

std::vector<SymbolId> Signature::defined_symbols() const {
  std::vector<SymbolId> out;
  for (size_t i = 0; i < symbols_.size(); ++i)
    if (symbols_[i].kind == SymbolKind::Defined) out.push_back(static_cast<SymbolId>(i));
  return out;
}

std::vector<SymbolId> Signature::constructors() const {
  std::vector<SymbolId> out;
  for (size_t i = 0; i < symbols_.size(); ++i)
    if (symbols_[i].kind == SymbolKind::Constructor) out.push_back(static_cast<SymbolId>(i));
  return out;
}

namespace {
size_t combine(size_t h, size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}
}  // namespace

Term Term::var(const std::string& name) {
  auto n = std::make_shared<Node>();
  n->is_var = true;
  n->ground = false;
  n->var = name;
  n->hash = combine(0x517cc1b7, std::hash<std::string>{}(name));
  n->size = 1;
  n->depth = 1;
  return Term(std::move(n));
}

Term Term::app(SymbolId f, std::vector<Term> args) {
  auto n = std::make_shared<Node>();
  n->is_var = false;
  n->sym = f;
  size_t h = combine(0x2545f491, static_cast<size_t>(f));
  int sz = 1, dp = 0;
  bool ground = true;
  for (const Term& a : args) {
    h = combine(h, a.hash());
    sz += a.size();
    dp = std::max(dp, a.depth());
    ground = ground && a.is_ground();
  }
  n->args = std::move(args);
  n->hash = h;
  n->size = sz;
  n->depth = 1 + dp;
  n->ground = ground;
  return Term(std::move(n));
}

bool Term::operator==(const Term& o) const {
  if (n_ == o.n_) return true;
  if (n_->hash != o.n_->hash || n_->is_var != o.n_->is_var || n_->size != o.n_->size)
    return false;
  if (n_->is_var) return n_->var == o.n_->var;
  if (n_->sym != o.n_->sym || n_->args.size() != o.n_->args.size()) return false;
  for (size_t i = 0; i < n_->args.size(); ++i)
    if (!(n_->args[i] == o.n_->args[i])) return false;
  return true;
}

int depth(const Term& t) { return t.depth(); }
int term_size(const Term& t) { return t.size(); }

namespace {
void check_term(const Term& t, const Signature& sig) {
  if (t.is_var()) return;
  if (t.sym() < 0 || static_cast<size_t>(t.sym()) >= sig.size())
    throw SignatureError("term uses undeclared symbol id");
  if (sig.arity(t.sym()) != static_cast<int>(t.args().size()))
    throw SignatureError("arity violation at symbol " + sig.name(t.sym()));
  for (const Term& a : t.args()) check_term(a, sig);
}
}  // namespace

void Trs::validate() const {
  for (const Rule& r : rules) {
    check_term(r.lhs, signature);
    check_term(r.rhs, signature);
    if (r.lhs.is_var()) throw SignatureError("left-hand side is a variable");
    std::set<std::string> lv = vars(r.lhs), rv = vars(r.rhs);
    for (const auto& v : rv)
      if (!lv.count(v))
        throw SignatureError("variable '" + v + "' occurs only on a right-hand side");
  }
}

bool is_value(const Term& t, const Signature& sig) {
  if (t.is_var()) return true;
  if (sig.is_defined(t.sym())) return false;
  for (const Term& a : t.args())
    if (!is_value(a, sig)) return false;
  return true;
}

bool is_basic(const Term& t, const Signature& sig) {
  if (t.is_var() || !sig.is_defined(t.sym())) return false;
  for (const Term& a : t.args())
    if (!is_value(a, sig)) return false;
  return true;
}

TermClass classify(const Term& t, const Signature& sig) {
  if (t.is_var()) return TermClass::Value;
  check_term(t, sig);
  if (is_value(t, sig)) return TermClass::Value;
  if (is_basic(t, sig)) return TermClass::Basic;
  return TermClass::General;
}

bool is_constructor_trs(const Trs& r) {
  for (const Rule& rule : r.rules)
    if (!is_basic(rule.lhs, r.signature)) return false;
  return true;
}

bool is_left_linear(const Term& lhs) {
  std::set<std::string> seen;
  bool linear = true;
  std::function<void(const Term&)> walk = [&](const Term& t) {
    if (t.is_var()) {
      if (!seen.insert(t.var_name()).second) linear = false;
      return;
    }
    for (const Term& a : t.args()) walk(a);
  };
  walk(lhs);
  return linear;
}

void collect_vars(const Term& t, std::set<std::string>& out) {
  if (t.is_var()) {
    out.insert(t.var_name());
    return;
  }
  for (const Term& a : t.args()) collect_vars(a, out);
}

std::set<std::string> vars(const Term& t) {
  std::set<std::string> out;
  collect_vars(t, out);
  return out;
}

Term apply_subst(const Term& t, const Substitution& s) {
  if (t.is_var()) {
    auto it = s.find(t.var_name());
    return it == s.end() ? t : it->second;
  }
  if (t.is_ground()) return t;
  std::vector<Term> args;
  args.reserve(t.args().size());
  for (const Term& a : t.args()) args.push_back(apply_subst(a, s));
  return Term::app(t.sym(), std::move(args));
}

bool match(const Term& pattern, const Term& subject, Substitution& s) {
  if (pattern.is_var()) {
    auto it = s.find(pattern.var_name());
    if (it != s.end()) return it->second == subject;
    s.emplace(pattern.var_name(), subject);
    return true;
  }
  if (subject.is_var() || pattern.sym() != subject.sym()) return false;
  for (size_t i = 0; i < pattern.args().size(); ++i)
    if (!match(pattern.args()[i], subject.args()[i], s)) return false;
  return true;
}

namespace {
Term walk_subst(const Term& t, const Substitution& s) {
  Term cur = t;
  while (cur.is_var()) {
    auto it = s.find(cur.var_name());
    if (it == s.end()) return cur;
    cur = it->second;
  }
  return cur;
}

bool occurs(const std::string& v, const Term& t, const Substitution& s) {
  Term r = walk_subst(t, s);
  if (r.is_var()) return r.var_name() == v;
  for (const Term& a : r.args())
    if (occurs(v, a, s)) return true;
  return false;
}
}  // namespace

bool unify(const Term& a, const Term& b, Substitution& s) {
  Term x = walk_subst(a, s), y = walk_subst(b, s);
  if (x.is_var() && y.is_var() && x.var_name() == y.var_name()) return true;
  if (x.is_var()) {
    if (occurs(x.var_name(), y, s)) return false;
    s.emplace(x.var_name(), y);
    return true;
  }
  if (y.is_var()) return unify(y, x, s);
  if (x.sym() != y.sym()) return false;
  for (size_t i = 0; i < x.args().size(); ++i)
    if (!unify(x.args()[i], y.args()[i], s)) return false;
  return true;
}

Term rename_vars(const Term& t, const std::string& prefix) {
  if (t.is_var()) return Term::var(prefix + t.var_name());
  std::vector<Term> args;
  args.reserve(t.args().size());
  for (const Term& a : t.args()) args.push_back(rename_vars(a, prefix));
  return Term::app(t.sym(), std::move(args));
}

bool is_orthogonal(const Trs& r) {
  for (const Rule& rule : r.rules)
    if (!is_left_linear(rule.lhs)) return false;

  // The overlap check unifies every non-variable subterm of one left-hand
  // side with another left-hand side, rules renamed apart. Root overlaps of
  // a rule with itself (up to renaming) do not count.
  auto alpha_equal = [](const Rule& a, const Rule& b) {
    Substitution s1, s2;
    return match(a.lhs, rename_vars(b.lhs, "#r#"), s1) &&
           match(rename_vars(b.lhs, "#r#"), a.lhs, s2) &&
           apply_subst(a.rhs, s1) == rename_vars(b.rhs, "#r#");
  };

  for (size_t i = 0; i < r.rules.size(); ++i) {
    for (size_t j = 0; j < r.rules.size(); ++j) {
      Term l1 = rename_vars(r.rules[i].lhs, "#a#");
      Term l2 = rename_vars(r.rules[j].lhs, "#b#");
      std::function<bool(const Term&, bool)> overlaps = [&](const Term& sub, bool at_root) {
        if (!sub.is_var()) {
          bool excluded = at_root && (i == j || alpha_equal(r.rules[i], r.rules[j]));
          if (!excluded) {
            Substitution s;
            if (unify(sub, l2, s)) return true;
          }
          for (const Term& a : sub.args())
            if (overlaps(a, false)) return true;
        }
        return false;
      };
      if (overlaps(l1, true)) return false;
    }
  }
  return true;
}

std::string to_string(const Term& t, const Signature& sig) {
  if (t.is_var()) return t.var_name();
  std::string out = sig.name(t.sym());
  if (!t.args().empty()) {
    out += "(";
    for (size_t i = 0; i < t.args().size(); ++i) {
      if (i) out += ",";
      out += to_string(t.args()[i], sig);
    }
    out += ")";
  }
  return out;
}

bool SafeMapping::is_safe(const Signature& sig, SymbolId f, int pos) const {
  if (sig.is_constructor(f)) return true;
  auto it = safe_.find(f);
  if (it == safe_.end())
    throw SignatureError("safe mapping has no entry for " + sig.name(f));
  return it->second.count(pos) != 0;
}

std::set<int> SafeMapping::safe_set(const Signature& sig, SymbolId f) const {
  if (sig.is_constructor(f)) {
    std::set<int> all;
    for (int i = 1; i <= sig.arity(f); ++i) all.insert(i);
    return all;
  }
  auto it = safe_.find(f);
  if (it == safe_.end())
    throw SignatureError("safe mapping has no entry for " + sig.name(f));
  return it->second;
}

std::vector<int> SafeMapping::normal_positions(const Signature& sig, SymbolId f) const {
  std::vector<int> out;
  for (int i = 1; i <= sig.arity(f); ++i)
    if (!is_safe(sig, f, i)) out.push_back(i);
  return out;
}

std::vector<int> SafeMapping::safe_positions(const Signature& sig, SymbolId f) const {
  std::vector<int> out;
  for (int i = 1; i <= sig.arity(f); ++i)
    if (is_safe(sig, f, i)) out.push_back(i);
  return out;
}

int Precedence::rank(SymbolId f) const {
  auto it = rank_.find(f);
  if (it == rank_.end()) throw SignatureError("precedence has no rank for symbol");
  return it->second;
}

bool Precedence::gt(const Signature& sig, SymbolId f, SymbolId g) const {
  bool fd = sig.is_defined(f), gd = sig.is_defined(g);
  if (fd && !gd) return true;
  if (!fd) return false;
  return rank(f) > rank(g);
}

bool Precedence::eq(const Signature& sig, SymbolId f, SymbolId g) const {
  if (f == g) return true;
  bool fd = sig.is_defined(f), gd = sig.is_defined(g);
  if (!fd && !gd) return true;
  if (fd != gd) return false;
  return rank(f) == rank(g);
}

std::string order_name(OrderKind k) {
  switch (k) {
    case OrderKind::Pop: return "popstar";
    case OrderKind::PopPs: return "popstarps";
    case OrderKind::Mpo: return "mpo";
  }
  return "?";
}

}  // namespace popstar
