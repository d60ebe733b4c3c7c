#include "popstar/seqterm.hpp"

#include <algorithm>
#include <stdexcept>

namespace popstar {

int NormSignature::add(const std::string& name, int arity, int rank) {
  syms_.push_back(NSym{name, arity, rank});
  return static_cast<int>(syms_.size()) - 1;
}

int NormSignature::max_arity() const {
  int m = 0;
  for (const NSym& s : syms_) m = std::max(m, s.arity);
  return m;
}

NormSignature NormSignature::from(const Signature& sig, const SafeMapping& sm,
                                  const Precedence& prec) {
  NormSignature ns;
  int min_rank = 0;
  for (const auto& [f, r] : prec.ranks()) min_rank = std::min(min_rank, r);
  int ctor_rank = min_rank - 1;
  for (size_t i = 0; i < sig.size(); ++i) {
    SymbolId f = static_cast<SymbolId>(i);
    int arity = sig.is_defined(f)
                    ? static_cast<int>(sm.normal_positions(sig, f).size())
                    : 0;
    int rank = sig.is_defined(f) ? prec.rank(f) : ctor_rank;
    ns.add(sig.name(f) + "^n", arity, rank);
  }
  ns.star_ = ns.add("*", 0, ctor_rank - 1);
  return ns;
}

namespace {
size_t combine(size_t h, size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}
}  // namespace

SeqTerm SeqTerm::var(const std::string& name) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Var;
  n->var = name;
  n->width = 1;
  n->depth = 1;
  n->ground = false;
  n->hash = combine(0xa5a5a5, std::hash<std::string>{}(name));
  return SeqTerm(std::move(n));
}

SeqTerm SeqTerm::app(int sym, std::vector<SeqTerm> args) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::App;
  n->sym = sym;
  int w = 1, d = 0;
  size_t h = combine(0x5ca1ab1e, static_cast<size_t>(sym));
  bool ground = true;
  for (const SeqTerm& a : args) {
    if (!a.is_list()) throw std::invalid_argument("application arguments must be sequences");
    w = std::max(w, a.width());
    d = std::max(d, a.sdepth());
    h = combine(h, a.hash());
    ground = ground && a.is_ground();
  }
  n->items = std::move(args);
  n->width = w;
  n->depth = 1 + d;
  n->ground = ground;
  n->hash = h;
  return SeqTerm(std::move(n));
}

SeqTerm SeqTerm::list(std::vector<SeqTerm> elems) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::List;
  std::vector<SeqTerm> flat;
  for (SeqTerm& e : elems) {
    if (e.is_list())  // concatenation flattens
      for (const SeqTerm& x : e.items()) flat.push_back(x);
    else
      flat.push_back(std::move(e));
  }
  int w = 0, d = 0;
  size_t h = 0xf1a7;
  bool ground = true;
  for (const SeqTerm& e : flat) {
    w += e.width();
    d = std::max(d, e.sdepth());
    h = combine(h, e.hash());
    ground = ground && e.is_ground();
  }
  n->items = std::move(flat);
  n->width = w;
  n->depth = d;
  n->ground = ground;
  n->hash = combine(h, 0x115717);
  return SeqTerm(std::move(n));
}

bool SeqTerm::operator==(const SeqTerm& o) const {
  if (n_ == o.n_) return true;
  if (n_->kind != o.n_->kind || n_->hash != o.n_->hash) return false;
  if (n_->kind == Kind::Var) return n_->var == o.n_->var;
  if (n_->sym != o.n_->sym || n_->items.size() != o.n_->items.size()) return false;
  for (size_t i = 0; i < n_->items.size(); ++i)
    if (!(n_->items[i] == o.n_->items[i])) return false;
  return true;
}

int seq_len(const SeqTerm& a) { return a.is_list() ? static_cast<int>(a.items().size()) : 1; }
int seq_width(const SeqTerm& a) { return a.width(); }

std::vector<SeqTerm> to_elements(const SeqTerm& a) {
  if (a.is_list()) return a.items();
  return {a};
}

SeqTerm concat(const SeqTerm& a, const SeqTerm& b) {
  std::vector<SeqTerm> elems = to_elements(a);
  for (const SeqTerm& e : to_elements(b)) elems.push_back(e);
  return SeqTerm::list(std::move(elems));
}

SeqTerm tally(int n, const NormSignature& ns) {
  std::vector<SeqTerm> elems;
  elems.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) elems.push_back(SeqTerm::star(ns));
  return SeqTerm::list(std::move(elems));
}

std::string to_string(const SeqTerm& t, const NormSignature& ns) {
  switch (t.kind()) {
    case SeqTerm::Kind::Var: return t.var_name();
    case SeqTerm::Kind::App: {
      std::string out = ns.name(t.sym());
      if (!t.items().empty()) {
        out += "(";
        for (size_t i = 0; i < t.items().size(); ++i) {
          if (i) out += ",";
          out += to_string(t.items()[i], ns);
        }
        out += ")";
      }
      return out;
    }
    case SeqTerm::Kind::List: {
      std::string out = "[";
      for (size_t i = 0; i < t.items().size(); ++i) {
        if (i) out += " ";
        out += to_string(t.items()[i], ns);
      }
      return out + "]";
    }
  }
  return "?";
}

int norm(const Term& t, const Signature& sig, const SafeMapping& sm) {
  if (t.is_var()) return 1;
  int m = 0;
  for (size_t i = 0; i < t.args().size(); ++i)
    if (sm.is_safe(sig, t.sym(), static_cast<int>(i) + 1))
      m = std::max(m, norm(t.args()[i], sig, sm));
  return 1 + m;
}

PredInterp::PredInterp(const Trs& trs, const SafeMapping& sm, const Precedence& prec)
    : trs_(trs), sm_(sm), ns_(NormSignature::from(trs.signature, sm, prec)), engine_(trs) {}

SeqTerm PredInterp::S(const Term& t) {
  if (engine_.is_normal_form(t)) return SeqTerm::nil();
  const Signature& sig = trs_.signature;
  std::vector<SeqTerm> napp_args;
  SeqTerm acc = SeqTerm::nil();
  for (size_t i = 0; i < t.args().size(); ++i) {
    if (sm_.is_safe(sig, t.sym(), static_cast<int>(i) + 1))
      acc = concat(acc, S(t.args()[i]));
    else
      napp_args.push_back(N(t.args()[i]));
  }
  SeqTerm head = SeqTerm::app(ns_.of(t.sym()), std::move(napp_args));
  return concat(SeqTerm::list({head}), acc);
}

SeqTerm PredInterp::N(const Term& t) {
  return concat(S(t), tally(norm(t, trs_.signature, sm_), ns_));
}

int embedding_parameter(const Trs& trs, const SafeMapping& sm) {
  int ell = 1;
  for (SymbolId f : trs.signature.defined_symbols())
    ell = std::max(ell,
                   static_cast<int>(sm.normal_positions(trs.signature, f).size()));
  for (const Rule& r : trs.rules) ell = std::max(ell, 2 * r.rhs.size());
  return ell;
}

}  // namespace popstar
