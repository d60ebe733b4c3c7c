#include "popstar/prop.hpp"

#include <algorithm>
#include <functional>
#include <unordered_set>

namespace popstar {

namespace {
size_t combine(size_t h, size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}
}  // namespace

AtomId AtomRegistry::intern(const AtomInfo& info,
                            const std::tuple<int, int, int, int, int>& key) {
  auto full_key = std::make_tuple(static_cast<int>(info.kind), std::get<0>(key),
                                  std::get<1>(key), std::get<2>(key), std::get<3>(key));
  (void)full_key;
  auto it = index_.find(key);
  if (it != index_.end()) return it->second;
  AtomId id = static_cast<AtomId>(atoms_.size());
  atoms_.push_back(info);
  index_.emplace(key, id);
  return id;
}

AtomId AtomRegistry::safe_atom(SymbolId f, int i) {
  AtomInfo a;
  a.kind = AtomKind::Safe;
  a.f = f;
  a.i = i;
  return intern(a, {0, f, i, -1, -1});
}

AtomId AtomRegistry::gt_atom(SymbolId f, SymbolId g) {
  AtomInfo a;
  a.kind = AtomKind::Gt;
  a.f = f;
  a.g = g;
  return intern(a, {1, f, g, -1, -1});
}

AtomId AtomRegistry::eq_atom(SymbolId f, SymbolId g) {
  AtomInfo a;
  a.kind = AtomKind::Eq;
  a.f = f;
  a.g = g;
  return intern(a, {2, f, g, -1, -1});
}

AtomId AtomRegistry::rank_bit(SymbolId f, int bit) {
  AtomInfo a;
  a.kind = AtomKind::RankBit;
  a.f = f;
  a.i = bit;
  return intern(a, {3, f, bit, -1, -1});
}

AtomId AtomRegistry::perm_atom(int site, int i, int j) {
  AtomInfo a;
  a.kind = AtomKind::Perm;
  a.site = site;
  a.i = i;
  a.j = j;
  return intern(a, {4, site, i, j, -1});
}

AtomId AtomRegistry::alpha_atom(int site, int j) {
  AtomInfo a;
  a.kind = AtomKind::Alpha;
  a.site = site;
  a.j = j;
  return intern(a, {5, site, j, -1, -1});
}

AtomId AtomRegistry::gamma_atom(int site, int i, int j) {
  AtomInfo a;
  a.kind = AtomKind::Gamma;
  a.site = site;
  a.i = i;
  a.j = j;
  return intern(a, {6, site, i, j, -1});
}

AtomId AtomRegistry::epsilon_atom(int site, int i) {
  AtomInfo a;
  a.kind = AtomKind::Epsilon;
  a.site = site;
  a.i = i;
  return intern(a, {7, site, i, -1, -1});
}

AtomId AtomRegistry::delta_atom(const std::string& note) {
  AtomInfo a;
  a.kind = AtomKind::Delta;
  a.note = note;
  AtomId id = static_cast<AtomId>(atoms_.size());
  atoms_.push_back(a);
  return id;
}

AtomId AtomRegistry::fresh(const std::string& note) {
  AtomInfo a;
  a.kind = AtomKind::Aux;
  a.note = note;
  AtomId id = static_cast<AtomId>(atoms_.size());
  atoms_.push_back(a);
  return id;
}

std::string AtomRegistry::describe(AtomId id, const Signature& sig) const {
  const AtomInfo& a = info(id);
  switch (a.kind) {
    case AtomKind::Safe:
      return "safe(" + sig.name(a.f) + "," + std::to_string(a.i) + ")";
    case AtomKind::Gt: return sig.name(a.f) + ">" + sig.name(a.g);
    case AtomKind::Eq: return sig.name(a.f) + "~" + sig.name(a.g);
    case AtomKind::RankBit:
      return "rk(" + sig.name(a.f) + ")[" + std::to_string(a.i) + "]";
    case AtomKind::Perm:
      return "pi" + std::to_string(a.site) + "_" + std::to_string(a.i) + "," +
             std::to_string(a.j);
    case AtomKind::Alpha:
      return "alpha" + std::to_string(a.site) + "_" + std::to_string(a.j);
    case AtomKind::Gamma:
      return "gamma" + std::to_string(a.site) + "_" + std::to_string(a.i) + "," +
             std::to_string(a.j);
    case AtomKind::Epsilon:
      return "eps" + std::to_string(a.site) + "_" + std::to_string(a.i);
    case AtomKind::Delta: return "delta[" + a.note + "]";
    case AtomKind::Aux: return "aux[" + a.note + "]";
  }
  return "?";
}

PropFormula PropFormula::make(Op op, AtomId atom, std::vector<PropFormula> kids) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->atom = atom;
  size_t h = combine(0xF0, static_cast<size_t>(op));
  h = combine(h, static_cast<size_t>(atom + 1));
  for (const PropFormula& k : kids) h = combine(h, k.hash());
  n->kids = std::move(kids);
  n->hash = h;
  return PropFormula(std::move(n));
}

PropFormula PropFormula::ftrue() {
  static PropFormula t = make(Op::True, -1, {});
  return t;
}
PropFormula PropFormula::ffalse() {
  static PropFormula f = make(Op::False, -1, {});
  return f;
}
PropFormula PropFormula::atom(AtomId a) { return make(Op::Atom, a, {}); }

PropFormula PropFormula::negf(PropFormula f) {
  if (f.is_true()) return ffalse();
  if (f.is_false()) return ftrue();
  if (f.op() == Op::Not) return f.kids()[0];
  return make(Op::Not, -1, {std::move(f)});
}

PropFormula PropFormula::conj(std::vector<PropFormula> fs) {
  std::vector<PropFormula> kids;
  std::unordered_set<size_t> seen;
  for (PropFormula& f : fs) {
    if (f.is_true()) continue;
    if (f.is_false()) return ffalse();
    if (f.op() == Op::And) {
      for (const PropFormula& k : f.kids())
        if (seen.insert(k.hash()).second) kids.push_back(k);
      continue;
    }
    if (seen.insert(f.hash()).second) kids.push_back(std::move(f));
  }
  if (kids.empty()) return ftrue();
  if (kids.size() == 1) return kids[0];
  return make(Op::And, -1, std::move(kids));
}

PropFormula PropFormula::disj(std::vector<PropFormula> fs) {
  std::vector<PropFormula> kids;
  std::unordered_set<size_t> seen;
  for (PropFormula& f : fs) {
    if (f.is_false()) continue;
    if (f.is_true()) return ftrue();
    if (f.op() == Op::Or) {
      for (const PropFormula& k : f.kids())
        if (seen.insert(k.hash()).second) kids.push_back(k);
      continue;
    }
    if (seen.insert(f.hash()).second) kids.push_back(std::move(f));
  }
  if (kids.empty()) return ffalse();
  if (kids.size() == 1) return kids[0];
  return make(Op::Or, -1, std::move(kids));
}

PropFormula PropFormula::implies(PropFormula a, PropFormula b) {
  if (a.is_true()) return b;
  if (a.is_false()) return ftrue();
  if (b.is_true()) return ftrue();
  if (b.is_false()) return negf(std::move(a));
  if (a.hash() == b.hash()) return ftrue();
  return make(Op::Implies, -1, {std::move(a), std::move(b)});
}

PropFormula PropFormula::iff(PropFormula a, PropFormula b) {
  if (a.is_true()) return b;
  if (b.is_true()) return a;
  if (a.is_false()) return negf(std::move(b));
  if (b.is_false()) return negf(std::move(a));
  if (a.hash() == b.hash()) return ftrue();
  return make(Op::Iff, -1, {std::move(a), std::move(b)});
}

size_t PropFormula::tree_size() const {
  size_t n = 1;
  for (const PropFormula& k : kids()) n += k.tree_size();
  return n;
}

bool PropFormula::eval(const std::vector<bool>& assignment) const {
  switch (op()) {
    case Op::True: return true;
    case Op::False: return false;
    case Op::Atom: return assignment.at(static_cast<size_t>(atom_id()));
    case Op::Not: return !kids()[0].eval(assignment);
    case Op::And:
      for (const PropFormula& k : kids())
        if (!k.eval(assignment)) return false;
      return true;
    case Op::Or:
      for (const PropFormula& k : kids())
        if (k.eval(assignment)) return true;
      return false;
    case Op::Implies: return !kids()[0].eval(assignment) || kids()[1].eval(assignment);
    case Op::Iff: return kids()[0].eval(assignment) == kids()[1].eval(assignment);
  }
  return false;
}

void PropFormula::collect_atoms(std::vector<AtomId>& out) const {
  if (op() == Op::Atom) {
    out.push_back(atom_id());
    return;
  }
  for (const PropFormula& k : kids()) k.collect_atoms(out);
}

namespace {
constexpr size_t kPairwiseLimit = 6;

PropFormula at_most_one(const std::vector<PropFormula>& xs, AtomRegistry& reg) {
  if (xs.size() <= 1) return PropFormula::ftrue();
  std::vector<PropFormula> parts;
  if (xs.size() <= kPairwiseLimit) {
    for (size_t i = 0; i < xs.size(); ++i)
      for (size_t j = i + 1; j < xs.size(); ++j)
        parts.push_back(PropFormula::disj(
            {PropFormula::negf(xs[i]), PropFormula::negf(xs[j])}));
    return PropFormula::conj(std::move(parts));
  }
  // sequential counter: s_i says "some x_j with j <= i is set"
  std::vector<PropFormula> s;
  for (size_t i = 0; i + 1 < xs.size(); ++i)
    s.push_back(PropFormula::atom(reg.fresh("amo_s" + std::to_string(i))));
  for (size_t i = 0; i + 1 < xs.size(); ++i) {
    parts.push_back(PropFormula::implies(xs[i], s[i]));
    if (i > 0) parts.push_back(PropFormula::implies(s[i - 1], s[i]));
    parts.push_back(
        PropFormula::implies(xs[i + 1], PropFormula::negf(s[i])));
  }
  return PropFormula::conj(std::move(parts));
}
}  // namespace

PropFormula exactly_one(const std::vector<PropFormula>& xs, AtomRegistry& reg) {
  if (xs.empty()) return PropFormula::ffalse();
  std::vector<PropFormula> any(xs.begin(), xs.end());
  return PropFormula::conj({PropFormula::disj(std::move(any)), at_most_one(xs, reg)});
}

PropFormula zero_or_one(const std::vector<PropFormula>& xs, AtomRegistry& reg) {
  return at_most_one(xs, reg);
}

}  // namespace popstar
