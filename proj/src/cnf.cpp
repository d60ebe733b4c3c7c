#include "popstar/cnf.hpp"

#include <sstream>
#include <unordered_map>

namespace popstar {

namespace {

struct Translator {
  CnfInstance out;
  // per formula node (by hash+pointer identity) the definition variable and
  // which polarities have been emitted
  struct Entry {
    int var = 0;
    bool pos_done = false;
    bool neg_done = false;
  };
  std::unordered_map<size_t, std::vector<std::pair<PropFormula, Entry>>> defs;

  int fresh_var() { return ++out.num_vars; }

  int var_for_atom(AtomId a) {
    auto it = out.atom_var.find(a);
    if (it != out.atom_var.end()) return it->second;
    int v = fresh_var();
    out.atom_var.emplace(a, v);
    out.var_atom.emplace(v, a);
    return v;
  }

  Entry* entry(const PropFormula& f) {
    auto& bucket = defs[f.hash()];
    for (auto& [g, e] : bucket)
      if (g.same_node(f)) return &e;
    bucket.emplace_back(f, Entry{});
    return &bucket.back().second;
  }

  void note_polarity(int var, bool positive) {
    auto& p = out.polarity[var];
    if (positive)
      p.first = true;
    else
      p.second = true;
  }

  // Returns the literal standing for f; emits definition clauses for the
  // requested polarity on first use.
  int lit(const PropFormula& f, bool positive) {
    using Op = PropFormula::Op;
    switch (f.op()) {
      case Op::True:
      case Op::False: {
        // constants at clause level are handled by callers; a dedicated
        // always-true variable keeps the corner cases simple
        Entry* e = entry(f);
        if (e->var == 0) {
          e->var = fresh_var();
          if (f.is_true())
            out.clauses.push_back({e->var});
          else
            out.clauses.push_back({-e->var});
        }
        return e->var;
      }
      case Op::Atom: {
        int v = var_for_atom(f.atom_id());
        note_polarity(v, positive);
        return v;
      }
      case Op::Not:
        return -lit(f.kids()[0], !positive);
      default: break;
    }

    Entry* e = entry(f);
    if (e->var == 0) e->var = fresh_var();
    int d = e->var;
    note_polarity(d, positive);
    bool need_pos = positive && !e->pos_done;
    bool need_neg = !positive && !e->neg_done;
    if (!need_pos && !need_neg) return d;
    if (need_pos) e->pos_done = true;
    if (need_neg) e->neg_done = true;

    switch (f.op()) {
      case Op::And: {
        if (need_pos) {
          for (const PropFormula& k : f.kids())
            out.clauses.push_back({-d, lit(k, true)});
        }
        if (need_neg) {
          std::vector<int> cl{d};
          for (const PropFormula& k : f.kids()) cl.push_back(-lit(k, false));
          out.clauses.push_back(std::move(cl));
        }
        break;
      }
      case Op::Or: {
        if (need_pos) {
          std::vector<int> cl{-d};
          for (const PropFormula& k : f.kids()) cl.push_back(lit(k, true));
          out.clauses.push_back(std::move(cl));
        }
        if (need_neg) {
          for (const PropFormula& k : f.kids())
            out.clauses.push_back({d, -lit(k, false)});
        }
        break;
      }
      case Op::Implies: {
        if (need_pos)
          out.clauses.push_back({-d, -lit(f.kids()[0], false), lit(f.kids()[1], true)});
        if (need_neg) {
          out.clauses.push_back({d, lit(f.kids()[0], true)});
          out.clauses.push_back({d, -lit(f.kids()[1], false)});
        }
        break;
      }
      case Op::Iff: {
        // both children occur in both polarities
        int a_pos = lit(f.kids()[0], true), a_neg = lit(f.kids()[0], false);
        int b_pos = lit(f.kids()[1], true), b_neg = lit(f.kids()[1], false);
        if (need_pos) {
          out.clauses.push_back({-d, -a_neg, b_pos});
          out.clauses.push_back({-d, a_pos, -b_neg});
        }
        if (need_neg) {
          out.clauses.push_back({d, a_pos, b_pos});
          out.clauses.push_back({d, -a_neg, -b_neg});
        }
        break;
      }
      default: break;
    }
    return d;
  }
};

}  // namespace

CnfInstance to_cnf(const PropFormula& f) {
  Translator tr;
  if (f.is_true()) return tr.out;
  if (f.is_false()) {
    tr.out.trivially_false = true;
    tr.out.clauses.push_back({});
    return tr.out;
  }
  // Top-level conjunctions become clauses directly; everything else gets a
  // root literal asserted as a unit.
  std::vector<PropFormula> top;
  if (f.op() == PropFormula::Op::And)
    top = f.kids();
  else
    top = {f};
  for (const PropFormula& g : top) tr.out.clauses.push_back({tr.lit(g, true)});
  return tr.out;
}

std::string export_dimacs(const CnfInstance& c) {
  std::ostringstream os;
  os << "p cnf " << c.num_vars << " " << c.clauses.size() << "\n";
  for (const auto& cl : c.clauses) {
    for (int lit : cl) os << lit << " ";
    os << "0\n";
  }
  return os.str();
}

std::optional<Model> parse_solver_output(const std::string& text, int num_vars) {
  std::istringstream is(text);
  std::string tok;
  bool sat_seen = false, unsat_seen = false;
  std::vector<int> lits;
  while (is >> tok) {
    if (tok == "s" || tok == "v" || tok == "c") continue;
    if (tok == "SAT" || tok == "SATISFIABLE") {
      sat_seen = true;
      continue;
    }
    if (tok == "UNSAT" || tok == "UNSATISFIABLE") {
      unsat_seen = true;
      continue;
    }
    try {
      size_t pos = 0;
      int v = std::stoi(tok, &pos);
      if (pos == tok.size() && v != 0) lits.push_back(v);
    } catch (...) {
      // ignore prose
    }
  }
  if (unsat_seen) return std::nullopt;
  if (!sat_seen && lits.empty()) return std::nullopt;
  Model m;
  m.values.assign(static_cast<size_t>(num_vars) + 1, false);
  for (int l : lits) {
    int v = l > 0 ? l : -l;
    if (v <= num_vars) m.values[static_cast<size_t>(v)] = l > 0;
  }
  return m;
}

}  // namespace popstar
