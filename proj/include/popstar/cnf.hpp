#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "popstar/prop.hpp"

namespace popstar {

// CNF over positive integer variables; literals are signed ints.
struct CnfInstance {
  int num_vars = 0;
  std::vector<std::vector<int>> clauses;
  std::map<AtomId, int> atom_var;         // source atoms to solver variables
  std::map<int, AtomId> var_atom;
  // polarity of each definitional variable as encountered (metadata)
  std::map<int, std::pair<bool, bool>> polarity;  // var -> (positive, negative)
  bool trivially_false = false;

  int var_of(AtomId a) const {
    auto it = atom_var.find(a);
    return it == atom_var.end() ? 0 : it->second;
  }
};

// Plaisted-Greenbaum definitional translation: polarity-aware, emits only the
// needed direction of each definition, equisatisfiable and linear in size.
CnfInstance to_cnf(const PropFormula& f);

std::string export_dimacs(const CnfInstance& c);

struct Model {
  std::vector<bool> values;  // indexed by solver variable
  bool value(int var) const { return values.at(static_cast<size_t>(var)); }
  bool atom(const CnfInstance& c, AtomId a) const {
    int v = c.var_of(a);
    return v != 0 && value(v);
  }
};

// Accepts minisat-style output ("SAT\n1 -2 0"), competition format
// ("s SATISFIABLE" with "v" lines) or a bare literal list.
std::optional<Model> parse_solver_output(const std::string& text, int num_vars);

}  // namespace popstar
