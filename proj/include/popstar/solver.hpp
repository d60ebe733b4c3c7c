#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "popstar/cnf.hpp"

namespace popstar {

struct SolveResult {
  bool ok = false;           // backend answered
  std::optional<Model> model;  // empty answer means unsatisfiable
  std::string error;
};

class SatBackend {
 public:
  virtual ~SatBackend() = default;
  virtual SolveResult solve(const CnfInstance& instance,
                            const std::vector<int>& assumptions) = 0;
  SolveResult solve(const CnfInstance& instance) { return solve(instance, {}); }
  virtual std::string name() const = 0;
};

// Conflict-driven clause learning with two watched literals, first-UIP
// learning, VSIDS-style activities and Luby restarts.
class InternalSolver : public SatBackend {
 public:
  SolveResult solve(const CnfInstance& instance,
                    const std::vector<int>& assumptions) override;
  std::string name() const override { return "internal"; }
};

// Round-trips through DIMACS files: runs `cmd <in> <out>` and accepts
// minisat or competition style answers on the output file or stdout.
class ExternalDimacsSolver : public SatBackend {
 public:
  explicit ExternalDimacsSolver(std::string command) : command_(std::move(command)) {}
  SolveResult solve(const CnfInstance& instance,
                    const std::vector<int>& assumptions) override;
  std::string name() const override { return "external:" + command_; }

 private:
  std::string command_;
};

// The configured backend: an external command from `cmd` or the environment
// variable POPSTAR_SAT_CMD, otherwise the internal solver.
std::unique_ptr<SatBackend> make_backend(const std::string& cmd = "");

}  // namespace popstar
