#ifndef FPTMC_ATM_HPP
#define FPTMC_ATM_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fptmc/formula.hpp"
#include "fptmc/structure.hpp"

namespace fptmc {

struct AtmTransition {
  std::size_t from = 0;
  std::size_t read = 0;
  int move = 0;  // -1 left, 0 stay, +1 right
  std::size_t write = 0;
  std::size_t to = 0;

  bool operator==(const AtmTransition&) const = default;
};

// Alternating Turing machine on a one-way infinite tape. The accepting state counts
// as both existential and universal and has no outgoing transitions.
struct ATMachine {
  std::vector<std::string> states;
  std::vector<char> universal;
  std::size_t initial = 0;
  std::size_t accepting = 0;
  std::vector<std::string> symbols;
  std::size_t blank = 0;
  std::vector<AtmTransition> delta;

  bool operator==(const ATMachine&) const = default;
};

// Lines `state <name> [exists|forall] [initial] [accepting]`, `symbol <s> [blank]`,
// `trans <q> <a> <-1|0|1> <b> <q'>`; '#' comments.
ATMachine parse_atm(const std::string& text);
std::string write_atm(const ATMachine& m);
// InvalidMachine unless there is one existential initial state, one accepting state
// without outgoing transitions, and a blank symbol.
void validate_atm(const ATMachine& m);

struct AtmRunStats {
  std::uint64_t configurations = 0;
};

// Does M accept the empty word within `steps` transitions using at most t quantifier
// blocks, the first existential? Existential configurations need one accepting
// successor, universal ones need all. The tape is a window of steps + 1 cells (all
// cells the head can reach); a move off the window has no successor. A universal
// configuration without any applicable transition is InvalidMachine.
bool simulate_atm(const ATMachine& m, std::size_t steps, std::size_t t, AtmRunStats* stats = nullptr);

struct AtmEncoding {
  Structure structure;
  Formula sentence;
};

// A_M and φ_k with k configuration blocks of k cells each:
// A_M ⊨ φ_k iff simulate_atm(M, k - 1, t). t = 1 needs a machine without universal
// states, t = 2 one where no universal state leads to a non-accepting existential
// state; UnsupportedAlternation otherwise and for t > 2.
AtmEncoding atm_encode(const ATMachine& m, std::size_t k, std::size_t t);
Structure atm_structure(const ATMachine& m, std::size_t t);
Formula atm_sentence(std::size_t k, std::size_t t);

// Quantifier-free pieces of φ_k over the variables of configuration i: x<i> for the
// state and y<i>_<j> for cell j.
std::string atm_state_var(std::size_t i);
std::string atm_cell_var(std::size_t i, std::size_t j);
Formula atm_config(std::size_t i, std::size_t k);
Formula atm_start(std::size_t i, std::size_t k);
Formula atm_step(std::size_t i, std::size_t j, std::size_t k);

}  // namespace fptmc

#endif
