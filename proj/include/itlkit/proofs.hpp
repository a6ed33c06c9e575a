#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "itlkit/formula.hpp"

namespace itlkit {

enum class Logic { ITL0, ITLFS, ITL0D, ITLFSD, ITL0A, ITL0DA };

Logic parse_logic(const std::string& id);
std::string to_string(Logic l);
bool logic_has_ev(Logic l);
bool logic_has_forall(Logic l);
bool logic_has_fs(Logic l);
// Only the operators the logic's language allows.
bool in_language(Formula f, Logic l);

using Substitution = std::map<std::string, Formula>;  // keys: phi, psi, chi

struct Schema {
  std::string id;
  Formula pattern;  // every atom is a schema variable (phi, psi, chi)
};

// Axiom schemas available in the logic, in a fixed order.
std::vector<Schema> axiom_schemas(Logic l);
std::optional<Schema> find_schema(const std::string& id);

std::optional<Substitution> match_schema(Formula pattern, Formula f);
Formula instantiate(Formula pattern, const Substitution& s);

struct AxiomMatch {
  std::string schema;
  Substitution subst;
};
std::optional<AxiomMatch> is_axiom_instance(Formula f, Logic l);

// Intuitionistic propositional validity after replacing each maximal
// temporal or universal subformula by a fresh atom.
bool is_ipc_tautology(Formula f);

struct ProofLine {
  size_t number = 0;
  Formula formula;
  std::string rule;               // schema id, IPC, AX, or a rule name
  std::vector<size_t> premises;   // line numbers
  std::optional<Substitution> subst;
};

struct ProofScript {
  std::optional<Logic> logic;
  std::vector<ProofLine> lines;
};

// Line-oriented text: "n. <formula> ; <justification>", '#' comments and an
// optional "logic: ID" header.
ProofScript parse_script(const std::string& text);

struct ProofReport {
  bool accepted = false;
  std::optional<size_t> bad_line;  // line number of the first rejected line
  std::string message;
  std::vector<std::string> notes;  // one per accepted line
};

ProofReport check_proof(const ProofScript& s, Logic logic);
ProofReport check_proof(const ProofScript& s);  // uses the declared logic, else ITL0DA

}  // namespace itlkit
