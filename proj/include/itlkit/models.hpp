#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "itlkit/bits.hpp"
#include "itlkit/formula.hpp"

namespace itlkit {

// Finite poset with a monotone step map and an up-closed valuation.
struct PosetModel {
  size_t n = 0;
  std::vector<Bits> up;  // up[w] = { v : w <= v }
  std::vector<size_t> step;
  std::map<std::string, Bits> val;

  bool leq(size_t a, size_t b) const { return up[a].test(b); }
  // Builds up-sets from generating pairs (reflexive-transitive closure).
  static PosetModel from_pairs(size_t n, const std::vector<std::pair<size_t, size_t>>& leq,
                               std::vector<size_t> step);
  Bits set_of(std::initializer_list<size_t> ws) const;
};

struct ClassicalModel {
  size_t n = 0;
  std::vector<Bits> up;
  std::vector<size_t> step;
  std::map<std::string, Bits> cval;
};

std::vector<std::string> validate_model(const PosetModel& m);
// Order/step checks shared with classical models.
std::vector<std::string> validate_frame(size_t n, const std::vector<Bits>& up,
                                        const std::vector<size_t>& step);

Bits interior(const std::vector<Bits>& up, const Bits& a);
Bits preimage(const std::vector<size_t>& step, const Bits& a);
bool up_closed(const std::vector<Bits>& up, const Bits& a);

// Memoizing evaluator; results are cached per interned subformula.
class Evaluator {
 public:
  explicit Evaluator(const PosetModel& m) : m_(m) {}
  const Bits& eval(Formula f);

 private:
  const PosetModel& m_;
  std::unordered_map<const Node*, Bits> cache_;
};

// Many formulas against many models: the shared subformula DAG is numbered
// once, children before parents, and each model fills a flat vector.
class FormulaBatch {
 public:
  explicit FormulaBatch(const std::vector<Formula>& roots);
  size_t size() const { return roots_.size(); }
  Formula root(size_t i) const { return nodes_[roots_[i]]; }
  // Index of the first root not true everywhere in m, or size().
  size_t first_failure(const PosetModel& m) const;
  std::vector<Bits> eval(const PosetModel& m) const;  // one entry per root

 private:
  void fill(const PosetModel& m, std::vector<Bits>& out) const;
  std::vector<Formula> nodes_;
  std::vector<int> a_, b_;
  std::vector<size_t> roots_;
};

Bits evaluate(const PosetModel& m, Formula f);
bool holds_everywhere(const PosetModel& m, Formula f);
Bits classical_evaluate(const ClassicalModel& m, ClassicalFormula f);

// Is the step map open (images of up-sets are up-sets)?
bool is_persistent(const PosetModel& m);

constexpr size_t kMaxOracleWorlds = 5;

// Calls fn on every model with 1..max_worlds worlds over vars, one per
// isomorphism class, in a fixed order. fn returns false to stop early.
void for_each_model(size_t max_worlds, const std::vector<std::string>& vars, bool persistent_only,
                    const std::function<bool(const PosetModel&)>& fn);
std::vector<PosetModel> enumerate_models(size_t max_worlds, const std::vector<std::string>& vars,
                                         bool persistent_only = false);

// First model (in enumeration order) where f fails somewhere.
std::optional<PosetModel> find_countermodel(Formula f, size_t max_worlds,
                                            bool persistent_only = false);
std::vector<std::string> variables(Formula f);

std::string to_dot(const PosetModel& m);

}  // namespace itlkit
