#pragma once

#include <vector>

#include "itlkit/structures.hpp"

namespace itlkit {

// rel[x] = set of y related to x.
using Relation = std::vector<Bits>;

Relation max_simulation(const LabelledFrame& x, const LabelledFrame& y);
Relation max_dynamic_simulation(const Quasimodel& x, const Quasimodel& y);

// Translates masks of `from`'s signature into `to`'s; throws when a formula is missing.
struct SigEmbedding {
  std::vector<int> map;
  SigEmbedding(const TypeSpace& from, const TypeSpace& to);
  Mask apply(Mask m) const;
};

Formula sim_formula(const LabelledFrame& w, size_t world);
std::vector<Formula> sim_formulas(const LabelledFrame& w);

}  // namespace itlkit
