#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "itlkit/structures.hpp"

namespace itlkit {

struct TypedStep {
  size_t world;
  TwoSidedType type;
  bool operator==(const TypedStep&) const = default;
};
using TypedPath = std::vector<TypedStep>;

// |sub(Φ⁺)|
size_t path_measure(const TwoSidedType& t, const TypeSpace& sp);

// Empty string when p is a typed path on q, otherwise the first problem.
std::string typed_path_problem(const Quasimodel& q, const TypedPath& p);
bool is_properly_typed(const TypedPath& p, const TypeSpace& sp);
bool is_terminal(const TypedPath& p);

TypedPath properly_type_path(const Quasimodel& q, const std::vector<size_t>& worlds,
                             const TwoSidedType& phi0);
TypedPath lift_path(const Quasimodel& q, const TypedPath& p, size_t v0);
TypedPath extend_to_terminal(const Quasimodel& q, const TypedPath& p);

// Drops every formula containing ∀ from every label. Terminal paths cannot
// carry a positive ∀ (sensibility keeps it forever), so unwinding works on
// this reduct.
Quasimodel forall_free_reduct(const Quasimodel& q);

// Bounded piece of the weak limit model. Worlds are terminal typed paths,
// stored as sequences of houses; world 0 is the empty path. The order is
// componentwise on the shorter path and is never materialized, since
// fragments routinely reach 10^5 worlds with 10^8 comparable pairs.
struct Fragment {
  SpacePtr space;
  Quasimodel base;                           // the unwound quasimodel
  std::vector<TypedStep> houses;             // (world, type) with type ⊑ label
  std::vector<std::vector<uint32_t>> seq;    // house ids; ids are lexicographic
  std::vector<TwoSidedType> label;
  std::vector<size_t> succ;

  size_t size() const { return seq.size(); }
  TypedPath path(size_t w) const;
  bool house_leq(uint32_t a, uint32_t b) const;
  bool leq(size_t a, size_t b) const;
  // Dense quasimodel; CapacityError above max_worlds.
  Quasimodel to_quasimodel(size_t max_worlds = 20000) const;
};

// Terminal typed paths of length at most maxlen, plus the empty path.
// max_worlds only guards memory.
Fragment limit_fragment(const Quasimodel& q, size_t maxlen, size_t max_worlds = 5000000);

// Type conditions, typed-path and tail structure, sensible functional
// successor, and label refinement and successor monotonicity over every
// comparable pair. Defect revocation is not checked: revoking paths may be
// longer than the bound.
std::vector<Violation> validate_fragment(const Fragment& f);
// Same checks on a materialized fragment (small cases, cross-checking).
std::vector<Violation> validate_fragment(const Quasimodel& f);

std::string to_dot(const Fragment& f);

}  // namespace itlkit
