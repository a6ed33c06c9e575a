#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "itlkit/simulation.hpp"
#include "itlkit/structures.hpp"

namespace itlkit {

enum class Reduction {
  None,       // all irreducible moments
  Submoment,  // children pairwise incomparable as submoments
  Simulation  // no child simulates into a sibling's tree
};

// Hash-consed moments. Every subtree of a moment is itself a moment in the
// set, and children always have smaller ids than their parents.
class MomentSet {
 public:
  explicit MomentSet(SpacePtr space, Reduction red = Reduction::None, size_t cap = 200000)
      : space(std::move(space)), reduction_(red), cap_(cap) {}

  SpacePtr space;
  std::vector<TwoSidedType> root;
  std::vector<std::vector<size_t>> children;
  std::vector<std::vector<size_t>> sublist;  // submoments incl. self, sorted
  std::vector<Mask> revokes;
  std::vector<Bits> subs;  // filled by finalize()

  size_t size() const { return root.size(); }
  // Interns the moment (t; kids) after removing redundant children.
  size_t make(const TwoSidedType& t, std::vector<size_t> kids);
  void finalize();

  bool is_sub(size_t a, size_t b) const;  // b is a submoment of a
  // x's tree simulates, root to some node, into y's tree
  bool simulates_into(size_t x, size_t y);
  // root-to-root simulation
  bool simulates_at(size_t x, size_t d);
  bool comparable(size_t a, size_t b);

  size_t node_count(size_t m) const;
  size_t height(size_t m) const;
  std::string to_dot(size_t m) const;

 private:
  Reduction reduction_;
  size_t cap_;
  std::unordered_map<std::string, size_t> intern_;
  std::unordered_map<uint64_t, bool> memo_le_, memo_sq_;
};

struct MomentOptions {
  Reduction reduction = Reduction::None;
  // Node types are drawn from this list when given, otherwise from all saturated types.
  std::optional<std::vector<TwoSidedType>> types;
  size_t max_moments = 200000;
};

MomentSet enumerate_moments(SpacePtr space, const MomentOptions& opt = {});

inline bool moment_leq(const MomentSet& ms, size_t w, size_t v) { return ms.is_sub(w, v); }
// steps[w] = { v : moment_step(w, v) }
Relation moment_steps(const MomentSet& ms);
bool moment_step(const MomentSet& ms, size_t w, size_t v);

Quasimodel initial_structure(const MomentSet& ms);
Quasimodel initial_structure(const MomentSet& ms, const std::vector<std::vector<size_t>>& succ);
Quasimodel build_initial_structure(SpacePtr space, const MomentOptions& opt = {});

// Moments reachable from seed moments by successor construction.
struct GenerateOptions {
  std::vector<TwoSidedType> types;       // admissible node types
  std::vector<TwoSidedType> seed_types;  // roots of the seed moments
  size_t max_moments = 200000;
  // Alternatives kept per construction step; 0 keeps all, which is needed
  // before concluding that nothing survives.
  size_t breadth = 0;
};

struct GeneratedStructure {
  MomentSet moments;
  std::vector<std::vector<size_t>> succ;
};

GeneratedStructure generate_moments(SpacePtr space, const GenerateOptions& opt);

}  // namespace itlkit
