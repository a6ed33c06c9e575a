#pragma once

#include <string>
#include <vector>

#include "itlkit/formula.hpp"
#include "itlkit/structures.hpp"
#include "itlkit/types.hpp"

namespace th {

using namespace itlkit;

inline SpacePtr space_of(const std::vector<std::string>& fs) {
  std::vector<Formula> roots;
  for (const auto& s : fs) roots.push_back(parse(s));
  return TypeSpace::make(Signature(roots));
}

inline TwoSidedType ty(const SpacePtr& sp, const std::vector<std::string>& pos,
                       const std::vector<std::string>& neg) {
  return {sp->mask_of(pos), sp->mask_of(neg)};
}

// Up-sets from generating pairs, closed reflexively and transitively.
inline std::vector<Bits> order(size_t n, const std::vector<std::pair<size_t, size_t>>& leq) {
  std::vector<Bits> up(n, Bits(n));
  for (size_t i = 0; i < n; ++i) up[i].set(i);
  for (auto [a, b] : leq) up[a].set(b);
  for (size_t k = 0; k < n; ++k)
    for (size_t i = 0; i < n; ++i)
      if (up[i].test(k)) up[i] |= up[k];
  return up;
}

inline Quasimodel quasimodel(SpacePtr sp, std::vector<TwoSidedType> labels,
                             const std::vector<std::pair<size_t, size_t>>& leq,
                             std::vector<std::vector<size_t>> succ) {
  Quasimodel q;
  q.space = std::move(sp);
  q.n = labels.size();
  q.up = order(q.n, leq);
  q.label = std::move(labels);
  q.succ = std::move(succ);
  return q;
}

inline bool has_kind(const std::vector<Violation>& vs, const std::string& needle) {
  for (const auto& v : vs)
    if (v.kind.find(needle) != std::string::npos || v.detail.find(needle) != std::string::npos)
      return true;
  return false;
}

}  // namespace th
