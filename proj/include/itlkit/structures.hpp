#pragma once

#include <optional>
#include <string>
#include <vector>

#include "itlkit/bits.hpp"
#include "itlkit/models.hpp"
#include "itlkit/types.hpp"

namespace itlkit {

struct LabelledFrame {
  SpacePtr space;
  size_t n = 0;
  std::vector<Bits> up;  // up[w] = { v : w <= v }
  std::vector<TwoSidedType> label;

  bool leq(size_t a, size_t b) const { return up[a].test(b); }
};

struct QFlags {
  bool full = false;
  bool honest = false;
  bool deterministic = false;
};

struct Quasimodel : LabelledFrame {
  std::vector<std::vector<size_t>> succ;
  QFlags flags;
  std::optional<size_t> designated;

  bool has_succ(size_t a, size_t b) const;
};

struct Violation {
  std::string kind;
  std::string detail;
};

std::vector<Violation> validate_order(size_t n, const std::vector<Bits>& up);
std::vector<Violation> validate_labelled_frame(const LabelledFrame& fr);
std::vector<Violation> validate_quasimodel(const Quasimodel& q, QFlags flags);
std::vector<Violation> honesty_violations(const Quasimodel& q);
std::vector<Violation> omega_violations(const Quasimodel& q);

Bits reachable_set(const Quasimodel& q, size_t w);

// Keeps worlds in `keep` and renumbers them in ascending order.
Quasimodel restrict_worlds(const Quasimodel& q, const Bits& keep);
Quasimodel restrict_open(const Quasimodel& q, const Bits& u);
Quasimodel restrict_profile(const Quasimodel& q, const UniversalProfile& p);

// Labelled system induced by a model: label(w) = two-sided truth set on the signature.
Quasimodel induced_quasimodel(const PosetModel& m, SpacePtr space);

struct InconsistencyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
PosetModel model_of_deterministic_quasimodel(const Quasimodel& q);

std::string to_dot(const Quasimodel& q);
std::string describe(const std::vector<Violation>& vs);

}  // namespace itlkit
