#pragma once

#include <optional>
#include <string>
#include <vector>

#include "itlkit/moments.hpp"

namespace itlkit {

enum class Mode { Validity, Satisfiability };
enum class Status { Valid, NotValid, Satisfiable, Unsatisfiable };
std::string to_string(Status s);

struct ProfileReport {
  UniversalProfile profile;
  size_t types = 0;
  size_t moments = 0;
  std::vector<size_t> rounds;  // survivors after each elimination round
  size_t survivors = 0;
  bool honest = false;
};

struct Verdict {
  Status status = Status::Valid;
  Formula formula;
  Mode mode = Mode::Validity;
  std::optional<Quasimodel> certificate;  // designated world set
  std::optional<UniversalProfile> profile;
  std::vector<ProfileReport> reports;
};

struct DecideOptions {
  size_t max_moments = 200000;
  unsigned threads = 1;
  // Truncated generation passes tried before the exhaustive one. They can
  // only produce certificates, which are validated either way.
  std::vector<size_t> quick_breadths = {1, 3};
};

// Saturated types with the given universal part that can still occur in a
// quasimodel: each has a sensible successor, realizes its eventualities along
// sensible paths, and has its defects revoked by some type above it.
std::vector<TwoSidedType> profile_types(const TypeSpace& sp, const UniversalProfile& p);

Quasimodel eliminate(const Quasimodel& structure, const UniversalProfile& p,
                     std::vector<size_t>* rounds = nullptr);

Verdict decide(Formula f, Mode mode, const DecideOptions& opt = {});

// Greedy sub-quasimodel: the designated world, one negative witness per denied
// universal formula, one successor each, realizing routes for eventualities
// and confluence witnesses, all up-closed. Kept edges only.
Quasimodel trim_certificate(const Quasimodel& q);

}  // namespace itlkit
