#pragma once

#include <string>

#include "itlkit/models.hpp"
#include "itlkit/structures.hpp"
#include "itlkit/unwind.hpp"

namespace itlkit {

struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// {"worlds":[ids],"leq":[[a,b],...],"step":{id:id},"val":{var:[ids]}}
// Ids may be numbers or strings; leq is closed reflexively and transitively.
std::string model_to_json(const PosetModel& m);
PosetModel model_from_json(const std::string& text);
// Same layout; "val" is read as an arbitrary (classical) valuation.
ClassicalModel classical_model_from_json(const std::string& text);

// {"signature":[...],"worlds":[{"id","pos":[...],"neg":[...]}],"leq":[[a,b]],
//  "succ":[[a,b]],"flags":{...},"designated":id}
// leq is taken as given apart from reflexive pairs, so the validator sees
// any non-transitive input.
std::string quasimodel_to_json(const Quasimodel& q, const std::string& formula = "");
Quasimodel quasimodel_from_json(const std::string& text);
// Adds a "paths" member: world id -> [[world, pos, neg], ...].
std::string fragment_to_json(const Fragment& f);

std::string type_to_json(const TwoSidedType& t, const TypeSpace& sp);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

}  // namespace itlkit
