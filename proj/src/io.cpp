#include "itlkit/io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace itlkit {

using json = nlohmann::json;

namespace {

std::string id_key(const json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<long long>());
  throw FormatError("world ids must be numbers or strings");
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw FormatError(std::string("invalid JSON: ") + e.what());
  }
}

struct Frame {
  size_t n = 0;
  std::vector<Bits> up;
  std::vector<size_t> step;
  std::map<std::string, Bits> val;
};

Frame read_frame(const json& j) {
  if (!j.contains("worlds") || !j["worlds"].is_array()) throw FormatError("missing \"worlds\" array");
  std::map<std::string, size_t> ids;
  for (const auto& w : j["worlds"]) {
    std::string k = id_key(w);
    if (!ids.emplace(k, ids.size()).second) throw FormatError("duplicate world id " + k);
  }
  auto at = [&](const json& w) {
    auto it = ids.find(id_key(w));
    if (it == ids.end()) throw FormatError("unknown world id " + id_key(w));
    return it->second;
  };
  Frame f;
  f.n = ids.size();
  std::vector<std::pair<size_t, size_t>> pairs;
  for (const auto& p : j.value("leq", json::array())) {
    if (!p.is_array() || p.size() != 2) throw FormatError("leq entries are pairs");
    pairs.push_back({at(p[0]), at(p[1])});
  }
  f.step.assign(f.n, SIZE_MAX);
  if (!j.contains("step") || !j["step"].is_object()) throw FormatError("missing \"step\" object");
  for (auto it = j["step"].begin(); it != j["step"].end(); ++it) {
    auto src = ids.find(it.key());
    if (src == ids.end()) throw FormatError("unknown world id " + it.key());
    f.step[src->second] = at(it.value());
  }
  for (size_t w = 0; w < f.n; ++w)
    if (f.step[w] == SIZE_MAX) throw FormatError("step undefined at a world");
  PosetModel pm = PosetModel::from_pairs(f.n, pairs, f.step);
  f.up = pm.up;
  const json val = j.value("val", json::object());
  for (auto it = val.begin(); it != val.end(); ++it) {
    Bits b(f.n);
    for (const auto& w : it.value()) b.set(at(w));
    f.val[it.key()] = b;
  }
  return f;
}

json names(Mask m, const TypeSpace& sp) {
  json a = json::array();
  for (const auto& s : sp.names(m)) a.push_back(s);
  return a;
}

Mask mask_from(const json& a, const TypeSpace& sp) {
  Mask m = 0;
  for (const auto& s : a) {
    if (!s.is_string()) throw FormatError("type members are formula strings");
    Formula f;
    try {
      f = parse(s.get<std::string>());
    } catch (const ParseError& e) {
      throw FormatError(e.what());
    }
    int i = sp.index(f);
    if (i < 0) throw FormatError("formula not in signature: " + s.get<std::string>());
    m |= bit(static_cast<size_t>(i));
  }
  return m;
}

constexpr size_t kDenseFragment = 2000;

json quasimodel_json(const Quasimodel& q, const std::string& formula) {
  const TypeSpace& sp = *q.space;
  json j;
  j["signature"] = json::array();
  for (size_t i = 0; i < sp.size(); ++i) j["signature"].push_back(render(sp.at(i)));
  j["worlds"] = json::array();
  for (size_t w = 0; w < q.n; ++w)
    j["worlds"].push_back(
        {{"id", w}, {"pos", names(q.label[w].pos, sp)}, {"neg", names(q.label[w].neg, sp)}});
  j["leq"] = json::array();
  for (size_t a = 0; a < q.n; ++a)
    for (size_t b = 0; b < q.n; ++b)
      if (a != b && q.leq(a, b)) j["leq"].push_back({a, b});
  j["succ"] = json::array();
  for (size_t a = 0; a < q.n; ++a)
    for (size_t b : q.succ[a]) j["succ"].push_back({a, b});
  j["flags"] = {{"full", q.flags.full},
                {"honest", q.flags.honest},
                {"deterministic", q.flags.deterministic}};
  if (q.designated) j["designated"] = *q.designated;
  if (!formula.empty()) j["formula"] = formula;
  return j;
}

}  // namespace

std::string model_to_json(const PosetModel& m) {
  json j;
  j["worlds"] = json::array();
  for (size_t w = 0; w < m.n; ++w) j["worlds"].push_back(w);
  j["leq"] = json::array();
  for (size_t a = 0; a < m.n; ++a)
    for (size_t b = 0; b < m.n; ++b)
      if (a != b && m.leq(a, b)) j["leq"].push_back({a, b});
  j["step"] = json::object();
  for (size_t w = 0; w < m.n; ++w) j["step"][std::to_string(w)] = m.step[w];
  j["val"] = json::object();
  for (const auto& [v, b] : m.val) j["val"][v] = b.members();
  return j.dump(2);
}

PosetModel model_from_json(const std::string& text) {
  Frame f = read_frame(parse_json(text));
  PosetModel m;
  m.n = f.n;
  m.up = std::move(f.up);
  m.step = std::move(f.step);
  m.val = std::move(f.val);
  return m;
}

ClassicalModel classical_model_from_json(const std::string& text) {
  Frame f = read_frame(parse_json(text));
  ClassicalModel m;
  m.n = f.n;
  m.up = std::move(f.up);
  m.step = std::move(f.step);
  m.cval = std::move(f.val);
  return m;
}

std::string quasimodel_to_json(const Quasimodel& q, const std::string& formula) {
  return quasimodel_json(q, formula).dump(2);
}

Quasimodel quasimodel_from_json(const std::string& text) {
  json j = parse_json(text);
  try {
    std::vector<Formula> roots;
    for (const auto& s : j.at("signature")) roots.push_back(parse(s.get<std::string>()));
    Quasimodel q;
    q.space = TypeSpace::make(Signature(roots));
    const TypeSpace& sp = *q.space;
    std::map<std::string, size_t> ids;
    for (const auto& w : j.at("worlds")) {
      std::string k = id_key(w.at("id"));
      if (!ids.emplace(k, ids.size()).second) throw FormatError("duplicate world id " + k);
      q.label.push_back({mask_from(w.at("pos"), sp), mask_from(w.at("neg"), sp)});
    }
    q.n = ids.size();
    auto at = [&](const json& w) {
      auto it = ids.find(id_key(w));
      if (it == ids.end()) throw FormatError("unknown world id " + id_key(w));
      return it->second;
    };
    q.up.assign(q.n, Bits(q.n));
    for (size_t w = 0; w < q.n; ++w) q.up[w].set(w);
    for (const auto& p : j.value("leq", json::array())) q.up[at(p.at(0))].set(at(p.at(1)));
    q.succ.resize(q.n);
    for (const auto& p : j.value("succ", json::array())) q.succ[at(p.at(0))].push_back(at(p.at(1)));
    for (auto& s : q.succ) {
      std::sort(s.begin(), s.end());
      s.erase(std::unique(s.begin(), s.end()), s.end());
    }
    if (j.contains("flags")) {
      const auto& fl = j["flags"];
      q.flags = {fl.value("full", false), fl.value("honest", false),
                 fl.value("deterministic", false)};
    }
    if (j.contains("designated") && !j["designated"].is_null()) q.designated = at(j["designated"]);
    return q;
  } catch (const json::exception& e) {
    throw FormatError(std::string("bad quasimodel JSON: ") + e.what());
  } catch (const ParseError& e) {
    throw FormatError(std::string("bad formula in quasimodel JSON: ") + e.what());
  }
}

std::string fragment_to_json(const Fragment& f) {
  const TypeSpace& sp = *f.space;
  json j;
  if (f.size() <= kDenseFragment) {
    j = quasimodel_json(f.to_quasimodel(kDenseFragment), "");
  } else {
    // same layout without "leq": the order is componentwise and too big to list
    j["signature"] = json::array();
    for (size_t i = 0; i < sp.size(); ++i) j["signature"].push_back(render(sp.at(i)));
    j["worlds"] = json::array();
    for (size_t w = 0; w < f.size(); ++w)
      j["worlds"].push_back(
          {{"id", w}, {"pos", names(f.label[w].pos, sp)}, {"neg", names(f.label[w].neg, sp)}});
    j["succ"] = json::array();
    for (size_t w = 0; w < f.size(); ++w) j["succ"].push_back({w, f.succ[w]});
    j["flags"] = {{"full", false}, {"honest", false}, {"deterministic", true}};
    j["order"] = "componentwise on the shorter path";
  }
  j["paths"] = json::object();
  for (size_t w = 0; w < f.size(); ++w) {
    json p = json::array();
    for (const auto& s : f.path(w)) p.push_back({s.world, names(s.type.pos, sp), names(s.type.neg, sp)});
    j["paths"][std::to_string(w)] = p;
  }
  return j.dump(1);
}

std::string type_to_json(const TwoSidedType& t, const TypeSpace& sp) {
  return json{{"pos", names(t.pos, sp)}, {"neg", names(t.neg, sp)}}.dump();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

}  // namespace itlkit
