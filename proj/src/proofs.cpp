#include "itlkit/proofs.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "itlkit/decide.hpp"

namespace itlkit {

Logic parse_logic(const std::string& id) {
  std::string k;
  for (char c : id)
    if (std::isalnum(static_cast<unsigned char>(c))) k += static_cast<char>(std::toupper(c));
  if (k == "ITL0" || k == "ITL0NEXT") return Logic::ITL0;
  if (k == "ITLFS" || k == "ITLFSNEXT") return Logic::ITLFS;
  if (k == "ITL0D" || k == "ITL0F") return Logic::ITL0D;
  if (k == "ITLFSD" || k == "ITLFSF") return Logic::ITLFSD;
  if (k == "ITL0A") return Logic::ITL0A;
  if (k == "ITL0DA" || k == "ITL0FA") return Logic::ITL0DA;
  throw std::invalid_argument("unknown logic '" + id + "'");
}

std::string to_string(Logic l) {
  switch (l) {
    case Logic::ITL0: return "ITL0";
    case Logic::ITLFS: return "ITLFS";
    case Logic::ITL0D: return "ITL0D";
    case Logic::ITLFSD: return "ITLFSD";
    case Logic::ITL0A: return "ITL0A";
    case Logic::ITL0DA: return "ITL0DA";
  }
  return "?";
}

bool logic_has_ev(Logic l) {
  return l == Logic::ITL0D || l == Logic::ITLFSD || l == Logic::ITL0DA;
}
bool logic_has_forall(Logic l) { return l == Logic::ITL0A || l == Logic::ITL0DA; }
bool logic_has_fs(Logic l) { return l == Logic::ITLFS || l == Logic::ITLFSD; }

bool in_language(Formula f, Logic l) {
  switch (f.op()) {
    case Op::Bot:
    case Op::Var: return true;
    case Op::Ev:
      if (!logic_has_ev(l)) return false;
      break;
    case Op::Forall:
      if (!logic_has_forall(l)) return false;
      break;
    default: break;
  }
  for (int i = 0; i < f.arity(); ++i)
    if (!in_language(i == 0 ? f.lhs() : f.rhs(), l)) return false;
  return true;
}

namespace {

struct SchemaText {
  const char* id;
  const char* text;
};

// IPC basis, then next, eventually and universal axioms.
const SchemaText kIpc[] = {
    {"K", "phi -> (psi -> phi)"},
    {"S", "(phi -> (psi -> chi)) -> ((phi -> psi) -> (phi -> chi))"},
    {"AND-E1", "phi & psi -> phi"},
    {"AND-E2", "phi & psi -> psi"},
    {"AND-I", "phi -> (psi -> phi & psi)"},
    {"OR-I1", "phi -> phi | psi"},
    {"OR-I2", "psi -> phi | psi"},
    {"OR-E", "(phi -> chi) -> ((psi -> chi) -> (phi | psi -> chi))"},
    {"EFQ", "bot -> phi"},
};
const SchemaText kNext[] = {
    {"N1", "~ X bot"},
    {"N2", "X phi & X psi -> X (phi & psi)"},
    {"N3", "X (phi | psi) -> X phi | X psi"},
    {"N4", "X (phi -> psi) -> (X phi -> X psi)"},
};
const SchemaText kFs[] = {{"N5", "(X phi -> X psi) -> X (phi -> psi)"}};
const SchemaText kEv[] = {{"E1", "phi | X F phi -> F phi"}};
const SchemaText kAll[] = {
    {"UA1", "A phi | ~ A phi"},
    {"UA2", "A (phi -> psi) -> (A phi -> A psi)"},
    {"UA3", "A (phi | A psi) -> A phi | A psi"},
    {"UA4", "A phi -> phi"},
    {"UA5", "A phi -> A A phi"},
    {"UA6", "A phi <-> X A phi"},
};

template <size_t N>
void add(std::vector<Schema>& out, const SchemaText (&xs)[N]) {
  for (const auto& x : xs) out.push_back({x.id, parse(x.text)});
}

std::vector<Schema> all_schemas() {
  std::vector<Schema> out;
  add(out, kIpc);
  add(out, kNext);
  add(out, kFs);
  add(out, kEv);
  add(out, kAll);
  return out;
}

bool schema_allowed(const std::string& id, Logic l) {
  if (id == "N5") return logic_has_fs(l);
  if (id == "E1") return logic_has_ev(l);
  if (id.rfind("UA", 0) == 0) return logic_has_forall(l);
  return true;
}

bool match_into(Formula p, Formula f, Substitution& s) {
  if (p.op() == Op::Var) {
    auto [it, fresh] = s.emplace(p.name(), f);
    return fresh || it->second == f;
  }
  if (p.op() != f.op()) return false;
  switch (p.arity()) {
    case 0: return true;
    case 1: return match_into(p.child(), f.child(), s);
    default: return match_into(p.lhs(), f.lhs(), s) && match_into(p.rhs(), f.rhs(), s);
  }
}

Formula atomize(Formula f, std::map<Formula, Formula, FormulaLess>& fresh) {
  switch (f.op()) {
    case Op::Bot:
    case Op::Var: return f;
    case Op::Next:
    case Op::Ev:
    case Op::Forall: {
      auto it = fresh.find(f);
      if (it != fresh.end()) return it->second;
      Formula v = Formula::var("_t" + std::to_string(fresh.size()));
      fresh.emplace(f, v);
      return v;
    }
    case Op::And: return Formula::conj(atomize(f.lhs(), fresh), atomize(f.rhs(), fresh));
    case Op::Or: return Formula::disj(atomize(f.lhs(), fresh), atomize(f.rhs(), fresh));
    case Op::Imp: return Formula::imp(atomize(f.lhs(), fresh), atomize(f.rhs(), fresh));
  }
  return f;
}

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::string upper(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

// Canonical rule names.
std::string rule_name(const std::string& r) {
  std::string u = upper(r);
  if (u == "MP" || u == "NR1") return "MP";
  if (u == "NEC" || u == "NR2") return "NEC";
  if (u == "ER1" || u == "ERULE1") return "ER1";
  if (u == "ER2" || u == "ERULE2") return "ER2";
  if (u == "UR1" || u == "UNEC") return "UR1";
  return u;
}

std::string show(const Substitution& s) {
  std::string out;
  for (const auto& [k, v] : s) {
    if (!out.empty()) out += ", ";
    out += k + " := " + render(v);
  }
  return out;
}

}  // namespace

std::vector<Schema> axiom_schemas(Logic l) {
  std::vector<Schema> out;
  for (auto& s : all_schemas())
    if (schema_allowed(s.id, l)) out.push_back(s);
  return out;
}

std::optional<Schema> find_schema(const std::string& id) {
  std::string u = upper(id);
  for (auto& s : all_schemas())
    if (s.id == u) return s;
  return std::nullopt;
}

std::optional<Substitution> match_schema(Formula pattern, Formula f) {
  Substitution s;
  if (!match_into(pattern, f, s)) return std::nullopt;
  return s;
}

Formula instantiate(Formula p, const Substitution& s) {
  switch (p.op()) {
    case Op::Var: {
      auto it = s.find(p.name());
      if (it == s.end()) throw std::invalid_argument("substitution misses " + p.name());
      return it->second;
    }
    case Op::Bot: return p;
    case Op::And: return Formula::conj(instantiate(p.lhs(), s), instantiate(p.rhs(), s));
    case Op::Or: return Formula::disj(instantiate(p.lhs(), s), instantiate(p.rhs(), s));
    case Op::Imp: return Formula::imp(instantiate(p.lhs(), s), instantiate(p.rhs(), s));
    case Op::Next: return Formula::next(instantiate(p.child(), s));
    case Op::Ev: return Formula::ev(instantiate(p.child(), s));
    case Op::Forall: return Formula::all(instantiate(p.child(), s));
  }
  return p;
}

std::optional<AxiomMatch> is_axiom_instance(Formula f, Logic l) {
  if (!in_language(f, l)) return std::nullopt;
  for (const auto& s : axiom_schemas(l))
    if (auto m = match_schema(s.pattern, f)) return AxiomMatch{s.id, *m};
  return std::nullopt;
}

bool is_ipc_tautology(Formula f) {
  std::map<Formula, Formula, FormulaLess> fresh;
  Formula g = atomize(f, fresh);
  return decide(g, Mode::Validity).status == Status::Valid;
}

ProofScript parse_script(const std::string& text) {
  ProofScript s;
  std::istringstream in(text);
  std::string raw;
  size_t lineno = 0;
  auto fail = [&](const std::string& msg) {
    throw std::invalid_argument("script line " + std::to_string(lineno) + ": " + msg);
  };
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    if (upper(line.substr(0, 6)) == "LOGIC:") {
      s.logic = parse_logic(trim(line.substr(6)));
      continue;
    }
    size_t dot = line.find('.');
    size_t semi = line.rfind(';');
    if (dot == std::string::npos || semi == std::string::npos || semi < dot)
      fail("expected 'n. formula ; justification'");
    ProofLine pl;
    try {
      pl.number = std::stoul(line.substr(0, dot));
    } catch (...) {
      fail("bad line number");
    }
    try {
      pl.formula = parse(line.substr(dot + 1, semi - dot - 1));
    } catch (const ParseError& e) {
      fail(e.what());
    }
    std::string just = trim(line.substr(semi + 1));
    std::string subst;
    if (size_t lb = just.find('['); lb != std::string::npos) {
      size_t rb = just.rfind(']');
      if (rb == std::string::npos || rb < lb) fail("unclosed substitution");
      subst = just.substr(lb + 1, rb - lb - 1);
      just = trim(just.substr(0, lb));
    }
    std::istringstream js(just);
    std::string rule;
    js >> rule;
    if (rule.empty()) fail("missing justification");
    pl.rule = rule_name(rule);
    std::string ref;
    while (js >> ref) {
      if (!ref.empty() && ref.back() == ',') ref.pop_back();
      try {
        pl.premises.push_back(std::stoul(ref));
      } catch (...) {
        fail("bad premise reference '" + ref + "'");
      }
    }
    if (!subst.empty()) {
      Substitution sub;
      int depth = 0;
      size_t start = 0;
      for (size_t i = 0; i <= subst.size(); ++i) {
        char c = i < subst.size() ? subst[i] : ',';
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (c != ',' || depth) continue;
        std::string item = subst.substr(start, i - start);
        start = i + 1;
        size_t eq = item.find(":=");
        if (eq == std::string::npos) fail("substitution items look like 'phi := formula'");
        std::string var = trim(item.substr(0, eq));
        try {
          sub[var] = parse(item.substr(eq + 2));
        } catch (const ParseError& e) {
          fail(e.what());
        }
      }
      pl.subst = sub;
    }
    s.lines.push_back(pl);
  }
  return s;
}

ProofReport check_proof(const ProofScript& s) {
  return check_proof(s, s.logic.value_or(Logic::ITL0DA));
}

ProofReport check_proof(const ProofScript& s, Logic logic) {
  ProofReport r;
  std::map<size_t, Formula> proved;
  auto reject = [&](const ProofLine& l, const std::string& msg) {
    r.accepted = false;
    r.bad_line = l.number;
    r.message = "line " + std::to_string(l.number) + ": " + msg;
    return r;
  };
  for (const auto& l : s.lines) {
    if (proved.count(l.number)) return reject(l, "duplicate line number");
    if (!in_language(l.formula, logic))
      return reject(l, "formula outside the language of " + to_string(logic));
    std::vector<Formula> prem;
    for (size_t p : l.premises) {
      if (p >= l.number || !proved.count(p))
        return reject(l, "premise " + std::to_string(p) + " is not an earlier line");
      prem.push_back(proved.at(p));
    }
    auto want = [&](size_t k) { return prem.size() == k; };
    const Formula f = l.formula;
    std::string note;
    if (l.rule == "IPC") {
      if (!want(0)) return reject(l, "IPC takes no premises");
      std::optional<bool> ok;
      try {
        ok = is_ipc_tautology(f);
      } catch (const CapacityError& e) {
        return reject(l, std::string("too large for the IPC check: ") + e.what());
      }
      if (!*ok) return reject(l, "not an intuitionistic propositional tautology");
      note = "IPC";
    } else if (l.rule == "AX") {
      if (!want(0)) return reject(l, "axioms take no premises");
      auto m = is_axiom_instance(f, logic);
      if (!m) return reject(l, "not an axiom of " + to_string(logic));
      note = m->schema + " [" + show(m->subst) + "]";
    } else if (l.rule == "MP") {
      if (!want(2)) return reject(l, "MP takes two premises");
      bool ok = (prem[1].op() == Op::Imp && prem[1].lhs() == prem[0] && prem[1].rhs() == f) ||
                (prem[0].op() == Op::Imp && prem[0].lhs() == prem[1] && prem[0].rhs() == f);
      if (!ok) return reject(l, "MP premises do not yield this formula");
      note = "MP";
    } else if (l.rule == "NEC") {
      if (!want(1)) return reject(l, "NEC takes one premise");
      if (f != Formula::next(prem[0])) return reject(l, "NEC must prefix X to the premise");
      note = "NEC";
    } else if (l.rule == "UR1") {
      if (!logic_has_forall(logic)) return reject(l, "UR1 is not a rule of " + to_string(logic));
      if (!want(1)) return reject(l, "UR1 takes one premise");
      if (f != Formula::all(prem[0])) return reject(l, "UR1 must prefix A to the premise");
      note = "UR1";
    } else if (l.rule == "ER1") {
      if (!logic_has_ev(logic)) return reject(l, "ER1 is not a rule of " + to_string(logic));
      if (!want(1)) return reject(l, "ER1 takes one premise");
      const Formula p = prem[0];
      if (p.op() != Op::Imp || f != Formula::imp(Formula::ev(p.lhs()), Formula::ev(p.rhs())))
        return reject(l, "ER1 turns a -> b into F a -> F b");
      note = "ER1";
    } else if (l.rule == "ER2") {
      if (!logic_has_ev(logic)) return reject(l, "ER2 is not a rule of " + to_string(logic));
      if (!want(1)) return reject(l, "ER2 takes one premise");
      const Formula p = prem[0];
      if (p.op() != Op::Imp || p.lhs() != Formula::next(p.rhs()) ||
          f != Formula::imp(Formula::ev(p.rhs()), p.rhs()))
        return reject(l, "ER2 turns X a -> a into F a -> a");
      note = "ER2";
    } else if (auto sch = find_schema(l.rule)) {
      if (!want(0)) return reject(l, "axioms take no premises");
      if (!schema_allowed(sch->id, logic))
        return reject(l, sch->id + " is not an axiom of " + to_string(logic));
      if (l.subst) {
        Formula inst;
        try {
          inst = instantiate(sch->pattern, *l.subst);
        } catch (const std::invalid_argument& e) {
          return reject(l, e.what());
        }
        if (inst != f) return reject(l, "substitution gives " + render(inst));
        note = sch->id + " [" + show(*l.subst) + "]";
      } else {
        auto m = match_schema(sch->pattern, f);
        if (!m) return reject(l, "not an instance of " + sch->id);
        note = sch->id + " [" + show(*m) + "]";
      }
    } else {
      return reject(l, "unknown justification '" + l.rule + "'");
    }
    proved.emplace(l.number, f);
    r.notes.push_back(std::to_string(l.number) + ". " + render(f) + " ; " + note);
  }
  r.accepted = true;
  return r;
}

}  // namespace itlkit
