#include "itlkit/structures.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace itlkit {

namespace {
std::string W(size_t w) { return std::to_string(w); }
}  // namespace

bool Quasimodel::has_succ(size_t a, size_t b) const {
  return std::find(succ[a].begin(), succ[a].end(), b) != succ[a].end();
}

std::vector<Violation> validate_order(size_t n, const std::vector<Bits>& up) {
  std::vector<Violation> out;
  if (up.size() != n) return {{"order", "order has wrong size"}};
  for (size_t a = 0; a < n; ++a) {
    if (!up[a].test(a)) out.push_back({"order", "not reflexive at " + W(a)});
    for (size_t b = 0; b < n; ++b) {
      if (!up[a].test(b)) continue;
      if (a != b && up[b].test(a)) out.push_back({"order", "not antisymmetric: " + W(a) + ", " + W(b)});
      if (!up[b].subset_of(up[a])) out.push_back({"order", "not transitive at " + W(a) + " <= " + W(b)});
    }
  }
  return out;
}

std::vector<Violation> validate_labelled_frame(const LabelledFrame& fr) {
  auto out = validate_order(fr.n, fr.up);
  if (!out.empty()) return out;
  const TypeSpace& sp = *fr.space;
  if (fr.label.size() != fr.n) return {{"label", "label count does not match world count"}};
  for (size_t w = 0; w < fr.n; ++w) {
    const auto& t = fr.label[w];
    if (!subset(t.pos | t.neg, sp.full())) {
      out.push_back({"label", "label of " + W(w) + " leaves the signature"});
      continue;
    }
    for (int c : check_type_conditions(t.pos, t.neg, sp))
      out.push_back({"type", "label of " + W(w) + " breaks type condition " + std::to_string(c)});
  }
  for (size_t w = 0; w < fr.n; ++w)
    for (size_t v = 0; v < fr.n; ++v)
      if (v != w && fr.leq(w, v) && !refines(fr.label[w], fr.label[v]))
        out.push_back({"continuity", "label(" + W(w) + ") does not refine to label(" + W(v) + ")"});
  for (size_t w = 0; w < fr.n; ++w) {
    Mask d = defects(fr.label[w], sp);
    for (size_t i = 0; i < sp.size(); ++i) {
      if (!has(d, i)) continue;
      size_t l = sp.left(i), r = sp.right(i);
      bool revoked = false;
      for (size_t v = 0; v < fr.n && !revoked; ++v)
        revoked = fr.leq(w, v) && has(fr.label[v].pos, l) && has(fr.label[v].neg, r);
      if (!revoked)
        out.push_back({"defect", "defect " + render(sp.at(i)) + " of " + W(w) + " never revoked"});
    }
  }
  return out;
}

Bits reachable_set(const Quasimodel& q, size_t w) {
  Bits seen(q.n);
  std::deque<size_t> queue{w};
  seen.set(w);
  while (!queue.empty()) {
    size_t x = queue.front();
    queue.pop_front();
    for (size_t y : q.succ[x])
      if (!seen.test(y)) {
        seen.set(y);
        queue.push_back(y);
      }
  }
  return seen;
}

std::vector<Violation> omega_violations(const Quasimodel& q) {
  std::vector<Violation> out;
  const TypeSpace& sp = *q.space;
  for (size_t w = 0; w < q.n; ++w) {
    Mask evs = q.label[w].pos;
    bool any = false;
    for (size_t i = 0; i < sp.size(); ++i) any |= has(evs, i) && sp.op(i) == Op::Ev;
    if (!any) continue;
    Bits r = reachable_set(q, w);
    for (size_t i = 0; i < sp.size(); ++i) {
      if (!has(evs, i) || sp.op(i) != Op::Ev) continue;
      size_t c = sp.left(i);
      bool ok = false;
      for (size_t v = 0; v < q.n && !ok; ++v) ok = r.test(v) && has(q.label[v].pos, c);
      if (!ok)
        out.push_back({"omega", "eventuality " + render(sp.at(i)) + " at " + W(w) + " never realized"});
    }
  }
  return out;
}

std::vector<Violation> honesty_violations(const Quasimodel& q) {
  std::vector<Violation> out;
  const TypeSpace& sp = *q.space;
  for (size_t i = 0; i < sp.size(); ++i) {
    if (sp.op(i) != Op::Forall) continue;
    size_t c = sp.left(i);
    bool asserted = false, denied = false;
    for (size_t w = 0; w < q.n; ++w) {
      asserted |= has(q.label[w].pos, i);
      denied |= has(q.label[w].neg, i);
    }
    if (asserted)
      for (size_t v = 0; v < q.n; ++v)
        if (!has(q.label[v].pos, c))
          out.push_back({"honest", render(sp.at(i)) + " asserted but argument not positive at " + W(v)});
    if (denied) {
      bool witness = false;
      for (size_t v = 0; v < q.n && !witness; ++v) witness = has(q.label[v].neg, c);
      if (!witness)
        out.push_back({"honest", render(sp.at(i)) + " denied without a negative witness"});
    }
  }
  return out;
}

std::vector<Violation> validate_quasimodel(const Quasimodel& q, QFlags flags) {
  auto out = validate_labelled_frame(q);
  if (!out.empty()) return out;
  if (q.succ.size() != q.n) return {{"succ", "successor table has wrong size"}};
  const TypeSpace& sp = *q.space;
  for (size_t w = 0; w < q.n; ++w)
    for (size_t v : q.succ[w]) {
      if (v >= q.n) {
        out.push_back({"succ", "successor out of range at " + W(w)});
        continue;
      }
      if (!is_sensible_pair(q.label[w], q.label[v], sp))
        out.push_back({"sensible", "pair (" + W(w) + ", " + W(v) + ") not sensible"});
    }
  if (!out.empty()) return out;
  // w' >= w S v  =>  exists v' >= v with w' S v'
  for (size_t w = 0; w < q.n; ++w)
    for (size_t v : q.succ[w])
      for (size_t w2 = 0; w2 < q.n; ++w2) {
        if (!q.leq(w, w2)) continue;
        bool ok = false;
        for (size_t v2 : q.succ[w2])
          if (q.leq(v, v2)) {
            ok = true;
            break;
          }
        if (!ok)
          out.push_back({"confluence", "no successor of " + W(w2) + " above " + W(v) +
                                           " (from " + W(w) + ")"});
      }
  if (flags.full) {
    for (size_t w = 0; w < q.n; ++w)
      if (q.succ[w].empty()) out.push_back({"serial", "world " + W(w) + " has no successor"});
    for (auto& v : omega_violations(q)) out.push_back(v);
  }
  if (flags.honest)
    for (auto& v : honesty_violations(q)) out.push_back(v);
  if (flags.deterministic)
    for (size_t w = 0; w < q.n; ++w)
      if (q.succ[w].size() != 1)
        out.push_back({"deterministic", "world " + W(w) + " has " + std::to_string(q.succ[w].size()) +
                                            " successors"});
  return out;
}

Quasimodel restrict_worlds(const Quasimodel& q, const Bits& keep) {
  std::vector<long> idx(q.n, -1);
  size_t k = 0;
  for (size_t w = 0; w < q.n; ++w)
    if (keep.test(w)) idx[w] = static_cast<long>(k++);
  Quasimodel r;
  r.space = q.space;
  r.flags = q.flags;
  r.n = k;
  r.up.assign(k, Bits(k));
  r.label.resize(k);
  r.succ.resize(k);
  for (size_t w = 0; w < q.n; ++w) {
    if (idx[w] < 0) continue;
    size_t a = static_cast<size_t>(idx[w]);
    r.label[a] = q.label[w];
    for (size_t v = 0; v < q.n; ++v)
      if (idx[v] >= 0 && q.leq(w, v)) r.up[a].set(static_cast<size_t>(idx[v]));
    for (size_t v : q.succ[w])
      if (idx[v] >= 0) r.succ[a].push_back(static_cast<size_t>(idx[v]));
  }
  if (q.designated && idx[*q.designated] >= 0) r.designated = static_cast<size_t>(idx[*q.designated]);
  return r;
}

Quasimodel restrict_open(const Quasimodel& q, const Bits& u) {
  if (!up_closed(q.up, u)) throw std::invalid_argument("restriction set is not up-closed");
  bool invariant = true;
  for (size_t w = 0; w < q.n && invariant; ++w)
    if (u.test(w))
      for (size_t v : q.succ[w])
        if (!u.test(v)) invariant = false;
  Quasimodel r = restrict_worlds(q, u);
  if (!invariant) {
    bool serial = true;
    for (size_t w = 0; w < r.n; ++w) serial &= !r.succ[w].empty();
    if (!serial || !omega_violations(r).empty())
      throw std::invalid_argument(
          "restriction is neither successor-invariant nor serial and eventuality-complete");
  }
  return r;
}

Quasimodel restrict_profile(const Quasimodel& q, const UniversalProfile& p) {
  Bits keep(q.n);
  for (size_t w = 0; w < q.n; ++w)
    if (profile_within(p, q.label[w])) keep.set(w);
  return restrict_worlds(q, keep);
}

Quasimodel induced_quasimodel(const PosetModel& m, SpacePtr space) {
  Quasimodel q;
  q.space = space;
  q.n = m.n;
  q.up = m.up;
  q.label.assign(m.n, {});
  Evaluator ev(m);
  for (size_t i = 0; i < space->size(); ++i) {
    const Bits& s = ev.eval(space->at(i));
    for (size_t w = 0; w < m.n; ++w) {
      if (s.test(w))
        q.label[w].pos |= bit(i);
      else
        q.label[w].neg |= bit(i);
    }
  }
  q.succ.resize(m.n);
  for (size_t w = 0; w < m.n; ++w) q.succ[w] = {m.step[w]};
  q.flags = {true, true, true};
  return q;
}

PosetModel model_of_deterministic_quasimodel(const Quasimodel& q) {
  PosetModel m;
  m.n = q.n;
  m.up = q.up;
  m.step.resize(q.n);
  for (size_t w = 0; w < q.n; ++w) {
    if (q.succ[w].size() != 1)
      throw std::invalid_argument("successor relation is not functional at " + W(w));
    m.step[w] = q.succ[w][0];
  }
  const TypeSpace& sp = *q.space;
  for (size_t i = 0; i < sp.size(); ++i) {
    if (sp.op(i) != Op::Var) continue;
    Bits b(q.n);
    for (size_t w = 0; w < q.n; ++w)
      if (has(q.label[w].pos, i)) b.set(w);
    m.val[sp.at(i).name()] = b;
  }
  Evaluator ev(m);
  for (size_t i = 0; i < sp.size(); ++i) {
    const Bits& s = ev.eval(sp.at(i));
    for (size_t w = 0; w < q.n; ++w) {
      if (has(q.label[w].pos, i) && !s.test(w))
        throw InconsistencyError("world " + W(w) + " labels " + render(sp.at(i)) +
                                 " positive but it fails there");
      if (has(q.label[w].neg, i) && s.test(w))
        throw InconsistencyError("world " + W(w) + " labels " + render(sp.at(i)) +
                                 " negative but it holds there");
    }
  }
  return m;
}

std::string to_dot(const Quasimodel& q) {
  std::ostringstream os;
  os << "digraph quasimodel {\n";
  for (size_t w = 0; w < q.n; ++w) {
    std::string lab = to_string(q.label[w], *q.space);
    std::string esc;
    for (char c : lab) {
      if (c == '"') esc += '\\';
      esc += c;
    }
    os << "  w" << w << " [label=\"" << w << ": " << esc << "\"";
    if (q.designated && *q.designated == w) os << ", shape=doublecircle";
    os << "];\n";
  }
  for (size_t a = 0; a < q.n; ++a)
    for (size_t b = 0; b < q.n; ++b) {
      if (a == b || !q.leq(a, b)) continue;
      bool cover = true;
      for (size_t c = 0; c < q.n && cover; ++c)
        if (c != a && c != b && q.leq(a, c) && q.leq(c, b)) cover = false;
      if (cover) os << "  w" << a << " -> w" << b << ";\n";
    }
  for (size_t w = 0; w < q.n; ++w)
    for (size_t v : q.succ[w]) os << "  w" << w << " -> w" << v << " [style=dashed];\n";
  os << "}\n";
  return os.str();
}

std::string describe(const std::vector<Violation>& vs) {
  std::string s;
  for (const auto& v : vs) s += v.kind + ": " + v.detail + "\n";
  return s;
}

}  // namespace itlkit
