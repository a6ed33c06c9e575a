#include "itlkit/unwind.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace itlkit {

size_t path_measure(const TwoSidedType& t, const TypeSpace& sp) {
  return static_cast<size_t>(popcount(sp.down_closure(t.pos)));
}

namespace {

bool posext(const TwoSidedType& a, const TwoSidedType& b) { return compare(Order::PosExt, a, b); }

size_t first_succ(const Quasimodel& q, size_t w) {
  if (q.succ[w].empty())
    throw std::runtime_error("world " + std::to_string(w) + " has no successor");
  return *std::min_element(q.succ[w].begin(), q.succ[w].end());
}

}  // namespace

std::string typed_path_problem(const Quasimodel& q, const TypedPath& p) {
  const TypeSpace& sp = *q.space;
  for (size_t i = 0; i < p.size(); ++i) {
    size_t w = p[i].world;
    if (w >= q.n) return "step " + std::to_string(i) + ": world out of range";
    if (!is_type(p[i].type, sp)) return "step " + std::to_string(i) + ": not a type";
    if (!posext(p[i].type, q.label[w]))
      return "step " + std::to_string(i) + ": type is not a positive restriction of the label";
    if (i + 1 < p.size()) {
      if (!q.has_succ(w, p[i + 1].world))
        return "step " + std::to_string(i) + ": worlds not successor-related";
      if (!is_sensible_pair(p[i].type, p[i + 1].type, sp))
        return "step " + std::to_string(i) + ": types not sensible";
    }
  }
  return {};
}

bool is_properly_typed(const TypedPath& p, const TypeSpace& sp) {
  for (size_t i = 0; i + 1 < p.size(); ++i)
    if (!subset(sp.down_closure(p[i + 1].type.pos), sp.down_closure(p[i].type.pos))) return false;
  return true;
}

bool is_terminal(const TypedPath& p) { return !p.empty() && p.back().type.pos == 0; }

TypedPath properly_type_path(const Quasimodel& q, const std::vector<size_t>& worlds,
                             const TwoSidedType& phi0) {
  const TypeSpace& sp = *q.space;
  if (worlds.empty()) return {};
  for (size_t i = 0; i + 1 < worlds.size(); ++i)
    if (worlds[i] >= q.n || !q.has_succ(worlds[i], worlds[i + 1]))
      throw std::invalid_argument("not a successor path");
  if (worlds.back() >= q.n) throw std::invalid_argument("world out of range");
  if (!posext(phi0, q.label[worlds[0]]))
    throw std::invalid_argument("first type is not a positive restriction of the label");
  TypedPath p{{worlds[0], phi0}};
  for (size_t i = 1; i < worlds.size(); ++i) {
    Mask c = sp.down_closure(p.back().type.pos);
    p.push_back({worlds[i], restrict_pos(q.label[worlds[i]], c, sp)});
  }
  return p;
}

TypedPath lift_path(const Quasimodel& q, const TypedPath& p, size_t v0) {
  if (p.empty()) return {};
  if (v0 >= q.n || !q.leq(p[0].world, v0)) throw std::invalid_argument("lift target is not above");
  TypedPath out{{v0, q.label[v0]}};
  for (size_t i = 1; i < p.size(); ++i) {
    size_t v = out.back().world;
    std::optional<size_t> next;
    for (size_t u : q.succ[v])
      if (q.leq(p[i].world, u) && (!next || u < *next)) next = u;
    if (!next) throw std::runtime_error("no confluence witness at step " + std::to_string(i));
    out.push_back({*next, q.label[*next]});
  }
  return out;
}

TypedPath extend_to_terminal(const Quasimodel& q, const TypedPath& input) {
  const TypeSpace& sp = *q.space;
  if (input.empty()) throw std::invalid_argument("empty path");
  if (auto why = typed_path_problem(q, input); !why.empty()) throw std::invalid_argument(why);
  TypedPath p = input;
  while (p.back().type.pos != 0) {
    const TypedStep last = p.back();
    Mask top = maximal_temporal(last.type, sp);
    if (!top) {
      size_t w = first_succ(q, last.world);
      p.push_back({w, {0, q.label[w].neg}});
      break;
    }
    size_t phi = static_cast<size_t>(std::countr_zero(top));
    if (sp.op(phi) == Op::Next) {
      size_t w = first_succ(q, last.world);
      TwoSidedType t = restrict_pos(q.label[w], sp.down_closure(last.type.pos), sp);
      p.push_back({w, remove_realized(t, phi, sp)});
      continue;
    }
    // ◊ψ: shortest successor path to a world holding ψ, then one more step
    size_t psi = static_cast<size_t>(sp.left(phi));
    std::vector<size_t> route;
    if (has(last.type.pos, psi)) {
      route = {last.world};
    } else {
      std::map<size_t, size_t> parent;
      std::deque<size_t> queue;
      for (size_t v : q.succ[last.world])
        if (!parent.count(v)) {
          parent[v] = last.world;
          queue.push_back(v);
        }
      std::optional<size_t> hit;
      while (!queue.empty() && !hit) {
        size_t u = queue.front();
        queue.pop_front();
        if (has(q.label[u].pos, psi)) {
          hit = u;
          break;
        }
        std::vector<size_t> nx = q.succ[u];
        std::sort(nx.begin(), nx.end());
        for (size_t v : nx)
          if (!parent.count(v)) {
            parent[v] = u;
            queue.push_back(v);
          }
      }
      if (!hit)
        throw std::runtime_error("eventuality " + render(sp.at(phi)) + " not realized from world " +
                                 std::to_string(last.world));
      route.push_back(*hit);
      for (size_t u = parent.at(*hit);; u = parent.at(u)) {
        route.push_back(u);
        if (u == last.world) break;
      }
      std::reverse(route.begin(), route.end());
    }
    TypedPath seg = properly_type_path(q, route, last.type);
    p.insert(p.end(), seg.begin() + 1, seg.end());
    size_t w = first_succ(q, p.back().world);
    TwoSidedType t = restrict_pos(q.label[w], sp.down_closure(p.back().type.pos), sp);
    p.push_back({w, remove_realized(t, phi, sp)});
  }
  if (auto why = typed_path_problem(q, p); !why.empty())
    throw std::runtime_error("extension is not a typed path (" + why + ")");
  return p;
}

Quasimodel forall_free_reduct(const Quasimodel& q) {
  const TypeSpace& sp = *q.space;
  Mask keep = 0;
  for (size_t i = 0; i < sp.size(); ++i)
    if (!(sp.foralls() & sp.down(i))) keep |= bit(i);
  Quasimodel r = q;
  for (auto& t : r.label) {
    t.pos &= keep;
    t.neg &= keep;
  }
  return r;
}

TypedPath Fragment::path(size_t w) const {
  TypedPath p;
  for (uint32_t h : seq[w]) p.push_back(houses[h]);
  return p;
}

bool Fragment::house_leq(uint32_t a, uint32_t b) const {
  return base.leq(houses[a].world, houses[b].world) && refines(houses[a].type, houses[b].type);
}

bool Fragment::leq(size_t a, size_t b) const {
  const auto& x = seq[a];
  const auto& y = seq[b];
  if (x.size() > y.size()) return false;
  for (size_t i = 0; i < x.size(); ++i)
    if (!house_leq(x[i], y[i])) return false;
  return true;
}

Quasimodel Fragment::to_quasimodel(size_t max_worlds) const {
  size_t n = size();
  if (n > max_worlds)
    throw CapacityError("fragment of " + std::to_string(n) + " worlds is too large to materialize");
  Quasimodel m;
  m.space = space;
  m.n = n;
  m.up.assign(n, Bits(n));
  m.label = label;
  m.succ.resize(n);
  for (size_t a = 0; a < n; ++a) {
    m.succ[a] = {succ[a]};
    for (size_t b = 0; b < n; ++b)
      if (leq(a, b)) m.up[a].set(b);
  }
  m.flags = {false, false, true};
  return m;
}

namespace {

struct SeqHash {
  size_t operator()(const std::vector<uint32_t>& v) const {
    size_t h = v.size();
    for (uint32_t x : v) h = h * 1000003u ^ x;
    return h;
  }
};

}  // namespace

Fragment limit_fragment(const Quasimodel& q, size_t maxlen, size_t max_worlds) {
  const TypeSpace& sp = *q.space;
  if (maxlen == 0) throw std::invalid_argument("maxlen must be positive");
  Fragment fr;
  fr.space = q.space;
  fr.base = q;
  // houses: positive restrictions of each label that are types, by world
  for (size_t w = 0; w < q.n; ++w) {
    std::vector<TwoSidedType> ts;
    Mask pos = q.label[w].pos;
    for (Mask s = pos;; s = (s - 1) & pos) {
      TwoSidedType t{s, q.label[w].neg};
      if (is_type(t, sp)) ts.push_back(t);
      if (!s) break;
    }
    std::sort(ts.begin(), ts.end());
    for (const auto& t : ts) fr.houses.push_back({w, t});
  }
  size_t nh = fr.houses.size();
  std::vector<std::vector<uint32_t>> next(nh);
  for (size_t a = 0; a < nh; ++a)
    for (size_t b = 0; b < nh; ++b)
      if (q.has_succ(fr.houses[a].world, fr.houses[b].world) &&
          is_sensible_pair(fr.houses[a].type, fr.houses[b].type, sp))
        next[a].push_back(static_cast<uint32_t>(b));
  // dist[h]: fewest further steps from h to an empty positive part
  const size_t inf = SIZE_MAX;
  std::vector<size_t> dist(nh, inf);
  for (size_t h = 0; h < nh; ++h)
    if (fr.houses[h].type.pos == 0) dist[h] = 0;
  for (size_t round = 1; round < maxlen; ++round)
    for (size_t h = 0; h < nh; ++h)
      if (dist[h] == inf)
        for (uint32_t g : next[h])
          if (dist[g] == round - 1) dist[h] = round;

  fr.seq.push_back({});
  std::vector<uint32_t> cur;
  std::function<void(uint32_t)> grow = [&](uint32_t h) {
    cur.push_back(h);
    if (fr.houses[h].type.pos == 0) {
      if (fr.seq.size() >= max_worlds)
        throw CapacityError("fragment exceeds " + std::to_string(max_worlds) + " worlds");
      fr.seq.push_back(cur);
    }
    if (cur.size() < maxlen) {
      size_t left = maxlen - cur.size();
      for (uint32_t g : next[h])
        if (dist[g] < left) grow(g);
    }
    cur.pop_back();
  };
  for (size_t h = 0; h < nh; ++h)
    if (dist[h] < maxlen) grow(static_cast<uint32_t>(h));

  size_t n = fr.seq.size();
  std::unordered_map<std::vector<uint32_t>, size_t, SeqHash> index;
  index.reserve(n);
  for (size_t i = 0; i < n; ++i) index.emplace(fr.seq[i], i);
  Mask allneg = 0;
  for (size_t w = 0; w < q.n; ++w) allneg |= q.label[w].neg;
  fr.label.resize(n);
  fr.succ.resize(n);
  fr.label[0] = {0, allneg};
  fr.succ[0] = 0;
  for (size_t i = 1; i < n; ++i) {
    const auto& x = fr.seq[i];
    fr.label[i] = fr.houses[x[0]].type;
    fr.succ[i] = x.size() == 1 ? 0 : index.at(std::vector<uint32_t>(x.begin() + 1, x.end()));
  }
  return fr;
}

namespace {

// Trie over the sorted paths, nodes in breadth-first order so that the
// children of a node are a contiguous range. Paths must be sorted
// lexicographically; then every subtree holds an id range of paths.
struct Trie {
  std::vector<uint32_t> house;
  std::vector<int64_t> path;  // -1 for inner prefixes
  std::vector<size_t> lo, hi, kid_begin, kid_end;
};

Trie build_trie(const Fragment& f) {
  struct Node {
    uint32_t house = 0;
    int64_t path = -1;
    std::vector<size_t> kids;
  };
  std::vector<Node> nodes(1);
  nodes[0].path = 0;
  std::vector<size_t> stack{0};
  for (size_t i = 1; i < f.size(); ++i) {
    const auto& x = f.seq[i];
    size_t depth = 0;
    while (depth + 1 < stack.size() && depth < x.size() && nodes[stack[depth + 1]].house == x[depth])
      ++depth;
    stack.resize(depth + 1);
    for (size_t k = depth; k < x.size(); ++k) {
      nodes.push_back({x[k], -1, {}});
      nodes[stack.back()].kids.push_back(nodes.size() - 1);
      stack.push_back(nodes.size() - 1);
    }
    nodes[stack.back()].path = static_cast<int64_t>(i);
  }
  std::vector<size_t> order{0};
  for (size_t k = 0; k < order.size(); ++k)
    for (size_t c : nodes[order[k]].kids) order.push_back(c);
  std::vector<size_t> pos(nodes.size());
  for (size_t k = 0; k < order.size(); ++k) pos[order[k]] = k;
  Trie t;
  size_t m = nodes.size();
  t.house.resize(m);
  t.path.resize(m);
  t.lo.resize(m);
  t.hi.resize(m);
  t.kid_begin.resize(m);
  t.kid_end.resize(m);
  for (size_t k = 0; k < m; ++k) {
    const Node& nd = nodes[order[k]];
    t.house[k] = nd.house;
    t.path[k] = nd.path;
    t.kid_begin[k] = nd.kids.empty() ? 0 : pos[nd.kids.front()];
    t.kid_end[k] = nd.kids.empty() ? 0 : pos[nd.kids.back()] + 1;
  }
  // children sit after their parent in breadth-first order
  for (size_t k = m; k-- > 0;) {
    t.lo[k] = t.path[k] >= 0 ? static_cast<size_t>(t.path[k]) : SIZE_MAX;
    t.hi[k] = t.path[k] >= 0 ? static_cast<size_t>(t.path[k]) + 1 : 0;
    for (size_t c = t.kid_begin[k]; c < t.kid_end[k]; ++c) {
      t.lo[k] = std::min(t.lo[k], t.lo[c]);
      t.hi[k] = std::max(t.hi[k], t.hi[c]);
    }
  }
  return t;
}

// Checks continuity and monotonicity on every comparable pair (x, y). Pairs
// are reached by walking the trie on both sides through comparable houses.
struct PairWalk {
  const Fragment& f;
  const Trie& t;
  size_t nh, words, width;
  std::vector<uint64_t> up;  // house order as bit rows
  std::vector<uint32_t> flat, len;
  std::vector<Violation> found;
  size_t limit;

  PairWalk(const Fragment& fr, const Trie& tr, size_t lim) : f(fr), t(tr), limit(lim) {
    nh = f.houses.size();
    words = nh <= 8192 ? (nh + 63) / 64 : 0;
    up.assign(nh * words, 0);
    for (uint32_t a = 0; a < nh && words; ++a)
      for (uint32_t b = 0; b < nh; ++b)
        if (f.house_leq(a, b)) up[a * words + b / 64] |= uint64_t(1) << (b % 64);
    width = 1;
    for (const auto& x : f.seq) width = std::max(width, x.size());
    flat.assign(f.size() * width, 0);
    len.resize(f.size());
    for (size_t i = 0; i < f.size(); ++i) {
      len[i] = static_cast<uint32_t>(f.seq[i].size());
      std::copy(f.seq[i].begin(), f.seq[i].end(), flat.begin() + static_cast<long>(i * width));
    }
  }

  bool hle(uint32_t a, uint32_t b) const {
    return words ? (up[a * words + b / 64] >> (b % 64)) & 1u : f.house_leq(a, b);
  }
  // succ is the tail map (checked per world), so successors are compared
  // on the stored rows shifted by one
  bool tail_leq(size_t a, size_t b) const {
    if (len[a] > len[b]) return false;
    for (size_t i = 1; i < len[a]; ++i)
      if (!hle(flat[a * width + i], flat[b * width + i])) return false;
    return true;
  }
  void check(size_t x, size_t y) {
    if (found.size() >= limit) return;
    if (!refines(f.label[x], f.label[y]))
      found.push_back({"continuity", std::to_string(x) + " <= " + std::to_string(y)});
    if (!tail_leq(x, y)) found.push_back({"monotone", std::to_string(x) + " <= " + std::to_string(y)});
  }
  // a and b are trie nodes whose prefixes are componentwise comparable
  void walk(size_t a, size_t b) {
    if (t.path[a] >= 0)
      for (size_t j = t.lo[b]; j < t.hi[b]; ++j) check(static_cast<size_t>(t.path[a]), j);
    for (size_t ka = t.kid_begin[a]; ka < t.kid_end[a]; ++ka)
      for (size_t kb = t.kid_begin[b]; kb < t.kid_end[b]; ++kb)
        if (hle(t.house[ka], t.house[kb])) walk(ka, kb);
  }
};

}  // namespace

std::vector<Violation> validate_fragment(const Fragment& f) {
  const TypeSpace& sp = *f.space;
  const size_t limit = 50;
  std::vector<Violation> out = validate_order(f.base.n, f.base.up);
  auto report = [&](std::string kind, std::string detail) {
    if (out.size() < limit) out.push_back({std::move(kind), std::move(detail)});
  };
  size_t n = f.size();
  if (n == 0 || !f.seq[0].empty()) {
    report("empty", "world 0 is not the empty path");
    return out;
  }
  Mask allneg = 0;
  for (const auto& l : f.base.label) allneg |= l.neg;
  if (!(f.label[0] == TwoSidedType{0, allneg})) report("label", "empty path label");
  if (f.succ[0] != 0) report("functional", "empty path does not step to itself");

  std::unordered_map<std::vector<uint32_t>, size_t, SeqHash> index;
  index.reserve(n);
  for (size_t i = 0; i < n; ++i)
    if (!index.emplace(f.seq[i], i).second) report("order", "world " + std::to_string(i) + " repeats a path");
  bool sorted = true;
  for (size_t i = 1; i < n; ++i) {
    const auto& x = f.seq[i];
    std::string w = "world " + std::to_string(i);
    if (!std::lexicographical_compare(f.seq[i - 1].begin(), f.seq[i - 1].end(), x.begin(), x.end()))
      sorted = false;
    if (auto why = typed_path_problem(f.base, f.path(i)); !why.empty()) report("path", w + ": " + why);
    if (f.houses[x.back()].type.pos != 0) report("terminal", w);
    if (!(f.label[i] == f.houses[x[0]].type)) report("label", w + " is not labelled by its first type");
    auto tail = x.size() == 1 ? std::vector<uint32_t>{} : std::vector<uint32_t>(x.begin() + 1, x.end());
    auto it = index.find(tail);
    if (it == index.end()) report("functional", w + " has no tail in the fragment");
    else if (f.succ[i] != it->second) report("functional", w + " does not step to its tail");
  }
  for (size_t i = 0; i < n; ++i) {
    if (!is_type(f.label[i], sp)) report("type", "world " + std::to_string(i) + " label is not a type");
    if (f.succ[i] >= n) continue;
    if (!is_sensible_pair(f.label[i], f.label[f.succ[i]], sp))
      report("sensible", std::to_string(i) + " -> " + std::to_string(f.succ[i]));
  }
  if (!sorted) {
    report("order", "paths are not in lexicographic order");
    return out;
  }

  Trie t = build_trie(f);
  PairWalk pw(f, t, limit);
  pw.walk(0, 0);
  for (auto& v : pw.found) report(v.kind, v.detail);
  return out;
}

std::string to_dot(const Fragment& f) {
  if (f.size() <= 300) return to_dot(f.to_quasimodel());
  // successor edges only; covers of the order are too costly at this size
  std::ostringstream os;
  os << "digraph fragment {\n";
  for (size_t w = 0; w < f.size(); ++w) {
    std::string lab = to_string(f.label[w], *f.space);
    std::string esc;
    for (char c : lab) {
      if (c == '"') esc += '\\';
      esc += c;
    }
    os << "  w" << w << " [label=\"" << w << ": " << esc << "\"];\n";
  }
  for (size_t w = 0; w < f.size(); ++w)
    os << "  w" << w << " -> w" << f.succ[w] << " [style=dashed];\n";
  os << "}\n";
  return os.str();
}

std::vector<Violation> validate_fragment(const Quasimodel& f) {
  const TypeSpace& sp = *f.space;
  std::vector<Violation> out = validate_order(f.n, f.up);
  for (size_t w = 0; w < f.n; ++w) {
    auto bad = check_type_conditions(f.label[w].pos, f.label[w].neg, sp);
    if (!bad.empty()) out.push_back({"type", "world " + std::to_string(w) + " label is not a type"});
    if (f.succ[w].size() != 1) {
      out.push_back({"functional", "world " + std::to_string(w) + " has " +
                                       std::to_string(f.succ[w].size()) + " successors"});
      continue;
    }
    size_t s = f.succ[w][0];
    if (!is_sensible_pair(f.label[w], f.label[s], sp))
      out.push_back({"sensible", std::to_string(w) + " -> " + std::to_string(s)});
    for (size_t v = 0; v < f.n; ++v) {
      if (!f.leq(w, v)) continue;
      if (!refines(f.label[w], f.label[v]))
        out.push_back({"continuity", std::to_string(w) + " <= " + std::to_string(v)});
      if (f.succ[v].size() == 1 && !f.leq(s, f.succ[v][0]))
        out.push_back({"monotone", std::to_string(w) + " <= " + std::to_string(v)});
    }
  }
  return out;
}

}  // namespace itlkit
