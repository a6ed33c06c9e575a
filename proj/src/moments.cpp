#include "itlkit/moments.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace itlkit {

namespace {

Mask root_revokes(const TwoSidedType& t, const TypeSpace& sp) {
  Mask r = 0;
  Mask imps = sp.implications();
  for (size_t i = 0; i < sp.size(); ++i)
    if (has(imps, i) && has(t.pos, sp.left(i)) && has(t.neg, sp.right(i))) r |= bit(i);
  return r;
}

bool strictly_above(const TwoSidedType& lo, const TwoSidedType& hi) {
  return lo != hi && refines(lo, hi);
}

void sort_unique(std::vector<size_t>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

bool MomentSet::is_sub(size_t a, size_t b) const {
  return std::binary_search(sublist[a].begin(), sublist[a].end(), b);
}

bool MomentSet::simulates_at(size_t x, size_t d) {
  if (root[x] != root[d]) return false;
  if (x == d) return true;
  uint64_t key = (uint64_t(x) << 32) | d;
  if (auto it = memo_sq_.find(key); it != memo_sq_.end()) return it->second;
  bool ok = true;
  for (size_t c : children[x]) {
    bool found = false;
    for (size_t e : children[d])
      if (simulates_into(c, e)) {
        found = true;
        break;
      }
    if (!found) {
      ok = false;
      break;
    }
  }
  memo_sq_[key] = ok;
  return ok;
}

bool MomentSet::simulates_into(size_t x, size_t y) {
  uint64_t key = (uint64_t(x) << 32) | y;
  if (auto it = memo_le_.find(key); it != memo_le_.end()) return it->second;
  bool ok = false;
  for (size_t d : sublist[y])
    if (simulates_at(x, d)) {
      ok = true;
      break;
    }
  memo_le_[key] = ok;
  return ok;
}

bool MomentSet::comparable(size_t a, size_t b) {
  switch (reduction_) {
    case Reduction::None: return false;
    case Reduction::Submoment: return is_sub(a, b) || is_sub(b, a);
    case Reduction::Simulation: return simulates_into(a, b) || simulates_into(b, a);
  }
  return false;
}

size_t MomentSet::make(const TwoSidedType& t, std::vector<size_t> kids) {
  const TypeSpace& sp = *space;
  sort_unique(kids);
  for (size_t k : kids)
    if (!strictly_above(t, root[k])) throw std::logic_error("moment child does not grow the type");
  if (reduction_ != Reduction::None && kids.size() > 1) {
    std::vector<size_t> keep;
    for (size_t a : kids) {
      bool dominated = false;
      for (size_t b : kids) {
        if (a == b) continue;
        bool ab = reduction_ == Reduction::Submoment ? is_sub(b, a) : simulates_into(a, b);
        if (!ab) continue;
        bool ba = reduction_ == Reduction::Submoment ? is_sub(a, b) : simulates_into(b, a);
        if (!ba || b < a) {
          dominated = true;
          break;
        }
      }
      if (!dominated) keep.push_back(a);
    }
    kids = std::move(keep);
  }
  std::string key(reinterpret_cast<const char*>(&t.pos), sizeof(Mask));
  key.append(reinterpret_cast<const char*>(&t.neg), sizeof(Mask));
  for (size_t k : kids) key.append(reinterpret_cast<const char*>(&k), sizeof(size_t));
  if (auto it = intern_.find(key); it != intern_.end()) return it->second;
  if (root.size() >= cap_) throw CapacityError("moment count exceeds cap " + std::to_string(cap_));
  size_t id = root.size();
  Mask rv = root_revokes(t, sp);
  std::vector<size_t> sl{id};
  for (size_t k : kids) {
    rv |= revokes[k];
    sl.insert(sl.end(), sublist[k].begin(), sublist[k].end());
  }
  sort_unique(sl);
  root.push_back(t);
  children.push_back(std::move(kids));
  revokes.push_back(rv);
  sublist.push_back(std::move(sl));
  intern_.emplace(std::move(key), id);
  return id;
}

void MomentSet::finalize() {
  size_t n = size();
  subs.assign(n, Bits(n));
  for (size_t m = 0; m < n; ++m)
    for (size_t s : sublist[m]) subs[m].set(s);
}

size_t MomentSet::node_count(size_t m) const {
  size_t c = 1;
  for (size_t ch : children[m]) c += node_count(ch);
  return c;
}

size_t MomentSet::height(size_t m) const {
  size_t h = 0;
  for (size_t ch : children[m]) h = std::max(h, height(ch));
  return h + 1;
}

std::string MomentSet::to_dot(size_t m) const {
  std::ostringstream os;
  os << "digraph moment {\n";
  size_t next = 0;
  std::function<size_t(size_t)> go = [&](size_t x) {
    size_t me = next++;
    os << "  n" << me << " [label=\"" << itlkit::to_string(root[x], *space) << "\"];\n";
    for (size_t c : children[x]) {
      size_t k = go(c);
      os << "  n" << me << " -> n" << k << ";\n";
    }
    return me;
  };
  go(m);
  os << "}\n";
  return os.str();
}

MomentSet enumerate_moments(SpacePtr space, const MomentOptions& opt) {
  const TypeSpace& sp = *space;
  if (sp.size() > max_signature())
    throw CapacityError("signature size " + std::to_string(sp.size()) + " exceeds cap " +
                        std::to_string(max_signature()));
  std::vector<TwoSidedType> types = opt.types ? *opt.types : enumerate_saturated(sp);
  // Larger positive parts first so children exist before parents.
  std::stable_sort(types.begin(), types.end(), [](const TwoSidedType& a, const TwoSidedType& b) {
    return popcount(a.pos) > popcount(b.pos);
  });

  MomentSet ms(space, opt.reduction, opt.max_moments);
  for (const auto& t : types) {
    Mask need = defects(t, sp);
    std::vector<size_t> cand;
    for (size_t m = 0; m < ms.size(); ++m)
      if (strictly_above(t, ms.root[m])) cand.push_back(m);
    std::vector<Mask> reach(cand.size() + 1, 0);
    for (size_t i = cand.size(); i-- > 0;) reach[i] = reach[i + 1] | ms.revokes[cand[i]];
    std::vector<size_t> chosen;
    std::function<void(size_t, Mask)> go = [&](size_t i, Mask covered) {
      if (!subset(need, covered | reach[i])) return;
      if (i == cand.size()) {
        ms.make(t, chosen);
        return;
      }
      go(i + 1, covered);
      size_t c = cand[i];
      for (size_t x : chosen)
        if (ms.comparable(x, c)) return;
      chosen.push_back(c);
      go(i + 1, covered | ms.revokes[c]);
      chosen.pop_back();
    };
    go(0, 0);
  }
  ms.finalize();
  return ms;
}

Relation moment_steps(const MomentSet& ms) {
  const TypeSpace& sp = *ms.space;
  size_t n = ms.size();
  // g[a] = { b : a's tree maps into b's tree with roots paired }
  Relation g(n, Bits(n));
  for (size_t a = 0; a < n; ++a)
    for (size_t b = 0; b < n; ++b) {
      if (!is_sensible_pair(ms.root[a], ms.root[b], sp)) continue;
      bool ok = true;
      for (size_t c : ms.children[a])
        if (!g[c].intersects(ms.subs[b])) {
          ok = false;
          break;
        }
      if (ok) g[a].set(b);
    }
  return g;
}

bool moment_step(const MomentSet& ms, size_t w, size_t v) { return moment_steps(ms)[w].test(v); }

Quasimodel initial_structure(const MomentSet& ms, const std::vector<std::vector<size_t>>& succ) {
  Quasimodel q;
  q.space = ms.space;
  q.n = ms.size();
  q.up = ms.subs;
  q.label = ms.root;
  q.succ = succ;
  return q;
}

Quasimodel initial_structure(const MomentSet& ms) {
  Relation g = moment_steps(ms);
  std::vector<std::vector<size_t>> succ(ms.size());
  for (size_t a = 0; a < ms.size(); ++a) succ[a] = g[a].members();
  return initial_structure(ms, succ);
}

Quasimodel build_initial_structure(SpacePtr space, const MomentOptions& opt) {
  MomentSet ms = enumerate_moments(space, opt);
  Quasimodel q = initial_structure(ms);
  auto v = validate_quasimodel(q, {});
  if (!v.empty()) throw std::logic_error("initial structure failed validation:\n" + describe(v));
  return q;
}

// ---- lazy generation ----

namespace {

using Alt = std::vector<size_t>;

void dedupe(std::vector<Alt>& alts) {
  for (auto& a : alts) sort_unique(a);
  std::sort(alts.begin(), alts.end());
  alts.erase(std::unique(alts.begin(), alts.end()), alts.end());
}

class Generator {
 public:
  Generator(SpacePtr space, const GenerateOptions& opt)
      : sp_(*space), T_(opt.types), ms_(space, Reduction::Simulation, opt.max_moments),
        breadth_(opt.breadth) {
    size_t n = T_.size();
    for (size_t i = 0; i < n; ++i) index_[T_[i]] = i;
    sens_.resize(n);
    above_.resize(n);
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j) {
        if (is_sensible_pair(T_[i], T_[j], sp_)) sens_[i].push_back(j);
        if (strictly_above(T_[i], T_[j])) above_[i].push_back(j);
      }
    seeds_.resize(n);
    seeded_.assign(n, 0);
  }

  GeneratedStructure run(const std::vector<TwoSidedType>& seed_types) {
    std::vector<size_t> work;
    auto mark = [&](size_t m) {
      std::vector<size_t> st{m};
      while (!st.empty()) {
        size_t x = st.back();
        st.pop_back();
        if (relevant_.count(x)) continue;
        relevant_.insert(x);
        work.push_back(x);
        for (size_t c : ms_.children[x]) st.push_back(c);
      }
    };
    for (const auto& t : seed_types) {
      auto it = index_.find(t);
      if (it == index_.end()) continue;
      for (size_t s : seeds(it->second)) mark(s);
    }
    while (!work.empty()) {
      size_t m = work.back();
      work.pop_back();
      for (size_t j : sens_[tix(m)])
        for (size_t b : build(m, j)) mark(b);
    }
    close_witnesses();

    // Renumber the relevant moments; children always precede parents.
    MomentSet out(ms_.space, Reduction::None, ms_.size() + 1);
    std::vector<size_t> id(ms_.size(), SIZE_MAX);
    for (size_t m : relevant_) {
      std::vector<size_t> kids;
      for (size_t c : ms_.children[m]) kids.push_back(id[c]);
      id[m] = out.make(ms_.root[m], kids);
    }
    out.finalize();
    GeneratedStructure g{std::move(out), {}};
    g.succ.resize(g.moments.size());
    for (auto& [a, bs] : edges_) {
      if (!relevant_.count(a)) continue;
      for (size_t b : bs) g.succ[id[a]].push_back(id[b]);
      sort_unique(g.succ[id[a]]);
    }
    return g;
  }

 private:
  size_t tix(size_t m) const { return index_.at(ms_.root[m]); }

  // Seeds strictly above T[i] whose root revokes defect d, weakest only.
  const std::vector<size_t>& options(size_t i, size_t d) {
    uint64_t k = (uint64_t(i) << 8) | d;
    if (auto it = options_memo_.find(k); it != options_memo_.end()) return it->second;
    std::vector<size_t> out;
    for (size_t j : above_[i]) {
      const auto& u = T_[j];
      if (!has(u.pos, sp_.left(d)) || !has(u.neg, sp_.right(d))) continue;
      const auto& ss = seeds(j);
      out.insert(out.end(), ss.begin(), ss.end());
    }
    sort_unique(out);
    std::vector<size_t> keep;
    for (size_t x : out) {
      bool dominated = false;
      for (size_t y : out) {
        if (x == y || !ms_.simulates_into(y, x)) continue;
        if (!ms_.simulates_into(x, y) || y < x) {
          dominated = true;
          break;
        }
      }
      if (!dominated) keep.push_back(x);
    }
    if (breadth_ && keep.size() > breadth_) keep.resize(breadth_);
    return options_memo_[k] = std::move(keep);
  }

  // Child lists revoking the defects of T[i] not already in `covered`,
  // chosen one defect at a time.
  std::vector<Alt> witness_alts(size_t i, Mask covered) {
    Mask need = defects(T_[i], sp_) & ~covered;
    std::vector<Alt> acc{{}};
    for (size_t d = 0; d < sp_.size(); ++d) {
      if (!has(need, d)) continue;
      const auto& opts = options(i, d);
      std::vector<Alt> next;
      for (const auto& a : acc) {
        Mask cov = covered;
        for (size_t x : a) cov |= ms_.revokes[x];
        if (has(cov, d)) {
          next.push_back(a);
          continue;
        }
        for (size_t s : opts) {
          Alt x = a;
          x.push_back(s);
          next.push_back(std::move(x));
        }
      }
      minimize(next);
      acc = std::move(next);
      if (acc.empty()) break;
    }
    return acc;
  }

  // Keeps the maximal members of an alternative.
  void normalize(Alt& a) {
    sort_unique(a);
    if (a.size() < 2) return;
    Alt keep;
    for (size_t x : a) {
      bool dominated = false;
      for (size_t y : a) {
        if (x == y || !ms_.simulates_into(x, y)) continue;
        if (!ms_.simulates_into(y, x) || y < x) {
          dominated = true;
          break;
        }
      }
      if (!dominated) keep.push_back(x);
    }
    a = std::move(keep);
  }

  bool alt_leq(const Alt& a, const Alt& b) {
    for (size_t x : a) {
      bool found = false;
      for (size_t y : b)
        if (ms_.simulates_into(x, y)) {
          found = true;
          break;
        }
      if (!found) return false;
    }
    return true;
  }

  // Only the weakest alternatives matter: anything a stronger one embeds
  // into, a weaker one embeds into as well.
  void minimize(std::vector<Alt>& alts) {
    for (auto& a : alts) normalize(a);
    dedupe(alts);
    std::vector<Alt> keep;
    for (size_t i = 0; i < alts.size(); ++i) {
      bool dominated = false;
      for (size_t j = 0; j < alts.size() && !dominated; ++j) {
        if (i == j || !alt_leq(alts[j], alts[i])) continue;
        dominated = !alt_leq(alts[i], alts[j]) || j < i;
      }
      if (!dominated) keep.push_back(alts[i]);
    }
    alts = std::move(keep);
    if (breadth_ && alts.size() > breadth_) alts.resize(breadth_);
  }

  // Moments sharing a root: keep those that simulate into no other.
  void minimal_roots(std::vector<size_t>& ids) {
    sort_unique(ids);
    std::vector<size_t> keep;
    for (size_t x : ids) {
      bool dominated = false;
      for (size_t y : ids) {
        if (x == y || !ms_.simulates_at(y, x)) continue;
        if (!ms_.simulates_at(x, y) || y < x) {
          dominated = true;
          break;
        }
      }
      if (!dominated) keep.push_back(x);
    }
    ids = std::move(keep);
    if (breadth_ && ids.size() > breadth_) ids.resize(breadth_);
  }

  const std::vector<size_t>& seeds(size_t i) {
    if (seeded_[i]) return seeds_[i];
    std::vector<size_t> out;
    for (auto& alt : witness_alts(i, 0)) out.push_back(ms_.make(T_[i], alt));
    minimal_roots(out);
    seeded_[i] = 1;
    seeds_[i] = std::move(out);
    return seeds_[i];
  }

  static uint64_t key(size_t m, size_t j) { return (uint64_t(m) << 20) ^ j; }

  // c's subtree handled below a new node of type T[j]
  const std::vector<Alt>& handle(size_t c, size_t j) {
    uint64_t k = key(c, j);
    if (auto it = handle_memo_.find(k); it != handle_memo_.end()) return it->second;
    std::vector<Alt> out = merge(c, j);
    for (size_t j2 : sens_[tix(c)])
      if (strictly_above(T_[j], T_[j2]))
        for (size_t s : build(c, j2)) out.push_back({s});
    minimize(out);
    return handle_memo_[k] = std::move(out);
  }

  // c mapped onto the new node itself
  std::vector<Alt> merge(size_t c, size_t j) {
    if (!is_sensible_pair(ms_.root[c], T_[j], sp_)) return {};
    std::vector<Alt> acc{{}};
    for (size_t ch : ms_.children[c]) {
      const auto& hs = handle(ch, j);
      std::vector<Alt> next;
      for (const auto& a : acc)
        for (const auto& h : hs) {
          Alt x = a;
          x.insert(x.end(), h.begin(), h.end());
          next.push_back(std::move(x));
        }
      minimize(next);
      acc = std::move(next);
      if (acc.empty()) break;
    }
    return acc;
  }

  const std::vector<size_t>& build(size_t m, size_t j) {
    uint64_t k = key(m, j);
    if (auto it = build_memo_.find(k); it != build_memo_.end()) return it->second;
    std::vector<size_t> out;
    for (const auto& alt : merge(m, j)) {
      Mask cov = 0;
      for (size_t c : alt) cov |= ms_.revokes[c];
      for (const auto& w : witness_alts(j, cov | root_revokes(T_[j], sp_))) {
        Alt kids = alt;
        kids.insert(kids.end(), w.begin(), w.end());
        out.push_back(ms_.make(T_[j], kids));
      }
    }
    minimal_roots(out);
    for (size_t b : out) edges_[m].insert(b);
    return build_memo_[k] = std::move(out);
  }

  bool g(size_t a, size_t b) {
    uint64_t k = (uint64_t(a) << 32) | b;
    if (auto it = g_memo_.find(k); it != g_memo_.end()) return it->second;
    bool ok = is_sensible_pair(ms_.root[a], ms_.root[b], sp_);
    for (size_t c : ms_.children[a]) {
      if (!ok) break;
      bool found = false;
      for (size_t d : ms_.sublist[b])
        if (g(c, d)) {
          found = true;
          break;
        }
      ok = found;
    }
    return g_memo_[k] = ok;
  }

  // Adds successor edges so that every child of a stepping moment steps
  // into the target's tree.
  void close_witnesses() {
    std::deque<std::pair<size_t, size_t>> work;
    for (auto& [a, bs] : edges_)
      for (size_t b : bs) work.push_back({a, b});
    while (!work.empty()) {
      auto [a, b] = work.front();
      work.pop_front();
      for (size_t c : ms_.children[a])
        for (size_t d : ms_.sublist[b])
          if (g(c, d) && edges_[c].insert(d).second) work.push_back({c, d});
    }
  }

  const TypeSpace& sp_;
  std::vector<TwoSidedType> T_;
  MomentSet ms_;
  size_t breadth_;
  std::unordered_map<TwoSidedType, size_t, TypeHash> index_;
  std::vector<std::vector<size_t>> sens_, above_;
  std::vector<std::vector<size_t>> seeds_;
  std::vector<char> seeded_;
  std::unordered_map<uint64_t, std::vector<Alt>> handle_memo_;
  std::unordered_map<uint64_t, std::vector<size_t>> build_memo_;
  std::unordered_map<uint64_t, bool> g_memo_;
  std::unordered_map<uint64_t, std::vector<size_t>> options_memo_;
  std::map<size_t, std::set<size_t>> edges_;
  std::set<size_t> relevant_;
};

}  // namespace

GeneratedStructure generate_moments(SpacePtr space, const GenerateOptions& opt) {
  Generator gen(space, opt);
  return gen.run(opt.seed_types);
}

}  // namespace itlkit
