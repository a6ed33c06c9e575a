#include "itlkit/models.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace itlkit {

PosetModel PosetModel::from_pairs(size_t n, const std::vector<std::pair<size_t, size_t>>& leq,
                                  std::vector<size_t> step) {
  PosetModel m;
  m.n = n;
  m.up.assign(n, Bits(n));
  for (size_t w = 0; w < n; ++w) m.up[w].set(w);
  for (auto [a, b] : leq) {
    if (a >= n || b >= n) throw std::out_of_range("world out of range");
    m.up[a].set(b);
  }
  // Warshall
  for (size_t k = 0; k < n; ++k)
    for (size_t i = 0; i < n; ++i)
      if (m.up[i].test(k)) m.up[i] |= m.up[k];
  m.step = std::move(step);
  return m;
}

Bits PosetModel::set_of(std::initializer_list<size_t> ws) const {
  Bits b(n);
  for (size_t w : ws) b.set(w);
  return b;
}

std::vector<std::string> validate_frame(size_t n, const std::vector<Bits>& up,
                                        const std::vector<size_t>& step) {
  std::vector<std::string> out;
  if (up.size() != n || step.size() != n) {
    out.push_back("relation sizes do not match world count");
    return out;
  }
  for (size_t w = 0; w < n; ++w)
    if (step[w] >= n) out.push_back("step(" + std::to_string(w) + ") out of range");
  if (!out.empty()) return out;
  for (size_t a = 0; a < n; ++a) {
    if (!up[a].test(a)) out.push_back("not reflexive at " + std::to_string(a));
    for (size_t b = 0; b < n; ++b) {
      if (!up[a].test(b)) continue;
      if (a != b && up[b].test(a))
        out.push_back("not antisymmetric: " + std::to_string(a) + " " + std::to_string(b));
      if (!up[b].subset_of(up[a]))
        out.push_back("not transitive through " + std::to_string(a) + " <= " + std::to_string(b));
      if (!up[step[a]].test(step[b]))
        out.push_back("step not monotone: " + std::to_string(a) + " <= " + std::to_string(b) +
                      " but step " + std::to_string(step[a]) + " not <= " +
                      std::to_string(step[b]));
    }
  }
  return out;
}

bool up_closed(const std::vector<Bits>& up, const Bits& a) {
  for (size_t w = 0; w < a.size(); ++w)
    if (a.test(w) && !up[w].subset_of(a)) return false;
  return true;
}

std::vector<std::string> validate_model(const PosetModel& m) {
  auto out = validate_frame(m.n, m.up, m.step);
  if (!out.empty()) return out;
  for (const auto& [p, s] : m.val) {
    if (s.size() != m.n)
      out.push_back("valuation of " + p + " has wrong size");
    else if (!up_closed(m.up, s))
      out.push_back("valuation not up-closed: " + p);
  }
  return out;
}

Bits interior(const std::vector<Bits>& up, const Bits& a) {
  Bits r(a.size());
  for (size_t w = 0; w < a.size(); ++w)
    if (up[w].subset_of(a)) r.set(w);
  return r;
}

Bits preimage(const std::vector<size_t>& step, const Bits& a) {
  Bits r(step.size());
  for (size_t w = 0; w < step.size(); ++w)
    if (a.test(step[w])) r.set(w);
  return r;
}

const Bits& Evaluator::eval(Formula f) {
  auto it = cache_.find(f.node());
  if (it != cache_.end()) return it->second;
  size_t n = m_.n;
  Bits r(n);
  switch (f.op()) {
    case Op::Bot: break;
    case Op::Var: {
      auto v = m_.val.find(f.name());
      if (v != m_.val.end()) r = v->second;
      break;
    }
    case Op::And: r = eval(f.lhs()) & eval(f.rhs()); break;
    case Op::Or: r = eval(f.lhs()) | eval(f.rhs()); break;
    case Op::Imp: r = interior(m_.up, ~eval(f.lhs()) | eval(f.rhs())); break;
    case Op::Next: r = preimage(m_.step, eval(f.child())); break;
    case Op::Ev: {
      const Bits a = eval(f.child());
      r = a;
      for (;;) {
        Bits nx = a | preimage(m_.step, r);
        if (nx == r) break;
        r = std::move(nx);
      }
      break;
    }
    case Op::Forall:
      r = Bits(n, eval(f.child()).all());
      break;
  }
  return cache_.emplace(f.node(), std::move(r)).first->second;
}

FormulaBatch::FormulaBatch(const std::vector<Formula>& roots) {
  std::unordered_map<const Node*, size_t> id;
  std::function<size_t(Formula)> visit = [&](Formula f) -> size_t {
    auto it = id.find(f.node());
    if (it != id.end()) return it->second;
    int a = f.arity() > 0 ? int(visit(f.lhs())) : -1;
    int b = f.arity() > 1 ? int(visit(f.rhs())) : -1;
    nodes_.push_back(f);
    a_.push_back(a);
    b_.push_back(b);
    return id[f.node()] = nodes_.size() - 1;
  };
  for (Formula f : roots) roots_.push_back(visit(f));
}

void FormulaBatch::fill(const PosetModel& m, std::vector<Bits>& v) const {
  size_t n = m.n;
  v.assign(nodes_.size(), Bits(n));
  for (size_t i = 0; i < nodes_.size(); ++i) {
    Formula f = nodes_[i];
    Bits& r = v[i];
    switch (f.op()) {
      case Op::Bot: break;
      case Op::Var: {
        auto it = m.val.find(f.name());
        if (it != m.val.end()) r = it->second;
        break;
      }
      case Op::And: r = v[a_[i]] & v[b_[i]]; break;
      case Op::Or: r = v[a_[i]] | v[b_[i]]; break;
      case Op::Imp: r = interior(m.up, ~v[a_[i]] | v[b_[i]]); break;
      case Op::Next: r = preimage(m.step, v[a_[i]]); break;
      case Op::Ev: {
        const Bits& a = v[a_[i]];
        r = a;
        for (;;) {
          Bits nx = a | preimage(m.step, r);
          if (nx == r) break;
          r = std::move(nx);
        }
        break;
      }
      case Op::Forall: r = Bits(n, v[a_[i]].all()); break;
    }
  }
}

size_t FormulaBatch::first_failure(const PosetModel& m) const {
  std::vector<Bits> v;
  fill(m, v);
  for (size_t k = 0; k < roots_.size(); ++k)
    if (!v[roots_[k]].all()) return k;
  return roots_.size();
}

std::vector<Bits> FormulaBatch::eval(const PosetModel& m) const {
  std::vector<Bits> v;
  fill(m, v);
  std::vector<Bits> out;
  for (size_t k : roots_) out.push_back(v[k]);
  return out;
}

Bits evaluate(const PosetModel& m, Formula f) {
  Evaluator ev(m);
  return ev.eval(f);
}

bool holds_everywhere(const PosetModel& m, Formula f) { return evaluate(m, f).all(); }

Bits classical_evaluate(const ClassicalModel& m, ClassicalFormula f) {
  size_t n = m.n;
  switch (f.op()) {
    case COp::Bot: return Bits(n);
    case COp::Var: {
      auto v = m.cval.find(f.name());
      return v == m.cval.end() ? Bits(n) : v->second;
    }
    case COp::Imp: return ~classical_evaluate(m, f.lhs()) | classical_evaluate(m, f.rhs());
    case COp::IntBox: return interior(m.up, classical_evaluate(m, f.child()));
    case COp::Next: return preimage(m.step, classical_evaluate(m, f.child()));
    case COp::Hence: {
      Bits a = classical_evaluate(m, f.child());
      Bits r = a;
      for (;;) {
        Bits nx = a & preimage(m.step, r);
        if (nx == r) return r;
        r = std::move(nx);
      }
    }
    case COp::Forall: return Bits(n, classical_evaluate(m, f.child()).all());
  }
  return Bits(n);
}

bool is_persistent(const PosetModel& m) {
  for (size_t w = 0; w < m.n; ++w) {
    Bits img(m.n);
    for (size_t x = 0; x < m.n; ++x)
      if (m.up[w].test(x)) img.set(m.step[x]);
    if (!m.up[m.step[w]].subset_of(img)) return false;
  }
  return true;
}

// ---- oracle enumeration ----

namespace {

struct SmallPoset {
  size_t n;
  std::vector<uint32_t> up;  // bitmask rows
  std::vector<std::vector<size_t>> autos;
  std::vector<uint32_t> upsets;
};

uint64_t poset_code(const std::vector<uint32_t>& up, const std::vector<size_t>& perm) {
  size_t n = up.size();
  // relabelled relation R'(perm[i], perm[j]) = R(i, j)
  std::vector<uint32_t> r(n, 0);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      if ((up[i] >> j) & 1u) r[perm[i]] |= 1u << perm[j];
  uint64_t code = 0;
  for (size_t i = 0; i < n; ++i) code = (code << n) | r[i];
  return code;
}

const std::vector<SmallPoset>& posets_of_size(size_t n) {
  static std::vector<std::vector<SmallPoset>> cache(kMaxOracleWorlds + 1);
  static std::once_flag flags[kMaxOracleWorlds + 1];
  std::call_once(flags[n], [n] {
    std::vector<std::pair<size_t, size_t>> pairs;
    for (size_t i = 0; i < n; ++i)
      for (size_t j = i + 1; j < n; ++j) pairs.push_back({i, j});
    std::vector<size_t> ident(n);
    std::iota(ident.begin(), ident.end(), 0);
    std::vector<std::vector<size_t>> perms;
    {
      auto p = ident;
      do perms.push_back(p);
      while (std::next_permutation(p.begin(), p.end()));
    }
    std::set<uint64_t> seen;
    std::vector<SmallPoset> out;
    for (uint64_t k = 0; k < (uint64_t(1) << pairs.size()); ++k) {
      std::vector<uint32_t> up(n);
      for (size_t i = 0; i < n; ++i) up[i] = 1u << i;
      for (size_t e = 0; e < pairs.size(); ++e)
        if ((k >> e) & 1u) up[pairs[e].first] |= 1u << pairs[e].second;
      bool trans = true;
      for (size_t i = 0; i < n && trans; ++i)
        for (size_t j = 0; j < n; ++j)
          if (((up[i] >> j) & 1u) && (up[j] & ~up[i])) {
            trans = false;
            break;
          }
      if (!trans) continue;
      uint64_t best = ~uint64_t(0);
      for (const auto& p : perms) best = std::min(best, poset_code(up, p));
      if (!seen.insert(best).second) continue;
      SmallPoset sp{n, up, {}, {}};
      uint64_t own = poset_code(up, ident);
      for (const auto& p : perms)
        if (poset_code(up, p) == own) sp.autos.push_back(p);
      for (uint32_t s = 0; s < (1u << n); ++s) {
        bool closed = true;
        for (size_t i = 0; i < n; ++i)
          if (((s >> i) & 1u) && (up[i] & ~s)) closed = false;
        if (closed) sp.upsets.push_back(s);
      }
      out.push_back(std::move(sp));
    }
    cache[n] = std::move(out);
  });
  return cache[n];
}

}  // namespace

void for_each_model(size_t max_worlds, const std::vector<std::string>& vars, bool persistent_only,
                    const std::function<bool(const PosetModel&)>& fn) {
  if (max_worlds > kMaxOracleWorlds)
    throw std::invalid_argument("oracle world cap is " + std::to_string(kMaxOracleWorlds));
  size_t k = vars.size();
  for (size_t n = 1; n <= max_worlds; ++n) {
    for (const SmallPoset& P : posets_of_size(n)) {
      // monotone steps
      std::vector<size_t> step(n, 0);
      std::vector<std::vector<size_t>> steps;
      for (;;) {
        bool mono = true;
        for (size_t a = 0; a < n && mono; ++a)
          for (size_t b = 0; b < n; ++b)
            if (((P.up[a] >> b) & 1u) && !((P.up[step[a]] >> step[b]) & 1u)) {
              mono = false;
              break;
            }
        if (mono) steps.push_back(step);
        size_t i = 0;
        while (i < n && ++step[i] == n) step[i++] = 0;
        if (i == n) break;
      }
      size_t nu = P.upsets.size();
      std::vector<size_t> vi(k, 0);
      for (const auto& st : steps) {
        if (persistent_only) {
          bool open = true;
          for (size_t w = 0; w < n && open; ++w) {
            uint32_t img = 0;
            for (size_t x = 0; x < n; ++x)
              if ((P.up[w] >> x) & 1u) img |= 1u << st[x];
            if (P.up[st[w]] & ~img) open = false;
          }
          if (!open) continue;
        }
        std::fill(vi.begin(), vi.end(), 0);
        for (;;) {
          // orbit-minimality under automorphisms
          bool minimal = true;
          for (const auto& s : P.autos) {
            int cmp = 0;
            std::vector<size_t> st2(n);
            for (size_t i = 0; i < n; ++i) st2[s[i]] = s[st[i]];
            for (size_t i = 0; i < n && cmp == 0; ++i)
              if (st2[i] != st[i]) cmp = st2[i] < st[i] ? -1 : 1;
            for (size_t v = 0; v < k && cmp == 0; ++v) {
              uint32_t a = P.upsets[vi[v]], b = 0;
              for (size_t i = 0; i < n; ++i)
                if ((a >> i) & 1u) b |= 1u << s[i];
              if (b != a) cmp = b < a ? -1 : 1;
            }
            if (cmp < 0) {
              minimal = false;
              break;
            }
          }
          if (minimal) {
            PosetModel m;
            m.n = n;
            m.up.assign(n, Bits(n));
            for (size_t i = 0; i < n; ++i)
              for (size_t j = 0; j < n; ++j)
                if ((P.up[i] >> j) & 1u) m.up[i].set(j);
            m.step = st;
            for (size_t v = 0; v < k; ++v) {
              Bits b(n);
              for (size_t i = 0; i < n; ++i)
                if ((P.upsets[vi[v]] >> i) & 1u) b.set(i);
              m.val[vars[v]] = b;
            }
            if (!fn(m)) return;
          }
          size_t v = 0;
          while (v < k && ++vi[v] == nu) vi[v++] = 0;
          if (v == k) break;
        }
      }
    }
  }
}

std::vector<PosetModel> enumerate_models(size_t max_worlds, const std::vector<std::string>& vars,
                                         bool persistent_only) {
  std::vector<PosetModel> out;
  for_each_model(max_worlds, vars, persistent_only, [&](const PosetModel& m) {
    out.push_back(m);
    return true;
  });
  return out;
}

std::vector<std::string> variables(Formula f) {
  std::set<std::string> s;
  Signature sig = closure(f);
  for (Formula g : sig.formulas())
    if (g.op() == Op::Var) s.insert(g.name());
  return {s.begin(), s.end()};
}

std::optional<PosetModel> find_countermodel(Formula f, size_t max_worlds, bool persistent_only) {
  std::optional<PosetModel> found;
  for_each_model(max_worlds, variables(f), persistent_only, [&](const PosetModel& m) {
    if (!holds_everywhere(m, f)) {
      found = m;
      return false;
    }
    return true;
  });
  return found;
}

std::string to_dot(const PosetModel& m) {
  std::ostringstream os;
  os << "digraph model {\n";
  for (size_t w = 0; w < m.n; ++w) {
    os << "  w" << w << " [label=\"" << w;
    for (const auto& [p, s] : m.val)
      if (s.test(w)) os << " " << p;
    os << "\"];\n";
  }
  // Hasse edges: a < b with nothing strictly between
  for (size_t a = 0; a < m.n; ++a)
    for (size_t b = 0; b < m.n; ++b) {
      if (a == b || !m.leq(a, b)) continue;
      bool cover = true;
      for (size_t c = 0; c < m.n && cover; ++c)
        if (c != a && c != b && m.leq(a, c) && m.leq(c, b)) cover = false;
      if (cover) os << "  w" << a << " -> w" << b << ";\n";
    }
  for (size_t w = 0; w < m.n; ++w)
    os << "  w" << w << " -> w" << m.step[w] << " [style=dashed];\n";
  os << "}\n";
  return os.str();
}

}  // namespace itlkit
