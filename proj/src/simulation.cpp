#include "itlkit/simulation.hpp"

#include <functional>
#include <stdexcept>

namespace itlkit {

SigEmbedding::SigEmbedding(const TypeSpace& from, const TypeSpace& to) : map(from.size(), -1) {
  for (size_t i = 0; i < from.size(); ++i) {
    map[i] = to.index(from.at(i));
    if (map[i] < 0)
      throw std::invalid_argument("signature not contained: missing " + render(from.at(i)));
  }
}

Mask SigEmbedding::apply(Mask m) const {
  Mask r = 0;
  for (size_t i = 0; i < map.size(); ++i)
    if (has(m, i)) r |= bit(static_cast<size_t>(map[i]));
  return r;
}

namespace {

Relation initial(const LabelledFrame& x, const LabelledFrame& y) {
  SigEmbedding emb(*x.space, *y.space);
  Relation e(x.n, Bits(y.n));
  for (size_t a = 0; a < x.n; ++a) {
    TwoSidedType t{emb.apply(x.label[a].pos), emb.apply(x.label[a].neg)};
    for (size_t b = 0; b < y.n; ++b)
      if (included(t, y.label[b])) e[a].set(b);
  }
  return e;
}

// x' >= x E y  =>  some y' >= y with x' E y'
bool confluent_ok(const LabelledFrame& x, const LabelledFrame& y, const Relation& e, size_t a,
                  size_t b) {
  for (size_t a2 = 0; a2 < x.n; ++a2)
    if (a2 != a && x.leq(a, a2) && !e[a2].intersects(y.up[b])) return false;
  return true;
}

}  // namespace

Relation max_simulation(const LabelledFrame& x, const LabelledFrame& y) {
  Relation e = initial(x, y);
  for (bool changed = true; changed;) {
    changed = false;
    for (size_t a = 0; a < x.n; ++a)
      for (size_t b = 0; b < y.n; ++b)
        if (e[a].test(b) && !confluent_ok(x, y, e, a, b)) {
          e[a].set(b, false);
          changed = true;
        }
  }
  return e;
}

Relation max_dynamic_simulation(const Quasimodel& x, const Quasimodel& y) {
  Relation e = initial(x, y);
  for (bool changed = true; changed;) {
    changed = false;
    for (size_t a = 0; a < x.n; ++a)
      for (size_t b = 0; b < y.n; ++b) {
        if (!e[a].test(b)) continue;
        bool ok = confluent_ok(x, y, e, a, b);
        // y S y'  =>  some x' with x S x' and x' E y'
        for (size_t b2 : y.succ[b]) {
          if (!ok) break;
          bool found = false;
          for (size_t a2 : x.succ[a])
            if (e[a2].test(b2)) {
              found = true;
              break;
            }
          ok = found;
        }
        if (!ok) {
          e[a].set(b, false);
          changed = true;
        }
      }
  }
  return e;
}

namespace {

Formula big_and(const std::vector<Formula>& fs) {
  if (fs.empty()) return Formula::top();
  Formula r = fs[0];
  for (size_t i = 1; i < fs.size(); ++i) r = Formula::conj(r, fs[i]);
  return r;
}

std::optional<Formula> big_or(const std::vector<Formula>& fs) {
  if (fs.empty()) return std::nullopt;
  Formula r = fs[0];
  for (size_t i = 1; i < fs.size(); ++i) r = Formula::disj(r, fs[i]);
  return r;
}

}  // namespace

std::vector<Formula> sim_formulas(const LabelledFrame& w) {
  const TypeSpace& sp = *w.space;
  std::vector<Formula> memo(w.n);
  std::vector<char> done(w.n, 0);
  std::function<Formula(size_t)> go = [&](size_t a) -> Formula {
    if (done[a]) return memo[a];
    std::vector<Formula> pos, neg, above;
    for (size_t i = 0; i < sp.size(); ++i) {
      if (has(w.label[a].pos, i)) pos.push_back(sp.at(i));
      if (has(w.label[a].neg, i)) neg.push_back(sp.at(i));
    }
    for (size_t b = 0; b < w.n; ++b)
      if (b != a && w.leq(a, b)) above.push_back(go(b));
    auto l = big_or(neg), r = big_or(above);
    Formula rhs = l && r ? Formula::disj(*l, *r) : l ? Formula::disj(*l, Formula::bot())
                                              : r ? Formula::disj(Formula::bot(), *r)
                                                  : Formula::bot();
    memo[a] = Formula::imp(big_and(pos), rhs);
    done[a] = 1;
    return memo[a];
  };
  for (size_t a = 0; a < w.n; ++a) go(a);
  return memo;
}

Formula sim_formula(const LabelledFrame& w, size_t world) {
  if (world >= w.n) throw std::out_of_range("world out of range");
  return sim_formulas(w)[world];
}

}  // namespace itlkit
