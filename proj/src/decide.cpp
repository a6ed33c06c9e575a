#include "itlkit/decide.hpp"

#include <deque>
#include <functional>
#include <future>
#include <map>
#include <set>
#include <stdexcept>

namespace itlkit {

std::string to_string(Status s) {
  switch (s) {
    case Status::Valid: return "VALID";
    case Status::NotValid: return "NOT VALID";
    case Status::Satisfiable: return "SATISFIABLE";
    case Status::Unsatisfiable: return "UNSATISFIABLE";
  }
  return "?";
}

namespace {

bool fits_profile(const TwoSidedType& t, const UniversalProfile& p, const TypeSpace& sp) {
  Mask u = sp.foralls();
  if ((t.pos & u) != p.pos || (t.neg & u) != p.neg) return false;
  for (size_t i = 0; i < sp.size(); ++i)
    if (has(p.pos, i) && !has(t.pos, sp.left(i))) return false;
  return true;
}

}  // namespace

std::vector<TwoSidedType> profile_types(const TypeSpace& sp, const UniversalProfile& p) {
  std::vector<TwoSidedType> ts;
  for (const auto& t : enumerate_saturated(sp))
    if (fits_profile(t, p, sp)) ts.push_back(t);
  for (bool changed = true; changed;) {
    changed = false;
    size_t n = ts.size();
    std::vector<std::vector<size_t>> succ(n);
    for (size_t a = 0; a < n; ++a)
      for (size_t b = 0; b < n; ++b)
        if (is_sensible_pair(ts[a], ts[b], sp)) succ[a].push_back(b);
    std::vector<char> keep(n, 1);
    for (size_t a = 0; a < n; ++a)
      if (succ[a].empty()) keep[a] = 0;
    for (size_t a = 0; a < n; ++a) {
      Mask d = defects(ts[a], sp);
      for (size_t i = 0; i < sp.size() && keep[a]; ++i) {
        if (!has(d, i)) continue;
        bool ok = false;
        for (size_t b = 0; b < n && !ok; ++b)
          ok = refines(ts[a], ts[b]) && has(ts[b].pos, sp.left(i)) && has(ts[b].neg, sp.right(i));
        if (!ok) keep[a] = 0;
      }
    }
    for (size_t i = 0; i < sp.size(); ++i) {
      if (sp.op(i) != Op::Ev) continue;
      size_t c = sp.left(i);
      // types from which a c-positive type is reachable
      std::vector<char> good(n, 0);
      for (size_t a = 0; a < n; ++a) good[a] = has(ts[a].pos, c);
      for (bool grow = true; grow;) {
        grow = false;
        for (size_t a = 0; a < n; ++a) {
          if (good[a]) continue;
          for (size_t b : succ[a])
            if (good[b]) {
              good[a] = 1;
              grow = true;
              break;
            }
        }
      }
      for (size_t a = 0; a < n; ++a)
        if (has(ts[a].pos, i) && !good[a]) keep[a] = 0;
    }
    std::vector<TwoSidedType> next;
    for (size_t a = 0; a < n; ++a)
      if (keep[a]) next.push_back(ts[a]);
    if (next.size() != n) {
      changed = true;
      ts = std::move(next);
    }
  }
  return ts;
}

Quasimodel eliminate(const Quasimodel& q, const UniversalProfile& p, std::vector<size_t>* rounds) {
  const TypeSpace& sp = *q.space;
  size_t n = q.n;
  Bits alive(n);
  {
    Bits fit(n);
    for (size_t w = 0; w < n; ++w)
      if (fits_profile(q.label[w], p, sp)) fit.set(w);
    for (size_t w = 0; w < n; ++w)
      if (q.up[w].subset_of(fit)) alive.set(w);
  }
  std::vector<std::vector<size_t>> pred(n);
  for (size_t w = 0; w < n; ++w)
    for (size_t v : q.succ[w]) pred[v].push_back(w);
  std::vector<size_t> evs;
  for (size_t i = 0; i < sp.size(); ++i)
    if (sp.op(i) == Op::Ev) evs.push_back(i);

  if (rounds) rounds->push_back(alive.count());
  for (;;) {
    Bits next = alive;
    for (size_t w = 0; w < n; ++w) {
      if (!next.test(w)) continue;
      bool serial = false;
      for (size_t v : q.succ[w])
        if (alive.test(v)) {
          serial = true;
          break;
        }
      if (!serial) next.set(w, false);
    }
    for (size_t e : evs) {
      size_t c = sp.left(e);
      Bits reach(n);
      std::vector<size_t> stack;
      for (size_t w = 0; w < n; ++w)
        if (alive.test(w) && has(q.label[w].pos, c)) {
          reach.set(w);
          stack.push_back(w);
        }
      while (!stack.empty()) {
        size_t v = stack.back();
        stack.pop_back();
        for (size_t u : pred[v])
          if (alive.test(u) && !reach.test(u)) {
            reach.set(u);
            stack.push_back(u);
          }
      }
      for (size_t w = 0; w < n; ++w)
        if (next.test(w) && has(q.label[w].pos, e) && !reach.test(w)) next.set(w, false);
    }
    for (size_t w = 0; w < n; ++w)
      if (next.test(w) && !q.up[w].subset_of(next)) next.set(w, false);
    // the up-closure pass can expose new leaks
    for (bool leak = true; leak;) {
      leak = false;
      for (size_t w = 0; w < n; ++w)
        if (next.test(w) && !q.up[w].subset_of(next)) {
          next.set(w, false);
          leak = true;
        }
    }
    if (rounds) rounds->push_back(next.count());
    if (next == alive) break;
    alive = std::move(next);
  }
  return restrict_worlds(q, alive);
}

Quasimodel trim_certificate(const Quasimodel& q) {
  if (!q.designated) throw std::invalid_argument("certificate has no designated world");
  const TypeSpace& sp = *q.space;
  Bits in(q.n);
  std::vector<std::set<size_t>> edges(q.n);
  std::deque<size_t> worlds;
  std::deque<std::pair<size_t, size_t>> pending;

  auto add_world = [&](size_t w) {
    for (size_t v : q.up[w].members())
      if (!in.test(v)) {
        in.set(v);
        worlds.push_back(v);
      }
  };
  auto add_edge = [&](size_t a, size_t b) {
    if (!edges[a].insert(b).second) return;
    add_world(b);
    pending.push_back({a, b});
  };
  // successor of w, preferring worlds already kept
  auto pick = [&](size_t w, const std::function<bool(size_t)>& ok) -> std::optional<size_t> {
    std::optional<size_t> best;
    for (size_t v : q.succ[w]) {
      if (!ok(v)) continue;
      if (!best || (in.test(v) && !in.test(*best)) || (in.test(v) == in.test(*best) && v < *best))
        best = v;
    }
    return best;
  };

  add_world(*q.designated);
  for (size_t i = 0; i < sp.size(); ++i) {
    if (sp.op(i) != Op::Forall) continue;
    for (size_t w = 0; w < q.n; ++w)
      if (has(q.label[w].neg, static_cast<size_t>(sp.left(i)))) {
        add_world(w);
        break;
      }
  }
  while (!worlds.empty() || !pending.empty()) {
    if (!pending.empty()) {
      auto [a, b] = pending.front();
      pending.pop_front();
      for (size_t c : q.up[a].members()) {
        if (c == a) continue;
        bool ok = false;
        for (size_t d : edges[c]) ok |= q.leq(b, d);
        if (ok) continue;
        auto d = pick(c, [&](size_t v) { return q.leq(b, v); });
        if (!d) throw std::logic_error("certificate lacks a confluence witness");
        add_edge(c, *d);
      }
      continue;
    }
    size_t w = worlds.front();
    worlds.pop_front();
    if (edges[w].empty()) {
      auto v = pick(w, [](size_t) { return true; });
      if (!v) throw std::logic_error("certificate world without successor");
      add_edge(w, *v);
    }
    for (size_t i = 0; i < sp.size(); ++i) {
      if (sp.op(i) != Op::Ev || !has(q.label[w].pos, i)) continue;
      size_t c = static_cast<size_t>(sp.left(i));
      if (has(q.label[w].pos, c)) continue;
      // already realized along kept edges?
      Bits seen(q.n);
      std::vector<size_t> stack{w};
      bool done = false;
      while (!stack.empty() && !done) {
        size_t u = stack.back();
        stack.pop_back();
        for (size_t v : edges[u]) {
          if (seen.test(v)) continue;
          seen.set(v);
          if (has(q.label[v].pos, c)) done = true;
          stack.push_back(v);
        }
      }
      if (done) continue;
      std::map<size_t, size_t> parent;
      std::deque<size_t> queue{w};
      std::optional<size_t> hit;
      while (!queue.empty() && !hit) {
        size_t u = queue.front();
        queue.pop_front();
        for (size_t v : q.succ[u]) {
          if (parent.count(v)) continue;
          parent[v] = u;
          if (has(q.label[v].pos, c)) {
            hit = v;
            break;
          }
          queue.push_back(v);
        }
      }
      if (!hit) throw std::logic_error("certificate leaves an eventuality unrealized");
      std::vector<std::pair<size_t, size_t>> route;
      for (size_t v = *hit;;) {
        size_t u = parent.at(v);
        route.push_back({u, v});
        if (u == w) break;
        v = u;
      }
      for (auto it = route.rbegin(); it != route.rend(); ++it) add_edge(it->first, it->second);
    }
  }
  Quasimodel out = restrict_worlds(q, in);
  std::vector<size_t> id(q.n, SIZE_MAX);
  for (size_t w = 0, k = 0; w < q.n; ++w)
    if (in.test(w)) id[w] = k++;
  for (size_t w = 0; w < q.n; ++w) {
    if (!in.test(w)) continue;
    auto& s = out.succ[id[w]];
    s.clear();
    for (size_t v : edges[w]) s.push_back(id[v]);
  }
  return out;
}

namespace {

struct ProfileResult {
  ProfileReport report;
  std::optional<Quasimodel> survivors;
};

ProfileResult run_profile(SpacePtr space, const UniversalProfile& p, const DecideOptions& opt,
                          size_t fi, Mode mode, size_t breadth) {
  const TypeSpace& sp = *space;
  ProfileResult r;
  r.report.profile = p;
  auto types = profile_types(sp, p);
  r.report.types = types.size();
  // a denied universal needs some type with its argument negative
  for (size_t i = 0; i < sp.size(); ++i) {
    if (!has(p.neg, i)) continue;
    bool ok = false;
    for (const auto& t : types) ok |= has(t.neg, sp.left(i));
    if (!ok) return r;
  }
  if (types.empty()) return r;
  GenerateOptions go;
  go.max_moments = opt.max_moments;
  go.breadth = breadth;
  for (const auto& t : types) {
    bool seed = mode == Mode::Validity ? has(t.neg, fi) : has(t.pos, fi);
    for (size_t i = 0; i < sp.size() && !seed; ++i)
      seed = has(p.neg, i) && has(t.neg, sp.left(i));
    if (seed) go.seed_types.push_back(t);
  }
  if (go.seed_types.empty()) return r;
  go.types = std::move(types);
  GeneratedStructure gs = generate_moments(space, go);
  r.report.moments = gs.moments.size();
  Quasimodel I = initial_structure(gs.moments, gs.succ);
  Quasimodel q = eliminate(I, p, &r.report.rounds);
  r.report.survivors = q.n;
  r.report.honest = honesty_violations(q).empty();
  if (r.report.honest && q.n > 0) r.survivors = std::move(q);
  return r;
}

}  // namespace

Verdict decide(Formula f, Mode mode, const DecideOptions& opt) {
  Verdict v;
  v.formula = f;
  v.mode = mode;
  SpacePtr space = TypeSpace::of(f);
  const TypeSpace& sp = *space;
  if (sp.size() > max_signature())
    throw CapacityError("signature size " + std::to_string(sp.size()) + " exceeds cap " +
                        std::to_string(max_signature()));
  size_t fi = static_cast<size_t>(sp.index(f));
  auto profiles = enumerate_profiles(sp);

  auto target = [&](const Quasimodel& q) -> std::optional<size_t> {
    for (size_t w = 0; w < q.n; ++w) {
      const auto& t = q.label[w];
      if (mode == Mode::Validity ? has(t.neg, fi) : has(t.pos, fi)) return w;
    }
    return std::nullopt;
  };

  std::vector<size_t> stages = opt.quick_breadths;
  stages.push_back(0);
  unsigned threads = std::max(1u, opt.threads);
  for (size_t breadth : stages) {
    v.reports.clear();
    for (size_t start = 0; start < profiles.size(); start += threads) {
      size_t end = std::min(profiles.size(), start + threads);
      std::vector<ProfileResult> batch(end - start);
      if (threads == 1) {
        batch[0] = run_profile(space, profiles[start], opt, fi, mode, breadth);
      } else {
        std::vector<std::future<ProfileResult>> futs;
        for (size_t k = start; k < end; ++k)
          futs.push_back(std::async(std::launch::async, run_profile, space, profiles[k], opt, fi,
                                    mode, breadth));
        for (size_t k = 0; k < futs.size(); ++k) batch[k] = futs[k].get();
      }
      for (auto& r : batch) {
        v.reports.push_back(r.report);
        if (!r.survivors) continue;
        auto w = target(*r.survivors);
        if (!w) continue;
        Quasimodel q = std::move(*r.survivors);
        q.designated = *w;
        q = trim_certificate(q);
        q.flags = {true, true, false};
        auto bad = validate_quasimodel(q, q.flags);
        if (!bad.empty()) throw std::logic_error("certificate failed validation:\n" + describe(bad));
        v.certificate = std::move(q);
        v.profile = r.report.profile;
        v.status = mode == Mode::Validity ? Status::NotValid : Status::Satisfiable;
        return v;
      }
    }
  }
  v.status = mode == Mode::Validity ? Status::Valid : Status::Unsatisfiable;
  return v;
}

}  // namespace itlkit
