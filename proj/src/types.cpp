#include "itlkit/types.hpp"

#include <functional>

namespace itlkit {

TypeSpace::TypeSpace(Signature sig) : sig_(std::move(sig)) {
  size_t n = sig_.size();
  if (n > 64) throw CapacityError("signature has more than 64 formulas");
  full_ = n == 64 ? ~Mask(0) : (bit(n) - 1);
  down_.assign(n, 0);
  sup_.assign(n, 0);
  for (size_t i = 0; i < n; ++i) {
    // children precede parents in canonical order
    Mask d = bit(i);
    if (left(i) >= 0) d |= down_[left(i)];
    if (right(i) >= 0) d |= down_[right(i)];
    down_[i] = d;
    Op o = op(i);
    if (o == Op::Next || o == Op::Ev) temporal_ |= bit(i);
    if (o == Op::Forall) forall_ |= bit(i);
    if (o == Op::Imp) imp_ |= bit(i);
  }
  for (size_t j = 0; j < n; ++j)
    for (size_t i = 0; i < n; ++i)
      if (has(down_[j], i)) sup_[i] |= bit(j);
}

Mask TypeSpace::down_closure(Mask m) const {
  Mask r = 0;
  for (size_t i = 0; i < size(); ++i)
    if (has(m, i)) r |= down_[i];
  return r;
}

std::vector<std::string> TypeSpace::names(Mask m) const {
  std::vector<std::string> r;
  for (size_t i = 0; i < size(); ++i)
    if (has(m, i)) r.push_back(render(at(i)));
  return r;
}

Mask TypeSpace::mask_of(const std::vector<std::string>& formulas) const {
  Mask m = 0;
  for (const auto& s : formulas) {
    int i = index(parse(s));
    if (i < 0) throw std::invalid_argument("formula not in signature: " + s);
    m |= bit(static_cast<size_t>(i));
  }
  return m;
}

std::vector<int> check_type_conditions(Mask pos, Mask neg, const TypeSpace& sp) {
  if (!subset(pos | neg, sp.full())) throw std::out_of_range("index outside signature");
  bool v[10] = {};
  if (pos & neg) v[1] = true;
  for (size_t i = 0; i < sp.size(); ++i) {
    bool p = has(pos, i), n = has(neg, i);
    if (!p && !n) continue;
    int l = sp.left(i), r = sp.right(i);
    switch (sp.op(i)) {
      case Op::Bot:
        if (p) v[2] = true;
        break;
      case Op::And:
        if (p && !(has(pos, l) && has(pos, r))) v[3] = true;
        if (n && !(has(neg, l) || has(neg, r))) v[4] = true;
        break;
      case Op::Or:
        if (p && !(has(pos, l) || has(pos, r))) v[5] = true;
        if (n && !(has(neg, l) && has(neg, r))) v[6] = true;
        break;
      case Op::Imp:
        if (p && !(has(neg, l) || has(pos, r))) v[7] = true;
        if (n && !has(neg, r)) v[8] = true;
        break;
      case Op::Ev:
        if (n && !has(neg, l)) v[9] = true;
        break;
      default:
        break;
    }
  }
  std::vector<int> out;
  for (int k = 1; k <= 9; ++k)
    if (v[k]) out.push_back(k);
  return out;
}

std::vector<TwoSidedType> enumerate_saturated(const TypeSpace& sp) {
  if (sp.size() > max_signature())
    throw CapacityError("signature size " + std::to_string(sp.size()) + " exceeds cap " +
                        std::to_string(max_signature()));
  std::vector<TwoSidedType> out;
  size_t n = sp.size();
  std::function<void(size_t, Mask)> go = [&](size_t i, Mask pos) {
    if (i == n) {
      out.push_back({pos, sp.full() & ~pos});
      return;
    }
    int l = sp.left(i), r = sp.right(i);
    bool can_pos = true, can_neg = true;
    switch (sp.op(i)) {
      case Op::Bot: can_pos = false; break;
      case Op::And:
        can_pos = has(pos, l) && has(pos, r);
        can_neg = !can_pos;
        break;
      case Op::Or:
        can_pos = has(pos, l) || has(pos, r);
        can_neg = !can_pos;
        break;
      case Op::Imp:
        can_pos = !has(pos, l) || has(pos, r);
        can_neg = !has(pos, r);
        break;
      case Op::Ev: can_neg = !has(pos, l); break;
      default: break;
    }
    if (can_pos) go(i + 1, pos | bit(i));
    if (can_neg) go(i + 1, pos);
  };
  go(0, 0);
  return out;
}

bool compare(Order o, const TwoSidedType& a, const TwoSidedType& b) {
  switch (o) {
    case Order::Refine: return subset(b.neg, a.neg) && subset(a.pos, b.pos);
    case Order::Include: return subset(a.neg, b.neg) && subset(a.pos, b.pos);
    case Order::PosExt: return a.neg == b.neg && subset(a.pos, b.pos);
  }
  return false;
}

Mask defects(const TwoSidedType& t, const TypeSpace& sp) {
  Mask d = 0;
  Mask cand = t.neg & sp.implications();
  for (size_t i = 0; i < sp.size(); ++i)
    if (has(cand, i) && !has(t.pos, sp.left(i))) d |= bit(i);
  return d;
}

bool is_sensible_pair(const TwoSidedType& a, const TwoSidedType& b, const TypeSpace& sp) {
  for (size_t i = 0; i < sp.size(); ++i) {
    int c = sp.left(i);
    switch (sp.op(i)) {
      case Op::Next:
        if (has(a.pos, i) && !has(b.pos, c)) return false;
        if (has(a.neg, i) && !has(b.neg, c)) return false;
        break;
      case Op::Ev:
        if (has(a.pos, i) && !has(a.pos, c) && !has(b.pos, i)) return false;
        if (has(a.neg, i) && !has(b.neg, i)) return false;
        break;
      case Op::Forall:
        if (has(a.pos, i) != has(b.pos, i)) return false;
        if (has(a.neg, i) != has(b.neg, i)) return false;
        break;
      default:
        break;
    }
  }
  return true;
}

TwoSidedType restrict_pos(const TwoSidedType& t, Mask subsig, const TypeSpace& sp) {
  if (!subset(subsig, sp.full()) || !sp.closed(subsig))
    throw std::invalid_argument("restriction set is not subformula-closed");
  return {t.pos & subsig, t.neg};
}

TwoSidedType remove_realized(const TwoSidedType& t, size_t phi, const TypeSpace& sp) {
  if (phi >= sp.size() || !has(sp.temporal(), phi))
    throw std::invalid_argument("remove_realized needs a temporal formula");
  return {t.pos & ~sp.sup(phi), t.neg};
}

Mask maximal_temporal(const TwoSidedType& t, const TypeSpace& sp) {
  Mask cand = t.pos & sp.temporal();
  Mask out = 0;
  for (size_t i = 0; i < sp.size(); ++i)
    if (has(cand, i) && (sp.sup(i) & ~bit(i) & cand) == 0) out |= bit(i);
  return out;
}

UniversalProfile profile_of(const TwoSidedType& t, const TypeSpace& sp) {
  Mask u = sp.foralls();
  if (!subset(u, t.pos | t.neg))
    throw std::invalid_argument("type does not decide every universal formula");
  return {t.pos & u, t.neg & u};
}

std::vector<UniversalProfile> enumerate_profiles(const TypeSpace& sp) {
  std::vector<size_t> idx;
  for (size_t i = 0; i < sp.size(); ++i)
    if (has(sp.foralls(), i)) idx.push_back(i);
  std::vector<UniversalProfile> out;
  for (uint64_t k = 0; k < (uint64_t(1) << idx.size()); ++k) {
    UniversalProfile p;
    for (size_t j = 0; j < idx.size(); ++j) {
      if ((k >> j) & 1u)
        p.pos |= bit(idx[j]);
      else
        p.neg |= bit(idx[j]);
    }
    out.push_back(p);
  }
  return out;
}

std::string to_string(const TwoSidedType& t, const TypeSpace& sp) {
  auto join = [&](Mask m) {
    std::string s;
    for (const auto& x : sp.names(m)) {
      if (!s.empty()) s += ", ";
      s += x;
    }
    return s;
  };
  return "(" + join(t.pos) + "; " + join(t.neg) + ")";
}

}  // namespace itlkit
