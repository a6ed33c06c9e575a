#pragma once

#include <bit>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "itlkit/formula.hpp"

namespace itlkit {

using Mask = uint64_t;

inline bool has(Mask m, size_t i) { return (m >> i) & 1u; }
inline Mask bit(size_t i) { return Mask(1) << i; }
inline bool subset(Mask a, Mask b) { return (a & ~b) == 0; }
inline int popcount(Mask m) { return std::popcount(m); }

struct CapacityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Signature plus per-index masks used by the clause checks.
class TypeSpace {
 public:
  explicit TypeSpace(Signature sig);
  static std::shared_ptr<const TypeSpace> make(Signature sig) {
    return std::make_shared<const TypeSpace>(std::move(sig));
  }
  static std::shared_ptr<const TypeSpace> of(Formula f) { return make(closure(f)); }

  const Signature& sig() const { return sig_; }
  size_t size() const { return sig_.size(); }
  Formula at(size_t i) const { return sig_[i]; }
  Op op(size_t i) const { return sig_[i].op(); }
  int left(size_t i) const { return sig_.left(i); }
  int right(size_t i) const { return sig_.right(i); }
  int index(Formula f) const { return sig_.index(f); }
  Mask full() const { return full_; }
  Mask temporal() const { return temporal_; }
  Mask foralls() const { return forall_; }
  Mask implications() const { return imp_; }
  // i together with every member of the signature having i as a subformula
  Mask sup(size_t i) const { return sup_[i]; }
  // i together with all its subformulas
  Mask down(size_t i) const { return down_[i]; }
  Mask down_closure(Mask m) const;
  bool closed(Mask m) const { return down_closure(m) == m; }

  std::vector<std::string> names(Mask m) const;
  Mask mask_of(const std::vector<std::string>& formulas) const;

 private:
  Signature sig_;
  Mask full_ = 0, temporal_ = 0, forall_ = 0, imp_ = 0;
  std::vector<Mask> sup_, down_;
};

using SpacePtr = std::shared_ptr<const TypeSpace>;

struct TwoSidedType {
  Mask pos = 0;
  Mask neg = 0;
  bool operator==(const TwoSidedType&) const = default;
  bool operator<(const TwoSidedType& o) const {
    return pos != o.pos ? pos < o.pos : neg < o.neg;
  }
};

struct TypeHash {
  size_t operator()(const TwoSidedType& t) const {
    return std::hash<Mask>()(t.pos * 0x9e3779b97f4a7c15ULL ^ t.neg);
  }
};

struct UniversalProfile {
  Mask pos = 0;
  Mask neg = 0;
  bool operator==(const UniversalProfile&) const = default;
};

// Numbers of the violated closure conditions (1..9), ascending.
std::vector<int> check_type_conditions(Mask pos, Mask neg, const TypeSpace& sp);
inline bool is_type(const TwoSidedType& t, const TypeSpace& sp) {
  return check_type_conditions(t.pos, t.neg, sp).empty();
}
inline bool is_saturated(const TwoSidedType& t, const TypeSpace& sp) {
  return (t.pos | t.neg) == sp.full();
}

std::vector<TwoSidedType> enumerate_saturated(const TypeSpace& sp);

enum class Order { Refine, Include, PosExt };
bool compare(Order o, const TwoSidedType& a, const TwoSidedType& b);
inline bool refines(const TwoSidedType& a, const TwoSidedType& b) {
  return compare(Order::Refine, a, b);
}
inline bool included(const TwoSidedType& a, const TwoSidedType& b) {
  return compare(Order::Include, a, b);
}

Mask defects(const TwoSidedType& t, const TypeSpace& sp);
bool is_sensible_pair(const TwoSidedType& a, const TwoSidedType& b, const TypeSpace& sp);

TwoSidedType restrict_pos(const TwoSidedType& t, Mask subsig, const TypeSpace& sp);
TwoSidedType remove_realized(const TwoSidedType& t, size_t phi, const TypeSpace& sp);
Mask maximal_temporal(const TwoSidedType& t, const TypeSpace& sp);

UniversalProfile profile_of(const TwoSidedType& t, const TypeSpace& sp);
// Π ⊆ ℓ_∀ componentwise.
inline bool profile_within(const UniversalProfile& p, const TwoSidedType& t) {
  return subset(p.pos, t.pos) && subset(p.neg, t.neg);
}
std::vector<UniversalProfile> enumerate_profiles(const TypeSpace& sp);

std::string to_string(const TwoSidedType& t, const TypeSpace& sp);

}  // namespace itlkit
