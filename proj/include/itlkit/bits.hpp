#pragma once

#include <bit>
#include <cstdint>
#include <vector>

namespace itlkit {

// Dynamic bitset over worlds 0..n-1. Up to 64 worlds live inline, which keeps
// evaluation on small models free of allocations.
class Bits {
 public:
  Bits() = default;
  explicit Bits(size_t n, bool fill = false) : n_(n) {
    if (words() > 1) heap_.assign(words(), 0);
    uint64_t* d = data();
    for (size_t k = 0; k < words(); ++k) d[k] = fill ? ~uint64_t(0) : 0;
    trim();
  }
  Bits(const Bits& o) : n_(o.n_), small_(o.small_), heap_(o.heap_) {}
  Bits(Bits&& o) noexcept : n_(o.n_), small_(o.small_), heap_(std::move(o.heap_)) {}
  Bits& operator=(const Bits& o) {
    n_ = o.n_;
    small_ = o.small_;
    heap_ = o.heap_;
    return *this;
  }
  Bits& operator=(Bits&& o) noexcept {
    n_ = o.n_;
    small_ = o.small_;
    heap_ = std::move(o.heap_);
    return *this;
  }

  size_t size() const { return n_; }
  bool test(size_t i) const { return (data()[i >> 6] >> (i & 63)) & 1u; }
  void set(size_t i, bool v = true) {
    if (v)
      data()[i >> 6] |= uint64_t(1) << (i & 63);
    else
      data()[i >> 6] &= ~(uint64_t(1) << (i & 63));
  }
  size_t count() const {
    size_t c = 0;
    const uint64_t* d = data();
    for (size_t k = 0; k < words(); ++k) c += std::popcount(d[k]);
    return c;
  }
  bool none() const {
    const uint64_t* d = data();
    for (size_t k = 0; k < words(); ++k)
      if (d[k]) return false;
    return true;
  }
  bool all() const { return count() == n_; }
  bool subset_of(const Bits& o) const {
    const uint64_t *a = data(), *b = o.data();
    for (size_t k = 0; k < words(); ++k)
      if (a[k] & ~b[k]) return false;
    return true;
  }
  bool intersects(const Bits& o) const {
    const uint64_t *a = data(), *b = o.data();
    for (size_t k = 0; k < words(); ++k)
      if (a[k] & b[k]) return true;
    return false;
  }
  Bits& operator|=(const Bits& o) {
    uint64_t* a = data();
    const uint64_t* b = o.data();
    for (size_t k = 0; k < words(); ++k) a[k] |= b[k];
    return *this;
  }
  Bits& operator&=(const Bits& o) {
    uint64_t* a = data();
    const uint64_t* b = o.data();
    for (size_t k = 0; k < words(); ++k) a[k] &= b[k];
    return *this;
  }
  Bits& minus(const Bits& o) {
    uint64_t* a = data();
    const uint64_t* b = o.data();
    for (size_t k = 0; k < words(); ++k) a[k] &= ~b[k];
    return *this;
  }
  Bits operator|(const Bits& o) const { Bits r = *this; return r |= o; }
  Bits operator&(const Bits& o) const { Bits r = *this; return r &= o; }
  Bits operator~() const {
    Bits r = *this;
    uint64_t* d = r.data();
    for (size_t k = 0; k < words(); ++k) d[k] = ~d[k];
    r.trim();
    return r;
  }
  bool operator==(const Bits& o) const {
    if (n_ != o.n_) return false;
    const uint64_t *a = data(), *b = o.data();
    for (size_t k = 0; k < words(); ++k)
      if (a[k] != b[k]) return false;
    return true;
  }
  std::vector<size_t> members() const {
    std::vector<size_t> r;
    for (size_t i = 0; i < n_; ++i)
      if (test(i)) r.push_back(i);
    return r;
  }

 private:
  size_t words() const { return (n_ + 63) / 64; }
  uint64_t* data() { return words() > 1 ? heap_.data() : &small_; }
  const uint64_t* data() const { return words() > 1 ? heap_.data() : &small_; }
  void trim() {
    if (n_ & 63) data()[words() - 1] &= (uint64_t(1) << (n_ & 63)) - 1;
  }

  size_t n_ = 0;
  uint64_t small_ = 0;
  std::vector<uint64_t> heap_;
};

}  // namespace itlkit
