#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace itlkit {

enum class Op : uint8_t { Bot, Var, And, Or, Imp, Next, Ev, Forall };

// Interned node. Two structurally equal formulas share one node, so
// pointer equality is structural equality.
struct Node {
  Op op;
  std::string name;
  const Node* a = nullptr;
  const Node* b = nullptr;
  size_t size = 1;
  size_t hash = 0;
};

class Formula {
 public:
  Formula() = default;
  explicit Formula(const Node* n) : n_(n) {}

  static Formula bot();
  static Formula var(const std::string& name);
  static Formula conj(Formula a, Formula b);
  static Formula disj(Formula a, Formula b);
  static Formula imp(Formula a, Formula b);
  static Formula next(Formula a);
  static Formula ev(Formula a);
  static Formula all(Formula a);
  // derived forms
  static Formula neg(Formula a) { return imp(a, bot()); }
  static Formula top() { return imp(bot(), bot()); }
  static Formula iff(Formula a, Formula b) { return conj(imp(a, b), imp(b, a)); }
  static Formula exists(Formula a) { return neg(all(neg(a))); }

  Op op() const { return n_->op; }
  const std::string& name() const { return n_->name; }
  Formula lhs() const { return Formula(n_->a); }
  Formula rhs() const { return Formula(n_->b); }
  Formula child() const { return Formula(n_->a); }
  size_t size() const { return n_->size; }
  size_t hash() const { return n_->hash; }
  const Node* node() const { return n_; }
  bool valid() const { return n_ != nullptr; }
  bool is_temporal() const { return op() == Op::Next || op() == Op::Ev; }
  int arity() const;
  int depth() const;

  bool operator==(const Formula& o) const { return n_ == o.n_; }
  bool operator!=(const Formula& o) const { return n_ != o.n_; }

 private:
  const Node* n_ = nullptr;
};

// Canonical total order: size first, then a fixed structural comparison.
int compare(Formula x, Formula y);
struct FormulaLess {
  bool operator()(Formula x, Formula y) const { return compare(x, y) < 0; }
};
struct FormulaHash {
  size_t operator()(Formula f) const { return f.hash(); }
};

struct ParseError : std::runtime_error {
  size_t pos;
  ParseError(const std::string& msg, size_t p)
      : std::runtime_error(msg + " at position " + std::to_string(p)), pos(p) {}
};

Formula parse(const std::string& text);
std::string render(Formula f);

// Ordered, subformula-closed set of formulas.
class Signature {
 public:
  Signature() = default;
  // Closes the given formulas under subformulas and sorts canonically.
  explicit Signature(const std::vector<Formula>& roots);

  size_t size() const { return list_.size(); }
  Formula operator[](size_t i) const { return list_[i]; }
  const std::vector<Formula>& formulas() const { return list_; }
  int index(Formula f) const;  // -1 if absent
  bool contains(Formula f) const { return index(f) >= 0; }
  bool operator==(const Signature& o) const { return list_ == o.list_; }

  // Per-index child positions (-1 where absent).
  int left(size_t i) const { return lc_[i]; }
  int right(size_t i) const { return rc_[i]; }

  std::vector<size_t> forall_indices() const;

 private:
  std::vector<Formula> list_;
  std::unordered_map<const Node*, int> idx_;
  std::vector<int> lc_, rc_;
};

Signature closure(Formula f);
// Set of subformulas of f, closed; alias kept for readability at call sites.
inline Signature sub(Formula f) { return closure(f); }

// Signature size cap. Reads ITLKIT_MAX_SIG on first call; default 20.
size_t max_signature();
void set_max_signature(size_t n);

// Classical dynamic topological language.
enum class COp : uint8_t { Bot, Var, Imp, IntBox, Next, Hence, Forall };

struct CNode {
  COp op;
  std::string name;
  const CNode* a = nullptr;
  const CNode* b = nullptr;
  size_t hash = 0;
  size_t size = 1;
};

class ClassicalFormula {
 public:
  ClassicalFormula() = default;
  explicit ClassicalFormula(const CNode* n) : n_(n) {}
  static ClassicalFormula bot();
  static ClassicalFormula var(const std::string& name);
  static ClassicalFormula imp(ClassicalFormula a, ClassicalFormula b);
  static ClassicalFormula box(ClassicalFormula a);
  static ClassicalFormula next(ClassicalFormula a);
  static ClassicalFormula hence(ClassicalFormula a);
  static ClassicalFormula all(ClassicalFormula a);
  // classical derived forms
  static ClassicalFormula neg(ClassicalFormula a) { return imp(a, bot()); }
  static ClassicalFormula conj(ClassicalFormula a, ClassicalFormula b) {
    return neg(imp(a, neg(b)));
  }
  static ClassicalFormula disj(ClassicalFormula a, ClassicalFormula b) {
    return imp(neg(a), b);
  }
  static ClassicalFormula ev(ClassicalFormula a) { return neg(hence(neg(a))); }

  COp op() const { return n_->op; }
  const std::string& name() const { return n_->name; }
  ClassicalFormula lhs() const { return ClassicalFormula(n_->a); }
  ClassicalFormula rhs() const { return ClassicalFormula(n_->b); }
  ClassicalFormula child() const { return ClassicalFormula(n_->a); }
  size_t size() const { return n_->size; }
  const CNode* node() const { return n_; }
  bool operator==(const ClassicalFormula& o) const { return n_ == o.n_; }

 private:
  const CNode* n_ = nullptr;
};

std::string render(ClassicalFormula f);
// Size counting the derived classical connectives (&, |, F) as one node each.
size_t surface_size(ClassicalFormula f);
ClassicalFormula gt_translate(Formula f);

}  // namespace itlkit
