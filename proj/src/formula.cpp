#include "itlkit/formula.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <deque>
#include <functional>
#include <mutex>
#include <unordered_set>

namespace itlkit {

namespace {

template <class N, class O>
class Interner {
 public:
  const N* get(O op, const std::string& name, const N* a, const N* b) {
    size_t h = std::hash<int>()(static_cast<int>(op)) * 1000003u;
    h ^= std::hash<std::string>()(name) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h ^= (a ? a->hash : 17) * 31 + (h << 6) + (h >> 2);
    h ^= (b ? b->hash : 29) * 131 + (h << 6) + (h >> 2);
    std::lock_guard<std::mutex> lk(mu_);
    auto& bucket = table_[h];
    for (const N* n : bucket)
      if (n->op == op && n->a == a && n->b == b && n->name == name) return n;
    N& n = store_.emplace_back();
    n.op = op;
    n.name = name;
    n.a = a;
    n.b = b;
    n.hash = h;
    n.size = 1 + (a ? a->size : 0) + (b ? b->size : 0);
    bucket.push_back(&n);
    return &n;
  }

 private:
  std::mutex mu_;
  std::deque<N> store_;
  std::unordered_map<size_t, std::vector<const N*>> table_;
};

Interner<Node, Op>& interner() {
  static Interner<Node, Op> in;
  return in;
}
Interner<CNode, COp>& cinterner() {
  static Interner<CNode, COp> in;
  return in;
}

Formula mk(Op op, Formula a = {}, Formula b = {}, const std::string& name = "") {
  return Formula(interner().get(op, name, a.node(), b.node()));
}
ClassicalFormula cmk(COp op, ClassicalFormula a = {}, ClassicalFormula b = {},
                     const std::string& name = "") {
  return ClassicalFormula(cinterner().get(op, name, a.node(), b.node()));
}

}  // namespace

Formula Formula::bot() { return mk(Op::Bot); }
Formula Formula::var(const std::string& name) {
  if (name.empty()) throw std::invalid_argument("empty variable name");
  return mk(Op::Var, {}, {}, name);
}
Formula Formula::conj(Formula a, Formula b) { return mk(Op::And, a, b); }
Formula Formula::disj(Formula a, Formula b) { return mk(Op::Or, a, b); }
Formula Formula::imp(Formula a, Formula b) { return mk(Op::Imp, a, b); }
Formula Formula::next(Formula a) { return mk(Op::Next, a); }
Formula Formula::ev(Formula a) { return mk(Op::Ev, a); }
Formula Formula::all(Formula a) { return mk(Op::Forall, a); }

int Formula::arity() const {
  switch (op()) {
    case Op::Bot:
    case Op::Var: return 0;
    case Op::Next:
    case Op::Ev:
    case Op::Forall: return 1;
    default: return 2;
  }
}

int Formula::depth() const {
  int k = arity();
  if (k == 0) return 0;
  int d = lhs().depth();
  if (k == 2) d = std::max(d, rhs().depth());
  return d + 1;
}

int compare(Formula x, Formula y) {
  if (x == y) return 0;
  if (x.size() != y.size()) return x.size() < y.size() ? -1 : 1;
  if (x.op() != y.op()) return x.op() < y.op() ? -1 : 1;
  if (x.op() == Op::Var) return x.name() < y.name() ? -1 : 1;
  int c = compare(x.lhs(), y.lhs());
  if (c != 0 || x.arity() == 1) return c;
  return compare(x.rhs(), y.rhs());
}

// ---- parser ----

namespace {

enum class Tok { End, Ident, Bot, LParen, RParen, Not, Next, Ev, All, Ex, And, Or, Imp, Iff, Hence };

struct Lexer {
  const std::string& s;
  size_t i = 0;
  Tok tok = Tok::End;
  size_t tokpos = 0;
  std::string ident;

  explicit Lexer(const std::string& src) : s(src) { advance(); }

  bool match(const char* lit) {
    size_t n = std::char_traits<char>::length(lit);
    if (s.compare(i, n, lit) == 0) {
      i += n;
      return true;
    }
    return false;
  }

  void advance() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    tokpos = i;
    if (i >= s.size()) {
      tok = Tok::End;
      return;
    }
    char c = s[i];
    if (c >= 'a' && c <= 'z') {
      size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
      ident = s.substr(i, j - i);
      i = j;
      tok = ident == "bot" ? Tok::Bot : Tok::Ident;
      return;
    }
    struct Sym {
      const char* lit;
      Tok t;
    };
    static const Sym syms[] = {
        {"<->", Tok::Iff}, {"->", Tok::Imp}, {"(", Tok::LParen}, {")", Tok::RParen},
        {"~", Tok::Not},   {"&", Tok::And},  {"|", Tok::Or},     {"↔", Tok::Iff},
        {"→", Tok::Imp}, {"∧", Tok::And}, {"∨", Tok::Or}, {"¬", Tok::Not},
        {"⊥", Tok::Bot}, {"∘", Tok::Next}, {"◊", Tok::Ev}, {"◇", Tok::Ev},
        {"∀", Tok::All}, {"∃", Tok::Ex}, {"□", Tok::Hence}};
    for (const auto& sy : syms)
      if (match(sy.lit)) {
        tok = sy.t;
        return;
      }
    switch (c) {
      case 'X': ++i; tok = Tok::Next; return;
      case 'F': ++i; tok = Tok::Ev; return;
      case 'A': ++i; tok = Tok::All; return;
      case 'E': ++i; tok = Tok::Ex; return;
      case 'G': ++i; tok = Tok::Hence; return;
      default: break;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", i);
  }
};

struct Parser {
  Lexer lx;
  explicit Parser(const std::string& s) : lx(s) {}

  Formula formula() { return imp(); }

  Formula imp() {
    Formula l = disj();
    if (lx.tok == Tok::Imp) {
      lx.advance();
      return Formula::imp(l, imp());
    }
    if (lx.tok == Tok::Iff) {
      lx.advance();
      return Formula::iff(l, imp());
    }
    return l;
  }

  Formula disj() {
    Formula l = conj();
    while (lx.tok == Tok::Or) {
      lx.advance();
      l = Formula::disj(l, conj());
    }
    return l;
  }

  Formula conj() {
    Formula l = unary();
    while (lx.tok == Tok::And) {
      lx.advance();
      l = Formula::conj(l, unary());
    }
    return l;
  }

  Formula unary() {
    switch (lx.tok) {
      case Tok::Not: lx.advance(); return Formula::neg(unary());
      case Tok::Next: lx.advance(); return Formula::next(unary());
      case Tok::Ev: lx.advance(); return Formula::ev(unary());
      case Tok::All: lx.advance(); return Formula::all(unary());
      case Tok::Ex: lx.advance(); return Formula::exists(unary());
      case Tok::Hence: throw ParseError("henceforth operator not supported", lx.tokpos);
      default: return atom();
    }
  }

  Formula atom() {
    switch (lx.tok) {
      case Tok::Bot: lx.advance(); return Formula::bot();
      case Tok::Ident: {
        Formula v = Formula::var(lx.ident);
        lx.advance();
        return v;
      }
      case Tok::LParen: {
        lx.advance();
        Formula f = formula();
        if (lx.tok != Tok::RParen) throw ParseError("expected ')'", lx.tokpos);
        lx.advance();
        return f;
      }
      case Tok::End: throw ParseError("unexpected end of input", lx.tokpos);
      default: throw ParseError("unexpected token", lx.tokpos);
    }
  }
};

}  // namespace

Formula parse(const std::string& text) {
  Parser p(text);
  Formula f = p.formula();
  if (p.lx.tok != Tok::End) throw ParseError("trailing input", p.lx.tokpos);
  return f;
}

// ---- printer ----

namespace {

// 1 imp, 2 or, 3 and, 4 unary/atom
int prec(Formula f) {
  switch (f.op()) {
    case Op::Imp: return f.rhs().op() == Op::Bot ? 4 : 1;
    case Op::Or: return 2;
    case Op::And: return 3;
    default: return 4;
  }
}

void emit(Formula f, std::string& out);

void emit_at(Formula f, int min_prec, std::string& out) {
  if (prec(f) < min_prec) {
    out += '(';
    emit(f, out);
    out += ')';
  } else {
    emit(f, out);
  }
}

void emit(Formula f, std::string& out) {
  switch (f.op()) {
    case Op::Bot: out += "bot"; return;
    case Op::Var: out += f.name(); return;
    case Op::And:
      emit_at(f.lhs(), 3, out);
      out += " & ";
      emit_at(f.rhs(), 4, out);
      return;
    case Op::Or:
      emit_at(f.lhs(), 2, out);
      out += " | ";
      emit_at(f.rhs(), 3, out);
      return;
    case Op::Imp:
      if (f.rhs().op() == Op::Bot) {
        out += "~ ";
        emit_at(f.lhs(), 4, out);
        return;
      }
      emit_at(f.lhs(), 2, out);
      out += " -> ";
      emit_at(f.rhs(), 1, out);
      return;
    case Op::Next: out += "X "; emit_at(f.child(), 4, out); return;
    case Op::Ev: out += "F "; emit_at(f.child(), 4, out); return;
    case Op::Forall: out += "A "; emit_at(f.child(), 4, out); return;
  }
}

}  // namespace

std::string render(Formula f) {
  std::string out;
  emit(f, out);
  return out;
}

// ---- signatures ----

Signature::Signature(const std::vector<Formula>& roots) {
  std::unordered_set<const Node*> seen;
  std::vector<Formula> stack(roots.begin(), roots.end());
  while (!stack.empty()) {
    Formula f = stack.back();
    stack.pop_back();
    if (!seen.insert(f.node()).second) continue;
    list_.push_back(f);
    if (f.arity() >= 1) stack.push_back(f.lhs());
    if (f.arity() == 2) stack.push_back(f.rhs());
  }
  std::sort(list_.begin(), list_.end(), FormulaLess());
  for (size_t i = 0; i < list_.size(); ++i) idx_[list_[i].node()] = static_cast<int>(i);
  lc_.assign(list_.size(), -1);
  rc_.assign(list_.size(), -1);
  for (size_t i = 0; i < list_.size(); ++i) {
    Formula f = list_[i];
    if (f.arity() >= 1) lc_[i] = idx_[f.lhs().node()];
    if (f.arity() == 2) rc_[i] = idx_[f.rhs().node()];
  }
}

int Signature::index(Formula f) const {
  auto it = idx_.find(f.node());
  return it == idx_.end() ? -1 : it->second;
}

std::vector<size_t> Signature::forall_indices() const {
  std::vector<size_t> r;
  for (size_t i = 0; i < list_.size(); ++i)
    if (list_[i].op() == Op::Forall) r.push_back(i);
  return r;
}

Signature closure(Formula f) { return Signature({f}); }

namespace {
std::atomic<size_t>& sig_cap() {
  static std::atomic<size_t> cap([] {
    const char* e = std::getenv("ITLKIT_MAX_SIG");
    if (e && *e) {
      long v = std::strtol(e, nullptr, 10);
      if (v > 0) return static_cast<size_t>(v);
    }
    return static_cast<size_t>(20);
  }());
  return cap;
}
}  // namespace

size_t max_signature() { return sig_cap().load(); }
void set_max_signature(size_t n) { sig_cap().store(n); }

// ---- classical language ----

ClassicalFormula ClassicalFormula::bot() { return cmk(COp::Bot); }
ClassicalFormula ClassicalFormula::var(const std::string& name) { return cmk(COp::Var, {}, {}, name); }
ClassicalFormula ClassicalFormula::imp(ClassicalFormula a, ClassicalFormula b) { return cmk(COp::Imp, a, b); }
ClassicalFormula ClassicalFormula::box(ClassicalFormula a) { return cmk(COp::IntBox, a); }
ClassicalFormula ClassicalFormula::next(ClassicalFormula a) { return cmk(COp::Next, a); }
ClassicalFormula ClassicalFormula::hence(ClassicalFormula a) { return cmk(COp::Hence, a); }
ClassicalFormula ClassicalFormula::all(ClassicalFormula a) { return cmk(COp::Forall, a); }

namespace {
void cemit(ClassicalFormula f, std::string& out, bool nested) {
  switch (f.op()) {
    case COp::Bot: out += "bot"; return;
    case COp::Var: out += f.name(); return;
    case COp::Imp:
      if (nested) out += '(';
      cemit(f.lhs(), out, true);
      out += " -> ";
      cemit(f.rhs(), out, f.rhs().op() == COp::Imp ? false : true);
      if (nested) out += ')';
      return;
    case COp::IntBox: out += "I "; break;
    case COp::Next: out += "X "; break;
    case COp::Hence: out += "G "; break;
    case COp::Forall: out += "A "; break;
  }
  cemit(f.child(), out, true);
}
}  // namespace

std::string render(ClassicalFormula f) {
  std::string out;
  cemit(f, out, false);
  return out;
}

size_t surface_size(ClassicalFormula f) {
  using C = ClassicalFormula;
  switch (f.op()) {
    case COp::Bot:
    case COp::Var: return 1;
    case COp::Imp: {
      C l = f.lhs(), r = f.rhs();
      // a & b  ==  ~(a -> ~b)
      if (r.op() == COp::Bot && l.op() == COp::Imp && l.rhs().op() == COp::Imp &&
          l.rhs().rhs().op() == COp::Bot)
        return 1 + surface_size(l.lhs()) + surface_size(l.rhs().lhs());
      // F a  ==  ~G~a
      if (r.op() == COp::Bot && l.op() == COp::Hence && l.child().op() == COp::Imp &&
          l.child().rhs().op() == COp::Bot)
        return 1 + surface_size(l.child().lhs());
      // a | b  ==  ~a -> b
      if (l.op() == COp::Imp && l.rhs().op() == COp::Bot && r.op() != COp::Bot)
        return 1 + surface_size(l.lhs()) + surface_size(r);
      return 1 + surface_size(l) + surface_size(r);
    }
    default: return 1 + surface_size(f.child());
  }
}

ClassicalFormula gt_translate(Formula f) {
  using C = ClassicalFormula;
  switch (f.op()) {
    case Op::Bot: return C::bot();
    case Op::Var: return C::box(C::var(f.name()));
    case Op::And: return C::conj(gt_translate(f.lhs()), gt_translate(f.rhs()));
    case Op::Or: return C::disj(gt_translate(f.lhs()), gt_translate(f.rhs()));
    case Op::Imp: return C::box(C::imp(gt_translate(f.lhs()), gt_translate(f.rhs())));
    case Op::Next: return C::next(gt_translate(f.child()));
    case Op::Ev: return C::ev(gt_translate(f.child()));
    case Op::Forall: return C::all(gt_translate(f.child()));
  }
  return C::bot();
}

}  // namespace itlkit
