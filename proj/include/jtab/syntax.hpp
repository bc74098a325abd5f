#pragma once

// Object language of justification logic: terms, formulas, evidential atoms
// and signed formulas, together with the concrete syntax (parser/printer).

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace jtab {

class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " at position " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

namespace detail {
inline std::size_t hash_mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}
}  // namespace detail

// ---------------------------------------------------------------------------
// Terms
// ---------------------------------------------------------------------------

enum class TermKind : std::uint8_t { Var, Const, App, Sum, Bang, Query, WQuery };

struct TermNode;

/// Immutable justification term with structural equality.
class Term {
 public:
  Term() = default;

  static Term var(std::string name);
  static Term constant(std::string name);
  static Term app(Term lhs, Term rhs);
  static Term sum(Term lhs, Term rhs);
  static Term bang(Term inner);
  static Term query(Term inner);
  static Term wquery(Term inner);

  bool valid() const { return node_ != nullptr; }
  TermKind kind() const;
  const std::string& name() const;
  const Term& lhs() const;
  const Term& rhs() const;
  /// Operand of a unary operator.
  const Term& inner() const { return lhs(); }
  std::size_t hash() const;
  std::size_t size() const;

  bool is_atomic() const { return kind() == TermKind::Var || kind() == TermKind::Const; }

  friend bool operator==(const Term& a, const Term& b);
  friend std::strong_ordering operator<=>(const Term& a, const Term& b);

 private:
  explicit Term(std::shared_ptr<const TermNode> node) : node_(std::move(node)) {}
  std::shared_ptr<const TermNode> node_;
};

struct TermNode {
  TermKind kind;
  std::string name;
  Term lhs;
  Term rhs;
  std::size_t hash;
  std::size_t size;
};

inline TermKind Term::kind() const { return node_->kind; }
inline const std::string& Term::name() const { return node_->name; }
inline const Term& Term::lhs() const { return node_->lhs; }
inline const Term& Term::rhs() const { return node_->rhs; }
inline std::size_t Term::hash() const { return node_ ? node_->hash : 0; }
inline std::size_t Term::size() const { return node_ ? node_->size : 0; }

inline bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  if (a.node_->hash != b.node_->hash || a.node_->kind != b.node_->kind) return false;
  return a.node_->name == b.node_->name && a.node_->lhs == b.node_->lhs &&
         a.node_->rhs == b.node_->rhs;
}

inline std::strong_ordering operator<=>(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (!a.node_) return std::strong_ordering::less;
  if (!b.node_) return std::strong_ordering::greater;
  if (auto c = a.node_->size <=> b.node_->size; c != 0) return c;
  if (auto c = a.node_->kind <=> b.node_->kind; c != 0) return c;
  if (auto c = a.node_->name <=> b.node_->name; c != 0) return c;
  if (auto c = a.node_->lhs <=> b.node_->lhs; c != 0) return c;
  return a.node_->rhs <=> b.node_->rhs;
}

// ---------------------------------------------------------------------------
// Formulas
// ---------------------------------------------------------------------------

enum class FormulaKind : std::uint8_t { Prop, Bottom, Neg, Implies, Just };

struct FormulaNode;

/// Immutable JL-formula: p | _|_ | ~A | A -> B | t:A.
class Formula {
 public:
  Formula() = default;

  static Formula prop(std::string name);
  static Formula bottom();
  static Formula neg(Formula inner);
  static Formula implies(Formula lhs, Formula rhs);
  static Formula just(Term term, Formula body);

  bool valid() const { return node_ != nullptr; }
  FormulaKind kind() const;
  const std::string& name() const;
  /// Operand of ~, antecedent of ->, body of t:A.
  const Formula& lhs() const;
  const Formula& rhs() const;
  const Formula& inner() const { return lhs(); }
  const Formula& body() const { return lhs(); }
  const Term& term() const;
  std::size_t hash() const;
  /// Node count, counting formula and term constructors.
  std::size_t size() const;

  bool is(FormulaKind k) const { return node_ && kind() == k; }

  friend bool operator==(const Formula& a, const Formula& b);
  friend std::strong_ordering operator<=>(const Formula& a, const Formula& b);

 private:
  explicit Formula(std::shared_ptr<const FormulaNode> node) : node_(std::move(node)) {}
  static Formula make(FormulaKind kind, std::string name, Formula lhs, Formula rhs, Term term);
  std::shared_ptr<const FormulaNode> node_;
};

struct FormulaNode {
  FormulaKind kind;
  std::string name;
  Formula lhs;
  Formula rhs;
  Term term;
  std::size_t hash;
  std::size_t size;
};

inline FormulaKind Formula::kind() const { return node_->kind; }
inline const std::string& Formula::name() const { return node_->name; }
inline const Formula& Formula::lhs() const { return node_->lhs; }
inline const Formula& Formula::rhs() const { return node_->rhs; }
inline const Term& Formula::term() const { return node_->term; }
inline std::size_t Formula::hash() const { return node_ ? node_->hash : 0; }
inline std::size_t Formula::size() const { return node_ ? node_->size : 0; }

inline bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  if (a.node_->hash != b.node_->hash || a.node_->kind != b.node_->kind) return false;
  return a.node_->name == b.node_->name && a.node_->term == b.node_->term &&
         a.node_->lhs == b.node_->lhs && a.node_->rhs == b.node_->rhs;
}

inline std::strong_ordering operator<=>(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (!a.node_) return std::strong_ordering::less;
  if (!b.node_) return std::strong_ordering::greater;
  if (auto c = a.node_->size <=> b.node_->size; c != 0) return c;
  if (auto c = a.node_->kind <=> b.node_->kind; c != 0) return c;
  if (auto c = a.node_->name <=> b.node_->name; c != 0) return c;
  if (auto c = a.node_->term <=> b.node_->term; c != 0) return c;
  if (auto c = a.node_->lhs <=> b.node_->lhs; c != 0) return c;
  return a.node_->rhs <=> b.node_->rhs;
}

// ---------------------------------------------------------------------------
// Evidential atoms and signed formulas
// ---------------------------------------------------------------------------

/// [t, A]: "t is admissible evidence for A".
struct EvidentialAtom {
  Term term;
  Formula body;

  friend bool operator==(const EvidentialAtom&, const EvidentialAtom&) = default;
  friend auto operator<=>(const EvidentialAtom&, const EvidentialAtom&) = default;
};

enum class Sign : std::uint8_t { F, T };

inline Sign flip(Sign s) { return s == Sign::T ? Sign::F : Sign::T; }

/// T/F-signed JL-formula or evidential atom. For an evidential payload `term`
/// is set; for a plain formula it is empty.
struct SignedFormula {
  Sign sign = Sign::T;
  Term term;
  Formula body;

  static SignedFormula t(Formula f) { return {Sign::T, Term{}, std::move(f)}; }
  static SignedFormula f(Formula f) { return {Sign::F, Term{}, std::move(f)}; }
  static SignedFormula te(Term t, Formula a) { return {Sign::T, std::move(t), std::move(a)}; }
  static SignedFormula fe(Term t, Formula a) { return {Sign::F, std::move(t), std::move(a)}; }

  bool evidential() const { return term.valid(); }
  bool is_true() const { return sign == Sign::T; }
  SignedFormula conjugate() const { return {flip(sign), term, body}; }
  EvidentialAtom atom() const { return {term, body}; }

  std::size_t hash() const {
    return detail::hash_mix(detail::hash_mix(body.hash(), term.hash()),
                            static_cast<std::size_t>(sign));
  }

  friend bool operator==(const SignedFormula&, const SignedFormula&) = default;
  friend auto operator<=>(const SignedFormula&, const SignedFormula&) = default;
};

// ---------------------------------------------------------------------------
// Constructors
// ---------------------------------------------------------------------------

inline Term Term::var(std::string name) {
  auto h = detail::hash_mix(std::hash<std::string>{}(name), 1);
  return Term(std::make_shared<const TermNode>(
      TermNode{TermKind::Var, std::move(name), Term{}, Term{}, h, 1}));
}

inline Term Term::constant(std::string name) {
  auto h = detail::hash_mix(std::hash<std::string>{}(name), 2);
  return Term(std::make_shared<const TermNode>(
      TermNode{TermKind::Const, std::move(name), Term{}, Term{}, h, 1}));
}

inline Term Term::app(Term lhs, Term rhs) {
  auto h = detail::hash_mix(detail::hash_mix(3, lhs.hash()), rhs.hash());
  auto n = lhs.size() + rhs.size() + 1;
  return Term(std::make_shared<const TermNode>(
      TermNode{TermKind::App, {}, std::move(lhs), std::move(rhs), h, n}));
}

inline Term Term::sum(Term lhs, Term rhs) {
  auto h = detail::hash_mix(detail::hash_mix(4, lhs.hash()), rhs.hash());
  auto n = lhs.size() + rhs.size() + 1;
  return Term(std::make_shared<const TermNode>(
      TermNode{TermKind::Sum, {}, std::move(lhs), std::move(rhs), h, n}));
}

inline Term Term::bang(Term inner) {
  auto h = detail::hash_mix(5, inner.hash());
  auto n = inner.size() + 1;
  return Term(std::make_shared<const TermNode>(
      TermNode{TermKind::Bang, {}, std::move(inner), Term{}, h, n}));
}

inline Term Term::query(Term inner) {
  auto h = detail::hash_mix(6, inner.hash());
  auto n = inner.size() + 1;
  return Term(std::make_shared<const TermNode>(
      TermNode{TermKind::Query, {}, std::move(inner), Term{}, h, n}));
}

inline Term Term::wquery(Term inner) {
  auto h = detail::hash_mix(7, inner.hash());
  auto n = inner.size() + 1;
  return Term(std::make_shared<const TermNode>(
      TermNode{TermKind::WQuery, {}, std::move(inner), Term{}, h, n}));
}

inline Formula Formula::make(FormulaKind kind, std::string name, Formula lhs, Formula rhs,
                             Term term) {
  std::size_t h = detail::hash_mix(static_cast<std::size_t>(kind) + 101,
                                   std::hash<std::string>{}(name));
  h = detail::hash_mix(h, lhs.hash());
  h = detail::hash_mix(h, rhs.hash());
  h = detail::hash_mix(h, term.hash());
  std::size_t n = 1 + lhs.size() + rhs.size() + term.size();
  return Formula(std::make_shared<const FormulaNode>(
      FormulaNode{kind, std::move(name), std::move(lhs), std::move(rhs), std::move(term), h, n}));
}

inline Formula Formula::prop(std::string name) {
  return make(FormulaKind::Prop, std::move(name), {}, {}, {});
}
inline Formula Formula::bottom() {
  static const Formula b = make(FormulaKind::Bottom, {}, {}, {}, {});
  return b;
}
inline Formula Formula::neg(Formula inner) {
  return make(FormulaKind::Neg, {}, std::move(inner), {}, {});
}
inline Formula Formula::implies(Formula lhs, Formula rhs) {
  return make(FormulaKind::Implies, {}, std::move(lhs), std::move(rhs), {});
}
inline Formula Formula::just(Term term, Formula body) {
  return make(FormulaKind::Just, {}, std::move(body), {}, std::move(term));
}

// ---------------------------------------------------------------------------
// Structural operations
// ---------------------------------------------------------------------------

namespace detail {
inline void collect_subformulas(const Formula& f, std::set<Formula>& out) {
  if (!out.insert(f).second) return;
  switch (f.kind()) {
    case FormulaKind::Prop:
    case FormulaKind::Bottom:
      break;
    case FormulaKind::Neg:
    case FormulaKind::Just:
      collect_subformulas(f.lhs(), out);
      break;
    case FormulaKind::Implies:
      collect_subformulas(f.lhs(), out);
      collect_subformulas(f.rhs(), out);
      break;
  }
}

inline void collect_subterms(const Term& t, std::set<Term>& out) {
  if (!out.insert(t).second) return;
  if (t.lhs().valid()) collect_subterms(t.lhs(), out);
  if (t.rhs().valid()) collect_subterms(t.rhs(), out);
}

inline void collect_formula_terms(const Formula& f, std::set<Term>& out) {
  switch (f.kind()) {
    case FormulaKind::Prop:
    case FormulaKind::Bottom:
      break;
    case FormulaKind::Neg:
      collect_formula_terms(f.lhs(), out);
      break;
    case FormulaKind::Implies:
      collect_formula_terms(f.lhs(), out);
      collect_formula_terms(f.rhs(), out);
      break;
    case FormulaKind::Just:
      collect_subterms(f.term(), out);
      collect_formula_terms(f.lhs(), out);
      break;
  }
}
}  // namespace detail

inline std::set<Formula> subformulas(const Formula& f) {
  std::set<Formula> out;
  detail::collect_subformulas(f, out);
  return out;
}

inline std::set<Term> subterms(const Term& t) {
  std::set<Term> out;
  detail::collect_subterms(t, out);
  return out;
}

/// Subterm closure of every term occurring anywhere in `f`.
inline std::set<Term> terms_of(const Formula& f) {
  std::set<Term> out;
  detail::collect_formula_terms(f, out);
  return out;
}

inline bool is_proper_subterm(const Term& s, const Term& t) {
  if (s == t) return false;
  return subterms(t).contains(s);
}

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

namespace detail {

// Term precedence: 0 sum, 1 product, 2 prefix/atom.
inline int term_level(const Term& t) {
  switch (t.kind()) {
    case TermKind::Sum:
      return 0;
    case TermKind::App:
      return 1;
    default:
      return 2;
  }
}

inline void render_term(const Term& t, int ctx, std::string& out);

inline void render_prefix_operand(const Term& t, bool after_query, std::string& out) {
  // "?" followed by "?" would be read as the weak verifier.
  bool starts_with_query =
      t.kind() == TermKind::Query || t.kind() == TermKind::WQuery;
  if (after_query && starts_with_query) {
    out += '(';
    render_term(t, 0, out);
    out += ')';
  } else {
    render_term(t, 2, out);
  }
}

inline void render_term(const Term& t, int ctx, std::string& out) {
  bool parens = term_level(t) < ctx;
  if (parens) out += '(';
  switch (t.kind()) {
    case TermKind::Var:
    case TermKind::Const:
      out += t.name();
      break;
    case TermKind::Sum:
      render_term(t.lhs(), 0, out);
      out += '+';
      render_term(t.rhs(), 1, out);
      break;
    case TermKind::App:
      render_term(t.lhs(), 1, out);
      out += '*';
      render_term(t.rhs(), 2, out);
      break;
    case TermKind::Bang:
      out += '!';
      render_prefix_operand(t.inner(), false, out);
      break;
    case TermKind::Query:
      out += '?';
      render_prefix_operand(t.inner(), true, out);
      break;
    case TermKind::WQuery:
      out += "??";
      render_prefix_operand(t.inner(), false, out);
      break;
  }
  if (parens) out += ')';
}

// Formula precedence: 0 implication, 1 prefix/atom.
inline void render_formula(const Formula& f, int ctx, std::string& out) {
  switch (f.kind()) {
    case FormulaKind::Prop:
      out += f.name();
      break;
    case FormulaKind::Bottom:
      out += "_|_";
      break;
    case FormulaKind::Neg:
      out += '~';
      render_formula(f.inner(), 1, out);
      break;
    case FormulaKind::Just:
      render_term(f.term(), 0, out);
      out += ':';
      render_formula(f.body(), 1, out);
      break;
    case FormulaKind::Implies:
      if (ctx > 0) out += '(';
      render_formula(f.lhs(), 1, out);
      out += " -> ";
      render_formula(f.rhs(), 0, out);
      if (ctx > 0) out += ')';
      break;
  }
}
}  // namespace detail

inline std::string render_term(const Term& t) {
  std::string out;
  detail::render_term(t, 0, out);
  return out;
}

inline std::string render_formula(const Formula& f) {
  std::string out;
  detail::render_formula(f, 0, out);
  return out;
}

/// "[t,A]"
inline std::string render_evidential(const Term& t, const Formula& a) {
  return "[" + render_term(t) + "," + render_formula(a) + "]";
}

/// Signed rendering: "T A", "F A", "T [t,A]", "F [t,A]".
inline std::string render_signed(const SignedFormula& sf) {
  std::string s = sf.sign == Sign::T ? "T " : "F ";
  return s + (sf.evidential() ? render_evidential(sf.term, sf.body) : render_formula(sf.body));
}

/// Unsigned rendering: F A prints as ~A, F [t,A] as ~[t,A].
inline std::string render_unsigned(const SignedFormula& sf) {
  if (sf.evidential()) {
    return (sf.is_true() ? "" : "~") + render_evidential(sf.term, sf.body);
  }
  if (sf.is_true()) return render_formula(sf.body);
  return render_formula(Formula::neg(sf.body));
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

namespace detail {

enum class Tok : std::uint8_t {
  End, Arrow, Tilde, Colon, LParen, RParen, Star, Plus, Bang, Query, Bottom, Comma,
  LBracket, RBracket, PropId, TermId
};

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;
};

inline bool ident_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
}

inline std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      ++i;
      continue;
    }
    std::size_t start = i;
    if (s.substr(i, 2) == "->") {
      out.push_back({Tok::Arrow, "->", start});
      i += 2;
    } else if (s.substr(i, 3) == "_|_") {
      out.push_back({Tok::Bottom, "_|_", start});
      i += 3;
    } else if (c == '~') {
      out.push_back({Tok::Tilde, "~", start}), ++i;
    } else if (c == ':') {
      out.push_back({Tok::Colon, ":", start}), ++i;
    } else if (c == '(') {
      out.push_back({Tok::LParen, "(", start}), ++i;
    } else if (c == ')') {
      out.push_back({Tok::RParen, ")", start}), ++i;
    } else if (c == '*') {
      out.push_back({Tok::Star, "*", start}), ++i;
    } else if (c == '+') {
      out.push_back({Tok::Plus, "+", start}), ++i;
    } else if (c == '!') {
      out.push_back({Tok::Bang, "!", start}), ++i;
    } else if (c == '?') {
      out.push_back({Tok::Query, "?", start}), ++i;
    } else if (c == ',') {
      out.push_back({Tok::Comma, ",", start}), ++i;
    } else if (c == '[') {
      out.push_back({Tok::LBracket, "[", start}), ++i;
    } else if (c == ']') {
      out.push_back({Tok::RBracket, "]", start}), ++i;
    } else if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z')) {
      while (i < s.size() && ident_char(s[i])) ++i;
      std::string id(s.substr(start, i - start));
      out.push_back({(c >= 'A' && c <= 'Z') ? Tok::PropId : Tok::TermId, std::move(id), start});
    } else {
      throw SyntaxError(std::string("unexpected character '") + c + "'", start);
    }
  }
  out.push_back({Tok::End, "", s.size()});
  return out;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : toks_(tokenize(text)) {}

  Formula formula() { return imp(); }

  std::optional<Term> try_term() {
    std::size_t save = pos_;
    auto t = term_opt();
    if (!t) pos_ = save;
    return t;
  }

  void expect(Tok k, const char* what) {
    if (peek().kind != k) throw SyntaxError(std::string("expected ") + what, peek().pos);
    ++pos_;
  }

  void expect_end() {
    if (peek().kind != Tok::End) throw SyntaxError("unexpected '" + peek().text + "'", peek().pos);
  }

  const Token& peek() const { return toks_[pos_]; }

 private:
  Formula imp() {
    Formula lhs = unary();
    if (peek().kind == Tok::Arrow) {
      ++pos_;
      return Formula::implies(std::move(lhs), imp());
    }
    return lhs;
  }

  Formula unary() {
    const Token& tok = peek();
    if (tok.kind == Tok::Tilde) {
      ++pos_;
      return Formula::neg(unary());
    }
    if (tok.kind == Tok::TermId || tok.kind == Tok::Bang || tok.kind == Tok::Query ||
        tok.kind == Tok::LParen) {
      std::size_t save = pos_;
      if (auto t = term_opt(); t && peek().kind == Tok::Colon) {
        ++pos_;
        return Formula::just(std::move(*t), unary());
      }
      pos_ = save;
    }
    return atom();
  }

  Formula atom() {
    const Token& tok = peek();
    switch (tok.kind) {
      case Tok::PropId:
        ++pos_;
        return Formula::prop(tok.text);
      case Tok::Bottom:
        ++pos_;
        return Formula::bottom();
      case Tok::LParen: {
        ++pos_;
        Formula f = imp();
        expect(Tok::RParen, "')'");
        return f;
      }
      case Tok::TermId:
        throw SyntaxError("term '" + tok.text + "' must be followed by ':'", tok.pos);
      case Tok::End:
        throw SyntaxError("unexpected end of input", tok.pos);
      default:
        throw SyntaxError("unexpected '" + tok.text + "'", tok.pos);
    }
  }

  // Term parsing never throws; failure is signalled by nullopt.
  std::optional<Term> term_opt() {
    auto lhs = tprod();
    if (!lhs) return std::nullopt;
    while (peek().kind == Tok::Plus) {
      ++pos_;
      auto rhs = tprod();
      if (!rhs) return std::nullopt;
      lhs = Term::sum(std::move(*lhs), std::move(*rhs));
    }
    return lhs;
  }

  std::optional<Term> tprod() {
    auto lhs = tunary();
    if (!lhs) return std::nullopt;
    while (peek().kind == Tok::Star) {
      ++pos_;
      auto rhs = tunary();
      if (!rhs) return std::nullopt;
      lhs = Term::app(std::move(*lhs), std::move(*rhs));
    }
    return lhs;
  }

  std::optional<Term> tunary() {
    const Token& tok = peek();
    switch (tok.kind) {
      case Tok::Bang: {
        ++pos_;
        auto t = tunary();
        if (!t) return std::nullopt;
        return Term::bang(std::move(*t));
      }
      case Tok::Query: {
        ++pos_;
        bool weak = false;
        if (peek().kind == Tok::Query) {
          ++pos_;
          weak = true;
        }
        auto t = tunary();
        if (!t) return std::nullopt;
        return weak ? Term::wquery(std::move(*t)) : Term::query(std::move(*t));
      }
      case Tok::TermId: {
        ++pos_;
        char c = tok.text[0];
        return (c >= 's') ? Term::var(tok.text) : Term::constant(tok.text);
      }
      case Tok::LParen: {
        ++pos_;
        auto t = term_opt();
        if (!t || peek().kind != Tok::RParen) return std::nullopt;
        ++pos_;
        return t;
      }
      default:
        return std::nullopt;
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses a formula in the concrete syntax:
///   formula := unary ("->" formula)?
///   unary   := "~" unary | term ":" unary | atom
///   atom    := PROPID | "_|_" | "(" formula ")"
///   term    := tprod ("+" tprod)* ;  tprod := tunary ("*" tunary)*
///   tunary  := "!" tunary | "?" "?"? tunary | TERMID | "(" term ")"
/// Uppercase-initial identifiers are atoms; lowercase identifiers starting
/// with a-r are constants, s-z are variables.
inline Formula parse_formula(std::string_view text) {
  detail::Parser p(text);
  Formula f = p.formula();
  p.expect_end();
  return f;
}

inline Term parse_term(std::string_view text) {
  detail::Parser p(text);
  auto t = p.try_term();
  if (!t) throw SyntaxError("malformed term", p.peek().pos);
  p.expect_end();
  return *t;
}

/// Parses "T A", "F A", "T [t,A]", "F [t,A]" (the inverse of render_signed).
inline SignedFormula parse_signed(std::string_view text) {
  std::size_t i = 0;
  while (i < text.size() && text[i] == ' ') ++i;
  if (i >= text.size() || (text[i] != 'T' && text[i] != 'F') || i + 1 >= text.size() ||
      text[i + 1] != ' ') {
    throw SyntaxError("expected sign 'T ' or 'F '", i);
  }
  Sign sign = text[i] == 'T' ? Sign::T : Sign::F;
  std::string_view rest = text.substr(i + 2);
  std::size_t j = 0;
  while (j < rest.size() && rest[j] == ' ') ++j;
  if (j < rest.size() && rest[j] == '[') {
    detail::Parser p(rest.substr(j + 1));
    auto t = p.try_term();
    if (!t) throw SyntaxError("malformed evidential term", i + 2 + j + 1);
    p.expect(detail::Tok::Comma, "','");
    Formula f = p.formula();
    p.expect(detail::Tok::RBracket, "']'");
    p.expect_end();
    return {sign, *t, f};
  }
  return {sign, Term{}, parse_formula(rest)};
}

}  // namespace jtab

template <>
struct std::hash<jtab::Term> {
  std::size_t operator()(const jtab::Term& t) const noexcept { return t.hash(); }
};
template <>
struct std::hash<jtab::Formula> {
  std::size_t operator()(const jtab::Formula& f) const noexcept { return f.hash(); }
};
template <>
struct std::hash<jtab::SignedFormula> {
  std::size_t operator()(const jtab::SignedFormula& s) const noexcept { return s.hash(); }
};
