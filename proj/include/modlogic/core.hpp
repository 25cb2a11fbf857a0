#pragma once

// Modular difference constraints: residue arithmetic, the residue order,
// constraint evaluation, and the line-oriented text format.

#include <algorithm>
#include <charconv>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

namespace modlogic {

using Residue = std::int64_t;
using Offset = std::int64_t;

// Input magnitudes are bounded so that every intermediate value used by the
// solvers fits in 64 bits (sums are formed in 128 bits where they can exceed
// that).
inline constexpr std::int64_t kMaxModulus = std::int64_t{1} << 62;
inline constexpr Offset kMaxOffset = std::int64_t{1} << 40;
inline constexpr std::size_t kMaxVariables = std::size_t{1} << 20;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ModulusError : public Error {
 public:
  using Error::Error;
};

/// Raised when an input magnitude exceeds the supported range.
class LimitError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message)
      : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

struct VarId {
  std::uint32_t index = 0;

  friend auto operator<=>(VarId, VarId) = default;
};

class UndefinedVariable : public Error {
 public:
  explicit UndefinedVariable(VarId v)
      : Error("variable #" + std::to_string(v.index) + " has no value"), var_(v) {}
  VarId var() const noexcept { return var_; }

 private:
  VarId var_;
};

class Modulus {
 public:
  constexpr explicit Modulus(std::int64_t n) : n_(n) {
    if (n < 2) throw ModulusError("modulus must be at least 2, got " + std::to_string(n));
    if (n > kMaxModulus) throw LimitError("modulus exceeds 2^62");
  }

  constexpr std::int64_t value() const noexcept { return n_; }

  friend bool operator==(Modulus, Modulus) = default;

 private:
  std::int64_t n_;
};

/// The unique residue of `i` in [0, N-1].
constexpr Residue reduce_mod(__int128 i, Modulus n) noexcept {
  const __int128 m = n.value();
  __int128 r = i % m;
  if (r < 0) r += m;
  return static_cast<Residue>(r);
}

constexpr Residue reduce_mod(std::int64_t i, Modulus n) noexcept {
  return reduce_mod(static_cast<__int128>(i), n);
}

enum class Ordering { Less, Equal, Greater };

/// Compares i and j under the residue order: i <=_N j iff i_N <= j_N.
constexpr Ordering cmp_mod(std::int64_t i, std::int64_t j, Modulus n) noexcept {
  const Residue a = reduce_mod(i, n);
  const Residue b = reduce_mod(j, n);
  if (a < b) return Ordering::Less;
  if (a > b) return Ordering::Greater;
  return Ordering::Equal;
}

class SymbolTable {
 public:
  static bool valid_name(std::string_view name) noexcept {
    if (name.empty()) return false;
    auto alpha = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; };
    auto digit = [](char c) { return c >= '0' && c <= '9'; };
    if (!alpha(name.front())) return false;
    for (char c : name) {
      if (!alpha(c) && !digit(c)) return false;
    }
    return true;
  }

  /// Returns the id of `name`, adding it if it is new.
  VarId intern(std::string_view name) {
    if (auto found = lookup(name)) return *found;
    if (!valid_name(name)) throw Error("invalid variable name '" + std::string(name) + "'");
    if (names_.size() >= kMaxVariables) throw LimitError("too many variables");
    VarId id{static_cast<std::uint32_t>(names_.size())};
    names_.emplace_back(name);
    index_.emplace(names_.back(), id);
    return id;
  }

  std::optional<VarId> lookup(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  const std::string& name(VarId v) const { return names_.at(v.index); }
  std::size_t size() const noexcept { return names_.size(); }
  bool contains(VarId v) const noexcept { return v.index < names_.size(); }
  const std::vector<std::string>& names() const noexcept { return names_; }

  friend bool operator==(const SymbolTable& a, const SymbolTable& b) { return a.names_ == b.names_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, VarId> index_;
};

struct Term {
  VarId var;
  Offset offset = 0;

  friend bool operator==(const Term&, const Term&) = default;
};

/// An integer constant on the right-hand side, kept exactly as written.
struct Constant {
  Offset value = 0;

  friend bool operator==(const Constant&, const Constant&) = default;
};

enum class Relation { LE, LT, EQ, GE, GT };

constexpr std::string_view relation_symbol(Relation r) noexcept {
  switch (r) {
    case Relation::LE: return "<=";
    case Relation::LT: return "<";
    case Relation::EQ: return "=";
    case Relation::GE: return ">=";
    case Relation::GT: return ">";
  }
  return "?";
}

constexpr bool relation_holds(Relation r, Residue lhs, Residue rhs) noexcept {
  switch (r) {
    case Relation::LE: return lhs <= rhs;
    case Relation::LT: return lhs < rhs;
    case Relation::EQ: return lhs == rhs;
    case Relation::GE: return lhs >= rhs;
    case Relation::GT: return lhs > rhs;
  }
  return false;
}

struct Constraint {
  Term lhs;
  Relation rel = Relation::LE;
  std::variant<Term, Constant> rhs;

  bool has_constant_rhs() const noexcept { return std::holds_alternative<Constant>(rhs); }

  friend bool operator==(const Constraint&, const Constraint&) = default;
};

inline Offset max_abs_constant(const Constraint& c) noexcept {
  auto abs = [](Offset v) { return v < 0 ? -v : v; };
  Offset r = abs(c.lhs.offset);
  if (const auto* t = std::get_if<Term>(&c.rhs)) {
    r = std::max(r, abs(t->offset));
  } else {
    r = std::max(r, abs(std::get<Constant>(c.rhs).value));
  }
  return r;
}

class ConstraintSystem {
 public:
  explicit ConstraintSystem(Modulus n) : modulus_(n) {}

  VarId variable(std::string_view name) { return symbols_.intern(name); }

  /// Appends `c`; every variable it mentions must already be interned.
  void add(const Constraint& c) {
    check_var(c.lhs.var);
    if (const auto* t = std::get_if<Term>(&c.rhs)) check_var(t->var);
    check_magnitude(c.lhs.offset);
    if (const auto* t = std::get_if<Term>(&c.rhs)) {
      check_magnitude(t->offset);
    } else {
      check_magnitude(std::get<Constant>(c.rhs).value);
    }
    constraints_.push_back(c);
    max_constant_ = std::max(max_constant_, max_abs_constant(c));
  }

  void add(Term lhs, Relation rel, Term rhs) { add(Constraint{lhs, rel, rhs}); }
  void add(Term lhs, Relation rel, Constant rhs) { add(Constraint{lhs, rel, rhs}); }

  Modulus modulus() const noexcept { return modulus_; }
  const SymbolTable& symbols() const noexcept { return symbols_; }
  const std::vector<Constraint>& constraints() const noexcept { return constraints_; }

  /// p: number of variables.
  std::size_t num_vars() const noexcept { return symbols_.size(); }
  /// m: largest absolute offset or constant, 0 when there are none.
  Offset max_constant() const noexcept { return max_constant_; }

  friend bool operator==(const ConstraintSystem& a, const ConstraintSystem& b) {
    return a.modulus_ == b.modulus_ && a.symbols_ == b.symbols_ && a.constraints_ == b.constraints_;
  }

 private:
  void check_var(VarId v) const {
    if (!symbols_.contains(v)) throw UndefinedVariable(v);
  }
  static void check_magnitude(Offset k) {
    if (k > kMaxOffset || k < -kMaxOffset) throw LimitError("constant " + std::to_string(k) + " exceeds 2^40 in magnitude");
  }

  Modulus modulus_;
  SymbolTable symbols_;
  std::vector<Constraint> constraints_;
  Offset max_constant_ = 0;
};

/// Partial map from variables to residues.
class Assignment {
 public:
  Assignment() = default;
  explicit Assignment(std::size_t num_vars) : values_(num_vars) {}

  void set(VarId v, Residue value) {
    if (v.index >= values_.size()) values_.resize(v.index + 1);
    values_[v.index] = value;
  }

  std::optional<Residue> get(VarId v) const noexcept {
    if (v.index >= values_.size()) return std::nullopt;
    return values_[v.index];
  }

  Residue at(VarId v) const {
    auto value = get(v);
    if (!value) throw UndefinedVariable(v);
    return *value;
  }

  /// True when every variable below `num_vars` has a value.
  bool is_total(std::size_t num_vars) const noexcept {
    if (values_.size() < num_vars) return false;
    for (std::size_t i = 0; i < num_vars; ++i) {
      if (!values_[i]) return false;
    }
    return true;
  }

  std::size_t size() const noexcept { return values_.size(); }

  friend bool operator==(const Assignment&, const Assignment&) = default;

 private:
  std::vector<std::optional<Residue>> values_;
};

inline Residue eval_term(const Term& t, const Assignment& a, Modulus n) {
  return reduce_mod(static_cast<__int128>(a.at(t.var)) + t.offset, n);
}

inline Residue eval_rhs(const std::variant<Term, Constant>& rhs, const Assignment& a, Modulus n) {
  if (const auto* t = std::get_if<Term>(&rhs)) return eval_term(*t, a, n);
  return reduce_mod(std::get<Constant>(rhs).value, n);
}

inline bool eval_constraint(const Constraint& c, const Assignment& a, Modulus n) {
  return relation_holds(c.rel, eval_term(c.lhs, a, n), eval_rhs(c.rhs, a, n));
}

struct EvalResult {
  std::optional<std::size_t> violated;

  bool satisfied() const noexcept { return !violated.has_value(); }
};

/// Checks every constraint in order; reports the lowest violated index.
inline EvalResult eval_system(const ConstraintSystem& sys, const Assignment& a) {
  const auto& cs = sys.constraints();
  for (std::size_t i = 0; i < cs.size(); ++i) {
    if (!eval_constraint(cs[i], a, sys.modulus())) return EvalResult{i};
  }
  return EvalResult{};
}

// ---------------------------------------------------------------------------
// Text format

namespace detail {

inline std::string render_offset(Offset k) {
  if (k == 0) return {};
  return k > 0 ? " + " + std::to_string(k) : " - " + std::to_string(-k);
}

class LineLexer {
 public:
  enum class Kind { Ident, Number, Plus, Minus, Rel, End };

  struct Token {
    Kind kind = Kind::End;
    std::string_view text;
    std::size_t column = 0;
  };

  LineLexer(std::string_view line, std::size_t line_no) : line_(line), line_no_(line_no) { advance(); }

  const Token& peek() const noexcept { return current_; }

  Token take() {
    Token t = current_;
    advance();
    return t;
  }

  [[noreturn]] void fail(const Token& at, const std::string& message) const {
    throw ParseError(line_no_, at.column, message);
  }

  std::size_t line_no() const noexcept { return line_no_; }

 private:
  void advance() {
    while (pos_ < line_.size() && (line_[pos_] == ' ' || line_[pos_] == '\t' || line_[pos_] == '\r')) ++pos_;
    const std::size_t start = pos_;
    current_.column = start + 1;
    if (pos_ >= line_.size()) {
      current_ = Token{Kind::End, {}, start + 1};
      return;
    }
    const char c = line_[pos_];
    auto is_ident_char = [](char ch) {
      return (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') || ch == '_' || (ch >= '0' && ch <= '9');
    };
    if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_') {
      while (pos_ < line_.size() && is_ident_char(line_[pos_])) ++pos_;
      current_ = Token{Kind::Ident, line_.substr(start, pos_ - start), start + 1};
    } else if (c >= '0' && c <= '9') {
      while (pos_ < line_.size() && line_[pos_] >= '0' && line_[pos_] <= '9') ++pos_;
      if (pos_ < line_.size() && is_ident_char(line_[pos_])) {
        throw ParseError(line_no_, pos_ + 1, "unexpected character after number");
      }
      current_ = Token{Kind::Number, line_.substr(start, pos_ - start), start + 1};
    } else if (c == '+') {
      ++pos_;
      current_ = Token{Kind::Plus, line_.substr(start, 1), start + 1};
    } else if (c == '-') {
      ++pos_;
      current_ = Token{Kind::Minus, line_.substr(start, 1), start + 1};
    } else if (c == '<' || c == '>' || c == '=') {
      ++pos_;
      if (c != '=' && pos_ < line_.size() && line_[pos_] == '=') ++pos_;
      current_ = Token{Kind::Rel, line_.substr(start, pos_ - start), start + 1};
    } else {
      throw ParseError(line_no_, start + 1, std::string("unexpected character '") + c + "'");
    }
  }

  std::string_view line_;
  std::size_t line_no_;
  std::size_t pos_ = 0;
  Token current_;
};

inline std::uint64_t parse_unsigned(const LineLexer& lex, const LineLexer::Token& tok, std::uint64_t max) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(tok.text.data(), tok.text.data() + tok.text.size(), value);
  if (ec != std::errc{} || ptr != tok.text.data() + tok.text.size() || value > max) {
    lex.fail(tok, "number '" + std::string(tok.text) + "' out of range");
  }
  return value;
}

inline Relation parse_relation(const LineLexer& lex, const LineLexer::Token& tok) {
  if (tok.kind == LineLexer::Kind::Rel) {
    if (tok.text == "<=") return Relation::LE;
    if (tok.text == "<") return Relation::LT;
    if (tok.text == "=") return Relation::EQ;
    if (tok.text == ">=") return Relation::GE;
    if (tok.text == ">") return Relation::GT;
  }
  lex.fail(tok, "expected one of <= < = >= >");
}

inline Term parse_term(ConstraintSystem& sys, LineLexer& lex) {
  auto name = lex.take();
  if (name.kind != LineLexer::Kind::Ident) lex.fail(name, "expected variable name");
  Term t{sys.variable(name.text), 0};
  if (lex.peek().kind == LineLexer::Kind::Plus || lex.peek().kind == LineLexer::Kind::Minus) {
    const bool negative = lex.take().kind == LineLexer::Kind::Minus;
    auto num = lex.take();
    if (num.kind != LineLexer::Kind::Number) lex.fail(num, "expected unsigned integer offset");
    const auto k = static_cast<Offset>(parse_unsigned(lex, num, static_cast<std::uint64_t>(kMaxOffset)));
    t.offset = negative ? -k : k;
  }
  return t;
}

inline std::string_view strip_comment(std::string_view line) {
  if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
  return line;
}

inline bool is_blank(std::string_view line) {
  return line.find_first_not_of(" \t\r") == std::string_view::npos;
}

}  // namespace detail

/// Parses the `mod N` + one-constraint-per-line format. Variables are numbered
/// in order of first occurrence.
inline ConstraintSystem parse_system(std::string_view text) {
  std::optional<ConstraintSystem> sys;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = detail::strip_comment(text.substr(start, end - start));
    start = end + 1;
    ++line_no;
    if (detail::is_blank(line)) continue;

    detail::LineLexer lex(line, line_no);
    if (!sys) {
      auto head = lex.peek();
      if (head.kind != detail::LineLexer::Kind::Ident || head.text != "mod") {
        throw ModulusError("line " + std::to_string(line_no) + ": missing 'mod N' header");
      }
      lex.take();
      auto num = lex.take();
      if (num.kind != detail::LineLexer::Kind::Number) lex.fail(num, "expected modulus after 'mod'");
      const auto n = detail::parse_unsigned(lex, num, static_cast<std::uint64_t>(kMaxModulus));
      if (lex.peek().kind != detail::LineLexer::Kind::End) lex.fail(lex.peek(), "trailing input after modulus");
      sys.emplace(Modulus(static_cast<std::int64_t>(n)));
      continue;
    }

    try {
      Constraint c;
      c.lhs = detail::parse_term(*sys, lex);
      c.rel = detail::parse_relation(lex, lex.take());
      const auto& next = lex.peek();
      if (next.kind == detail::LineLexer::Kind::Ident) {
        c.rhs = detail::parse_term(*sys, lex);
      } else {
        bool negative = false;
        if (next.kind == detail::LineLexer::Kind::Plus || next.kind == detail::LineLexer::Kind::Minus) {
          negative = lex.take().kind == detail::LineLexer::Kind::Minus;
        }
        auto num = lex.take();
        if (num.kind != detail::LineLexer::Kind::Number) lex.fail(num, "expected variable or integer constant");
        const auto k = static_cast<Offset>(detail::parse_unsigned(lex, num, static_cast<std::uint64_t>(kMaxOffset)));
        c.rhs = Constant{negative ? -k : k};
      }
      if (lex.peek().kind != detail::LineLexer::Kind::End) lex.fail(lex.peek(), "trailing input after constraint");
      sys->add(c);
    } catch (const LimitError& e) {
      throw ParseError(line_no, 1, e.what());
    }
  }
  if (!sys) throw ModulusError("missing 'mod N' header");
  return std::move(*sys);
}

inline std::string render_term(const SymbolTable& symbols, const Term& t) {
  return symbols.name(t.var) + detail::render_offset(t.offset);
}

inline std::string render_constraint(const SymbolTable& symbols, const Constraint& c) {
  std::string out = render_term(symbols, c.lhs);
  out += ' ';
  out += relation_symbol(c.rel);
  out += ' ';
  if (const auto* t = std::get_if<Term>(&c.rhs)) {
    out += render_term(symbols, *t);
  } else {
    out += std::to_string(std::get<Constant>(c.rhs).value);
  }
  return out;
}

/// Canonical text: header line followed by one line per constraint.
inline std::string render_system(const ConstraintSystem& sys) {
  std::string out = "mod " + std::to_string(sys.modulus().value()) + "\n";
  for (const auto& c : sys.constraints()) {
    out += render_constraint(sys.symbols(), c);
    out += '\n';
  }
  return out;
}

}  // namespace modlogic
