// Copyright 2026 The Persona Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Propositional language, formulas, and model checking over the full set of
// worlds (truth assignments) of a small language.
//
// World indexing: the first atom of a Language is the most significant bit of
// a world index, so for atoms {a, b} the world with a=T, b=F has index 2.
// This ordering is part of the trace file format and must not change.

#ifndef PERSONA_LOGIC_HPP_
#define PERSONA_LOGIC_HPP_

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "persona/error.hpp"

namespace persona {

inline constexpr std::size_t kDefaultMaxAtoms = 20;

namespace internal {

inline bool IsIdentStart(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
inline bool IsIdentChar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

}  // namespace internal

class Language {
 public:
  // The empty language has exactly one world.
  Language() = default;

  explicit Language(std::vector<std::string> atoms,
                    std::size_t max_atoms = kDefaultMaxAtoms)
      : atoms_(std::move(atoms)) {
    if (atoms_.size() > max_atoms) {
      throw ValidationError("language_too_large",
                            "language has " + std::to_string(atoms_.size()) +
                                " atoms, the cap is " +
                                std::to_string(max_atoms));
    }
    std::unordered_set<std::string> seen;
    for (const auto& name : atoms_) {
      if (name.empty() || !internal::IsIdentStart(name.front()) ||
          !std::all_of(name.begin(), name.end(), internal::IsIdentChar)) {
        throw ValidationError("invalid_atom",
                              "invalid atom name '" + name + "'");
      }
      if (name == "true" || name == "false") {
        throw ValidationError("invalid_atom",
                              "'" + name + "' is reserved and cannot be an atom");
      }
      if (!seen.insert(name).second) {
        throw ValidationError("duplicate_atom", "duplicate atom '" + name + "'");
      }
    }
  }

  const std::vector<std::string>& atoms() const noexcept { return atoms_; }
  std::size_t size() const noexcept { return atoms_.size(); }
  std::size_t world_count() const noexcept { return std::size_t{1} << atoms_.size(); }

  std::optional<std::size_t> find(std::string_view name) const {
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
      if (atoms_[i] == name) return i;
    }
    return std::nullopt;
  }

  std::size_t index_of(std::string_view name) const {
    if (auto i = find(name)) return *i;
    throw ValidationError("unknown_atom",
                          "unknown atom '" + std::string(name) + "'");
  }

  // Bit of a world index that holds the truth value of atom `atom`.
  std::uint64_t atom_bit(std::size_t atom) const noexcept {
    return std::uint64_t{1} << (atoms_.size() - 1 - atom);
  }

  friend bool operator==(const Language&, const Language&) = default;

 private:
  std::vector<std::string> atoms_;
};

class World {
 public:
  World(const Language& lang, std::uint64_t index)
      : index_(index), atom_count_(lang.size()) {
    if (index >= lang.world_count()) {
      throw ValidationError("invalid_world",
                            "world index " + std::to_string(index) +
                                " out of range");
    }
  }

  std::uint64_t index() const noexcept { return index_; }

  bool value(std::size_t atom) const noexcept {
    return (index_ >> (atom_count_ - 1 - atom)) & 1U;
  }

  // "a=T,b=F" style label.
  std::string label(const Language& lang) const {
    std::string out;
    for (std::size_t i = 0; i < lang.size(); ++i) {
      if (i) out += ',';
      out += lang.atoms()[i];
      out += value(i) ? "=T" : "=F";
    }
    return out;
  }

  friend bool operator==(const World&, const World&) = default;

 private:
  std::uint64_t index_;
  std::size_t atom_count_;
};

// A set of worlds of one language, one byte per world.
class WorldSet {
 public:
  WorldSet() = default;
  explicit WorldSet(std::size_t world_count, bool value = false)
      : bits_(world_count, value ? 1 : 0) {}

  std::size_t universe() const noexcept { return bits_.size(); }
  bool contains(std::size_t world) const { return bits_[world] != 0; }
  void set(std::size_t world, bool value = true) { bits_[world] = value ? 1 : 0; }

  std::size_t count() const {
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), 1));
  }
  bool empty() const { return count() == 0; }

  std::vector<std::uint64_t> indices() const {
    std::vector<std::uint64_t> out;
    for (std::size_t i = 0; i < bits_.size(); ++i) {
      if (bits_[i]) out.push_back(i);
    }
    return out;
  }

  WorldSet& operator&=(const WorldSet& other) {
    for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] &= other.bits_[i];
    return *this;
  }
  WorldSet& operator|=(const WorldSet& other) {
    for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] |= other.bits_[i];
    return *this;
  }
  WorldSet complement() const {
    WorldSet out = *this;
    for (auto& b : out.bits_) b ^= 1;
    return out;
  }
  bool subset_of(const WorldSet& other) const {
    for (std::size_t i = 0; i < bits_.size(); ++i) {
      if (bits_[i] && !other.bits_[i]) return false;
    }
    return true;
  }

  friend bool operator==(const WorldSet&, const WorldSet&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

enum class Connective : std::uint8_t { kConst, kAtom, kNot, kAnd, kOr, kImplies, kIff };

// Immutable propositional formula. Atoms are stored as indices into the
// Language the formula was parsed against; nodes are shared between copies.
class Formula {
 public:
  static Formula constant(bool value) {
    return Formula(std::make_shared<const Node>(Node{Connective::kConst, value, 0, {}, {}}));
  }
  static Formula atom(std::size_t index) {
    return Formula(std::make_shared<const Node>(Node{Connective::kAtom, false, index, {}, {}}));
  }
  static Formula negation(Formula operand) {
    return Formula(std::make_shared<const Node>(
        Node{Connective::kNot, false, 0, std::move(operand.node_), {}}));
  }
  static Formula binary(Connective op, Formula lhs, Formula rhs) {
    return Formula(std::make_shared<const Node>(
        Node{op, false, 0, std::move(lhs.node_), std::move(rhs.node_)}));
  }
  static Formula conjunction(std::span<const Formula> parts) {
    if (parts.empty()) return constant(true);
    Formula out = parts.front();
    for (std::size_t i = 1; i < parts.size(); ++i) {
      out = binary(Connective::kAnd, out, parts[i]);
    }
    return out;
  }

  Connective op() const noexcept { return node_->op; }
  bool const_value() const noexcept { return node_->value; }
  std::size_t atom_index() const noexcept { return node_->atom; }
  Formula lhs() const { return Formula(node_->lhs); }
  Formula rhs() const { return Formula(node_->rhs); }
  Formula operand() const { return Formula(node_->lhs); }

  bool eval(std::uint64_t world_index, std::size_t atom_count) const {
    return Eval(*node_, world_index, atom_count);
  }

  friend bool operator==(const Formula& a, const Formula& b) {
    return Equal(a.node_.get(), b.node_.get());
  }

 private:
  struct Node {
    Connective op;
    bool value;
    std::size_t atom;
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
  };

  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  static bool Eval(const Node& n, std::uint64_t w, std::size_t count) {
    switch (n.op) {
      case Connective::kConst: return n.value;
      case Connective::kAtom: return (w >> (count - 1 - n.atom)) & 1U;
      case Connective::kNot: return !Eval(*n.lhs, w, count);
      case Connective::kAnd: return Eval(*n.lhs, w, count) && Eval(*n.rhs, w, count);
      case Connective::kOr: return Eval(*n.lhs, w, count) || Eval(*n.rhs, w, count);
      case Connective::kImplies: return !Eval(*n.lhs, w, count) || Eval(*n.rhs, w, count);
      case Connective::kIff: return Eval(*n.lhs, w, count) == Eval(*n.rhs, w, count);
    }
    return false;
  }

  static bool Equal(const Node* a, const Node* b) {
    if (a == b) return true;
    if (!a || !b || a->op != b->op) return false;
    switch (a->op) {
      case Connective::kConst: return a->value == b->value;
      case Connective::kAtom: return a->atom == b->atom;
      case Connective::kNot: return Equal(a->lhs.get(), b->lhs.get());
      default:
        return Equal(a->lhs.get(), b->lhs.get()) && Equal(a->rhs.get(), b->rhs.get());
    }
  }

  std::shared_ptr<const Node> node_;
};

namespace internal {

// Recursive-descent parser. Precedence, loosest first:
//   <->  (left-assoc)
//   ->   (right-assoc)
//   |    (left-assoc)
//   &    (left-assoc)
//   ! ~  (prefix)
class FormulaParser {
 public:
  FormulaParser(std::string_view text, const Language& lang) : text_(text), lang_(lang) {}

  Formula parse() {
    skip_space();
    if (pos_ == text_.size()) throw SyntaxError("empty formula", pos_);
    Formula f = parse_iff();
    skip_space();
    if (pos_ != text_.size()) throw SyntaxError("unexpected input", pos_);
    return f;
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(std::string_view tok) {
    skip_space();
    if (text_.substr(pos_, tok.size()) == tok) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }

  Formula parse_iff() {
    Formula lhs = parse_implies();
    while (accept("<->")) lhs = Formula::binary(Connective::kIff, lhs, parse_implies());
    return lhs;
  }

  Formula parse_implies() {
    Formula lhs = parse_or();
    if (accept("->")) return Formula::binary(Connective::kImplies, lhs, parse_implies());
    return lhs;
  }

  Formula parse_or() {
    Formula lhs = parse_and();
    while (accept("|")) lhs = Formula::binary(Connective::kOr, lhs, parse_and());
    return lhs;
  }

  Formula parse_and() {
    Formula lhs = parse_unary();
    while (accept("&")) lhs = Formula::binary(Connective::kAnd, lhs, parse_unary());
    return lhs;
  }

  Formula parse_unary() {
    if (accept("!") || accept("~")) return Formula::negation(parse_unary());
    return parse_primary();
  }

  Formula parse_primary() {
    skip_space();
    if (pos_ == text_.size()) throw SyntaxError("unexpected end of formula", pos_);
    if (accept("(")) {
      Formula inner = parse_iff();
      if (!accept(")")) throw SyntaxError("expected ')'", pos_);
      return inner;
    }
    if (!IsIdentStart(text_[pos_])) {
      throw SyntaxError(std::string("unexpected character '") + text_[pos_] + "'", pos_);
    }
    std::size_t start = pos_;
    while (pos_ < text_.size() && IsIdentChar(text_[pos_])) ++pos_;
    std::string_view name = text_.substr(start, pos_ - start);
    if (name == "true") return Formula::constant(true);
    if (name == "false") return Formula::constant(false);
    auto index = lang_.find(name);
    if (!index) {
      throw ValidationError("unknown_atom", "unknown atom '" + std::string(name) +
                                                "' at position " + std::to_string(start));
    }
    return Formula::atom(*index);
  }

  std::string_view text_;
  const Language& lang_;
  std::size_t pos_ = 0;
};

inline int Precedence(Connective op) {
  switch (op) {
    case Connective::kIff: return 1;
    case Connective::kImplies: return 2;
    case Connective::kOr: return 3;
    case Connective::kAnd: return 4;
    case Connective::kNot: return 5;
    default: return 6;
  }
}

inline void Print(const Formula& f, const Language& lang, std::string& out) {
  auto child = [&](const Formula& c, bool paren) {
    if (paren) out += '(';
    Print(c, lang, out);
    if (paren) out += ')';
  };
  switch (f.op()) {
    case Connective::kConst: out += f.const_value() ? "true" : "false"; return;
    case Connective::kAtom: out += lang.atoms().at(f.atom_index()); return;
    case Connective::kNot:
      out += '!';
      child(f.operand(), Precedence(f.operand().op()) < 5);
      return;
    default: break;
  }
  const int p = Precedence(f.op());
  const bool right_assoc = f.op() == Connective::kImplies;
  const int lp = Precedence(f.lhs().op());
  const int rp = Precedence(f.rhs().op());
  child(f.lhs(), lp < p || (lp == p && right_assoc));
  switch (f.op()) {
    case Connective::kAnd: out += " & "; break;
    case Connective::kOr: out += " | "; break;
    case Connective::kImplies: out += " -> "; break;
    default: out += " <-> "; break;
  }
  child(f.rhs(), rp < p || (rp == p && !right_assoc));
}

inline void TruthSet(const Formula& f, const Language& lang, std::vector<std::uint8_t>& out) {
  const std::size_t worlds = lang.world_count();
  out.assign(worlds, 0);
  switch (f.op()) {
    case Connective::kConst:
      std::fill(out.begin(), out.end(), f.const_value() ? 1 : 0);
      return;
    case Connective::kAtom: {
      const std::uint64_t bit = lang.atom_bit(f.atom_index());
      for (std::size_t w = 0; w < worlds; ++w) out[w] = (w & bit) ? 1 : 0;
      return;
    }
    case Connective::kNot:
      TruthSet(f.operand(), lang, out);
      for (auto& b : out) b ^= 1;
      return;
    default: break;
  }
  std::vector<std::uint8_t> rhs;
  TruthSet(f.lhs(), lang, out);
  TruthSet(f.rhs(), lang, rhs);
  for (std::size_t w = 0; w < worlds; ++w) {
    switch (f.op()) {
      case Connective::kAnd: out[w] = out[w] & rhs[w]; break;
      case Connective::kOr: out[w] = out[w] | rhs[w]; break;
      case Connective::kImplies: out[w] = (out[w] ^ 1) | rhs[w]; break;
      default: out[w] = out[w] == rhs[w] ? 1 : 0; break;
    }
  }
}

}  // namespace internal

inline Formula parse_formula(std::string_view text, const Language& lang) {
  return internal::FormulaParser(text, lang).parse();
}

inline std::string to_string(const Formula& f, const Language& lang) {
  std::string out;
  internal::Print(f, lang, out);
  return out;
}

inline bool eval_world(const Formula& f, const World& w, const Language& lang) {
  return f.eval(w.index(), lang.size());
}

// Worlds where `f` holds, as a membership set.
inline WorldSet truth_set(const Formula& f, const Language& lang) {
  std::vector<std::uint8_t> bits;
  internal::TruthSet(f, lang, bits);
  WorldSet out(lang.world_count());
  for (std::size_t w = 0; w < bits.size(); ++w) out.set(w, bits[w] != 0);
  return out;
}

// Worlds satisfying every formula in `formulas` (all worlds when empty).
inline WorldSet truth_set(std::span<const Formula> formulas, const Language& lang) {
  WorldSet out(lang.world_count(), true);
  for (const auto& f : formulas) out &= truth_set(f, lang);
  return out;
}

// Mod(f) in ascending world-index order.
inline std::vector<World> models_of(const Formula& f, const Language& lang) {
  std::vector<World> out;
  for (auto i : truth_set(f, lang).indices()) out.emplace_back(lang, i);
  return out;
}

inline bool entails(std::span<const Formula> premises, const Formula& f, const Language& lang) {
  return truth_set(premises, lang).subset_of(truth_set(f, lang));
}

inline bool is_consistent(std::span<const Formula> premises, const Language& lang) {
  return !truth_set(premises, lang).empty();
}

// Atom literal view of a formula: `a` or `!a`. Returns nullopt otherwise.
struct Literal {
  std::size_t atom;
  bool positive;
};

inline std::optional<Literal> as_literal(const Formula& f) {
  if (f.op() == Connective::kAtom) return Literal{f.atom_index(), true};
  if (f.op() == Connective::kNot && f.operand().op() == Connective::kAtom) {
    return Literal{f.operand().atom_index(), false};
  }
  return std::nullopt;
}

// Literals of a literal or a conjunction of literals; nullopt for anything else.
inline std::optional<std::vector<Literal>> as_literal_conjunction(const Formula& f) {
  if (auto lit = as_literal(f)) return std::vector<Literal>{*lit};
  if (f.op() != Connective::kAnd) return std::nullopt;
  auto lhs = as_literal_conjunction(f.lhs());
  auto rhs = as_literal_conjunction(f.rhs());
  if (!lhs || !rhs) return std::nullopt;
  lhs->insert(lhs->end(), rhs->begin(), rhs->end());
  return lhs;
}

}  // namespace persona

#endif  // PERSONA_LOGIC_HPP_
