#pragma once

#include <compare>
#include <cstddef>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace tlx {

/// Concept expression of the EL++ fragment:
///   Top | Bottom | A | C1 and ... and Cn | some r.C | {a}
///
/// Conjunctions are kept canonical: nested conjunctions are flattened,
/// operands are sorted and deduplicated, and a conjunction that collapses to
/// a single operand is replaced by that operand. Two expressions that differ
/// only in conjunct order therefore compare equal.
class ConceptExpr {
 public:
  enum class Kind { Top, Bottom, Atomic, Conjunction, Existential, Nominal };

  ConceptExpr() = default;  // Top
  static ConceptExpr top();
  static ConceptExpr bottom();
  static ConceptExpr atomic(std::string name);
  static ConceptExpr nominal(std::string individual);
  static ConceptExpr existential(std::string role, ConceptExpr filler);
  static ConceptExpr conjunction(std::vector<ConceptExpr> operands);

  Kind kind() const { return kind_; }
  // Concept name (Atomic), role name (Existential) or individual (Nominal).
  const std::string& name() const { return name_; }
  const std::vector<ConceptExpr>& operands() const { return operands_; }
  const ConceptExpr& filler() const { return operands_.front(); }

  // Top, Bottom, Atomic or Nominal.
  bool is_basic() const;

  std::string to_string() const;

  std::strong_ordering operator<=>(const ConceptExpr& other) const;
  bool operator==(const ConceptExpr& other) const {
    return (*this <=> other) == std::strong_ordering::equal;
  }

 private:
  ConceptExpr(Kind kind, std::string name, std::vector<ConceptExpr> operands)
      : kind_(kind), name_(std::move(name)), operands_(std::move(operands)) {}

  Kind kind_ = Kind::Top;
  std::string name_;
  std::vector<ConceptExpr> operands_;
};

struct Gci {
  ConceptExpr lhs;
  ConceptExpr rhs;
  auto operator<=>(const Gci&) const = default;
  bool operator==(const Gci&) const = default;
};

struct RoleInclusion {
  std::string sub;
  std::string sup;
  auto operator<=>(const RoleInclusion&) const = default;
};

// first o second [= sup
struct RoleChain {
  std::string first;
  std::string second;
  std::string sup;
  auto operator<=>(const RoleChain&) const = default;
};

using TBoxAxiom = std::variant<Gci, RoleInclusion, RoleChain>;

struct ClassAssertion {
  ConceptExpr concept_expr;
  std::string individual;
  auto operator<=>(const ClassAssertion&) const = default;
  bool operator==(const ClassAssertion&) const = default;
};

struct RoleAssertion {
  std::string role;
  std::string subject;
  std::string object;
  auto operator<=>(const RoleAssertion&) const = default;
};

struct Equality {
  std::string a;
  std::string b;
  auto operator<=>(const Equality&) const = default;
};

struct Inequality {
  std::string a;
  std::string b;
  auto operator<=>(const Inequality&) const = default;
};

using ABoxAxiom = std::variant<ClassAssertion, RoleAssertion, Equality, Inequality>;

struct Signature {
  std::set<std::string> concepts;
  std::set<std::string> roles;
  std::set<std::string> individuals;
};

struct Ontology {
  std::vector<TBoxAxiom> tbox;
  std::vector<ABoxAxiom> abox;
  Signature signature;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class SignatureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Normalization names live in this namespace: "_N" followed by digits.
bool is_fresh_name(std::string_view name);
bool is_valid_name(std::string_view name);

/// Parses the line-oriented functional syntax (one axiom per line, '#'
/// starts a comment). Throws ParseError or SignatureError.
Ontology parse_ontology(std::string_view text);

ConceptExpr parse_concept(std::string_view text);

std::string to_string(const TBoxAxiom& axiom);
std::string to_string(const ABoxAxiom& axiom);
std::string serialize(const Ontology& ontology);

// Adds every name used by the axioms to the signature; throws SignatureError
// when a name lands in two partitions.
void collect_signature(const TBoxAxiom& axiom, Signature& signature);
void collect_signature(const ABoxAxiom& axiom, Signature& signature);

}  // namespace tlx
