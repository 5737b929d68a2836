#pragma once

#include <compare>
#include <functional>
#include <string>
#include <string_view>

namespace tlx {

/// A ground atom over named individuals: C(a), r(a,b) or a = b.
///
/// Ordering is lexicographic on (predicate, subject, object), which is the
/// canonical total order used for sorted dumps and context enumeration.
struct Entailment {
  enum class Kind : unsigned char { Class, Role, Equality };

  Kind kind = Kind::Class;
  std::string predicate;
  std::string subject;
  std::string object;

  static Entailment class_atom(std::string concept_name, std::string individual) {
    return {Kind::Class, std::move(concept_name), std::move(individual), {}};
  }
  static Entailment role_atom(std::string role, std::string subject, std::string object) {
    return {Kind::Role, std::move(role), std::move(subject), std::move(object)};
  }
  static Entailment equality(std::string a, std::string b) {
    return {Kind::Equality, "=", std::move(a), std::move(b)};
  }

  // "C(a)", "r(a,b)" or "a=b".
  std::string to_string() const;

  // Inverse of to_string; throws std::invalid_argument on malformed text.
  static Entailment parse(std::string_view text);

  std::strong_ordering operator<=>(const Entailment& other) const {
    if (auto c = predicate <=> other.predicate; c != 0) return c;
    if (auto c = subject <=> other.subject; c != 0) return c;
    if (auto c = object <=> other.object; c != 0) return c;
    return kind <=> other.kind;
  }
  bool operator==(const Entailment& other) const = default;
};

struct EntailmentHash {
  std::size_t operator()(const Entailment& e) const noexcept {
    std::size_t h = std::hash<std::string>{}(e.predicate);
    h ^= std::hash<std::string>{}(e.subject) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h ^= std::hash<std::string>{}(e.object) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h ^ static_cast<std::size_t>(e.kind);
  }
};

}  // namespace tlx
