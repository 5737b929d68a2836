#include "tlx/entailment.hpp"

#include <stdexcept>

#include "tlx/ontology.hpp"

namespace tlx {

std::string Entailment::to_string() const {
  switch (kind) {
    case Kind::Class:
      return predicate + "(" + subject + ")";
    case Kind::Role:
      return predicate + "(" + subject + "," + object + ")";
    case Kind::Equality:
      return subject + "=" + object;
  }
  return {};
}

Entailment Entailment::parse(std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
      s.remove_suffix(1);
    return s;
  };
  text = trim(text);
  auto bad = [&]() {
    return std::invalid_argument("malformed entailment '" + std::string(text) + "'");
  };
  auto open = text.find('(');
  if (open == std::string_view::npos) {
    auto eq = text.find('=');
    if (eq == std::string_view::npos) throw bad();
    auto a = trim(text.substr(0, eq));
    auto b = trim(text.substr(eq + 1));
    if (!is_valid_name(a) || !is_valid_name(b)) throw bad();
    return equality(std::string(a), std::string(b));
  }
  if (text.back() != ')') throw bad();
  auto pred = trim(text.substr(0, open));
  auto args = text.substr(open + 1, text.size() - open - 2);
  if (!is_valid_name(pred)) throw bad();
  auto comma = args.find(',');
  if (comma == std::string_view::npos) {
    auto a = trim(args);
    if (!is_valid_name(a)) throw bad();
    return class_atom(std::string(pred), std::string(a));
  }
  auto a = trim(args.substr(0, comma));
  auto b = trim(args.substr(comma + 1));
  if (!is_valid_name(a) || !is_valid_name(b)) throw bad();
  return role_atom(std::string(pred), std::string(a), std::string(b));
}

}  // namespace tlx
