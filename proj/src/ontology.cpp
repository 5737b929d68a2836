#include "tlx/ontology.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace tlx {

ConceptExpr ConceptExpr::top() { return {Kind::Top, {}, {}}; }
ConceptExpr ConceptExpr::bottom() { return {Kind::Bottom, {}, {}}; }
ConceptExpr ConceptExpr::atomic(std::string name) { return {Kind::Atomic, std::move(name), {}}; }
ConceptExpr ConceptExpr::nominal(std::string individual) {
  return {Kind::Nominal, std::move(individual), {}};
}
ConceptExpr ConceptExpr::existential(std::string role, ConceptExpr filler) {
  std::vector<ConceptExpr> ops;
  ops.push_back(std::move(filler));
  return {Kind::Existential, std::move(role), std::move(ops)};
}

ConceptExpr ConceptExpr::conjunction(std::vector<ConceptExpr> operands) {
  std::vector<ConceptExpr> flat;
  for (auto& op : operands) {
    if (op.kind() == Kind::Conjunction) {
      for (const auto& inner : op.operands()) flat.push_back(inner);
    } else if (op.kind() != Kind::Top) {
      flat.push_back(std::move(op));
    }
  }
  std::sort(flat.begin(), flat.end());
  flat.erase(std::unique(flat.begin(), flat.end()), flat.end());
  if (flat.empty()) return top();
  if (flat.size() == 1) return std::move(flat.front());
  return {Kind::Conjunction, {}, std::move(flat)};
}

bool ConceptExpr::is_basic() const {
  return kind_ == Kind::Top || kind_ == Kind::Bottom || kind_ == Kind::Atomic ||
         kind_ == Kind::Nominal;
}

std::string ConceptExpr::to_string() const {
  switch (kind_) {
    case Kind::Top:
      return "Top";
    case Kind::Bottom:
      return "Bottom";
    case Kind::Atomic:
      return name_;
    case Kind::Nominal:
      return "Nom(" + name_ + ")";
    case Kind::Existential:
      return "Some(" + name_ + " " + filler().to_string() + ")";
    case Kind::Conjunction: {
      std::string out = "And(";
      for (std::size_t i = 0; i < operands_.size(); ++i) {
        if (i) out += ' ';
        out += operands_[i].to_string();
      }
      return out + ")";
    }
  }
  return {};
}

std::strong_ordering ConceptExpr::operator<=>(const ConceptExpr& other) const {
  if (auto c = kind_ <=> other.kind_; c != 0) return c;
  if (auto c = name_ <=> other.name_; c != 0) return c;
  return std::lexicographical_compare_three_way(operands_.begin(), operands_.end(),
                                                other.operands_.begin(), other.operands_.end());
}

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) +
                         ": " + what),
      line_(line),
      column_(column) {}

bool is_fresh_name(std::string_view name) {
  if (name.size() < 3 || name[0] != '_' || name[1] != 'N') return false;
  return std::all_of(name.begin() + 2, name.end(),
                     [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

namespace {

bool is_name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '/' ||
         c == ':' || c == '-';
}

}  // namespace

bool is_valid_name(std::string_view name) {
  return !name.empty() && std::all_of(name.begin(), name.end(), is_name_char);
}

namespace {

enum class Partition { Concept, Role, Individual };

const char* partition_name(Partition p) {
  switch (p) {
    case Partition::Concept:
      return "concept";
    case Partition::Role:
      return "role";
    case Partition::Individual:
      return "individual";
  }
  return "";
}

void add_name(Signature& sig, const std::string& name, Partition p) {
  auto clash = [&](const std::set<std::string>& set, Partition other) {
    if (set.count(name)) {
      throw SignatureError("name '" + name + "' used both as " + partition_name(other) + " and " +
                           partition_name(p));
    }
  };
  switch (p) {
    case Partition::Concept:
      clash(sig.roles, Partition::Role);
      clash(sig.individuals, Partition::Individual);
      sig.concepts.insert(name);
      break;
    case Partition::Role:
      clash(sig.concepts, Partition::Concept);
      clash(sig.individuals, Partition::Individual);
      sig.roles.insert(name);
      break;
    case Partition::Individual:
      clash(sig.concepts, Partition::Concept);
      clash(sig.roles, Partition::Role);
      sig.individuals.insert(name);
      break;
  }
}

void collect_concept(const ConceptExpr& c, Signature& sig) {
  switch (c.kind()) {
    case ConceptExpr::Kind::Atomic:
      add_name(sig, c.name(), Partition::Concept);
      break;
    case ConceptExpr::Kind::Nominal:
      add_name(sig, c.name(), Partition::Individual);
      break;
    case ConceptExpr::Kind::Existential:
      add_name(sig, c.name(), Partition::Role);
      collect_concept(c.filler(), sig);
      break;
    case ConceptExpr::Kind::Conjunction:
      for (const auto& op : c.operands()) collect_concept(op, sig);
      break;
    default:
      break;
  }
}

}  // namespace

void collect_signature(const TBoxAxiom& axiom, Signature& sig) {
  std::visit(
      [&](const auto& ax) {
        using T = std::decay_t<decltype(ax)>;
        if constexpr (std::is_same_v<T, Gci>) {
          collect_concept(ax.lhs, sig);
          collect_concept(ax.rhs, sig);
        } else if constexpr (std::is_same_v<T, RoleInclusion>) {
          add_name(sig, ax.sub, Partition::Role);
          add_name(sig, ax.sup, Partition::Role);
        } else {
          add_name(sig, ax.first, Partition::Role);
          add_name(sig, ax.second, Partition::Role);
          add_name(sig, ax.sup, Partition::Role);
        }
      },
      axiom);
}

void collect_signature(const ABoxAxiom& axiom, Signature& sig) {
  std::visit(
      [&](const auto& ax) {
        using T = std::decay_t<decltype(ax)>;
        if constexpr (std::is_same_v<T, ClassAssertion>) {
          collect_concept(ax.concept_expr, sig);
          add_name(sig, ax.individual, Partition::Individual);
        } else if constexpr (std::is_same_v<T, RoleAssertion>) {
          add_name(sig, ax.role, Partition::Role);
          add_name(sig, ax.subject, Partition::Individual);
          add_name(sig, ax.object, Partition::Individual);
        } else {
          add_name(sig, ax.a, Partition::Individual);
          add_name(sig, ax.b, Partition::Individual);
        }
      },
      axiom);
}

namespace {

// Recursive-descent reader over a single axiom line.
class LineParser {
 public:
  LineParser(std::string_view text, std::size_t line) : text_(text), line_(line) {}

  std::variant<TBoxAxiom, ABoxAxiom> axiom() {
    std::size_t start = pos_;
    std::string head = word();
    expect('(');
    std::variant<TBoxAxiom, ABoxAxiom> result;
    if (head == "SubClassOf") {
      ConceptExpr lhs = concept_expr();
      space();
      ConceptExpr rhs = concept_expr();
      result = TBoxAxiom{Gci{std::move(lhs), std::move(rhs)}};
    } else if (head == "SubRole") {
      std::string sub = name("role");
      space();
      std::string sup = name("role");
      result = TBoxAxiom{RoleInclusion{sub, sup}};
    } else if (head == "RoleChain") {
      std::string a = name("role");
      space();
      std::string b = name("role");
      space();
      std::string s = name("role");
      result = TBoxAxiom{RoleChain{a, b, s}};
    } else if (head == "ClassAssert") {
      ConceptExpr c = concept_expr();
      space();
      std::string ind = name("individual");
      result = ABoxAxiom{ClassAssertion{std::move(c), ind}};
    } else if (head == "RoleAssert") {
      std::string r = name("role");
      space();
      std::string a = name("individual");
      space();
      std::string b = name("individual");
      result = ABoxAxiom{RoleAssertion{r, a, b}};
    } else if (head == "SameInd" || head == "DiffInd") {
      std::string a = name("individual");
      space();
      std::size_t b_col = pos_;
      std::string b = name("individual");
      if (head == "SameInd") {
        result = ABoxAxiom{Equality{a, b}};
      } else {
        if (a == b) fail(b_col, "DiffInd(" + a + " " + a + ") is trivially inconsistent");
        result = ABoxAxiom{Inequality{a, b}};
      }
    } else {
      fail(start, "unknown axiom '" + head + "'");
    }
    expect(')');
    skip_trailing();
    if (pos_ != text_.size()) fail(pos_, "unexpected trailing input");
    return result;
  }

  ConceptExpr concept_expr() {
    std::size_t start = pos_;
    std::string head = word();
    if (pos_ < text_.size() && text_[pos_] == '(') {
      ++pos_;
      if (head == "And") {
        std::vector<ConceptExpr> ops;
        ops.push_back(concept_expr());
        while (pos_ < text_.size() && text_[pos_] == ' ') {
          space();
          ops.push_back(concept_expr());
        }
        if (ops.size() < 2) fail(start, "And() needs at least two operands");
        expect(')');
        return ConceptExpr::conjunction(std::move(ops));
      }
      if (head == "Some") {
        std::string role = name("role");
        space();
        ConceptExpr filler = concept_expr();
        expect(')');
        return ConceptExpr::existential(role, std::move(filler));
      }
      if (head == "Nom") {
        std::string ind = name("individual");
        expect(')');
        return ConceptExpr::nominal(ind);
      }
      fail(start, "unknown constructor '" + head + "'");
    }
    if (head == "Top") return ConceptExpr::top();
    if (head == "Bottom") return ConceptExpr::bottom();
    check_user_name(head, start);
    return ConceptExpr::atomic(head);
  }

  void skip_trailing() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\r'))
      ++pos_;
  }

  [[noreturn]] void fail(std::size_t col, const std::string& what) const {
    throw ParseError(line_, col + 1, what);
  }

 private:
  std::string word() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && is_name_char(text_[pos_])) ++pos_;
    if (start == pos_) {
      if (pos_ >= text_.size()) fail(pos_, "unexpected end of line");
      fail(pos_, std::string("unexpected character '") + text_[pos_] + "'");
    }
    return std::string(text_.substr(start, pos_ - start));
  }

  std::string name(const char* what) {
    std::size_t start = pos_;
    std::string n = word();
    if (n == "Top" || n == "Bottom") fail(start, std::string("reserved word used as ") + what);
    check_user_name(n, start);
    return n;
  }

  void check_user_name(const std::string& n, std::size_t col) const {
    if (is_fresh_name(n)) fail(col, "name '" + n + "' is in the reserved normalization namespace");
  }

  void space() {
    if (pos_ >= text_.size() || text_[pos_] != ' ') fail(pos_, "expected ' '");
    while (pos_ < text_.size() && text_[pos_] == ' ') ++pos_;
  }

  void expect(char c) {
    if (pos_ >= text_.size() || text_[pos_] != c) fail(pos_, std::string("expected '") + c + "'");
    ++pos_;
  }

  std::string_view text_;
  std::size_t line_;
  std::size_t pos_ = 0;
};

}  // namespace

Ontology parse_ontology(std::string_view text) {
  Ontology out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    ++line_no;
    pos = eol + 1;

    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    std::size_t indent = 0;
    while (indent < line.size() && (line[indent] == ' ' || line[indent] == '\t')) ++indent;
    std::size_t end = line.size();
    while (end > indent && (line[end - 1] == ' ' || line[end - 1] == '\t' || line[end - 1] == '\r'))
      --end;
    if (end == indent) {
      if (eol == text.size()) break;
      continue;
    }

    LineParser parser(line.substr(indent, end - indent), line_no);
    auto parsed = parser.axiom();
    try {
      if (auto* t = std::get_if<TBoxAxiom>(&parsed)) {
        collect_signature(*t, out.signature);
        out.tbox.push_back(std::move(*t));
      } else {
        auto& a = std::get<ABoxAxiom>(parsed);
        collect_signature(a, out.signature);
        out.abox.push_back(std::move(a));
      }
    } catch (const SignatureError& e) {
      throw SignatureError("line " + std::to_string(line_no) + ": " + e.what());
    }
    if (eol == text.size()) break;
  }
  return out;
}

ConceptExpr parse_concept(std::string_view text) {
  LineParser parser(text, 1);
  ConceptExpr c = parser.concept_expr();
  parser.skip_trailing();
  return c;
}

std::string to_string(const TBoxAxiom& axiom) {
  return std::visit(
      [](const auto& ax) -> std::string {
        using T = std::decay_t<decltype(ax)>;
        if constexpr (std::is_same_v<T, Gci>) {
          return "SubClassOf(" + ax.lhs.to_string() + " " + ax.rhs.to_string() + ")";
        } else if constexpr (std::is_same_v<T, RoleInclusion>) {
          return "SubRole(" + ax.sub + " " + ax.sup + ")";
        } else {
          return "RoleChain(" + ax.first + " " + ax.second + " " + ax.sup + ")";
        }
      },
      axiom);
}

std::string to_string(const ABoxAxiom& axiom) {
  return std::visit(
      [](const auto& ax) -> std::string {
        using T = std::decay_t<decltype(ax)>;
        if constexpr (std::is_same_v<T, ClassAssertion>) {
          return "ClassAssert(" + ax.concept_expr.to_string() + " " + ax.individual + ")";
        } else if constexpr (std::is_same_v<T, RoleAssertion>) {
          return "RoleAssert(" + ax.role + " " + ax.subject + " " + ax.object + ")";
        } else if constexpr (std::is_same_v<T, Equality>) {
          return "SameInd(" + ax.a + " " + ax.b + ")";
        } else {
          return "DiffInd(" + ax.a + " " + ax.b + ")";
        }
      },
      axiom);
}

std::string serialize(const Ontology& ontology) {
  std::ostringstream out;
  for (const auto& ax : ontology.tbox) out << to_string(ax) << '\n';
  for (const auto& ax : ontology.abox) out << to_string(ax) << '\n';
  return out.str();
}

}  // namespace tlx
