#include "tlx/normalize.hpp"

#include <sstream>
#include <stdexcept>

namespace tlx {

std::string BasicConcept::to_string() const {
  switch (kind) {
    case Kind::Top:
      return "Top";
    case Kind::Bottom:
      return "Bottom";
    case Kind::Atomic:
      return name;
    case Kind::Nominal:
      return "Nom(" + name + ")";
  }
  return {};
}

std::size_t NormalizedTBox::rule_count() const {
  return subsumptions.size() + conjunctions.size() + exists_lhs.size() + exists_rhs.size() +
         role_inclusions.size() + role_chains.size();
}

std::string NormalizedTBox::to_string() const {
  std::ostringstream out;
  for (const auto& r : subsumptions) out << r.sub.to_string() << " [= " << r.sup.to_string() << '\n';
  for (const auto& r : conjunctions)
    out << r.left.to_string() << " and " << r.right.to_string() << " [= " << r.sup.to_string()
        << '\n';
  for (const auto& r : exists_lhs)
    out << "some " << r.role << '.' << r.filler.to_string() << " [= " << r.sup.to_string() << '\n';
  for (const auto& r : exists_rhs)
    out << r.sub.to_string() << " [= some " << r.role << '.' << r.filler.to_string() << '\n';
  for (const auto& r : role_inclusions) out << r.sub << " [= " << r.sup << '\n';
  for (const auto& r : role_chains) out << r.first << " o " << r.second << " [= " << r.sup << '\n';
  return out.str();
}

namespace {

BasicConcept as_basic(const ConceptExpr& c) {
  switch (c.kind()) {
    case ConceptExpr::Kind::Top:
      return BasicConcept::top();
    case ConceptExpr::Kind::Bottom:
      return BasicConcept::bottom();
    case ConceptExpr::Kind::Atomic:
      return BasicConcept::atomic(c.name());
    case ConceptExpr::Kind::Nominal:
      return BasicConcept::nominal(c.name());
    default:
      throw std::logic_error("not a basic concept: " + c.to_string());
  }
}

class Normalizer {
 public:
  explicit Normalizer(NormalizedTBox& out) : out_(out) {}

  void axiom(const TBoxAxiom& ax) {
    if (const auto* g = std::get_if<Gci>(&ax)) {
      gci(g->lhs, g->rhs);
    } else if (const auto* ri = std::get_if<RoleInclusion>(&ax)) {
      if (ri->sub != ri->sup) out_.role_inclusions.insert(*ri);
    } else {
      out_.role_chains.insert(std::get<RoleChain>(ax));
    }
  }

  void gci(const ConceptExpr& lhs, const ConceptExpr& rhs) {
    if (rhs.kind() == ConceptExpr::Kind::Top || lhs.kind() == ConceptExpr::Kind::Bottom) return;
    if (rhs.is_basic()) {
      emit_lhs(lhs, as_basic(rhs));
      return;
    }
    rhs_from(lhs_to_basic(lhs), rhs);
  }

  // Emits rules making `sub` [= rhs hold, sub already basic.
  void rhs_from(const BasicConcept& sub, const ConceptExpr& rhs) {
    switch (rhs.kind()) {
      case ConceptExpr::Kind::Top:
        return;
      case ConceptExpr::Kind::Conjunction:
        for (const auto& op : rhs.operands()) rhs_from(sub, op);
        return;
      case ConceptExpr::Kind::Existential: {
        const ConceptExpr& filler = rhs.filler();
        if (filler.is_basic()) {
          out_.exists_rhs.insert({sub, rhs.name(), as_basic(filler)});
        } else {
          BasicConcept x = fresh();
          out_.exists_rhs.insert({sub, rhs.name(), x});
          rhs_from(x, filler);
        }
        return;
      }
      default:
        if (sub != as_basic(rhs)) out_.subsumptions.insert({sub, as_basic(rhs)});
        return;
    }
  }

  // Emits rules making lhs [= target hold.
  void emit_lhs(const ConceptExpr& lhs, const BasicConcept& target) {
    switch (lhs.kind()) {
      case ConceptExpr::Kind::Bottom:
        return;
      case ConceptExpr::Kind::Conjunction: {
        std::vector<BasicConcept> parts;
        for (const auto& op : lhs.operands()) parts.push_back(lhs_to_basic(op));
        BasicConcept acc = parts[0];
        for (std::size_t i = 1; i < parts.size(); ++i) {
          BasicConcept sup = (i + 1 == parts.size()) ? target : fresh();
          out_.conjunctions.insert({acc, parts[i], sup});
          acc = sup;
        }
        return;
      }
      case ConceptExpr::Kind::Existential:
        out_.exists_lhs.insert({lhs.name(), lhs_to_basic(lhs.filler()), target});
        return;
      default: {
        BasicConcept sub = as_basic(lhs);
        if (sub != target) out_.subsumptions.insert({sub, target});
        return;
      }
    }
  }

  BasicConcept lhs_to_basic(const ConceptExpr& c) {
    if (c.is_basic()) return as_basic(c);
    BasicConcept x = fresh();
    emit_lhs(c, x);
    return x;
  }

  BasicConcept fresh() {
    std::string name = "_N" + std::to_string(out_.fresh_concepts.size() + 1);
    out_.fresh_concepts.insert(name);
    return BasicConcept::atomic(std::move(name));
  }

 private:
  NormalizedTBox& out_;
};

}  // namespace

NormalizedTBox normalize_tbox(std::span<const TBoxAxiom> tbox) {
  NormalizedTBox out;
  extend_normalized(out, tbox);
  return out;
}

void extend_normalized(NormalizedTBox& target, std::span<const TBoxAxiom> tbox) {
  Normalizer n(target);
  for (const auto& ax : tbox) n.axiom(ax);
}

BasicConcept add_rhs_definition(NormalizedTBox& target, const ConceptExpr& expr) {
  Normalizer n(target);
  if (expr.is_basic()) return as_basic(expr);
  BasicConcept x = n.fresh();
  n.rhs_from(x, expr);
  return x;
}

}  // namespace tlx
