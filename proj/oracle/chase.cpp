#include "chase.hpp"

#include <map>
#include <string>
#include <tuple>

namespace tlx::oracle {

namespace {

bool is_witness(const std::string& e) { return !e.empty() && e[0] == '?'; }

class Chase {
 public:
  void run(std::span<const TBoxAxiom> tbox, std::span<const ABoxAxiom> abox) {
    for (const auto& ax : tbox) {
      if (const auto* g = std::get_if<Gci>(&ax)) {
        gcis_.push_back(*g);
        note_nominals(g->lhs);
        note_nominals(g->rhs);
      } else if (const auto* ri = std::get_if<RoleInclusion>(&ax)) {
        incl_.push_back(*ri);
      } else {
        chains_.push_back(std::get<RoleChain>(ax));
      }
    }
    std::vector<Inequality> diff;
    for (const auto& ax : abox) {
      if (const auto* ca = std::get_if<ClassAssertion>(&ax)) {
        element(ca->individual);
        note_nominals(ca->concept_expr);
      } else if (const auto* ra = std::get_if<RoleAssertion>(&ax)) {
        element(ra->subject);
        element(ra->object);
      } else if (const auto* eq = std::get_if<Equality>(&ax)) {
        element(eq->a);
        element(eq->b);
      } else {
        const auto& ne = std::get<Inequality>(ax);
        element(ne.a);
        element(ne.b);
        diff.push_back(ne);
      }
    }
    for (const auto& ax : abox) {
      if (const auto* ca = std::get_if<ClassAssertion>(&ax)) {
        apply(ca->concept_expr, ca->individual);
      } else if (const auto* ra = std::get_if<RoleAssertion>(&ax)) {
        roles_.insert({ra->role, ra->subject, ra->object});
      } else if (const auto* eq = std::get_if<Equality>(&ax)) {
        merge(eq->a, eq->b);
      }
    }
    canonicalize();

    bool changed = true;
    while (changed) {
      std::size_t before = size();
      for (const auto& g : gcis_) {
        std::set<std::string> elems = elements_;
        for (const auto& x : elems)
          if (holds(g.lhs, x)) apply(g.rhs, x);
      }
      auto snapshot = roles_;
      for (const auto& [r, x, y] : snapshot) {
        for (const auto& ri : incl_)
          if (ri.sub == r) roles_.insert({ri.sup, x, y});
        for (const auto& rc : chains_) {
          if (rc.first != r) continue;
          for (const auto& [r2, y2, z] : snapshot)
            if (r2 == rc.second && y2 == y) roles_.insert({rc.sup, x, z});
        }
      }
      bool merged = merged_;
      canonicalize();
      changed = merged || size() != before;
    }

    for (const auto& ne : diff)
      if (rep(ne.a) == rep(ne.b)) inconsistent_ = true;
    for (const auto& [c, x] : classes_)
      if (c == "Bottom") inconsistent_ = true;
  }

  ChaseResult result() const {
    ChaseResult out;
    out.inconsistent = inconsistent_;
    for (const auto& [c, x] : classes_) {
      if (c == "Bottom" || is_witness(x)) continue;
      out.atoms.insert(Entailment::class_atom(c, x));
    }
    for (const auto& [r, x, y] : roles_) {
      if (is_witness(x) || is_witness(y)) continue;
      out.atoms.insert(Entailment::role_atom(r, x, y));
    }
    return out;
  }

 private:
  std::size_t size() const { return classes_.size() + roles_.size() + elements_.size(); }

  void note_nominals(const ConceptExpr& c) {
    if (c.kind() == ConceptExpr::Kind::Nominal) element(c.name());
    for (const auto& op : c.operands()) note_nominals(op);
  }

  void element(const std::string& e) {
    if (!parent_.count(e)) parent_[e] = e;
    elements_.insert(rep(e));
  }

  std::string rep(const std::string& e) const {
    auto it = parent_.find(e);
    if (it == parent_.end()) return e;
    std::string cur = e;
    while (parent_.at(cur) != cur) cur = parent_.at(cur);
    return cur;
  }

  static bool prefer(const std::string& a, const std::string& b) {
    return std::make_tuple(is_witness(a), a) < std::make_tuple(is_witness(b), b);
  }

  void merge(const std::string& a, const std::string& b) {
    element(a);
    element(b);
    std::string ra = rep(a), rb = rep(b);
    if (ra == rb) return;
    if (prefer(rb, ra)) std::swap(ra, rb);
    parent_[rb] = ra;
    merged_ = true;
  }

  void canonicalize() {
    merged_ = false;
    std::set<std::pair<std::string, std::string>> classes;
    for (const auto& [c, x] : classes_) classes.insert({c, rep(x)});
    std::set<std::tuple<std::string, std::string, std::string>> roles;
    for (const auto& [r, x, y] : roles_) roles.insert({r, rep(x), rep(y)});
    std::set<std::string> elems;
    for (const auto& e : elements_) elems.insert(rep(e));
    classes_.swap(classes);
    roles_.swap(roles);
    elements_.swap(elems);
  }

  bool holds(const ConceptExpr& c, const std::string& x) const {
    switch (c.kind()) {
      case ConceptExpr::Kind::Top:
        return true;
      case ConceptExpr::Kind::Bottom:
        return classes_.count({"Bottom", rep(x)}) > 0;
      case ConceptExpr::Kind::Atomic:
        return classes_.count({c.name(), rep(x)}) > 0;
      case ConceptExpr::Kind::Nominal:
        return rep(x) == rep(c.name());
      case ConceptExpr::Kind::Conjunction:
        for (const auto& op : c.operands())
          if (!holds(op, x)) return false;
        return true;
      case ConceptExpr::Kind::Existential:
        for (const auto& [r, s, o] : roles_)
          if (r == c.name() && s == rep(x) && holds(c.filler(), o)) return true;
        return false;
    }
    return false;
  }

  void apply(const ConceptExpr& c, const std::string& x) {
    switch (c.kind()) {
      case ConceptExpr::Kind::Top:
        return;
      case ConceptExpr::Kind::Bottom:
        classes_.insert({"Bottom", rep(x)});
        return;
      case ConceptExpr::Kind::Atomic:
        classes_.insert({c.name(), rep(x)});
        return;
      case ConceptExpr::Kind::Nominal:
        merge(x, c.name());
        return;
      case ConceptExpr::Kind::Conjunction:
        for (const auto& op : c.operands()) apply(op, x);
        return;
      case ConceptExpr::Kind::Existential: {
        const ConceptExpr& f = c.filler();
        if (f.kind() == ConceptExpr::Kind::Nominal) {
          roles_.insert({c.name(), rep(x), rep(f.name())});
          return;
        }
        std::string w = "?w" + f.to_string();
        element(w);
        roles_.insert({c.name(), rep(x), rep(w)});
        apply(f, w);
        return;
      }
    }
  }

  std::vector<Gci> gcis_;
  std::vector<RoleInclusion> incl_;
  std::vector<RoleChain> chains_;
  std::map<std::string, std::string> parent_;
  std::set<std::string> elements_;
  std::set<std::pair<std::string, std::string>> classes_;
  std::set<std::tuple<std::string, std::string, std::string>> roles_;
  bool merged_ = false;
  bool inconsistent_ = false;
};

ConceptExpr from_basic(const BasicConcept& c) {
  switch (c.kind) {
    case BasicConcept::Kind::Top:
      return ConceptExpr::top();
    case BasicConcept::Kind::Bottom:
      return ConceptExpr::bottom();
    case BasicConcept::Kind::Atomic:
      return ConceptExpr::atomic(c.name);
    case BasicConcept::Kind::Nominal:
      return ConceptExpr::nominal(c.name);
  }
  return ConceptExpr::top();
}

}  // namespace

ChaseResult chase(std::span<const TBoxAxiom> tbox, std::span<const ABoxAxiom> abox) {
  Chase c;
  c.run(tbox, abox);
  return c.result();
}

std::vector<TBoxAxiom> to_axioms(const NormalizedTBox& tbox) {
  std::vector<TBoxAxiom> out;
  for (const auto& r : tbox.subsumptions) out.push_back(Gci{from_basic(r.sub), from_basic(r.sup)});
  for (const auto& r : tbox.conjunctions)
    out.push_back(Gci{ConceptExpr::conjunction({from_basic(r.left), from_basic(r.right)}),
                      from_basic(r.sup)});
  for (const auto& r : tbox.exists_lhs)
    out.push_back(Gci{ConceptExpr::existential(r.role, from_basic(r.filler)), from_basic(r.sup)});
  for (const auto& r : tbox.exists_rhs)
    out.push_back(Gci{from_basic(r.sub), ConceptExpr::existential(r.role, from_basic(r.filler))});
  for (const auto& r : tbox.role_inclusions) out.push_back(r);
  for (const auto& r : tbox.role_chains) out.push_back(r);
  return out;
}

}  // namespace tlx::oracle
