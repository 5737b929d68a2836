#include "tlx/reasoner.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "tlx/union_find.hpp"

namespace tlx {

bool EntailmentClosure::mentions(std::string_view individual) const {
  return representative_.find(individual) != representative_.end();
}

std::string EntailmentClosure::representative(std::string_view individual) const {
  auto it = representative_.find(individual);
  return it == representative_.end() ? std::string(individual) : it->second;
}

bool EntailmentClosure::entails(const Entailment& g) const {
  switch (g.kind) {
    case Entailment::Kind::Equality:
      return representative(g.subject) == representative(g.object);
    case Entailment::Kind::Class:
      if (g.predicate == "Top") return mentions(g.subject);
      return std::binary_search(all_atoms_.begin(), all_atoms_.end(),
                                Entailment::class_atom(g.predicate, representative(g.subject)));
    case Entailment::Kind::Role:
      return std::binary_search(
          all_atoms_.begin(), all_atoms_.end(),
          Entailment::role_atom(g.predicate, representative(g.subject), representative(g.object)));
  }
  return false;
}

std::string EntailmentClosure::dump() const {
  std::string out;
  for (const auto& a : atoms_) {
    out += a.to_string();
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// TBox saturation

std::set<SubsumptionRule> saturate_tbox(const NormalizedTBox& tbox) {
  std::map<BasicConcept, int> node_of;
  std::vector<BasicConcept> nodes;
  auto node = [&](const BasicConcept& c) {
    auto [it, inserted] = node_of.emplace(c, static_cast<int>(nodes.size()));
    if (inserted) nodes.push_back(c);
    return it->second;
  };
  const int top = node(BasicConcept::top());
  const int bottom = node(BasicConcept::bottom());
  for (const auto& r : tbox.subsumptions) node(r.sub), node(r.sup);
  for (const auto& r : tbox.conjunctions) node(r.left), node(r.right), node(r.sup);
  for (const auto& r : tbox.exists_lhs) node(r.filler), node(r.sup);
  for (const auto& r : tbox.exists_rhs) node(r.sub), node(r.filler);

  const std::size_t n = nodes.size();
  std::vector<std::set<int>> subsumers(n);
  for (std::size_t i = 0; i < n; ++i) subsumers[i] = {static_cast<int>(i), top};

  std::map<std::string, std::set<std::pair<int, int>>> edges;
  bool changed = true;
  auto add_sub = [&](int x, int c) { changed |= subsumers[x].insert(c).second; };
  auto add_edge = [&](const std::string& r, int x, int y) {
    changed |= edges[r].insert({x, y}).second;
  };

  while (changed) {
    changed = false;
    for (std::size_t x = 0; x < n; ++x) {
      std::vector<int> current(subsumers[x].begin(), subsumers[x].end());
      for (int c : current) {
        const BasicConcept& cc = nodes[c];
        for (const auto& r : tbox.subsumptions)
          if (r.sub == cc) add_sub(static_cast<int>(x), node_of.at(r.sup));
        for (const auto& r : tbox.conjunctions) {
          if (r.left == cc && subsumers[x].count(node_of.at(r.right)))
            add_sub(static_cast<int>(x), node_of.at(r.sup));
          if (r.right == cc && subsumers[x].count(node_of.at(r.left)))
            add_sub(static_cast<int>(x), node_of.at(r.sup));
        }
        for (const auto& r : tbox.exists_rhs)
          if (r.sub == cc) add_edge(r.role, static_cast<int>(x), node_of.at(r.filler));
      }
    }
    for (auto& [role, pairs] : std::map(edges)) {
      for (auto [x, y] : pairs) {
        for (const auto& r : tbox.exists_lhs)
          if (r.role == role && subsumers[y].count(node_of.at(r.filler)))
            add_sub(x, node_of.at(r.sup));
        if (subsumers[y].count(bottom)) add_sub(x, bottom);
        for (const auto& ri : tbox.role_inclusions)
          if (ri.sub == role) add_edge(ri.sup, x, y);
        for (const auto& rc : tbox.role_chains) {
          if (rc.first != role) continue;
          auto it = edges.find(rc.second);
          if (it == edges.end()) continue;
          std::vector<std::pair<int, int>> second(it->second.begin(), it->second.end());
          for (auto [y2, z] : second)
            if (y2 == y) add_edge(rc.sup, x, z);
        }
      }
    }
  }

  std::set<SubsumptionRule> derived;
  for (std::size_t x = 0; x < n; ++x) {
    if (static_cast<int>(x) == bottom) continue;
    for (int c : subsumers[x]) {
      if (c == static_cast<int>(x) || c == top) continue;
      derived.insert({nodes[x], nodes[c]});
    }
  }
  return derived;
}

// ---------------------------------------------------------------------------
// ABox materialization

namespace detail {

constexpr int kTop = 0;
constexpr int kBottom = 1;

class Engine {
 public:
  Engine(const NormalizedTBox& tbox, const std::set<SubsumptionRule>& derived,
         std::span<const ABoxAxiom> abox, std::span<const std::pair<BasicConcept, std::string>>
                                             basic_assertions) {
    // Individuals are interned in sorted order so that union-find roots are the
    // lexicographically least members.
    std::set<std::string> ind_names;
    auto note_basic = [&](const BasicConcept& c) {
      if (c.kind == BasicConcept::Kind::Nominal) ind_names.insert(c.name);
    };
    for (const auto& r : tbox.subsumptions) note_basic(r.sub), note_basic(r.sup);
    for (const auto& r : derived) note_basic(r.sub), note_basic(r.sup);
    for (const auto& r : tbox.conjunctions) note_basic(r.left), note_basic(r.right), note_basic(r.sup);
    for (const auto& r : tbox.exists_lhs) note_basic(r.filler), note_basic(r.sup);
    for (const auto& r : tbox.exists_rhs) note_basic(r.sub), note_basic(r.filler);
    for (const auto& [c, ind] : basic_assertions) {
      note_basic(c);
      ind_names.insert(ind);
    }
    for (const auto& ax : abox) {
      if (const auto* ra = std::get_if<RoleAssertion>(&ax)) {
        ind_names.insert(ra->subject);
        ind_names.insert(ra->object);
      } else if (const auto* eq = std::get_if<Equality>(&ax)) {
        ind_names.insert(eq->a);
        ind_names.insert(eq->b);
      } else if (const auto* ne = std::get_if<Inequality>(&ax)) {
        ind_names.insert(ne->a);
        ind_names.insert(ne->b);
      }
    }
    inds_.assign(ind_names.begin(), ind_names.end());
    for (std::size_t i = 0; i < inds_.size(); ++i) ind_id_[inds_[i]] = static_cast<int>(i);
    uf_ = UnionFind(inds_.size());

    concept_names_ = {"Top", "Bottom"};
    auto intern_atomic = [&](const BasicConcept& c) {
      if (c.kind != BasicConcept::Kind::Atomic) return;
      if (concept_id_.emplace(c.name, static_cast<int>(concept_names_.size())).second)
        concept_names_.push_back(c.name);
    };
    for (const auto& r : tbox.subsumptions) intern_atomic(r.sub), intern_atomic(r.sup);
    for (const auto& r : derived) intern_atomic(r.sub), intern_atomic(r.sup);
    for (const auto& r : tbox.conjunctions)
      intern_atomic(r.left), intern_atomic(r.right), intern_atomic(r.sup);
    for (const auto& r : tbox.exists_lhs) intern_atomic(r.filler), intern_atomic(r.sup);
    for (const auto& r : tbox.exists_rhs) intern_atomic(r.sub), intern_atomic(r.filler);
    for (const auto& [c, ind] : basic_assertions) intern_atomic(c);
    nominal_base_ = static_cast<int>(concept_names_.size());
    const std::size_t concept_count = concept_names_.size() + inds_.size();

    auto intern_role = [&](const std::string& r) {
      auto [it, inserted] = role_id_.emplace(r, static_cast<int>(role_names_.size()));
      if (inserted) role_names_.push_back(r);
      return it->second;
    };
    for (const auto& r : tbox.exists_lhs) intern_role(r.role);
    for (const auto& r : tbox.exists_rhs) intern_role(r.role);
    for (const auto& r : tbox.role_inclusions) intern_role(r.sub), intern_role(r.sup);
    for (const auto& r : tbox.role_chains)
      intern_role(r.first), intern_role(r.second), intern_role(r.sup);
    for (const auto& ax : abox)
      if (const auto* ra = std::get_if<RoleAssertion>(&ax)) intern_role(ra->role);

    sub_.resize(concept_count);
    conj_.resize(concept_count);
    ex_lhs_by_filler_.resize(concept_count);
    ex_rhs_.resize(concept_count);
    ex_lhs_by_role_.resize(role_names_.size());
    role_sup_.resize(role_names_.size());
    chain_first_.resize(role_names_.size());
    chain_second_.resize(role_names_.size());

    for (const auto& r : tbox.subsumptions) sub_[cid(r.sub)].push_back(cid(r.sup));
    for (const auto& r : derived) sub_[cid(r.sub)].push_back(cid(r.sup));
    for (auto& v : sub_) {
      std::sort(v.begin(), v.end());
      v.erase(std::unique(v.begin(), v.end()), v.end());
    }
    for (const auto& r : tbox.conjunctions) {
      conj_[cid(r.left)].push_back({cid(r.right), cid(r.sup)});
      conj_[cid(r.right)].push_back({cid(r.left), cid(r.sup)});
    }
    for (const auto& r : tbox.exists_lhs) {
      int role = role_id_.at(r.role);
      ex_lhs_by_filler_[cid(r.filler)].push_back({role, cid(r.sup)});
      ex_lhs_by_role_[role].push_back({cid(r.filler), cid(r.sup)});
    }
    for (const auto& r : tbox.exists_rhs) {
      // Non-nominal fillers only contribute through TBox saturation.
      if (r.filler.kind == BasicConcept::Kind::Nominal)
        ex_rhs_[cid(r.sub)].push_back({role_id_.at(r.role), ind_id_.at(r.filler.name)});
    }
    for (const auto& r : tbox.role_inclusions)
      role_sup_[role_id_.at(r.sub)].push_back(role_id_.at(r.sup));
    for (const auto& r : tbox.role_chains) {
      int a = role_id_.at(r.first), b = role_id_.at(r.second), s = role_id_.at(r.sup);
      chain_first_[a].push_back({b, s});
      chain_second_[b].push_back({a, s});
    }

    has_.assign(inds_.size(), std::vector<char>(concept_count, 0));
    out_.assign(role_names_.size(), std::vector<std::vector<int>>(inds_.size()));
    in_.assign(role_names_.size(), std::vector<std::vector<int>>(inds_.size()));

    for (std::size_t i = 0; i < inds_.size(); ++i) {
      insert_class(kTop, static_cast<int>(i));
      insert_class(nominal_base_ + static_cast<int>(i), static_cast<int>(i));
    }
    for (const auto& [c, ind] : basic_assertions) derive_class(cid(c), ind_id_.at(ind));
    for (const auto& ax : abox) {
      if (const auto* ra = std::get_if<RoleAssertion>(&ax)) {
        derive_role(role_id_.at(ra->role), ind_id_.at(ra->subject), ind_id_.at(ra->object));
      } else if (const auto* eq = std::get_if<Equality>(&ax)) {
        merge(ind_id_.at(eq->a), ind_id_.at(eq->b));
      } else if (const auto* ne = std::get_if<Inequality>(&ax)) {
        inequalities_.push_back({ind_id_.at(ne->a), ind_id_.at(ne->b)});
      }
    }
  }

  EntailmentClosure run() {
    std::vector<Atom> current;
    for (;;) {
      if (merged_) rebuild();
      current.swap(delta_);
      delta_.clear();
      if (current.empty()) break;
      ++stats_.rounds;
      for (const Atom& a : current) {
        if (a.is_role)
          process_role(a.pred, a.x, a.y);
        else
          process_class(a.pred, a.x);
      }
    }
    for (auto [a, b] : inequalities_) {
      if (uf_.find(static_cast<std::size_t>(a)) == uf_.find(static_cast<std::size_t>(b)) &&
          !inconsistent_) {
        inconsistent_ = true;
        witness_ = "DiffInd(" + inds_[a] + " " + inds_[b] + ") contradicts derived equality";
      }
    }
    return build();
  }

 private:
  struct Atom {
    bool is_role;
    int pred;
    int x;
    int y;
  };

  int cid(const BasicConcept& c) const {
    switch (c.kind) {
      case BasicConcept::Kind::Top:
        return kTop;
      case BasicConcept::Kind::Bottom:
        return kBottom;
      case BasicConcept::Kind::Atomic:
        return concept_id_.at(c.name);
      case BasicConcept::Kind::Nominal:
        return nominal_base_ + ind_id_.at(c.name);
    }
    return kTop;
  }

  int find(int x) { return static_cast<int>(uf_.find(static_cast<std::size_t>(x))); }

  bool is_nominal(int c) const { return c >= nominal_base_; }

  void insert_class(int c, int x) {
    if (has_[x][c]) return;
    has_[x][c] = 1;
    ++stats_.derivations;
    delta_.push_back({false, c, x, 0});
  }

  void derive_class(int c, int x) {
    x = find(x);
    if (is_nominal(c)) {
      merge(x, c - nominal_base_);
      return;
    }
    insert_class(c, x);
  }

  static std::uint64_t role_key(int r, int x, int y) {
    return (static_cast<std::uint64_t>(r) << 42) | (static_cast<std::uint64_t>(x) << 21) |
           static_cast<std::uint64_t>(y);
  }

  void derive_role(int r, int x, int y) {
    x = find(x);
    y = find(y);
    if (!role_atoms_.insert(role_key(r, x, y)).second) return;
    out_[r][x].push_back(y);
    in_[r][y].push_back(x);
    ++stats_.derivations;
    delta_.push_back({true, r, x, y});
  }

  void merge(int a, int b) {
    if (uf_.unite(static_cast<std::size_t>(a), static_cast<std::size_t>(b))) {
      merged_ = true;
      ++stats_.merges;
    }
  }

  void process_class(int c, int x) {
    x = find(x);
    if (c == kBottom && !inconsistent_) {
      inconsistent_ = true;
      witness_ = "Bottom(" + inds_[x] + ")";
    }
    for (int sup : sub_[c]) derive_class(sup, x);
    for (auto [other, sup] : conj_[c])
      if (has_[x][other]) derive_class(sup, x);
    for (auto [role, sup] : ex_lhs_by_filler_[c]) {
      const auto& preds = in_[role][x];
      for (std::size_t i = 0; i < preds.size(); ++i) derive_class(sup, preds[i]);
    }
    for (auto [role, target] : ex_rhs_[c]) derive_role(role, x, target);
  }

  void process_role(int r, int x, int y) {
    x = find(x);
    y = find(y);
    for (int s : role_sup_[r]) derive_role(s, x, y);
    for (auto [second, sup] : chain_first_[r]) {
      const auto& succ = out_[second][y];
      for (std::size_t i = 0; i < succ.size(); ++i) derive_role(sup, x, succ[i]);
    }
    for (auto [first, sup] : chain_second_[r]) {
      const auto& preds = in_[first][x];
      for (std::size_t i = 0; i < preds.size(); ++i) derive_role(sup, preds[i], y);
    }
    for (auto [filler, sup] : ex_lhs_by_role_[r])
      if (has_[y][filler]) derive_class(sup, x);
  }

  // Re-canonicalizes every atom after equality merges and re-queues all of
  // them; the next epoch re-derives anything a stale id hid.
  void rebuild() {
    merged_ = false;
    std::vector<Atom> atoms;
    for (std::size_t x = 0; x < has_.size(); ++x)
      for (std::size_t c = 0; c < has_[x].size(); ++c)
        if (has_[x][c]) atoms.push_back({false, static_cast<int>(c), static_cast<int>(x), 0});
    for (std::size_t r = 0; r < out_.size(); ++r)
      for (std::size_t x = 0; x < out_[r].size(); ++x)
        for (int y : out_[r][x]) atoms.push_back({true, static_cast<int>(r), static_cast<int>(x), y});

    for (auto& row : has_) std::fill(row.begin(), row.end(), 0);
    for (auto& per_role : out_)
      for (auto& v : per_role) v.clear();
    for (auto& per_role : in_)
      for (auto& v : per_role) v.clear();
    role_atoms_.clear();
    delta_.clear();
    for (const Atom& a : atoms) {
      if (a.is_role)
        derive_role(a.pred, a.x, a.y);
      else
        insert_class(a.pred, find(a.x));
    }
  }

  EntailmentClosure build() {
    EntailmentClosure out;
    out.inconsistent_ = inconsistent_;
    out.witness_ = witness_;
    out.stats_ = stats_;
    for (std::size_t i = 0; i < inds_.size(); ++i)
      out.representative_[inds_[i]] = inds_[find(static_cast<int>(i))];
    for (std::size_t x = 0; x < has_.size(); ++x) {
      if (find(static_cast<int>(x)) != static_cast<int>(x)) continue;
      for (int c = 0; c < nominal_base_; ++c) {
        if (!has_[x][c] || c == kTop || c == kBottom) continue;
        Entailment e = Entailment::class_atom(concept_names_[c], inds_[x]);
        if (!is_fresh_name(concept_names_[c])) out.atoms_.push_back(e);
        out.all_atoms_.push_back(std::move(e));
      }
    }
    for (std::size_t r = 0; r < out_.size(); ++r)
      for (std::size_t x = 0; x < out_[r].size(); ++x)
        for (int y : out_[r][x]) {
          Entailment e = Entailment::role_atom(role_names_[r], inds_[x], inds_[y]);
          out.atoms_.push_back(e);
          out.all_atoms_.push_back(std::move(e));
        }
    std::sort(out.atoms_.begin(), out.atoms_.end());
    std::sort(out.all_atoms_.begin(), out.all_atoms_.end());
    return out;
  }

  std::vector<std::string> inds_;
  std::unordered_map<std::string, int> ind_id_;
  std::vector<std::string> concept_names_;
  std::unordered_map<std::string, int> concept_id_;
  int nominal_base_ = 2;
  std::vector<std::string> role_names_;
  std::unordered_map<std::string, int> role_id_;

  std::vector<std::vector<int>> sub_;
  std::vector<std::vector<std::pair<int, int>>> conj_;
  std::vector<std::vector<std::pair<int, int>>> ex_lhs_by_filler_;
  std::vector<std::vector<std::pair<int, int>>> ex_lhs_by_role_;
  std::vector<std::vector<std::pair<int, int>>> ex_rhs_;
  std::vector<std::vector<int>> role_sup_;
  std::vector<std::vector<std::pair<int, int>>> chain_first_;
  std::vector<std::vector<std::pair<int, int>>> chain_second_;

  UnionFind uf_;
  std::vector<std::vector<char>> has_;
  std::vector<std::vector<std::vector<int>>> out_;
  std::vector<std::vector<std::vector<int>>> in_;
  std::unordered_set<std::uint64_t> role_atoms_;
  std::vector<std::pair<int, int>> inequalities_;
  std::vector<Atom> delta_;
  bool merged_ = false;
  bool inconsistent_ = false;
  std::string witness_;
  ReasonerStats stats_;
};

}  // namespace detail

using detail::Engine;

Reasoner::Reasoner(NormalizedTBox tbox) : tbox_(std::move(tbox)), derived_(saturate_tbox(tbox_)) {}

EntailmentClosure Reasoner::materialize(std::span<const ABoxAxiom> abox) const {
  std::vector<std::pair<BasicConcept, std::string>> basic_assertions;
  std::vector<const ClassAssertion*> complex;
  for (const auto& ax : abox) {
    if (const auto* ca = std::get_if<ClassAssertion>(&ax)) {
      const ConceptExpr& c = ca->concept_expr;
      switch (c.kind()) {
        case ConceptExpr::Kind::Top:
          basic_assertions.push_back({BasicConcept::top(), ca->individual});
          break;
        case ConceptExpr::Kind::Bottom:
          basic_assertions.push_back({BasicConcept::bottom(), ca->individual});
          break;
        case ConceptExpr::Kind::Atomic:
          basic_assertions.push_back({BasicConcept::atomic(c.name()), ca->individual});
          break;
        case ConceptExpr::Kind::Nominal:
          basic_assertions.push_back({BasicConcept::nominal(c.name()), ca->individual});
          break;
        default:
          complex.push_back(ca);
      }
    }
  }
  if (complex.empty()) {
    Engine engine(tbox_, derived_, abox, basic_assertions);
    return engine.run();
  }
  // Complex class assertions C(a) become X(a) with fresh X [= C.
  NormalizedTBox extended = tbox_;
  for (const auto* ca : complex)
    basic_assertions.push_back({add_rhs_definition(extended, ca->concept_expr), ca->individual});
  auto derived = saturate_tbox(extended);
  Engine engine(extended, derived, abox, basic_assertions);
  return engine.run();
}

EntailmentClosure materialize(const NormalizedTBox& tbox, std::span<const ABoxAxiom> abox) {
  return Reasoner(tbox).materialize(abox);
}

bool is_consistent(const NormalizedTBox& tbox, std::span<const ABoxAxiom> abox,
                   std::span<const TBoxAxiom> constraints) {
  NormalizedTBox combined = tbox;
  extend_normalized(combined, constraints);
  return !materialize(combined, abox).inconsistent();
}

}  // namespace tlx
