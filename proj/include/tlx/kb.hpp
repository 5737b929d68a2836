#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "tlx/domain.hpp"

namespace tlx {

struct KbEntity {
  std::string id;
  std::vector<std::string> labels;
  std::vector<std::string> types;
  std::vector<std::pair<std::string, std::string>> properties;
};

// Adapter could not be reached or answered garbage; the lookup may be retried.
class TransportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class KbAdapter {
 public:
  virtual ~KbAdapter() = default;
  // Deterministic order for a fixed snapshot; the first consistent entry wins.
  virtual std::vector<KbEntity> lookup_by_name(const std::string& name) = 0;
  virtual KbEntity describe(const std::string& entity_id) = 0;
};

// Case fold, trim, '_' and '-' become spaces, runs of spaces collapse.
std::string normalize_label(const std::string& s);

/// Tab-separated snapshot: entity_id, labels (|), types (|), properties
/// (role=value, ';'). Blank lines and '#' lines are skipped.
class FileKb : public KbAdapter {
 public:
  static FileKb from_text(const std::string& text, const std::string& origin = "<kb>");
  static FileKb load(const std::string& path);

  std::vector<KbEntity> lookup_by_name(const std::string& name) override;
  KbEntity describe(const std::string& entity_id) override;
  const std::vector<KbEntity>& entities() const { return entities_; }

 private:
  std::vector<KbEntity> entities_;
  std::map<std::string, std::size_t> by_id_;
};

struct HttpKbConfig {
  std::string endpoint;  // scheme://host[:port]
  // "{label}" / "{id}" are replaced with the percent-encoded argument.
  std::string label_query = "/lookup?label={label}";
  std::string describe_query = "/describe?id={id}";
  int retries = 2;
  int timeout_seconds = 10;
};

/// Remote adapter. Lookup answers a bindings table with an "?entity" column;
/// describe answers "?p<TAB>?o" rows where p is "label", "type" or a property.
class HttpKb : public KbAdapter {
 public:
  explicit HttpKb(HttpKbConfig cfg) : cfg_(std::move(cfg)) {}
  std::vector<KbEntity> lookup_by_name(const std::string& name) override;
  KbEntity describe(const std::string& entity_id) override;

 private:
  std::string get(const std::string& path_and_query);
  HttpKbConfig cfg_;
};

// Parses a tab-separated bindings table; header cells lose a leading '?', value
// cells lose surrounding <> or double quotes.
std::vector<std::map<std::string, std::string>> parse_bindings(const std::string& text);

struct VocabularyMapping {
  std::map<std::string, std::string> type_map;
  std::map<std::string, std::string> prop_map;
  bool drop_unmapped = true;
};

// Lines "type <external> -> <local>", "prop <external> -> <local>", "drop-unmapped = true|false".
VocabularyMapping parse_mapping(const std::string& text, const std::string& origin = "<mapping>");

std::vector<KbEntity> match_entities(KbAdapter& adapter, const std::string& individual);

// A name usable as an individual for a property value ("38.94" stays, spaces become '_').
std::string value_individual(const std::string& value);

std::vector<ABoxAxiom> extract_axioms(const KbEntity& entity, const VocabularyMapping& mapping,
                                      const std::string& individual);

struct AuditEntry {
  enum class Outcome { Accepted, Rejected, NoMatch, Error };
  std::string individual;
  Outcome outcome = Outcome::NoMatch;
  std::string entity;   // empty for NoMatch
  std::string detail;   // witness, axiom count or error text
};

struct ImportOptions {
  // 0 checks every LSO. Otherwise only this many LSOs, drawn with `seed`;
  // an approximation of the exact check.
  std::size_t consistency_sample = 0;
  std::uint64_t seed = 1;
};

struct ImportResult {
  std::vector<ABoxAxiom> external_axioms;
  std::vector<Entailment> domain_closure;
  std::vector<AuditEntry> audit;
  std::set<std::string> new_names;  // mapped names not in the domain signature before import
  bool aborted = false;
  std::string error;
};

/// Gated import. Individuals are visited in lexicographic order; for each,
/// matched entities are tried in adapter order and the first whose axioms keep
/// every LSO consistent (together with everything accepted so far) is kept.
/// On success the domain's external axioms are replaced and it is re-materialized.
ImportResult import_external(LearningDomain& d, const std::set<std::string>& roots, KbAdapter& adapter,
                             const VocabularyMapping& mapping, const std::vector<TBoxAxiom>& constraints,
                             const ImportOptions& options = {});

// All individuals mentioned by the domain's LSOs (the ungated baseline).
std::set<std::string> all_individuals(const LearningDomain& d);

std::string render_audit(const std::vector<AuditEntry>& audit);
std::string outcome_name(AuditEntry::Outcome o);

}  // namespace tlx
