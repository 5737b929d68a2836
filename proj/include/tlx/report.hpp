#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tlx/evidence.hpp"
#include "tlx/search.hpp"
#include "tlx/transfer.hpp"

namespace tlx {

// What is known about one transfer when phrasing evidence for it.
struct TransferFacts {
  std::optional<ChangeRates> rates;
  bool holds_in_target = true;  // narrators and contexts only
};

std::string render_evidence(const EvidenceResult& e, const std::string& src, const std::string& dst,
                            const TransferFacts& facts = {});

struct ReportLine {
  EvidenceResult result;
  std::string sentence;
};

struct TransferSection {
  TransferRecord record;
  std::vector<ReportLine> lines;  // valid evidence applicable to this transfer, strongest first
};

struct ExplanationReport {
  std::vector<std::pair<std::string, std::string>> meta;  // parameter and count entries, in order
  std::vector<TransferSection> sections;
  std::vector<EvidenceResult> appendix;  // invalid evidence
  std::size_t sentence_count() const;
};

struct ReportQuery {
  std::string source;  // empty selects every source
  std::string target;  // empty selects every target
  std::size_t limit = 0;  // per transfer; 0 keeps all
};

/// Groups valid results by transfer. General factors apply to every transfer;
/// narrators and contexts only where the source entails them.
ExplanationReport build_report(const EvidenceEngine& engine, const FtiMatrix& fti,
                               const std::vector<EvidenceResult>& results, const ReportQuery& query);

std::string render_text(const ExplanationReport& report);
std::string render_json(const ExplanationReport& report);

}  // namespace tlx
