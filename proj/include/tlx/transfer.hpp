#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "tlx/domain.hpp"

namespace tlx {

struct TrainConfig {
  int hidden = 16;
  int epochs = 200;
  double learning_rate = 0.05;
  int batch_size = 8;
  int ensemble = 10;
  double train_fraction = 0.6;
  std::uint64_t seed = 1;
  std::size_t min_samples = 4;  // per split
};

// One sample as (input index, value) pairs with strictly increasing indices.
using SparseRow = std::vector<std::pair<std::uint32_t, double>>;

struct EncodedDomain {
  std::string id;
  std::size_t width = 0;
  std::vector<SparseRow> rows;  // one per LSO index in train/test
  std::vector<int> labels;
  Split split;
};

// Encodes every consistent LSO against a shared vocabulary and value order.
EncodedDomain encode_domain(const LearningDomain& d, const std::vector<Entailment>& vocab,
                            const std::vector<std::string>& value_props, const TrainConfig& cfg);

/// tanh feature block followed by a sigmoid head.
struct PredictorModel {
  std::size_t input = 0;
  std::size_t hidden = 0;
  std::vector<double> w1;  // input-major: w1[i * hidden + j]
  std::vector<double> b1;
  std::vector<double> w2;
  double b2 = 0;
  std::uint64_t seed = 0;
  int epochs = 0;

  double predict(const SparseRow& x) const;
  void hidden_activations(const SparseRow& x, std::vector<double>& h) const;
};

// Glorot-uniform weights, zero biases.
PredictorModel init_model(std::size_t input, std::size_t hidden, std::uint64_t seed);

enum class TrainMode { All, HeadOnly };

// Mini-batch gradient descent on binary cross-entropy. Each epoch visits the
// samples in the order std::shuffle produces with one mt19937_64(seed) stream.
void fit(PredictorModel& m, const std::vector<const SparseRow*>& xs, const std::vector<int>& ys,
         const TrainConfig& cfg, TrainMode mode, std::uint64_t seed);

// Mann-Whitney AUC with midranks for ties. Throws std::invalid_argument when
// one class is missing or lengths differ.
double auc(const std::vector<double>& scores, const std::vector<int>& labels);

struct Trained {
  PredictorModel model;
  double auc = 0;
};

Trained train_within(const EncodedDomain& d, const TrainConfig& cfg, std::uint64_t seed);

enum class TransferMode { Hard, Soft };

Trained transfer(const PredictorModel& source, const std::string& source_id, const EncodedDomain& target,
                 TransferMode mode, const TrainConfig& cfg, std::uint64_t seed);

// Throws std::invalid_argument when both weights are zero or out of range.
double fti(double fsi, double fgi, double w1, double w2);

struct TransferRecord {
  std::string source;
  std::string target;
  double auc_base = 0;
  double auc_hard = 0;
  double auc_soft = 0;
  double fsi = 0;
  double fgi = 0;
  double fti = 0;
};

struct FtiMatrix {
  std::map<std::pair<std::string, std::string>, TransferRecord> records;
  std::vector<std::string> skipped;  // "source -> target: reason"
  const TransferRecord* find(const std::string& s, const std::string& t) const;
};

void finish_record(TransferRecord& r, double w1, double w2);

using ProgressFn = std::function<void(const std::string&)>;

FtiMatrix fti_matrix(const std::vector<const LearningDomain*>& domains, const TrainConfig& cfg, double w1 = 1,
                     double w2 = 1, const ProgressFn& progress = {});

// Header "source,target,auc_base,auc_hard,auc_soft".
FtiMatrix read_auc_csv(const std::string& text, double w1 = 1, double w2 = 1, const std::string& origin = "<csv>");
std::string write_auc_csv(const FtiMatrix& m);
// AUC columns plus fsi, fgi and fti.
std::string write_fti_table(const FtiMatrix& m);

std::string format_double(double v);

}  // namespace tlx
