#include "tlx/transfer.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace tlx {

namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) { return splitmix(seed ^ splitmix(stream)); }

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  double e = std::exp(z);
  return e / (1.0 + e);
}

struct Subset {
  std::vector<const SparseRow*> xs;
  std::vector<int> ys;
};

Subset take(const EncodedDomain& d, const std::vector<std::size_t>& idx) {
  Subset s;
  for (std::size_t i : idx) {
    s.xs.push_back(&d.rows[i]);
    s.ys.push_back(d.labels[i]);
  }
  return s;
}

void require_usable(const EncodedDomain& d, const TrainConfig& cfg) {
  if (d.split.train.size() < cfg.min_samples || d.split.test.size() < cfg.min_samples)
    throw DataError("domain '" + d.id + "': too few samples (train " + std::to_string(d.split.train.size()) +
                    ", test " + std::to_string(d.split.test.size()) + ", need " + std::to_string(cfg.min_samples) +
                    " each)");
  auto classes = [&](const std::vector<std::size_t>& idx) {
    std::set<int> c;
    for (std::size_t i : idx) c.insert(d.labels[i]);
    return c.size();
  };
  if (classes(d.split.train) < 2) throw DataError("domain '" + d.id + "': degenerate labels in the training split");
  if (classes(d.split.test) < 2) throw DataError("domain '" + d.id + "': degenerate labels in the test split");
}

double evaluate(const PredictorModel& m, const Subset& test) {
  std::vector<double> scores;
  scores.reserve(test.xs.size());
  for (const auto* x : test.xs) scores.push_back(m.predict(*x));
  return auc(scores, test.ys);
}

}  // namespace

EncodedDomain encode_domain(const LearningDomain& d, const std::vector<Entailment>& vocab,
                            const std::vector<std::string>& value_props, const TrainConfig& cfg) {
  if (!d.materialized) throw DataError("domain '" + d.id + "' is not materialized");
  EncodedDomain e;
  e.id = d.id;
  e.width = vocab.size() + value_props.size();
  e.rows.resize(d.lsos.size());
  e.labels.assign(d.lsos.size(), 0);
  e.split = split_domain(d, cfg.train_fraction, cfg.seed);
  std::vector<std::size_t> used = e.split.train;
  used.insert(used.end(), e.split.test.begin(), e.split.test.end());
  for (std::size_t i : used) {
    FeatureVector fv = boe_encode(d.lsos[i], d.closures[i], vocab, d.target, value_props);
    SparseRow row;
    for (std::size_t b = 0; b < fv.boe.size(); ++b)
      if (fv.boe[b]) row.emplace_back(static_cast<std::uint32_t>(b), 1.0);
    for (std::size_t v = 0; v < fv.values.size(); ++v)
      if (fv.values[v] != 0.0) row.emplace_back(static_cast<std::uint32_t>(vocab.size() + v), fv.values[v]);
    e.rows[i] = std::move(row);
    e.labels[i] = fv.label;
  }
  return e;
}

void PredictorModel::hidden_activations(const SparseRow& x, std::vector<double>& h) const {
  h.assign(b1.begin(), b1.end());
  for (const auto& [i, v] : x) {
    const double* col = &w1[static_cast<std::size_t>(i) * hidden];
    for (std::size_t j = 0; j < hidden; ++j) h[j] += col[j] * v;
  }
  for (double& a : h) a = std::tanh(a);
}

double PredictorModel::predict(const SparseRow& x) const {
  std::vector<double> h;
  hidden_activations(x, h);
  double z = b2;
  for (std::size_t j = 0; j < hidden; ++j) z += w2[j] * h[j];
  return sigmoid(z);
}

PredictorModel init_model(std::size_t input, std::size_t hidden, std::uint64_t seed) {
  PredictorModel m;
  m.input = input;
  m.hidden = hidden;
  m.seed = seed;
  std::mt19937_64 rng(derive(seed, 1));
  double a1 = std::sqrt(6.0 / static_cast<double>(input + hidden));
  double a2 = std::sqrt(6.0 / static_cast<double>(hidden + 1));
  std::uniform_real_distribution<double> u1(-a1, a1), u2(-a2, a2);
  m.w1.resize(input * hidden);
  for (double& w : m.w1) w = u1(rng);
  m.b1.assign(hidden, 0.0);
  m.w2.resize(hidden);
  for (double& w : m.w2) w = u2(rng);
  return m;
}

void fit(PredictorModel& m, const std::vector<const SparseRow*>& xs, const std::vector<int>& ys,
         const TrainConfig& cfg, TrainMode mode, std::uint64_t seed) {
  const std::size_t n = xs.size();
  const std::size_t H = m.hidden;
  if (n == 0) return;
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> gw1(m.w1.size(), 0.0), gb1(H, 0.0), gw2(H, 0.0), h(H), dz(H);
  std::vector<char> touched(m.input, 0);
  std::vector<std::uint32_t> touched_list;
  const std::size_t batch = static_cast<std::size_t>(std::max(1, cfg.batch_size));
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < n; start += batch) {
      std::size_t end = std::min(n, start + batch);
      double gb2 = 0;
      std::fill(gw2.begin(), gw2.end(), 0.0);
      std::fill(gb1.begin(), gb1.end(), 0.0);
      for (std::size_t s = start; s < end; ++s) {
        const SparseRow& x = *xs[order[s]];
        m.hidden_activations(x, h);
        double z = m.b2;
        for (std::size_t j = 0; j < H; ++j) z += m.w2[j] * h[j];
        double d2 = sigmoid(z) - ys[order[s]];
        for (std::size_t j = 0; j < H; ++j) gw2[j] += d2 * h[j];
        gb2 += d2;
        if (mode == TrainMode::HeadOnly) continue;
        for (std::size_t j = 0; j < H; ++j) {
          dz[j] = d2 * m.w2[j] * (1.0 - h[j] * h[j]);
          gb1[j] += dz[j];
        }
        for (const auto& [i, v] : x) {
          double* g = &gw1[static_cast<std::size_t>(i) * H];
          for (std::size_t j = 0; j < H; ++j) g[j] += dz[j] * v;
          if (!touched[i]) {
            touched[i] = 1;
            touched_list.push_back(i);
          }
        }
      }
      const double step = cfg.learning_rate / static_cast<double>(end - start);
      for (std::size_t j = 0; j < H; ++j) m.w2[j] -= step * gw2[j];
      m.b2 -= step * gb2;
      if (mode == TrainMode::HeadOnly) continue;
      for (std::size_t j = 0; j < H; ++j) m.b1[j] -= step * gb1[j];
      for (std::uint32_t i : touched_list) {
        double* w = &m.w1[static_cast<std::size_t>(i) * H];
        double* g = &gw1[static_cast<std::size_t>(i) * H];
        for (std::size_t j = 0; j < H; ++j) {
          w[j] -= step * g[j];
          g[j] = 0;
        }
        touched[i] = 0;
      }
      touched_list.clear();
    }
  }
  m.epochs += cfg.epochs;
}

double auc(const std::vector<double>& scores, const std::vector<int>& labels) {
  if (scores.size() != labels.size()) throw std::invalid_argument("auc: scores and labels differ in length");
  std::size_t n = scores.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  double pos_rank_sum = 0;
  std::size_t pos = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && scores[idx[j]] == scores[idx[i]]) ++j;
    double midrank = (static_cast<double>(i) + static_cast<double>(j) + 1.0) / 2.0;  // 1-based
    for (std::size_t k = i; k < j; ++k)
      if (labels[idx[k]] == 1) {
        pos_rank_sum += midrank;
        ++pos;
      }
    i = j;
  }
  std::size_t neg = n - pos;
  if (pos == 0 || neg == 0) throw std::invalid_argument("auc: both classes must be present");
  double p = static_cast<double>(pos), q = static_cast<double>(neg);
  return (pos_rank_sum - p * (p + 1) / 2.0) / (p * q);
}

Trained train_within(const EncodedDomain& d, const TrainConfig& cfg, std::uint64_t seed) {
  require_usable(d, cfg);
  Trained t;
  t.model = init_model(d.width, static_cast<std::size_t>(cfg.hidden), seed);
  Subset train = take(d, d.split.train);
  fit(t.model, train.xs, train.ys, cfg, TrainMode::All, derive(seed, 2));
  t.auc = evaluate(t.model, take(d, d.split.test));
  return t;
}

Trained transfer(const PredictorModel& source, const std::string& source_id, const EncodedDomain& target,
                 TransferMode mode, const TrainConfig& cfg, std::uint64_t seed) {
  if (source.input != target.width)
    throw std::invalid_argument("input width mismatch: '" + source_id + "' has " + std::to_string(source.input) +
                                ", '" + target.id + "' has " + std::to_string(target.width));
  require_usable(target, cfg);
  Trained t;
  t.model = source;
  Subset train = take(target, target.split.train);
  fit(t.model, train.xs, train.ys, cfg, mode == TransferMode::Hard ? TrainMode::HeadOnly : TrainMode::All,
      derive(seed, mode == TransferMode::Hard ? 3 : 4));
  t.auc = evaluate(t.model, take(target, target.split.test));
  return t;
}

double fti(double fsi, double fgi, double w1, double w2) {
  if (w1 < 0 || w1 > 1 || w2 < 0 || w2 > 1) throw std::invalid_argument("fti weights must lie in [0,1]");
  if (w1 == 0 && w2 == 0) throw std::invalid_argument("fti weights may not both be zero");
  return (w1 * fgi - w2 * fsi) / (w1 + w2);
}

void finish_record(TransferRecord& r, double w1, double w2) {
  r.fsi = r.auc_base - r.auc_hard;
  r.fgi = r.auc_soft - r.auc_base;
  r.fti = fti(r.fsi, r.fgi, w1, w2);
}

const TransferRecord* FtiMatrix::find(const std::string& s, const std::string& t) const {
  auto it = records.find({s, t});
  return it == records.end() ? nullptr : &it->second;
}

FtiMatrix fti_matrix(const std::vector<const LearningDomain*>& domains, const TrainConfig& cfg, double w1, double w2,
                     const ProgressFn& progress) {
  if (domains.size() < 2) throw std::invalid_argument("fti_matrix needs at least two domains");
  fti(0, 0, w1, w2);  // validates the weights up front
  auto vocab = union_vocabulary(domains);
  auto props = value_properties(domains);
  std::vector<EncodedDomain> enc;
  for (const auto* d : domains) enc.push_back(encode_domain(*d, vocab, props, cfg));

  const std::size_t n = domains.size();
  const int k_max = std::max(1, cfg.ensemble);
  std::vector<std::string> failure(n);
  std::vector<std::vector<Trained>> base(n);
  for (std::size_t i = 0; i < n; ++i) {
    try {
      for (int k = 0; k < k_max; ++k) base[i].push_back(train_within(enc[i], cfg, derive(cfg.seed, 100 + k)));
    } catch (const std::exception& e) {
      failure[i] = e.what();
      base[i].clear();
    }
    if (progress) progress("base " + enc[i].id + (failure[i].empty() ? "" : " failed: " + failure[i]));
  }

  FtiMatrix out;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (a == b) continue;
      std::string label = enc[a].id + " -> " + enc[b].id;
      if (!failure[a].empty() || !failure[b].empty()) {
        out.skipped.push_back(label + ": " + (failure[a].empty() ? failure[b] : failure[a]));
        continue;
      }
      TransferRecord r;
      r.source = enc[a].id;
      r.target = enc[b].id;
      for (int k = 0; k < k_max; ++k) {
        std::uint64_t s = derive(cfg.seed, 100000 + (a * n + b) * 1000 + static_cast<std::size_t>(k));
        r.auc_base += base[b][k].auc;
        r.auc_hard += transfer(base[a][k].model, enc[a].id, enc[b], TransferMode::Hard, cfg, s).auc;
        r.auc_soft += transfer(base[a][k].model, enc[a].id, enc[b], TransferMode::Soft, cfg, s).auc;
      }
      r.auc_base /= k_max;
      r.auc_hard /= k_max;
      r.auc_soft /= k_max;
      finish_record(r, w1, w2);
      out.records[{r.source, r.target}] = r;
    }
    if (progress) progress("transfers from " + enc[a].id);
  }
  return out;
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

FtiMatrix read_auc_csv(const std::string& text, double w1, double w2, const std::string& origin) {
  FtiMatrix m;
  std::size_t line_no = 0;
  bool header = true;
  for (auto line : split(text, '\n')) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    std::string where = origin + ":" + std::to_string(line_no);
    auto cells = split(line, ',');
    if (header) {
      if (trim(line) != "source,target,auc_base,auc_hard,auc_soft")
        throw DataError(where + ": expected header 'source,target,auc_base,auc_hard,auc_soft'");
      header = false;
      continue;
    }
    if (cells.size() != 5) throw DataError(where + ": expected 5 columns");
    TransferRecord r;
    r.source = trim(cells[0]);
    r.target = trim(cells[1]);
    double* slots[3] = {&r.auc_base, &r.auc_hard, &r.auc_soft};
    for (int c = 0; c < 3; ++c) {
      std::string cell = trim(cells[2 + c]);
      auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), *slots[c]);
      if (ec != std::errc() || ptr != cell.data() + cell.size() || *slots[c] < 0 || *slots[c] > 1)
        throw DataError(where + ": AUC must be a number in [0,1], got '" + cell + "'");
    }
    if (r.source.empty() || r.target.empty() || r.source == r.target)
      throw DataError(where + ": source and target must be distinct domain ids");
    finish_record(r, w1, w2);
    if (!m.records.emplace(std::make_pair(r.source, r.target), r).second)
      throw DataError(where + ": duplicate pair " + r.source + "," + r.target);
  }
  if (header) throw DataError(origin + ": empty AUC table");
  return m;
}

std::string write_auc_csv(const FtiMatrix& m) {
  std::string out = "source,target,auc_base,auc_hard,auc_soft\n";
  for (const auto& [key, r] : m.records)
    out += r.source + "," + r.target + "," + format_double(r.auc_base) + "," + format_double(r.auc_hard) + "," +
           format_double(r.auc_soft) + "\n";
  return out;
}

std::string write_fti_table(const FtiMatrix& m) {
  std::string out = "source\ttarget\tauc_base\tauc_hard\tauc_soft\tfsi\tfgi\tfti\n";
  for (const auto& [key, r] : m.records)
    out += r.source + "\t" + r.target + "\t" + format_double(r.auc_base) + "\t" + format_double(r.auc_hard) + "\t" +
           format_double(r.auc_soft) + "\t" + format_double(r.fsi) + "\t" + format_double(r.fgi) + "\t" +
           format_double(r.fti) + "\n";
  return out;
}

}  // namespace tlx
