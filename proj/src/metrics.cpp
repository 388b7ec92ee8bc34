#include "idkd/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace idkd {

void CommLedger::record_param_gossip(size_t n_params, size_t bytes_per_param,
                                     size_t n_neighbors) {
  gossip_bytes_ += static_cast<uint64_t>(n_params) * bytes_per_param * n_neighbors;
}

void CommLedger::record_label_exchange(size_t message_bytes) {
  label_bytes_ += message_bytes;
}

double CommLedger::amortized_bytes_per_iter(uint64_t total_iters) const {
  if (total_iters == 0)
    throw std::invalid_argument("amortized_bytes_per_iter: zero iterations");
  return static_cast<double>(total_bytes()) / static_cast<double>(total_iters);
}

double CommLedger::overhead_ratio() const {
  if (label_bytes_ == 0) return 0.0;
  return static_cast<double>(label_bytes_) / static_cast<double>(gossip_bytes_);
}

namespace {

ClassHistogram finish_histogram(std::vector<double> counts) {
  ClassHistogram h;
  h.shares.resize(counts.size(), 0.0);
  double total = 0.0;
  for (double& c : counts) {
    c = std::floor(c + 0.5);  // round half up
    total += c;
  }
  if (total > 0.0) {
    for (size_t i = 0; i < counts.size(); ++i) h.shares[i] = counts[i] / total;
  }
  return h;
}

}  // namespace

ClassHistogram soft_class_histogram(const TrainingPool& pool, size_t num_classes) {
  std::vector<double> counts(num_classes, 0.0);
  for (int label : pool.private_labels) {
    if (label < 0 || static_cast<size_t>(label) >= num_classes)
      throw std::invalid_argument("soft_class_histogram: label out of range");
    counts[label] += 1.0;
  }
  for (const auto& [index, soft] : pool.public_refs) {
    if (soft.probs.size() != num_classes)
      throw std::invalid_argument("soft_class_histogram: wrong class count");
    for (size_t c = 0; c < num_classes; ++c) counts[c] += static_cast<double>(soft.probs[c]);
  }
  ClassHistogram h = finish_histogram(counts);
  // keep the pre-rounding masses alongside the normalized shares
  h.soft_counts.assign(num_classes, 0.0);
  for (int label : pool.private_labels) h.soft_counts[label] += 1.0;
  for (const auto& [index, soft] : pool.public_refs)
    for (size_t c = 0; c < num_classes; ++c)
      h.soft_counts[c] += static_cast<double>(soft.probs[c]);
  return h;
}

ClassHistogram hard_class_histogram(const std::vector<int>& labels, size_t num_classes) {
  std::vector<double> counts(num_classes, 0.0);
  for (int label : labels) {
    if (label < 0 || static_cast<size_t>(label) >= num_classes)
      throw std::invalid_argument("hard_class_histogram: label out of range");
    counts[label] += 1.0;
  }
  ClassHistogram h = finish_histogram(counts);
  h.soft_counts = counts;
  return h;
}

double tv_distance(const ClassHistogram& a, const ClassHistogram& b) {
  if (a.shares.size() != b.shares.size())
    throw std::invalid_argument("tv_distance: mismatched class counts");
  double sum = 0.0;
  for (size_t c = 0; c < a.shares.size(); ++c) sum += std::abs(a.shares[c] - b.shares[c]);
  return 0.5 * sum;
}

CsvWriter::CsvWriter(const std::string& path) : out_(path, std::ios::app) {
  if (!out_) throw std::runtime_error("CsvWriter: cannot open " + path);
}

void CsvWriter::write_row(const std::vector<std::string>& fields) {
  for (size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out_ << ',';
    const std::string& f = fields[i];
    bool needs_quotes = f.find_first_of(",\"\n\r") != std::string::npos;
    if (needs_quotes) {
      out_ << '"';
      for (char c : f) {
        if (c == '"') out_ << '"';
        out_ << c;
      }
      out_ << '"';
    } else {
      out_ << f;
    }
  }
  out_ << '\n';
  out_.flush();
  if (!out_) throw std::runtime_error("CsvWriter: write failed");
}

JsonlWriter::JsonlWriter(const std::string& path) : out_(path, std::ios::app) {
  if (!out_) throw std::runtime_error("JsonlWriter: cannot open " + path);
}

void JsonlWriter::write_line(const std::string& json) {
  out_ << json << '\n';
  out_.flush();
  if (!out_) throw std::runtime_error("JsonlWriter: write failed");
}

}  // namespace idkd
