#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "idkd/distill.hpp"

namespace idkd {

// Byte accounting for a run. Counts each node's sends only; receives are the
// peers' sends. Parameters are 32-bit on the wire.
class CommLedger {
 public:
  void record_param_gossip(size_t n_params, size_t bytes_per_param, size_t n_neighbors);
  void record_label_exchange(size_t message_bytes);

  uint64_t gossip_bytes() const { return gossip_bytes_; }
  uint64_t label_bytes() const { return label_bytes_; }
  uint64_t total_bytes() const { return gossip_bytes_ + label_bytes_; }

  // (gossip + label) / iterations; throws on a zero iteration count.
  double amortized_bytes_per_iter(uint64_t total_iters) const;
  double overhead_ratio() const;  // label / gossip, 0 when no labels were sent

  bool operator==(const CommLedger&) const = default;

 private:
  uint64_t gossip_bytes_ = 0;
  uint64_t label_bytes_ = 0;
};

// Per-class soft sample counts plus the normalized shares derived from them.
// Shares follow the soft-count procedure: hard labels add 1, soft labels add
// their per-class mass, totals are rounded half-up, then normalized.
struct ClassHistogram {
  std::vector<double> soft_counts;
  std::vector<double> shares;
};

ClassHistogram soft_class_histogram(const TrainingPool& pool, size_t num_classes);
ClassHistogram hard_class_histogram(const std::vector<int>& labels, size_t num_classes);

// Total variation distance between the normalized shares, in [0, 1].
double tv_distance(const ClassHistogram& a, const ClassHistogram& b);

// Append-only CSV writer with RFC-4180 quoting; flushes after every row.
class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path);
  void write_row(const std::vector<std::string>& fields);

 private:
  std::ofstream out_;
};

// Append-only JSON-lines writer; flushes after every record.
class JsonlWriter {
 public:
  explicit JsonlWriter(const std::string& path);
  void write_line(const std::string& json);

 private:
  std::ofstream out_;
};

}  // namespace idkd
