#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "idkd/data.hpp"
#include "idkd/mlp.hpp"
#include "idkd/topology.hpp"

namespace idkd {

// A public-sample index paired with one node's probability vector for it.
struct SoftLabelRecord {
  uint32_t public_index = 0;
  SoftLabel label;
};

// One node's training pool: the original private samples with hard labels
// plus the latest exchange's averaged public soft labels.
struct TrainingPool {
  std::vector<size_t> private_indices;  // rows of the node's private train set
  std::vector<int> private_labels;
  std::vector<std::pair<uint32_t, SoftLabel>> public_refs;  // unique, ascending

  size_t size() const { return private_indices.size() + public_refs.size(); }
};

// One record per public sample, labels tempered at tau.
std::vector<SoftLabelRecord> generate_soft_labels(const MlpModel& model,
                                                  const Dataset& public_set,
                                                  double tau);

// Wire layout: 4-byte LE record count, then per record a 4-byte LE public
// index and C 4-byte LE float32 probabilities. Labels only, never features.
size_t label_message_bytes(size_t record_count, size_t num_classes);
std::vector<uint8_t> encode_label_message(const std::vector<SoftLabelRecord>& records,
                                          size_t num_classes);
std::vector<SoftLabelRecord> decode_label_message(const std::vector<uint8_t>& bytes,
                                                  size_t num_classes);

struct LabelMessage {
  size_t from = 0;
  size_t to = 0;
  std::vector<uint8_t> bytes;
};

// Synchronous one-hop exchange: every node sends its subset to each graph
// neighbor. Returns all in-flight messages.
std::vector<LabelMessage> post_label_messages(
    const std::vector<std::vector<SoftLabelRecord>>& subsets, const Graph& g,
    size_t num_classes);

// Decodes messages into per-recipient maps keyed by sender id.
std::vector<std::map<size_t, std::vector<SoftLabelRecord>>> deliver_label_messages(
    const std::vector<LabelMessage>& messages, size_t n_nodes, size_t num_classes);

class CommLedger;  // metrics

// post + deliver, recording per-message bytes in the ledger when given.
std::vector<std::map<size_t, std::vector<SoftLabelRecord>>> exchange_labels(
    const std::vector<std::vector<SoftLabelRecord>>& subsets, const Graph& g,
    size_t num_classes, CommLedger* ledger);

// Groups own + received records by public index and returns the per-index
// arithmetic mean over exactly the contributing nodes (renormalized).
// Contributions are folded in ascending sender id; output is sorted by index.
std::vector<std::pair<uint32_t, SoftLabel>> label_average(
    const std::vector<SoftLabelRecord>& own_subset, size_t own_id,
    const std::map<size_t, std::vector<SoftLabelRecord>>& received);

// Union per the exchange contract: the private portion is always the original
// private set; the public portion replaces any previous exchange's labels.
TrainingPool build_training_pool(
    const std::vector<size_t>& private_indices, const std::vector<int>& private_labels,
    const std::vector<std::pair<uint32_t, SoftLabel>>& averaged);

}  // namespace idkd
