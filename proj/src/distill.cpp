#include "idkd/distill.hpp"

#include <cstring>
#include <stdexcept>

#include "idkd/metrics.hpp"

namespace idkd {

std::vector<SoftLabelRecord> generate_soft_labels(const MlpModel& model,
                                                  const Dataset& public_set,
                                                  double tau) {
  if (public_set.labeled())
    throw std::invalid_argument("generate_soft_labels: public set must be unlabeled");
  if (public_set.features.cols != model.input_dim())
    throw std::invalid_argument("generate_soft_labels: feature dims do not match model");
  Matrix logits = forward(model, public_set.features);
  Matrix probs = softmax_rows(logits, tau);
  std::vector<SoftLabelRecord> records(public_set.size());
  for (size_t i = 0; i < public_set.size(); ++i) {
    records[i].public_index = static_cast<uint32_t>(i);
    records[i].label.probs.assign(probs.row(i), probs.row(i) + probs.cols);
  }
  return records;
}

size_t label_message_bytes(size_t record_count, size_t num_classes) {
  return 4 + record_count * (4 + 4 * num_classes);
}

namespace {

void put_le_u32(std::vector<uint8_t>& out, uint32_t v) {
  out.push_back(static_cast<uint8_t>(v & 0xff));
  out.push_back(static_cast<uint8_t>((v >> 8) & 0xff));
  out.push_back(static_cast<uint8_t>((v >> 16) & 0xff));
  out.push_back(static_cast<uint8_t>((v >> 24) & 0xff));
}

uint32_t get_le_u32(const std::vector<uint8_t>& buf, size_t offset) {
  return static_cast<uint32_t>(buf[offset]) | (static_cast<uint32_t>(buf[offset + 1]) << 8) |
         (static_cast<uint32_t>(buf[offset + 2]) << 16) |
         (static_cast<uint32_t>(buf[offset + 3]) << 24);
}

}  // namespace

std::vector<uint8_t> encode_label_message(const std::vector<SoftLabelRecord>& records,
                                          size_t num_classes) {
  std::vector<uint8_t> out;
  out.reserve(label_message_bytes(records.size(), num_classes));
  put_le_u32(out, static_cast<uint32_t>(records.size()));
  for (const SoftLabelRecord& r : records) {
    if (r.label.probs.size() != num_classes)
      throw std::invalid_argument("encode_label_message: wrong class count");
    put_le_u32(out, r.public_index);
    for (float p : r.label.probs) {
      uint32_t bits;
      std::memcpy(&bits, &p, sizeof bits);
      put_le_u32(out, bits);
    }
  }
  return out;
}

std::vector<SoftLabelRecord> decode_label_message(const std::vector<uint8_t>& bytes,
                                                  size_t num_classes) {
  if (bytes.size() < 4)
    throw std::runtime_error("decode_label_message: truncated message");
  uint32_t count = get_le_u32(bytes, 0);
  if (bytes.size() != label_message_bytes(count, num_classes))
    throw std::runtime_error("decode_label_message: byte count does not match layout");
  std::vector<SoftLabelRecord> records(count);
  size_t pos = 4;
  for (uint32_t i = 0; i < count; ++i) {
    records[i].public_index = get_le_u32(bytes, pos);
    pos += 4;
    records[i].label.probs.resize(num_classes);
    for (size_t c = 0; c < num_classes; ++c) {
      uint32_t bits = get_le_u32(bytes, pos);
      pos += 4;
      std::memcpy(&records[i].label.probs[c], &bits, sizeof bits);
    }
  }
  return records;
}

std::vector<LabelMessage> post_label_messages(
    const std::vector<std::vector<SoftLabelRecord>>& subsets, const Graph& g,
    size_t num_classes) {
  if (subsets.size() != g.n)
    throw std::invalid_argument("post_label_messages: one subset per node required");
  std::vector<LabelMessage> messages;
  for (size_t i = 0; i < g.n; ++i) {
    std::vector<uint8_t> payload = encode_label_message(subsets[i], num_classes);
    for (size_t j : g.neighbors(i)) {
      messages.push_back({i, j, payload});
    }
  }
  return messages;
}

std::vector<std::map<size_t, std::vector<SoftLabelRecord>>> deliver_label_messages(
    const std::vector<LabelMessage>& messages, size_t n_nodes, size_t num_classes) {
  std::vector<std::map<size_t, std::vector<SoftLabelRecord>>> received(n_nodes);
  for (const LabelMessage& m : messages) {
    if (m.to >= n_nodes) throw std::runtime_error("deliver_label_messages: bad recipient");
    received[m.to][m.from] = decode_label_message(m.bytes, num_classes);
  }
  return received;
}

std::vector<std::map<size_t, std::vector<SoftLabelRecord>>> exchange_labels(
    const std::vector<std::vector<SoftLabelRecord>>& subsets, const Graph& g,
    size_t num_classes, CommLedger* ledger) {
  std::vector<LabelMessage> messages = post_label_messages(subsets, g, num_classes);
  if (ledger) {
    for (const LabelMessage& m : messages) ledger->record_label_exchange(m.bytes.size());
  }
  return deliver_label_messages(messages, g.n, num_classes);
}

std::vector<std::pair<uint32_t, SoftLabel>> label_average(
    const std::vector<SoftLabelRecord>& own_subset, size_t own_id,
    const std::map<size_t, std::vector<SoftLabelRecord>>& received) {
  // contributions in ascending sender id so the fold order is fixed
  std::map<size_t, const std::vector<SoftLabelRecord>*> by_sender;
  by_sender[own_id] = &own_subset;
  for (const auto& [sender, records] : received) by_sender[sender] = &records;

  std::map<uint32_t, std::pair<std::vector<double>, size_t>> sums;  // index -> (sum, count)
  size_t num_classes = 0;
  for (const auto& [sender, records] : by_sender) {
    for (const SoftLabelRecord& r : *records) {
      if (num_classes == 0) num_classes = r.label.probs.size();
      if (r.label.probs.size() != num_classes)
        throw std::invalid_argument("label_average: inconsistent class counts");
      if (!is_valid_soft_label(r.label, num_classes))
        throw std::invalid_argument("label_average: malformed soft label");
      auto& entry = sums[r.public_index];
      if (entry.first.empty()) entry.first.assign(num_classes, 0.0);
      for (size_t c = 0; c < num_classes; ++c)
        entry.first[c] += static_cast<double>(r.label.probs[c]);
      entry.second += 1;
    }
  }

  std::vector<std::pair<uint32_t, SoftLabel>> out;
  out.reserve(sums.size());
  for (const auto& [index, entry] : sums) {
    const auto& [sum, count] = entry;
    double total = 0.0;
    for (double v : sum) total += v;
    SoftLabel mean;
    mean.probs.resize(num_classes);
    for (size_t c = 0; c < num_classes; ++c)
      mean.probs[c] = static_cast<float>(sum[c] / total);  // mean, renormalized
    out.emplace_back(index, std::move(mean));
  }
  return out;
}

TrainingPool build_training_pool(
    const std::vector<size_t>& private_indices, const std::vector<int>& private_labels,
    const std::vector<std::pair<uint32_t, SoftLabel>>& averaged) {
  if (private_indices.size() != private_labels.size())
    throw std::invalid_argument("build_training_pool: index/label size mismatch");
  TrainingPool pool;
  pool.private_indices = private_indices;
  pool.private_labels = private_labels;
  pool.public_refs = averaged;
  for (size_t i = 1; i < pool.public_refs.size(); ++i) {
    if (pool.public_refs[i].first <= pool.public_refs[i - 1].first)
      throw std::invalid_argument("build_training_pool: public indices must be unique ascending");
  }
  return pool;
}

}  // namespace idkd
