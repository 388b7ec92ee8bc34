#include "idkd/data.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace idkd {

void validate_dataset(const Dataset& d) {
  if (d.labeled()) {
    if (d.labels.size() != d.features.rows)
      throw std::invalid_argument("dataset: label count != feature rows");
    if (d.num_classes == 0)
      throw std::invalid_argument("dataset: labeled but num_classes = 0");
    for (int l : d.labels)
      if (l < 0 || static_cast<size_t>(l) >= d.num_classes)
        throw std::invalid_argument("dataset: label out of range");
  }
  check_finite(d.features, "dataset features");
}

std::string PartitionMap::to_json() const {
  nlohmann::json doc;
  doc["alpha"] = alpha;
  doc["seed"] = seed;
  doc["node_indices"] = node_indices;
  return doc.dump();
}

PartitionMap dirichlet_partition(const std::vector<int>& labels, size_t num_classes,
                                 size_t n_nodes, double alpha, uint64_t seed) {
  if (n_nodes < 2) throw std::invalid_argument("dirichlet_partition: n_nodes must be >= 2");
  if (alpha <= 0.0) throw std::invalid_argument("dirichlet_partition: alpha must be positive");
  if (labels.size() < n_nodes)
    throw std::invalid_argument("dirichlet_partition: fewer samples than nodes");

  std::vector<std::vector<size_t>> by_class(num_classes);
  for (size_t i = 0; i < labels.size(); ++i) {
    int l = labels[i];
    if (l < 0 || static_cast<size_t>(l) >= num_classes)
      throw std::invalid_argument("dirichlet_partition: label out of range");
    by_class[l].push_back(i);
  }

  Rng rng(partition_seed(seed, alpha, n_nodes));
  PartitionMap map;
  map.alpha = alpha;
  map.seed = seed;
  map.node_indices.assign(n_nodes, {});

  for (size_t c = 0; c < num_classes; ++c) {
    auto& idx = by_class[c];
    if (idx.empty()) continue;
    rng.shuffle(idx);
    std::vector<double> p = rng.dirichlet(alpha, n_nodes);

    // largest-remainder rounding of the per-node quotas
    size_t total = idx.size();
    std::vector<size_t> counts(n_nodes);
    std::vector<std::pair<double, size_t>> remainders(n_nodes);
    size_t assigned = 0;
    for (size_t i = 0; i < n_nodes; ++i) {
      double quota = p[i] * static_cast<double>(total);
      counts[i] = static_cast<size_t>(std::floor(quota));
      assigned += counts[i];
      remainders[i] = {quota - std::floor(quota), i};
    }
    std::stable_sort(remainders.begin(), remainders.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (size_t r = 0; r < total - assigned; ++r) counts[remainders[r].second] += 1;

    size_t pos = 0;
    for (size_t i = 0; i < n_nodes; ++i) {
      for (size_t k = 0; k < counts[i]; ++k) map.node_indices[i].push_back(idx[pos++]);
    }
  }

  // repair empty nodes: move one sample from the currently largest node
  for (size_t i = 0; i < n_nodes; ++i) {
    if (!map.node_indices[i].empty()) continue;
    size_t largest = 0;
    for (size_t j = 1; j < n_nodes; ++j)
      if (map.node_indices[j].size() > map.node_indices[largest].size()) largest = j;
    if (map.node_indices[largest].size() < 2)
      throw std::invalid_argument("dirichlet_partition: cannot repair empty node");
    map.node_indices[i].push_back(map.node_indices[largest].back());
    map.node_indices[largest].pop_back();
  }

  for (auto& list : map.node_indices) std::sort(list.begin(), list.end());
  return map;
}

std::pair<std::vector<size_t>, std::vector<size_t>> split_indices(size_t n,
                                                                  double val_fraction,
                                                                  uint64_t seed) {
  if (val_fraction <= 0.0 || val_fraction >= 1.0)
    throw std::invalid_argument("split_indices: fraction must be in (0,1)");
  if (n == 0) throw std::invalid_argument("split_indices: empty input");
  std::vector<size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(seed);
  rng.shuffle(perm);
  size_t val_count = 0;
  if (n >= 2) {
    val_count = static_cast<size_t>(std::llround(val_fraction * static_cast<double>(n)));
    val_count = std::clamp<size_t>(val_count, 1, n - 1);
  }
  std::vector<size_t> val(perm.begin(), perm.begin() + val_count);
  std::vector<size_t> train(perm.begin() + val_count, perm.end());
  std::sort(val.begin(), val.end());
  std::sort(train.begin(), train.end());
  return {train, val};
}

Dataset subset(const Dataset& d, const std::vector<size_t>& indices) {
  Dataset out;
  out.features = Matrix(indices.size(), d.features.cols);
  out.num_classes = d.num_classes;
  out.name = d.name;
  if (d.labeled()) out.labels.resize(indices.size());
  for (size_t r = 0; r < indices.size(); ++r) {
    size_t src = indices[r];
    if (src >= d.size()) throw std::invalid_argument("subset: index out of range");
    std::memcpy(out.features.row(r), d.features.row(src), d.features.cols * sizeof(float));
    if (d.labeled()) out.labels[r] = d.labels[src];
  }
  return out;
}

std::pair<Dataset, Dataset> train_val_split(const Dataset& d, double fraction,
                                            uint64_t seed) {
  auto [train_idx, val_idx] = split_indices(d.size(), fraction, seed);
  return {subset(d, train_idx), subset(d, val_idx)};
}

namespace {

uint32_t read_be_u32(const std::vector<unsigned char>& buf, size_t offset,
                     const std::string& path) {
  if (offset + 4 > buf.size())
    throw std::runtime_error("load_idx: " + path + ": truncated header at byte " +
                             std::to_string(offset));
  return (static_cast<uint32_t>(buf[offset]) << 24) |
         (static_cast<uint32_t>(buf[offset + 1]) << 16) |
         (static_cast<uint32_t>(buf[offset + 2]) << 8) |
         static_cast<uint32_t>(buf[offset + 3]);
}

std::vector<unsigned char> read_file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::vector<unsigned char> buf((std::istreambuf_iterator<char>(in)),
                                 std::istreambuf_iterator<char>());
  return buf;
}

}  // namespace

Dataset load_idx(const std::string& path) {
  constexpr uint32_t kImagesMagic = 0x00000803;
  constexpr uint32_t kLabelsMagic = 0x00000801;
  std::vector<unsigned char> buf = read_file_bytes(path);
  uint32_t magic = read_be_u32(buf, 0, path);
  Dataset out;
  out.name = path;
  if (magic == kImagesMagic) {
    uint32_t count = read_be_u32(buf, 4, path);
    uint32_t rows = read_be_u32(buf, 8, path);
    uint32_t cols = read_be_u32(buf, 12, path);
    size_t expected = 16 + static_cast<size_t>(count) * rows * cols;
    if (buf.size() != expected)
      throw std::runtime_error("load_idx: " + path + ": expected " +
                               std::to_string(expected) + " bytes, found " +
                               std::to_string(buf.size()));
    out.features = Matrix(count, static_cast<size_t>(rows) * cols);
    for (size_t i = 0; i < out.features.size(); ++i)
      out.features.data[i] = static_cast<float>(buf[16 + i]) / 255.0f;
  } else if (magic == kLabelsMagic) {
    uint32_t count = read_be_u32(buf, 4, path);
    size_t expected = 8 + static_cast<size_t>(count);
    if (buf.size() != expected)
      throw std::runtime_error("load_idx: " + path + ": expected " +
                               std::to_string(expected) + " bytes, found " +
                               std::to_string(buf.size()));
    out.features = Matrix(count, 0);
    out.labels.resize(count);
    int max_label = -1;
    for (size_t i = 0; i < count; ++i) {
      out.labels[i] = static_cast<int>(buf[8 + i]);
      max_label = std::max(max_label, out.labels[i]);
    }
    out.num_classes = static_cast<size_t>(max_label + 1);
  } else {
    throw std::runtime_error("load_idx: " + path + ": bad magic 0x" + [&] {
      char hex[16];
      std::snprintf(hex, sizeof hex, "%08x", magic);
      return std::string(hex);
    }() + " at byte 0");
  }
  return out;
}

Dataset combine_idx(const Dataset& images, const Dataset& labels) {
  if (images.labeled() || images.features.cols == 0)
    throw std::invalid_argument("combine_idx: first argument must be an image dataset");
  if (!labels.labeled())
    throw std::invalid_argument("combine_idx: second argument must be a label dataset");
  if (images.size() != labels.labels.size())
    throw std::invalid_argument("combine_idx: image/label count mismatch");
  Dataset out = images;
  out.labels = labels.labels;
  out.num_classes = labels.num_classes;
  return out;
}

Dataset load_csv(const std::string& path, const CsvSchema& schema) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("load_csv: " + path + ": empty file");

  auto split = [](const std::string& s) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : s) {
      if (c == ',') {
        fields.push_back(cur);
        cur.clear();
      } else if (c != '\r') {
        cur.push_back(c);
      }
    }
    fields.push_back(cur);
    return fields;
  };

  std::vector<std::string> header = split(line);
  size_t label_col = header.size();
  for (size_t i = 0; i < header.size(); ++i)
    if (header[i] == schema.label_column) label_col = i;
  if (label_col == header.size())
    throw std::runtime_error("load_csv: " + path + ": no column named '" +
                             schema.label_column + "' in header");

  std::vector<float> features;
  std::vector<int> labels;
  size_t line_no = 1;
  size_t feature_cols = header.size() - 1;
  int max_label = -1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> fields = split(line);
    if (fields.size() != header.size())
      throw std::runtime_error("load_csv: " + path + ": line " + std::to_string(line_no) +
                               ": expected " + std::to_string(header.size()) + " fields, got " +
                               std::to_string(fields.size()));
    for (size_t i = 0; i < fields.size(); ++i) {
      const std::string& f = fields[i];
      char* end = nullptr;
      double v = std::strtod(f.c_str(), &end);
      if (end == f.c_str() || *end != '\0')
        throw std::runtime_error("load_csv: " + path + ": line " + std::to_string(line_no) +
                                 ": non-numeric cell '" + f + "'");
      if (i == label_col) {
        if (v != std::floor(v) || v < 0)
          throw std::invalid_argument("load_csv: " + path + ": line " +
                                      std::to_string(line_no) + ": label must be a "
                                      "nonnegative integer");
        int l = static_cast<int>(v);
        if (schema.num_classes > 0 && static_cast<size_t>(l) >= schema.num_classes)
          throw std::invalid_argument("load_csv: " + path + ": line " +
                                      std::to_string(line_no) + ": label " +
                                      std::to_string(l) + " out of range");
        labels.push_back(l);
        max_label = std::max(max_label, l);
      } else {
        features.push_back(static_cast<float>(v));
      }
    }
  }
  if (labels.empty()) throw std::runtime_error("load_csv: " + path + ": no data rows");

  Dataset out;
  out.name = path;
  out.features = Matrix(labels.size(), feature_cols);
  out.features.data = std::move(features);
  out.labels = std::move(labels);
  out.num_classes =
      schema.num_classes > 0 ? schema.num_classes : static_cast<size_t>(max_label + 1);
  validate_dataset(out);
  return out;
}

namespace {

void gaussian_sample(float* row, size_t dims, size_t cls, size_t num_classes,
                     double spread, double shift, Rng& rng) {
  double angle = 2.0 * M_PI * static_cast<double>(cls) / static_cast<double>(num_classes);
  for (size_t d = 0; d < dims; ++d) {
    double mean = 0.0;
    if (d == 0) mean = std::cos(angle) + shift;
    if (d == 1) mean = std::sin(angle);
    row[d] = static_cast<float>(mean + spread * rng.normal());
  }
}

}  // namespace

Dataset synthetic_gaussian_mixture(size_t num_classes, size_t dims, size_t per_class,
                                   double spread, uint64_t seed) {
  if (num_classes == 0 || dims == 0 || per_class == 0)
    throw std::invalid_argument("synthetic_gaussian_mixture: counts must be positive");
  Rng rng(seed);
  Dataset out;
  out.num_classes = num_classes;
  out.name = "gaussian_mixture";
  out.features = Matrix(num_classes * per_class, dims);
  out.labels.resize(out.features.rows);
  for (size_t c = 0; c < num_classes; ++c) {
    for (size_t s = 0; s < per_class; ++s) {
      size_t r = c * per_class + s;
      gaussian_sample(out.features.row(r), dims, c, num_classes, spread, 0.0, rng);
      out.labels[r] = static_cast<int>(c);
    }
  }
  return out;
}

Dataset make_public_set(const Dataset& source, size_t size) {
  if (size > source.size())
    throw std::invalid_argument("make_public_set: size exceeds source size");
  Dataset out;
  out.features = Matrix(size, source.features.cols);
  for (size_t r = 0; r < size; ++r)
    std::memcpy(out.features.row(r), source.features.row(r),
                source.features.cols * sizeof(float));
  out.num_classes = source.num_classes;
  out.name = source.name + "_public";
  return out;
}

Dataset make_public_set_shifted(size_t num_classes, size_t dims, size_t size,
                                double spread, double shift, uint64_t seed) {
  if (num_classes == 0 || dims == 0 || size == 0)
    throw std::invalid_argument("make_public_set_shifted: counts must be positive");
  Rng rng(seed);
  Dataset out;
  out.features = Matrix(size, dims);
  out.num_classes = num_classes;
  out.name = "shifted_mixture_public";
  for (size_t r = 0; r < size; ++r) {
    gaussian_sample(out.features.row(r), dims, r % num_classes, num_classes, spread,
                    shift, rng);
  }
  return out;
}

Dataset make_public_set_noise(size_t size, size_t dims, uint64_t seed) {
  if (size == 0 || dims == 0)
    throw std::invalid_argument("make_public_set_noise: counts must be positive");
  Rng rng(seed);
  Dataset out;
  out.features = Matrix(size, dims);
  out.name = "uniform_noise_public";
  for (float& v : out.features.data) v = static_cast<float>(rng.uniform());
  return out;
}

}  // namespace idkd
