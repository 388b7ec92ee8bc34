#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "idkd/matrix.hpp"
#include "idkd/rng.hpp"

namespace idkd {

// Feature rows with optional integer class labels. labels empty = unlabeled.
struct Dataset {
  Matrix features;
  std::vector<int> labels;
  size_t num_classes = 0;
  std::string name;

  size_t size() const { return features.rows; }
  bool labeled() const { return !labels.empty(); }
};

// Validates label range and feature/label row agreement.
void validate_dataset(const Dataset& d);

// Disjoint cover of a parent dataset's indices, one list per node.
// Immutable after creation: the data is never reshuffled across nodes.
struct PartitionMap {
  std::vector<std::vector<size_t>> node_indices;
  double alpha = 0.0;
  uint64_t seed = 0;

  std::string to_json() const;
};

// One Dirichlet(alpha * 1_N) draw per class assigns that class's samples to
// nodes by largest-remainder rounding. Empty nodes are repaired by stealing
// one sample from the largest node. The RNG is derived from (seed, alpha, N)
// only, so paired runs see identical partitions.
PartitionMap dirichlet_partition(const std::vector<int>& labels, size_t num_classes,
                                 size_t n_nodes, double alpha, uint64_t seed);

// Disjoint random (train, val) index split of [0, n); val gets
// round(fraction * n) clamped to [1, n-1] for n >= 2.
std::pair<std::vector<size_t>, std::vector<size_t>> split_indices(size_t n,
                                                                  double val_fraction,
                                                                  uint64_t seed);

std::pair<Dataset, Dataset> train_val_split(const Dataset& d, double fraction,
                                            uint64_t seed);

Dataset subset(const Dataset& d, const std::vector<size_t>& indices);

// IDX (MNIST-family) reader. An image file (magic 0x00000803) yields an
// unlabeled feature dataset with pixels scaled to [0,1]; a label file
// (magic 0x00000801) yields a dataset with labels and zero-width features.
Dataset load_idx(const std::string& path);

// Merges an IDX image dataset with an IDX label dataset.
Dataset combine_idx(const Dataset& images, const Dataset& labels);

struct CsvSchema {
  std::string label_column;
  size_t num_classes = 0;  // 0 = infer as max label + 1
};

Dataset load_csv(const std::string& path, const CsvSchema& schema);

// Class means on a circle of radius 1 in the first two feature dimensions,
// isotropic Gaussian with sigma = spread around each mean.
Dataset synthetic_gaussian_mixture(size_t num_classes, size_t dims, size_t per_class,
                                   double spread, uint64_t seed);

// Unlabeled public-set constructors.
Dataset make_public_set(const Dataset& source, size_t size);  // held-out slice
Dataset make_public_set_shifted(size_t num_classes, size_t dims, size_t size,
                                double spread, double shift, uint64_t seed);
Dataset make_public_set_noise(size_t size, size_t dims, uint64_t seed);

}  // namespace idkd
