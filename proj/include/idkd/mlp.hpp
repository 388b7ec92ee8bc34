#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "idkd/matrix.hpp"
#include "idkd/rng.hpp"

namespace idkd {

enum class Activation { relu, tanh };

// Probability vector over classes: entries >= 0, sum within 1e-5 of 1.
struct SoftLabel {
  std::vector<float> probs;
};

bool is_valid_soft_label(const SoftLabel& s, size_t num_classes);

// Fully connected classifier. weights[l] has shape dims[l+1] x dims[l];
// the last layer emits logits (no activation).
struct MlpModel {
  std::vector<size_t> layer_dims;  // input, hidden..., classes
  std::vector<Matrix> weights;
  std::vector<std::vector<float>> biases;
  Activation activation = Activation::relu;

  size_t num_layers() const { return weights.size(); }
  size_t input_dim() const { return layer_dims.front(); }
  size_t num_classes() const { return layer_dims.back(); }
  size_t parameter_count() const;
};

// Glorot-uniform weights, zero biases, drawn from the given stream.
MlpModel init_mlp(const std::vector<size_t>& layer_dims, Activation act, Rng& rng);

// Shape-congruent gradient (or buffer) storage for an MlpModel.
struct Gradients {
  std::vector<Matrix> weights;
  std::vector<std::vector<float>> biases;
};

Gradients zero_gradients(const MlpModel& model);

// Per-sample training target: a hard class id, a soft label, or a convex
// mixture of the two losses (kd_weight on the KD term).
struct Target {
  enum class Kind { hard, soft, mixed };
  Kind kind = Kind::hard;
  int label = -1;
  SoftLabel soft;
  float kd_weight = 0.0f;

  static Target hard_target(int label);
  static Target soft_target(SoftLabel s);
  static Target mixed_target(int label, SoftLabel s, float kd_weight);
};

struct LossOptions {
  double tau = 1.0;           // distillation temperature for soft/mixed targets
  float weight_decay = 0.0f;  // adds 0.5*wd*||W||^2 (weights only, not biases)
};

struct BackwardResult {
  double loss = 0.0;
  Gradients grads;
};

// batch.cols must equal input_dim; returns rows x num_classes logits.
Matrix forward(const MlpModel& model, const Matrix& batch);

// softmax(logits / tau); tau must be positive.
SoftLabel softmax_with_temperature(const std::vector<float>& logits, double tau);

// Row-wise tempered softmax of a logits matrix.
Matrix softmax_rows(const Matrix& logits, double tau);

// Mean over batch of -log softmax(logits)[label]; second element is the
// gradient w.r.t. logits, (softmax - onehot) / batch_size.
std::pair<double, Matrix> cross_entropy(const Matrix& logits,
                                        const std::vector<int>& labels);

// tau^2-scaled cross-entropy between softmax(student/tau) and the teacher
// labels; gradient flows to the student logits only.
std::pair<double, Matrix> kd_loss(const Matrix& student_logits,
                                  const std::vector<SoftLabel>& teachers,
                                  double tau);

// Analytic gradients of the per-sample losses selected by `targets`,
// averaged over the batch, with the weight-decay term added when configured.
BackwardResult backward(const MlpModel& model, const Matrix& batch,
                        const std::vector<Target>& targets,
                        const LossOptions& opts);

}  // namespace idkd
