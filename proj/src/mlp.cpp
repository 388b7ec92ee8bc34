#include "idkd/mlp.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace idkd {

namespace {

void softmax_row(const float* z, size_t n, double tau, double* out) {
  double m = -1e300;
  for (size_t c = 0; c < n; ++c) m = std::max(m, static_cast<double>(z[c]));
  double sum = 0.0;
  for (size_t c = 0; c < n; ++c) {
    out[c] = std::exp((static_cast<double>(z[c]) - m) / tau);
    sum += out[c];
  }
  for (size_t c = 0; c < n; ++c) out[c] /= sum;
}

// log-sum-exp of one logits row at temperature 1
double lse_row(const float* z, size_t n) {
  double m = -1e300;
  for (size_t c = 0; c < n; ++c) m = std::max(m, static_cast<double>(z[c]));
  double sum = 0.0;
  for (size_t c = 0; c < n; ++c) sum += std::exp(static_cast<double>(z[c]) - m);
  return m + std::log(sum);
}

void apply_activation(Matrix& z, Activation act) {
  if (act == Activation::relu) {
    for (float& v : z.data) v = v > 0.0f ? v : 0.0f;
  } else {
    for (float& v : z.data) v = std::tanh(v);
  }
}

// Forward pass keeping post-activation values of every layer input.
// cache[0] is the batch itself, cache[l] the input to layer l.
Matrix forward_cached(const MlpModel& model, const Matrix& batch,
                      std::vector<Matrix>& cache) {
  cache.clear();
  cache.push_back(batch);
  Matrix a = batch;
  for (size_t l = 0; l < model.num_layers(); ++l) {
    Matrix z = matmul_abt(a, model.weights[l]);
    const auto& b = model.biases[l];
    for (size_t i = 0; i < z.rows; ++i) {
      float* row = z.row(i);
      for (size_t j = 0; j < z.cols; ++j) row[j] += b[j];
    }
    if (l + 1 < model.num_layers()) {
      apply_activation(z, model.activation);
      cache.push_back(z);
    }
    a = std::move(z);
  }
  return a;
}

void validate_target(const Target& t, size_t num_classes) {
  switch (t.kind) {
    case Target::Kind::hard:
      if (t.label < 0 || static_cast<size_t>(t.label) >= num_classes)
        throw std::invalid_argument("backward: hard label out of range");
      break;
    case Target::Kind::soft:
      if (!is_valid_soft_label(t.soft, num_classes))
        throw std::invalid_argument("backward: malformed soft label");
      break;
    case Target::Kind::mixed:
      if (t.label < 0 || static_cast<size_t>(t.label) >= num_classes)
        throw std::invalid_argument("backward: hard label out of range");
      if (!is_valid_soft_label(t.soft, num_classes))
        throw std::invalid_argument("backward: malformed soft label");
      if (t.kd_weight < 0.0f || t.kd_weight > 1.0f)
        throw std::invalid_argument("backward: kd_weight outside [0,1]");
      break;
  }
}

}  // namespace

bool is_valid_soft_label(const SoftLabel& s, size_t num_classes) {
  if (s.probs.size() != num_classes) return false;
  double sum = 0.0;
  for (float p : s.probs) {
    if (!(p >= 0.0f) || !std::isfinite(p)) return false;
    sum += p;
  }
  return std::abs(sum - 1.0) <= 1e-5;
}

size_t MlpModel::parameter_count() const {
  size_t n = 0;
  for (size_t l = 0; l < weights.size(); ++l) {
    n += weights[l].size() + biases[l].size();
  }
  return n;
}

MlpModel init_mlp(const std::vector<size_t>& layer_dims, Activation act, Rng& rng) {
  if (layer_dims.size() < 2)
    throw std::invalid_argument("init_mlp: need at least input and output dims");
  for (size_t d : layer_dims)
    if (d == 0) throw std::invalid_argument("init_mlp: zero layer dim");
  MlpModel m;
  m.layer_dims = layer_dims;
  m.activation = act;
  for (size_t l = 0; l + 1 < layer_dims.size(); ++l) {
    size_t fan_in = layer_dims[l];
    size_t fan_out = layer_dims[l + 1];
    double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    Matrix w(fan_out, fan_in);
    for (float& v : w.data) v = static_cast<float>(rng.uniform(-limit, limit));
    m.weights.push_back(std::move(w));
    m.biases.emplace_back(fan_out, 0.0f);
  }
  return m;
}

Gradients zero_gradients(const MlpModel& model) {
  Gradients g;
  for (size_t l = 0; l < model.num_layers(); ++l) {
    g.weights.emplace_back(model.weights[l].rows, model.weights[l].cols);
    g.biases.emplace_back(model.biases[l].size(), 0.0f);
  }
  return g;
}

Target Target::hard_target(int label) {
  Target t;
  t.kind = Kind::hard;
  t.label = label;
  return t;
}

Target Target::soft_target(SoftLabel s) {
  Target t;
  t.kind = Kind::soft;
  t.soft = std::move(s);
  return t;
}

Target Target::mixed_target(int label, SoftLabel s, float kd_weight) {
  Target t;
  t.kind = Kind::mixed;
  t.label = label;
  t.soft = std::move(s);
  t.kd_weight = kd_weight;
  return t;
}

Matrix forward(const MlpModel& model, const Matrix& batch) {
  if (batch.cols != model.input_dim())
    throw std::invalid_argument("forward: batch.cols != input dim");
  std::vector<Matrix> cache;
  Matrix logits = forward_cached(model, batch, cache);
  check_finite(logits, "forward");
  return logits;
}

SoftLabel softmax_with_temperature(const std::vector<float>& logits, double tau) {
  if (tau <= 0.0)
    throw std::invalid_argument("softmax_with_temperature: tau must be positive");
  if (logits.empty())
    throw std::invalid_argument("softmax_with_temperature: empty logits");
  std::vector<double> p(logits.size());
  softmax_row(logits.data(), logits.size(), tau, p.data());
  SoftLabel out;
  out.probs.resize(p.size());
  for (size_t c = 0; c < p.size(); ++c) out.probs[c] = static_cast<float>(p[c]);
  return out;
}

Matrix softmax_rows(const Matrix& logits, double tau) {
  if (tau <= 0.0) throw std::invalid_argument("softmax_rows: tau must be positive");
  Matrix out(logits.rows, logits.cols);
  std::vector<double> p(logits.cols);
  for (size_t i = 0; i < logits.rows; ++i) {
    softmax_row(logits.row(i), logits.cols, tau, p.data());
    float* orow = out.row(i);
    for (size_t j = 0; j < logits.cols; ++j) orow[j] = static_cast<float>(p[j]);
  }
  return out;
}

std::pair<double, Matrix> cross_entropy(const Matrix& logits,
                                        const std::vector<int>& labels) {
  if (labels.size() != logits.rows)
    throw std::invalid_argument("cross_entropy: labels size != batch rows");
  size_t num_classes = logits.cols;
  size_t batch = logits.rows;
  Matrix dlogits(batch, num_classes);
  std::vector<double> p(num_classes);
  double loss = 0.0;
  for (size_t i = 0; i < batch; ++i) {
    int label = labels[i];
    if (label < 0 || static_cast<size_t>(label) >= num_classes)
      throw std::invalid_argument("cross_entropy: label out of range");
    const float* z = logits.row(i);
    loss += lse_row(z, num_classes) - static_cast<double>(z[label]);
    softmax_row(z, num_classes, 1.0, p.data());
    float* drow = dlogits.row(i);
    for (size_t c = 0; c < num_classes; ++c) {
      double g = p[c] - (static_cast<size_t>(label) == c ? 1.0 : 0.0);
      drow[c] = static_cast<float>(g / static_cast<double>(batch));
    }
  }
  return {loss / static_cast<double>(batch), std::move(dlogits)};
}

std::pair<double, Matrix> kd_loss(const Matrix& student_logits,
                                  const std::vector<SoftLabel>& teachers,
                                  double tau) {
  if (tau <= 0.0) throw std::invalid_argument("kd_loss: tau must be positive");
  if (teachers.size() != student_logits.rows)
    throw std::invalid_argument("kd_loss: teacher count != batch rows");
  size_t num_classes = student_logits.cols;
  size_t batch = student_logits.rows;
  Matrix dlogits(batch, num_classes);
  std::vector<double> q(num_classes);
  double loss = 0.0;
  for (size_t i = 0; i < batch; ++i) {
    if (!is_valid_soft_label(teachers[i], num_classes))
      throw std::invalid_argument("kd_loss: malformed teacher label");
    const float* z = student_logits.row(i);
    softmax_row(z, num_classes, tau, q.data());
    double sample = 0.0;
    float* drow = dlogits.row(i);
    for (size_t c = 0; c < num_classes; ++c) {
      double t = static_cast<double>(teachers[i].probs[c]);
      if (t > 0.0) sample -= t * std::log(q[c]);
      drow[c] = static_cast<float>(tau * (q[c] - t) / static_cast<double>(batch));
    }
    loss += tau * tau * sample;
  }
  return {loss / static_cast<double>(batch), std::move(dlogits)};
}

BackwardResult backward(const MlpModel& model, const Matrix& batch,
                        const std::vector<Target>& targets,
                        const LossOptions& opts) {
  if (batch.cols != model.input_dim())
    throw std::invalid_argument("backward: batch.cols != input dim");
  if (targets.size() != batch.rows)
    throw std::invalid_argument("backward: targets size != batch rows");
  if (opts.tau <= 0.0) throw std::invalid_argument("backward: tau must be positive");
  size_t num_classes = model.num_classes();
  for (const Target& t : targets) validate_target(t, num_classes);

  std::vector<Matrix> cache;
  Matrix logits = forward_cached(model, batch, cache);

  size_t batch_size = batch.rows;
  double tau = opts.tau;
  Matrix dz(batch_size, num_classes);
  std::vector<double> p1(num_classes), ptau(num_classes);
  double loss = 0.0;
  for (size_t i = 0; i < batch_size; ++i) {
    const Target& t = targets[i];
    const float* z = logits.row(i);
    float* drow = dz.row(i);
    double hard_w = 0.0, soft_w = 0.0;
    switch (t.kind) {
      case Target::Kind::hard: hard_w = 1.0; break;
      case Target::Kind::soft: soft_w = 1.0; break;
      case Target::Kind::mixed:
        soft_w = static_cast<double>(t.kd_weight);
        hard_w = 1.0 - soft_w;
        break;
    }
    std::fill(drow, drow + num_classes, 0.0f);
    if (hard_w > 0.0) {
      loss += hard_w * (lse_row(z, num_classes) - static_cast<double>(z[t.label]));
      softmax_row(z, num_classes, 1.0, p1.data());
      for (size_t c = 0; c < num_classes; ++c) {
        double g = p1[c] - (static_cast<size_t>(t.label) == c ? 1.0 : 0.0);
        drow[c] += static_cast<float>(hard_w * g / static_cast<double>(batch_size));
      }
    }
    if (soft_w > 0.0) {
      softmax_row(z, num_classes, tau, ptau.data());
      double sample = 0.0;
      for (size_t c = 0; c < num_classes; ++c) {
        double teacher = static_cast<double>(t.soft.probs[c]);
        if (teacher > 0.0) sample -= teacher * std::log(ptau[c]);
        drow[c] += static_cast<float>(soft_w * tau * (ptau[c] - teacher) /
                                      static_cast<double>(batch_size));
      }
      loss += soft_w * tau * tau * sample;
    }
  }
  loss /= static_cast<double>(batch_size);

  BackwardResult result;
  result.grads.weights.resize(model.num_layers());
  result.grads.biases.resize(model.num_layers());
  Matrix delta = std::move(dz);
  for (size_t l = model.num_layers(); l-- > 0;) {
    result.grads.weights[l] = matmul_atb(delta, cache[l]);
    std::vector<float>& db = result.grads.biases[l];
    db.assign(model.biases[l].size(), 0.0f);
    for (size_t j = 0; j < db.size(); ++j) {
      double acc = 0.0;
      for (size_t i = 0; i < delta.rows; ++i) acc += static_cast<double>(delta.at(i, j));
      db[j] = static_cast<float>(acc);
    }
    if (l > 0) {
      Matrix da = matmul(delta, model.weights[l]);
      const Matrix& a = cache[l];
      if (model.activation == Activation::relu) {
        for (size_t i = 0; i < da.size(); ++i)
          if (a.data[i] <= 0.0f) da.data[i] = 0.0f;
      } else {
        for (size_t i = 0; i < da.size(); ++i) {
          double av = static_cast<double>(a.data[i]);
          da.data[i] = static_cast<float>(static_cast<double>(da.data[i]) * (1.0 - av * av));
        }
      }
      delta = std::move(da);
    }
  }

  if (opts.weight_decay > 0.0f) {
    double wd = static_cast<double>(opts.weight_decay);
    double penalty = 0.0;
    for (size_t l = 0; l < model.num_layers(); ++l) {
      const Matrix& w = model.weights[l];
      Matrix& gw = result.grads.weights[l];
      for (size_t i = 0; i < w.size(); ++i) {
        penalty += static_cast<double>(w.data[i]) * static_cast<double>(w.data[i]);
        gw.data[i] += static_cast<float>(wd * static_cast<double>(w.data[i]));
      }
    }
    loss += 0.5 * wd * penalty;
  }

  result.loss = loss;
  for (const Matrix& gw : result.grads.weights) check_finite(gw, "backward");
  return result;
}

}  // namespace idkd
