#include "idkd/ood.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace idkd {

std::string CalibrationResult::to_csv() const {
  std::ostringstream out;
  out << "threshold,tpr,fpr\n";
  out.precision(17);
  for (const CalibrationPoint& p : curve)
    out << p.threshold << ',' << p.tpr << ',' << p.fpr << '\n';
  return out.str();
}

std::vector<double> msp_scores(const MlpModel& model, const Matrix& features) {
  if (features.cols != model.input_dim())
    throw std::invalid_argument("msp_scores: feature dims do not match model");
  Matrix logits = forward(model, features);
  Matrix probs = softmax_rows(logits, 1.0);
  std::vector<double> scores(features.rows);
  for (size_t i = 0; i < probs.rows; ++i) {
    float best = 0.0f;
    const float* row = probs.row(i);
    for (size_t c = 0; c < probs.cols; ++c) best = std::max(best, row[c]);
    scores[i] = static_cast<double>(best);
  }
  return scores;
}

CalibrationResult calibrate_threshold(const std::vector<double>& id_scores,
                                      const std::vector<double>& ood_scores) {
  if (id_scores.empty() || ood_scores.empty())
    throw std::invalid_argument("calibrate_threshold: empty score set");

  std::vector<double> merged;
  merged.reserve(id_scores.size() + ood_scores.size());
  merged.insert(merged.end(), id_scores.begin(), id_scores.end());
  merged.insert(merged.end(), ood_scores.begin(), ood_scores.end());
  std::sort(merged.begin(), merged.end());
  merged.erase(std::unique(merged.begin(), merged.end()), merged.end());

  std::vector<double> candidates;
  for (size_t i = 0; i + 1 < merged.size(); ++i)
    candidates.push_back((merged[i] + merged[i + 1]) / 2.0);
  if (candidates.empty()) candidates.push_back(merged.front());  // all scores equal

  std::vector<double> id_sorted = id_scores;
  std::vector<double> ood_sorted = ood_scores;
  std::sort(id_sorted.begin(), id_sorted.end());
  std::sort(ood_sorted.begin(), ood_sorted.end());
  auto frac_above = [](const std::vector<double>& sorted, double t) {
    size_t above = sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), t);
    return static_cast<double>(above) / static_cast<double>(sorted.size());
  };

  CalibrationResult result;
  double best_j = -2.0;
  for (double t : candidates) {
    CalibrationPoint p{t, frac_above(id_sorted, t), frac_above(ood_sorted, t)};
    result.curve.push_back(p);
    double j = p.tpr - p.fpr;
    if (j >= best_j) {  // >= keeps the largest threshold on ties
      best_j = j;
      result.t_opt = p.threshold;
      result.tpr_at_t = p.tpr;
      result.fpr_at_t = p.fpr;
    }
  }
  return result;
}

std::vector<SoftLabelRecord> select_id_subset(const std::vector<SoftLabelRecord>& records,
                                              double t_opt) {
  std::vector<SoftLabelRecord> out;
  for (const SoftLabelRecord& r : records) {
    if (r.label.probs.empty() || !is_valid_soft_label(r.label, r.label.probs.size()))
      throw std::invalid_argument("select_id_subset: malformed soft label");
    float best = 0.0f;
    for (float p : r.label.probs) best = std::max(best, p);
    if (static_cast<double>(best) > t_opt) out.push_back(r);
  }
  return out;
}

}  // namespace idkd
