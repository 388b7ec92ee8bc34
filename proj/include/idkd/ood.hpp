#pragma once

#include <string>
#include <vector>

#include "idkd/distill.hpp"
#include "idkd/mlp.hpp"

namespace idkd {

struct CalibrationPoint {
  double threshold = 0.0;
  double tpr = 0.0;
  double fpr = 0.0;
};

struct CalibrationResult {
  double t_opt = 0.0;
  double tpr_at_t = 0.0;
  double fpr_at_t = 0.0;
  std::vector<CalibrationPoint> curve;  // thresholds strictly increasing

  // header `threshold,tpr,fpr` plus one row per curve point
  std::string to_csv() const;
};

// Temperature-1 maximum softmax probability per row; scores lie in (1/C, 1].
std::vector<double> msp_scores(const MlpModel& model, const Matrix& features);

// ID = positive class. TPR(t) = fraction of id_scores > t, FPR(t) likewise on
// ood_scores. Candidate thresholds are midpoints between adjacent values of
// the merged sorted score set; t_opt maximizes Youden's J = TPR - FPR with
// ties broken toward the largest threshold.
CalibrationResult calibrate_threshold(const std::vector<double>& id_scores,
                                      const std::vector<double>& ood_scores);

// Records whose max probability strictly exceeds t_opt, order preserved.
std::vector<SoftLabelRecord> select_id_subset(const std::vector<SoftLabelRecord>& records,
                                              double t_opt);

}  // namespace idkd
