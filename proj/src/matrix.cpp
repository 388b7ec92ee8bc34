#include "idkd/matrix.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace idkd {

namespace {

[[noreturn]] void shape_error(const char* op, const Matrix& a, const Matrix& b) {
  throw std::invalid_argument(std::string(op) + ": incompatible shapes " +
                              std::to_string(a.rows) + "x" + std::to_string(a.cols) +
                              " and " + std::to_string(b.rows) + "x" +
                              std::to_string(b.cols));
}

}  // namespace

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols != b.rows) shape_error("matmul", a, b);
  Matrix out(a.rows, b.cols);
  std::vector<double> acc(b.cols);
  for (size_t i = 0; i < a.rows; ++i) {
    std::fill(acc.begin(), acc.end(), 0.0);
    const float* arow = a.row(i);
    for (size_t k = 0; k < a.cols; ++k) {
      double aik = static_cast<double>(arow[k]);
      const float* brow = b.row(k);
      for (size_t j = 0; j < b.cols; ++j) {
        acc[j] += aik * static_cast<double>(brow[j]);
      }
    }
    float* orow = out.row(i);
    for (size_t j = 0; j < b.cols; ++j) orow[j] = static_cast<float>(acc[j]);
  }
  return out;
}

Matrix matmul_abt(const Matrix& a, const Matrix& b) {
  if (a.cols != b.cols) shape_error("matmul_abt", a, b);
  Matrix out(a.rows, b.rows);
  for (size_t i = 0; i < a.rows; ++i) {
    const float* arow = a.row(i);
    float* orow = out.row(i);
    for (size_t j = 0; j < b.rows; ++j) {
      const float* brow = b.row(j);
      double acc = 0.0;
      for (size_t k = 0; k < a.cols; ++k) {
        acc += static_cast<double>(arow[k]) * static_cast<double>(brow[k]);
      }
      orow[j] = static_cast<float>(acc);
    }
  }
  return out;
}

Matrix matmul_atb(const Matrix& a, const Matrix& b) {
  if (a.rows != b.rows) shape_error("matmul_atb", a, b);
  Matrix out(a.cols, b.cols);
  std::vector<double> acc(a.cols * b.cols, 0.0);
  for (size_t k = 0; k < a.rows; ++k) {
    const float* arow = a.row(k);
    const float* brow = b.row(k);
    for (size_t i = 0; i < a.cols; ++i) {
      double aki = static_cast<double>(arow[i]);
      double* accrow = acc.data() + i * b.cols;
      for (size_t j = 0; j < b.cols; ++j) {
        accrow[j] += aki * static_cast<double>(brow[j]);
      }
    }
  }
  for (size_t i = 0; i < out.size(); ++i) out.data[i] = static_cast<float>(acc[i]);
  return out;
}

void check_finite(const Matrix& m, const char* what) {
  for (float v : m.data) {
    if (!std::isfinite(v)) {
      throw std::runtime_error(std::string(what) + ": non-finite entry");
    }
  }
}

}  // namespace idkd
