#pragma once

#include <cstddef>
#include <vector>

namespace idkd {

// Dense row-major float32 matrix. All products use a fixed k-ascending
// reduction order with a double accumulator, so results are bitwise
// deterministic for fixed inputs.
struct Matrix {
  size_t rows = 0;
  size_t cols = 0;
  std::vector<float> data;

  Matrix() = default;
  Matrix(size_t r, size_t c, float fill = 0.0f)
      : rows(r), cols(c), data(r * c, fill) {}

  float& at(size_t r, size_t c) { return data[r * cols + c]; }
  float at(size_t r, size_t c) const { return data[r * cols + c]; }

  const float* row(size_t r) const { return data.data() + r * cols; }
  float* row(size_t r) { return data.data() + r * cols; }

  size_t size() const { return data.size(); }
  bool same_shape(const Matrix& o) const {
    return rows == o.rows && cols == o.cols;
  }
};

// a (r x k) * b (k x c)
Matrix matmul(const Matrix& a, const Matrix& b);
// a (r x k) * b^T, b is (c x k)
Matrix matmul_abt(const Matrix& a, const Matrix& b);
// a^T * b, a is (k x r), b is (k x c)
Matrix matmul_atb(const Matrix& a, const Matrix& b);

// Throws std::runtime_error when any entry is NaN or infinite.
void check_finite(const Matrix& m, const char* what);

}  // namespace idkd
