#pragma once

/// \file tensor.hpp
/// Sum-factorization kernels: application of 1D matrices along one
/// direction of a lexicographically (x fastest) stored tensor.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace vpmg {

/// Row-major dense matrix in the working precision.
template <typename Number>
struct DenseMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<Number> data;

  DenseMatrix() = default;
  DenseMatrix(int r, int c) : rows(r), cols(c), data(std::size_t(r) * c) {}
  explicit DenseMatrix(const Eigen::MatrixXd& m)
      : rows(static_cast<int>(m.rows())), cols(static_cast<int>(m.cols())),
        data(std::size_t(m.rows()) * m.cols()) {
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j)
        data[std::size_t(i) * cols + j] = static_cast<Number>(m(i, j));
  }

  Number operator()(int i, int j) const { return data[std::size_t(i) * cols + j]; }
  Number& operator()(int i, int j) { return data[std::size_t(i) * cols + j]; }

  DenseMatrix transposed() const {
    DenseMatrix t(cols, rows);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) t(j, i) = (*this)(i, j);
    return t;
  }
};

/// Multiply-add counter for all contractions. Single global tally; reset
/// before measuring.
struct ContractionCounter {
  static inline std::uint64_t multiply_adds = 0;
  static void reset() { multiply_adds = 0; }
};

using Extents = std::array<int, 3>;

inline std::size_t extent_product(const Extents& e, int dim) {
  std::size_t n = 1;
  for (int d = 0; d < dim; ++d) n *= static_cast<std::size_t>(e[d]);
  return n;
}

/// out = A along direction `dir` applied to `in` (or out += ... if `add`).
/// `in` has extents `ext` with ext[dir] == A.cols; `out` has the same
/// extents except ext[dir] == A.rows.
template <typename Number>
void contract(const DenseMatrix<Number>& a, int dir, int dim, const Extents& ext,
              const Number* in, Number* out, bool add) {
  std::size_t inner = 1, outer = 1;
  for (int d = 0; d < dir; ++d) inner *= ext[d];
  for (int d = dir + 1; d < dim; ++d) outer *= ext[d];
  const int rows = a.rows;
  const int cols = a.cols;
  const Number* m = a.data.data();
  for (std::size_t o = 0; o < outer; ++o) {
    const Number* src = in + o * cols * inner;
    Number* dst = out + o * rows * inner;
    for (int i = 0; i < rows; ++i) {
      Number* drow = dst + i * inner;
      if (!add)
        for (std::size_t q = 0; q < inner; ++q) drow[q] = Number(0);
      for (int j = 0; j < cols; ++j) {
        const Number aij = m[i * cols + j];
        const Number* srow = src + j * inner;
        for (std::size_t q = 0; q < inner; ++q) drow[q] += aij * srow[q];
      }
    }
  }
  ContractionCounter::multiply_adds +=
      std::uint64_t(outer) * inner * std::uint64_t(rows) * cols;
}

/// Scratch space reused across Kronecker applications.
template <typename Number>
struct TensorScratch {
  std::vector<Number> a, b;
  void reserve(std::size_t n) {
    if (a.size() < n) a.resize(n);
    if (b.size() < n) b.resize(n);
  }
};

/// out (+)= (A_{dim-1} x ... x A_0) in, one factor per direction.
template <typename Number>
void apply_kronecker(std::span<const DenseMatrix<Number>* const> factors, int dim,
                     const Number* in, Number* out, bool add,
                     TensorScratch<Number>& scratch) {
  Extents ext{1, 1, 1};
  std::size_t max_size = 1, in_size = 1, out_size = 1;
  for (int d = 0; d < dim; ++d) {
    ext[d] = factors[d]->cols;
    in_size *= factors[d]->cols;
    out_size *= factors[d]->rows;
  }
  max_size = std::max(in_size, out_size);
  for (int d = 0; d < dim; ++d) {
    std::size_t s = 1;
    for (int e = 0; e < dim; ++e)
      s *= e <= d ? factors[e]->rows : factors[e]->cols;
    max_size = std::max(max_size, s);
  }
  scratch.reserve(max_size);

  const Number* src = in;
  for (int d = 0; d < dim; ++d) {
    const bool last = d == dim - 1;
    Number* dst = last ? out : (d % 2 == 0 ? scratch.a.data() : scratch.b.data());
    contract(*factors[d], d, dim, ext, src, dst, last && add);
    ext[d] = factors[d]->rows;
    src = dst;
  }
}

}  // namespace vpmg
