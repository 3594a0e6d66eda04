// sparch/base/matrix.h

// Copyright 2026  The sparch authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef SPARCH_BASE_MATRIX_H_
#define SPARCH_BASE_MATRIX_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace sparch {

/// Plain row-major matrix of doubles. Carries data that never needs
/// gradients: frame features, index vectors, prototype tables.
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(int r, int c) : rows(r), cols(c), data(static_cast<size_t>(r) * c, 0.0) {}

  double &operator()(int r, int c) { return data[static_cast<size_t>(r) * cols + c]; }
  double operator()(int r, int c) const { return data[static_cast<size_t>(r) * cols + c]; }
  std::span<double> Row(int r) {
    return {data.data() + static_cast<size_t>(r) * cols, static_cast<size_t>(cols)};
  }
  std::span<const double> Row(int r) const {
    return {data.data() + static_cast<size_t>(r) * cols, static_cast<size_t>(cols)};
  }
  bool operator==(const Matrix &) const = default;
};

/// One utterance of "speech": num_frames x feature_dim.
using FrameSequence = Matrix;

// Binary matrix file: four little-endian uint32 (magic, version, rows,
// cols) followed by rows*cols values in row-major order. Version 1 stores
// float32 (feature files), version 2 stores float64 (index vectors, where
// save/load must be lossless).
inline constexpr uint32_t kMatrixMagic = 0x584d5053;  // "SPMX"
enum class MatrixPrecision : uint32_t { kFloat32 = 1, kFloat64 = 2 };

void WriteMatrixFile(const std::filesystem::path &path, const Matrix &m,
                     MatrixPrecision precision = MatrixPrecision::kFloat32);
/// Float32 payloads are widened to double on load.
Matrix ReadMatrixFile(const std::filesystem::path &path);

}  // namespace sparch

#endif  // SPARCH_BASE_MATRIX_H_
