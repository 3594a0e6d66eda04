// base/matrix.cc

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

#include "sparch/base/matrix.h"

#include <bit>
#include <fstream>

#include "sparch/base/error.h"

namespace sparch {

namespace {

void PutU32(std::ostream &os, uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  os.write(reinterpret_cast<const char *>(b), 4);
}

void PutU64(std::ostream &os, uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  os.write(reinterpret_cast<const char *>(b), 8);
}

uint32_t GetU32(const unsigned char *p) {
  return static_cast<uint32_t>(p[0]) | static_cast<uint32_t>(p[1]) << 8 |
         static_cast<uint32_t>(p[2]) << 16 | static_cast<uint32_t>(p[3]) << 24;
}

uint64_t GetU64(const unsigned char *p) {
  return static_cast<uint64_t>(GetU32(p)) | static_cast<uint64_t>(GetU32(p + 4)) << 32;
}

}  // namespace

void WriteMatrixFile(const std::filesystem::path &path, const Matrix &m,
                     MatrixPrecision precision) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) SPARCH_ERR(kIo) << "cannot open " << path << " for writing";
  PutU32(os, kMatrixMagic);
  PutU32(os, static_cast<uint32_t>(precision));
  PutU32(os, static_cast<uint32_t>(m.rows));
  PutU32(os, static_cast<uint32_t>(m.cols));
  for (double v : m.data) {
    if (precision == MatrixPrecision::kFloat32)
      PutU32(os, std::bit_cast<uint32_t>(static_cast<float>(v)));
    else
      PutU64(os, std::bit_cast<uint64_t>(v));
  }
  if (!os) SPARCH_ERR(kIo) << "write failed for " << path;
}

Matrix ReadMatrixFile(const std::filesystem::path &path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) SPARCH_ERR(kIo) << "cannot open " << path;
  unsigned char header[16];
  if (!is.read(reinterpret_cast<char *>(header), 16))
    SPARCH_ERR(kIo) << "truncated header in " << path;
  if (GetU32(header) != kMatrixMagic) SPARCH_ERR(kData) << "bad magic in " << path;
  const uint32_t version = GetU32(header + 4);
  if (version != 1 && version != 2)
    SPARCH_ERR(kData) << "unsupported matrix version " << version << " in " << path;
  Matrix m(static_cast<int>(GetU32(header + 8)), static_cast<int>(GetU32(header + 12)));
  const size_t width = version == 1 ? 4 : 8;
  std::vector<unsigned char> payload(m.data.size() * width);
  if (!is.read(reinterpret_cast<char *>(payload.data()),
               static_cast<std::streamsize>(payload.size())))
    SPARCH_ERR(kIo) << "truncated payload in " << path;
  for (size_t i = 0; i < m.data.size(); ++i) {
    const unsigned char *p = payload.data() + i * width;
    m.data[i] = version == 1 ? static_cast<double>(std::bit_cast<float>(GetU32(p)))
                             : std::bit_cast<double>(GetU64(p));
  }
  return m;
}

}  // namespace sparch
