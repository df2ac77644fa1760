// Copyright 2026 The cssw Authors
// SPDX-License-Identifier: Apache-2.0

#include "cssw/valuestore.hpp"

#include <cstring>
#include <stdexcept>

namespace cssw {
namespace {

constexpr char kMagic[8] = {'C', 'S', 'S', 'W', 'V', 'A', 'L', '1'};

}  // namespace

void ValueStore::check_value_epoch(int t) const {
  if (t < 0 || t > dims_.horizon)
    throw std::out_of_range("valuestore: value epoch out of range");
}

void ValueStore::check_continuation_epoch(int t) const {
  if (t < 1 || t > dims_.horizon)
    throw std::out_of_range("valuestore: continuation epoch out of range");
}

void ValueStore::check_slice(const std::vector<Matrix>& slice) const {
  if (slice.size() != dims_.positions)
    throw std::invalid_argument("valuestore: wrong number of positions");
  for (const Matrix& f : slice)
    if (f.rows() != dims_.grid_size || f.cols() != dims_.dim)
      throw std::invalid_argument("valuestore: matrix shape mismatch");
}

MemoryValueStore::MemoryValueStore(const ValueDims& dims) { dims_ = dims; }

void MemoryValueStore::put_value(int t, const std::vector<Matrix>& slice) {
  check_value_epoch(t);
  check_slice(slice);
  values_[t] = slice;
}

void MemoryValueStore::put_continuation(int t, const std::vector<Matrix>& slice) {
  check_continuation_epoch(t);
  check_slice(slice);
  continuations_[t] = slice;
}

std::vector<Matrix> MemoryValueStore::value(int t) const {
  check_value_epoch(t);
  auto it = values_.find(t);
  if (it == values_.end()) throw std::out_of_range("valuestore: value not stored");
  return it->second;
}

std::vector<Matrix> MemoryValueStore::continuation(int t) const {
  check_continuation_epoch(t);
  auto it = continuations_.find(t);
  if (it == continuations_.end())
    throw std::out_of_range("valuestore: continuation not stored");
  return it->second;
}

FileValueStore::FileValueStore(const std::string& path, const ValueDims& dims) {
  dims_ = dims;
  if (dims_.horizon < 1 || dims_.positions == 0 || dims_.grid_size == 0 ||
      dims_.dim == 0)
    throw std::invalid_argument("valuestore: bad dimensions");
  file_.open(path, std::ios::binary | std::ios::in | std::ios::out |
                       std::ios::trunc);
  if (!file_) throw std::runtime_error("valuestore: cannot create " + path);
  writable_ = true;
  file_.write(kMagic, sizeof(kMagic));
  const std::uint64_t header[4] = {
      static_cast<std::uint64_t>(dims_.horizon), dims_.positions,
      dims_.grid_size, dims_.dim};
  file_.write(reinterpret_cast<const char*>(header), sizeof(header));
  if (!file_) throw std::runtime_error("valuestore: header write failed");
}

FileValueStore::FileValueStore(const std::string& path) {
  file_.open(path, std::ios::binary | std::ios::in);
  if (!file_) throw std::runtime_error("valuestore: cannot open " + path);
  char magic[8];
  std::uint64_t header[4];
  file_.read(magic, sizeof(magic));
  file_.read(reinterpret_cast<char*>(header), sizeof(header));
  if (!file_ || std::memcmp(magic, kMagic, sizeof(magic)) != 0)
    throw std::runtime_error("valuestore: not a value dump: " + path);
  dims_.horizon = static_cast<int>(header[0]);
  dims_.positions = header[1];
  dims_.grid_size = header[2];
  dims_.dim = header[3];
}

std::uint64_t FileValueStore::slice_offset(std::uint64_t slice_index) const {
  const std::uint64_t header = sizeof(kMagic) + 4 * sizeof(std::uint64_t);
  const std::uint64_t slice_bytes =
      dims_.positions * dims_.grid_size * dims_.dim * sizeof(double);
  return header + slice_index * slice_bytes;
}

void FileValueStore::write_slice(std::uint64_t slice_index,
                                 const std::vector<Matrix>& slice) {
  if (!writable_) throw std::runtime_error("valuestore: store is read-only");
  check_slice(slice);
  file_.seekp(static_cast<std::streamoff>(slice_offset(slice_index)));
  const std::streamsize bytes =
      static_cast<std::streamsize>(dims_.grid_size * dims_.dim * sizeof(double));
  for (const Matrix& f : slice)
    file_.write(reinterpret_cast<const char*>(f.data()), bytes);
  if (!file_) throw std::runtime_error("valuestore: write failed");
}

std::vector<Matrix> FileValueStore::read_slice(std::uint64_t slice_index) const {
  file_.seekg(static_cast<std::streamoff>(slice_offset(slice_index)));
  std::vector<Matrix> slice;
  slice.reserve(dims_.positions);
  const std::streamsize bytes =
      static_cast<std::streamsize>(dims_.grid_size * dims_.dim * sizeof(double));
  for (std::size_t p = 0; p < dims_.positions; ++p) {
    Matrix f(dims_.grid_size, dims_.dim);
    file_.read(reinterpret_cast<char*>(f.data()), bytes);
    slice.push_back(std::move(f));
  }
  if (!file_) throw std::runtime_error("valuestore: read failed");
  return slice;
}

void FileValueStore::put_value(int t, const std::vector<Matrix>& slice) {
  check_value_epoch(t);
  write_slice(2 * static_cast<std::uint64_t>(dims_.horizon - t), slice);
}

void FileValueStore::put_continuation(int t, const std::vector<Matrix>& slice) {
  check_continuation_epoch(t);
  write_slice(2 * static_cast<std::uint64_t>(dims_.horizon - t) + 1, slice);
}

std::vector<Matrix> FileValueStore::value(int t) const {
  check_value_epoch(t);
  return read_slice(2 * static_cast<std::uint64_t>(dims_.horizon - t));
}

std::vector<Matrix> FileValueStore::continuation(int t) const {
  check_continuation_epoch(t);
  return read_slice(2 * static_cast<std::uint64_t>(dims_.horizon - t) + 1);
}

}  // namespace cssw
