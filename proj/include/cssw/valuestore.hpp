// Copyright 2026 The cssw Authors
// SPDX-License-Identifier: Apache-2.0
//
// Storage for per-epoch value and continuation matrices. A full run keeps
// one matrix per (epoch, position, kind); at production sizes that exceeds
// memory, so the file-backed store streams fixed-size slices and the
// in-memory store serves tests and small runs.

#ifndef CSSW_VALUESTORE_HPP_
#define CSSW_VALUESTORE_HPP_

#include <cstdint>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "cssw/matrix.hpp"

namespace cssw {

struct ValueDims {
  int horizon = 0;             // scrap epoch T; values exist for t = 0..T
  std::size_t positions = 0;   // matrices per slice
  std::size_t grid_size = 0;   // rows per matrix
  std::size_t dim = 0;         // columns per matrix
};

// Values V_t exist for t = 0..T, continuations C_t for t = 1..T.
class ValueStore {
 public:
  virtual ~ValueStore() = default;

  const ValueDims& dims() const { return dims_; }

  virtual void put_value(int t, const std::vector<Matrix>& slice) = 0;
  virtual void put_continuation(int t, const std::vector<Matrix>& slice) = 0;
  virtual std::vector<Matrix> value(int t) const = 0;
  virtual std::vector<Matrix> continuation(int t) const = 0;

 protected:
  void check_value_epoch(int t) const;
  void check_continuation_epoch(int t) const;
  void check_slice(const std::vector<Matrix>& slice) const;

  ValueDims dims_;
};

class MemoryValueStore final : public ValueStore {
 public:
  explicit MemoryValueStore(const ValueDims& dims);

  void put_value(int t, const std::vector<Matrix>& slice) override;
  void put_continuation(int t, const std::vector<Matrix>& slice) override;
  std::vector<Matrix> value(int t) const override;
  std::vector<Matrix> continuation(int t) const override;

 private:
  std::map<int, std::vector<Matrix>> values_;
  std::map<int, std::vector<Matrix>> continuations_;
};

// Binary layout: 8-byte magic, four uint64 dims, then equally sized slices
// in solver emission order V_T, C_T, V_(T-1), C_(T-1), ..., C_1, V_0. Each
// slice holds positions * grid_size * dim doubles in native byte order.
class FileValueStore final : public ValueStore {
 public:
  // Creates or truncates the file for writing (reads also allowed).
  FileValueStore(const std::string& path, const ValueDims& dims);
  // Opens an existing dump read-only.
  explicit FileValueStore(const std::string& path);

  void put_value(int t, const std::vector<Matrix>& slice) override;
  void put_continuation(int t, const std::vector<Matrix>& slice) override;
  std::vector<Matrix> value(int t) const override;
  std::vector<Matrix> continuation(int t) const override;

 private:
  std::uint64_t slice_offset(std::uint64_t slice_index) const;
  void write_slice(std::uint64_t slice_index, const std::vector<Matrix>& slice);
  std::vector<Matrix> read_slice(std::uint64_t slice_index) const;

  mutable std::fstream file_;
  bool writable_ = false;
};

}  // namespace cssw

#endif  // CSSW_VALUESTORE_HPP_
