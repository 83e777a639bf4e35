// SPDX-License-Identifier: Apache-2.0
// Part of rfscene, a monostatic OFDM sensing and 3D reconstruction toolkit.

#pragma once

#include <cassert>
#include <cstddef>
#include <vector>

namespace rfscene {

// Dense row-major 3-d array; index (i, j, k) with k fastest.
template <typename T>
class Array3 {
 public:
  Array3() = default;
  Array3(std::size_t n0, std::size_t n1, std::size_t n2, T fill = T{})
      : n0_(n0), n1_(n1), n2_(n2), data_(n0 * n1 * n2, fill) {}

  std::size_t dim0() const { return n0_; }
  std::size_t dim1() const { return n1_; }
  std::size_t dim2() const { return n2_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  std::size_t index(std::size_t i, std::size_t j, std::size_t k) const {
    assert(i < n0_ && j < n1_ && k < n2_);
    return (i * n1_ + j) * n2_ + k;
  }

  T& operator()(std::size_t i, std::size_t j, std::size_t k) { return data_[index(i, j, k)]; }
  const T& operator()(std::size_t i, std::size_t j, std::size_t k) const { return data_[index(i, j, k)]; }

  T& operator[](std::size_t flat) { return data_[flat]; }
  const T& operator[](std::size_t flat) const { return data_[flat]; }

  T* data() { return data_.data(); }
  const T* data() const { return data_.data(); }

  void fill(const T& v) { data_.assign(data_.size(), v); }

  bool same_shape(const Array3& o) const { return n0_ == o.n0_ && n1_ == o.n1_ && n2_ == o.n2_; }

 private:
  std::size_t n0_ = 0, n1_ = 0, n2_ = 0;
  std::vector<T> data_;
};

// Dense row-major 4-d array; index (i, j, k, l) with l fastest.
template <typename T>
class Array4 {
 public:
  Array4() = default;
  Array4(std::size_t n0, std::size_t n1, std::size_t n2, std::size_t n3, T fill = T{})
      : n0_(n0), n1_(n1), n2_(n2), n3_(n3), data_(n0 * n1 * n2 * n3, fill) {}

  std::size_t dim0() const { return n0_; }
  std::size_t dim1() const { return n1_; }
  std::size_t dim2() const { return n2_; }
  std::size_t dim3() const { return n3_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  std::size_t index(std::size_t i, std::size_t j, std::size_t k, std::size_t l) const {
    assert(i < n0_ && j < n1_ && k < n2_ && l < n3_);
    return ((i * n1_ + j) * n2_ + k) * n3_ + l;
  }

  T& operator()(std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
    return data_[index(i, j, k, l)];
  }
  const T& operator()(std::size_t i, std::size_t j, std::size_t k, std::size_t l) const {
    return data_[index(i, j, k, l)];
  }

  T& operator[](std::size_t flat) { return data_[flat]; }
  const T& operator[](std::size_t flat) const { return data_[flat]; }

  T* data() { return data_.data(); }
  const T* data() const { return data_.data(); }

  void fill(const T& v) { data_.assign(data_.size(), v); }

  bool same_shape(const Array4& o) const {
    return n0_ == o.n0_ && n1_ == o.n1_ && n2_ == o.n2_ && n3_ == o.n3_;
  }

 private:
  std::size_t n0_ = 0, n1_ = 0, n2_ = 0, n3_ = 0;
  std::vector<T> data_;
};

}  // namespace rfscene
