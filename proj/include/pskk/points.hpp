#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "pskk/errors.hpp"

namespace pskk {

//! Row-major storage for n points in R^d. Rows are handed out as spans so the
//! hot loops can stream over contiguous memory.
class PointSet {
 public:
  PointSet() = default;

  PointSet(std::size_t n, std::size_t dim) : dim_(dim), data_(n * dim, 0.0) {}

  PointSet(std::size_t dim, std::vector<double> flat) : dim_(dim), data_(std::move(flat)) {
    if (dim_ == 0 || data_.size() % dim_ != 0) {
      throw ConfigError("PointSet: flat data length is not a multiple of the dimension");
    }
  }

  std::size_t size() const { return dim_ == 0 ? 0 : data_.size() / dim_; }
  std::size_t dim() const { return dim_; }
  bool empty() const { return data_.empty(); }

  std::span<const double> operator[](std::size_t i) const {
    return {data_.data() + i * dim_, dim_};
  }
  std::span<double> row(std::size_t i) { return {data_.data() + i * dim_, dim_}; }

  void push_row(std::span<const double> p) {
    if (dim_ == 0) dim_ = p.size();
    if (p.size() != dim_) throw ConfigError("PointSet: row has inconsistent dimension");
    data_.insert(data_.end(), p.begin(), p.end());
  }
  void push_row(std::initializer_list<double> p) {
    push_row(std::span<const double>(p.begin(), p.size()));
  }

  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

 private:
  std::size_t dim_ = 0;
  std::vector<double> data_;
};

}  // namespace pskk
