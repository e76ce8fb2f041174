#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "routinelog/core.hpp"

namespace routinelog {

/// Dense row-major matrix of action counts, one row per execution.
class FeatureMatrix {
 public:
  using Count = std::int64_t;

  FeatureMatrix() = default;
  FeatureMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  std::span<const Count> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  std::span<Count> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  Count at(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  const std::vector<Count>& data() const { return data_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Count> data_;
};

/// Count vector of one execution over an alphabet of size `dims`.
std::vector<FeatureMatrix::Count> count_vector(std::span<const Action> actions, std::size_t dims);

/// Encodes every execution as its action-count vector. Throws when an action
/// lies outside the alphabet.
FeatureMatrix encode(const ExecutionMultiset& executions, const ActionAlphabet& alphabet);

/// Debug dump: header of alphabet labels, one row per execution.
void write_matrix_csv(std::ostream& out, const FeatureMatrix& m, const ActionAlphabet& alphabet);

}  // namespace routinelog
