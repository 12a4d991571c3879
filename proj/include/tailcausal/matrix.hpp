#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "tailcausal/errors.hpp"

namespace tailcausal {

/// Dense n x d matrix of observations, row-major. The universal data carrier.
class SampleMatrix {
 public:
  SampleMatrix() = default;

  SampleMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), values_(rows * cols, 0.0) {
    default_names();
  }

  SampleMatrix(std::size_t rows, std::size_t cols, std::vector<double> values,
               std::vector<std::string> names = {})
      : rows_(rows), cols_(cols), values_(std::move(values)),
        column_names_(std::move(names)) {
    if (values_.size() != rows_ * cols_)
      throw ParameterError("SampleMatrix: value count does not match shape");
    if (column_names_.empty()) default_names();
    if (column_names_.size() != cols_)
      throw ParameterError("SampleMatrix: column name count does not match shape");
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return values_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return values_[i * cols_ + j]; }

  std::span<const double> row(std::size_t i) const {
    return {values_.data() + i * cols_, cols_};
  }
  std::span<double> row(std::size_t i) { return {values_.data() + i * cols_, cols_}; }

  std::vector<double> column(std::size_t j) const {
    std::vector<double> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out[i] = values_[i * cols_ + j];
    return out;
  }

  const std::vector<double>& values() const { return values_; }
  const std::vector<std::string>& column_names() const { return column_names_; }
  void set_column_names(std::vector<std::string> names) {
    if (names.size() != cols_)
      throw ParameterError("SampleMatrix: column name count does not match shape");
    column_names_ = std::move(names);
  }

  bool all_finite() const {
    for (double v : values_)
      if (!std::isfinite(v)) return false;
    return true;
  }

  /// Throws unless every entry is finite and the shape admits the analysis.
  void require_valid(std::size_t min_cols = 1) const {
    if (rows_ < 1) throw InsufficientDataError("matrix has no rows");
    if (cols_ < min_cols)
      throw ParameterError("matrix has " + std::to_string(cols_) +
                           " columns, need at least " + std::to_string(min_cols));
    if (!all_finite()) throw DataError("matrix contains non-finite entries");
  }

 private:
  void default_names() {
    column_names_.resize(cols_);
    for (std::size_t j = 0; j < cols_; ++j)
      column_names_[j] = "Y" + std::to_string(j + 1);
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
  std::vector<std::string> column_names_;
};

/// Events transformed to the standard Pareto scale. Every row has at least
/// one positive component; event_indices point back into the source data.
struct StandardParetoMatrix {
  SampleMatrix values;
  std::vector<std::size_t> event_indices;
};

}  // namespace tailcausal
