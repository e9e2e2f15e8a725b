#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tabula {

/// Failure families. The CLI maps these to exit codes (usage 2, data 3,
/// numeric 4).
enum class ErrorClass { usage, data, numeric };

enum class ErrorCode {
  // core-data
  missing_value,
  duplicate_header,
  empty_file,
  ragged_row,
  fraction_out_of_range,
  stratify_without_labels,
  constant_column,
  unknown_column,
  io_failure,
  // distance
  length_mismatch,
  order_out_of_range,
  negative_weight,
  non_binary_entry,
  // evaluation
  empty,
  k_too_large,
  class_too_small,
  empty_space,
  undefined_metric,
  // supervised
  k_exceeds_data,
  non_numeric_feature,
  unknown_category,
  empty_dataset,
  validation_required,
  rank_deficient,
  missing_labels,
  // svm
  not_binary,
  no_convergence,
  // clustering
  asymmetric_matrix,
  negative_distance,
  invalid_eps,
  single_cluster,
  singular_covariance,
  // decomposition
  p_too_large,
  too_few_rows,
  shape_mismatch,
  // ensemble
  all_rows_in_all_bags,
  no_useful_weak_learner,
  // cli / specs
  invalid_argument,
  k_range_invalid,
};

std::string_view to_string(ErrorCode code);
ErrorClass classify(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  ErrorClass error_class() const noexcept { return classify(code_); }

 private:
  ErrorCode code_;
};

}  // namespace tabula
