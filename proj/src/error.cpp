#include "tabula/error.hpp"

namespace tabula {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::missing_value:
      return "MissingValue";
    case ErrorCode::duplicate_header:
      return "DuplicateHeader";
    case ErrorCode::empty_file:
      return "EmptyFile";
    case ErrorCode::ragged_row:
      return "RaggedRow";
    case ErrorCode::fraction_out_of_range:
      return "FractionOutOfRange";
    case ErrorCode::stratify_without_labels:
      return "StratifyWithoutLabels";
    case ErrorCode::constant_column:
      return "ConstantColumn";
    case ErrorCode::unknown_column:
      return "UnknownColumn";
    case ErrorCode::io_failure:
      return "IoFailure";
    case ErrorCode::length_mismatch:
      return "LengthMismatch";
    case ErrorCode::order_out_of_range:
      return "OrderOutOfRange";
    case ErrorCode::negative_weight:
      return "NegativeWeight";
    case ErrorCode::non_binary_entry:
      return "NonBinaryEntry";
    case ErrorCode::empty:
      return "Empty";
    case ErrorCode::k_too_large:
      return "KTooLarge";
    case ErrorCode::class_too_small:
      return "ClassTooSmall";
    case ErrorCode::empty_space:
      return "EmptySpace";
    case ErrorCode::undefined_metric:
      return "UndefinedMetric";
    case ErrorCode::k_exceeds_data:
      return "KExceedsData";
    case ErrorCode::non_numeric_feature:
      return "NonNumericFeature";
    case ErrorCode::unknown_category:
      return "UnknownCategory";
    case ErrorCode::empty_dataset:
      return "EmptyDataset";
    case ErrorCode::validation_required:
      return "ValidationRequired";
    case ErrorCode::rank_deficient:
      return "RankDeficient";
    case ErrorCode::missing_labels:
      return "MissingLabels";
    case ErrorCode::not_binary:
      return "NotBinary";
    case ErrorCode::no_convergence:
      return "NoConvergence";
    case ErrorCode::asymmetric_matrix:
      return "AsymmetricMatrix";
    case ErrorCode::negative_distance:
      return "NegativeDistance";
    case ErrorCode::invalid_eps:
      return "InvalidEps";
    case ErrorCode::single_cluster:
      return "SingleCluster";
    case ErrorCode::singular_covariance:
      return "SingularCovariance";
    case ErrorCode::p_too_large:
      return "PTooLarge";
    case ErrorCode::too_few_rows:
      return "TooFewRows";
    case ErrorCode::shape_mismatch:
      return "ShapeMismatch";
    case ErrorCode::all_rows_in_all_bags:
      return "AllRowsInAllBags";
    case ErrorCode::no_useful_weak_learner:
      return "NoUsefulWeakLearner";
    case ErrorCode::invalid_argument:
      return "InvalidArgument";
    case ErrorCode::k_range_invalid:
      return "KRangeInvalid";
  }
  return "Unknown";
}

ErrorClass classify(ErrorCode code) {
  switch (code) {
    case ErrorCode::empty_space:
    case ErrorCode::fraction_out_of_range:
    case ErrorCode::invalid_argument:
    case ErrorCode::invalid_eps:
    case ErrorCode::k_exceeds_data:
    case ErrorCode::k_range_invalid:
    case ErrorCode::k_too_large:
    case ErrorCode::negative_weight:
    case ErrorCode::order_out_of_range:
    case ErrorCode::p_too_large:
    case ErrorCode::stratify_without_labels:
    case ErrorCode::unknown_column:
    case ErrorCode::validation_required:
      return ErrorClass::usage;
    case ErrorCode::all_rows_in_all_bags:
    case ErrorCode::no_convergence:
    case ErrorCode::no_useful_weak_learner:
    case ErrorCode::rank_deficient:
    case ErrorCode::singular_covariance:
    case ErrorCode::undefined_metric:
      return ErrorClass::numeric;
    default:
      return ErrorClass::data;
  }
}

}  // namespace tabula
