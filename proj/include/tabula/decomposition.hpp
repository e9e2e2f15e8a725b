#pragma once

#include <span>
#include <string>
#include <vector>

#include "tabula/dataset.hpp"
#include "tabula/matrix.hpp"

namespace tabula {

/// Principal components of the sample covariance (divisor N - 1).
struct PcaModel {
  std::vector<std::string> feature_names;
  std::vector<double> means;
  Matrix covariance;
  std::vector<double> eigenvalues;  ///< all of them, descending
  Matrix components;                ///< row i is e_i; all n_features rows
  std::size_t retained = 1;

  std::vector<double> explained_variance_ratio() const;
};

PcaModel pca_fit(const Matrix& x, std::size_t p, std::vector<std::string> names = {});
PcaModel pca_fit(const Dataset& d, std::size_t p);

/// Scores F (x - mean) with F the first `retained` components.
Matrix pca_transform(const PcaModel& m, const Matrix& rows);
/// mean + F^T scores.
Matrix pca_inverse(const PcaModel& m, const Matrix& scores);

}  // namespace tabula
