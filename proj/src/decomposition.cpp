#include "tabula/decomposition.hpp"

#include <algorithm>
#include <numeric>

#include "tabula/error.hpp"

namespace tabula {

std::vector<double> PcaModel::explained_variance_ratio() const {
  const double total = std::accumulate(eigenvalues.begin(), eigenvalues.end(), 0.0);
  std::vector<double> out(eigenvalues.size(), 0.0);
  if (total <= 0.0) return out;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::max(eigenvalues[i], 0.0) / total;
  return out;
}

PcaModel pca_fit(const Matrix& x, std::size_t p, std::vector<std::string> names) {
  if (x.rows() < 2) throw Error(ErrorCode::too_few_rows, "PCA needs at least two rows");
  if (p < 1 || p > x.cols())
    throw Error(ErrorCode::p_too_large,
                "components = " + std::to_string(p) + " must be in 1.." + std::to_string(x.cols()));
  PcaModel m;
  m.feature_names = std::move(names);
  m.means = column_means(x);
  m.covariance = covariance(x, 1);
  const SymmetricEigen eig = jacobi_eigen(m.covariance);
  m.eigenvalues = eig.values;
  m.components = eig.vectors.transposed();
  m.retained = p;
  return m;
}

PcaModel pca_fit(const Dataset& d, std::size_t p) { return pca_fit(d.numeric_matrix(), p, d.feature_names()); }

Matrix pca_transform(const PcaModel& m, const Matrix& rows) {
  if (rows.cols() != m.means.size())
    throw Error(ErrorCode::shape_mismatch,
                "expected " + std::to_string(m.means.size()) + " columns, got " + std::to_string(rows.cols()));
  Matrix scores(rows.rows(), m.retained);
  std::vector<double> centered(rows.cols());
  for (std::size_t r = 0; r < rows.rows(); ++r) {
    for (std::size_t j = 0; j < rows.cols(); ++j) centered[j] = rows(r, j) - m.means[j];
    for (std::size_t c = 0; c < m.retained; ++c) scores(r, c) = dot(m.components.row(c), centered);
  }
  return scores;
}

Matrix pca_inverse(const PcaModel& m, const Matrix& scores) {
  if (scores.cols() != m.retained)
    throw Error(ErrorCode::shape_mismatch,
                "expected " + std::to_string(m.retained) + " score columns, got " + std::to_string(scores.cols()));
  Matrix out(scores.rows(), m.means.size());
  for (std::size_t r = 0; r < scores.rows(); ++r)
    for (std::size_t j = 0; j < out.cols(); ++j) {
      double v = m.means[j];
      for (std::size_t c = 0; c < m.retained; ++c) v += m.components(c, j) * scores(r, c);
      out(r, j) = v;
    }
  return out;
}

}  // namespace tabula
