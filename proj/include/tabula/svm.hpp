#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tabula/dataset.hpp"
#include "tabula/matrix.hpp"

namespace tabula {

enum class KernelKind { linear, polynomial, rbf, laplacian, sigmoid };

/// linear: x.y; polynomial: (x.y)^d; rbf: exp(-|x-y|^2 / 2 sigma^2);
/// laplacian: exp(-|x-y| / sigma); sigmoid: tanh(alpha x.y + c).
struct Kernel {
  KernelKind kind = KernelKind::linear;
  int degree = 2;
  double sigma = 1.0;
  double alpha = 1.0;
  double offset = 0.0;

  static Kernel linear() { return {}; }
  static Kernel polynomial(int degree);
  static Kernel rbf(double sigma);
  /// gamma = 1 / (2 sigma^2)
  static Kernel rbf_gamma(double gamma);
  static Kernel laplacian(double sigma);
  static Kernel sigmoid(double alpha, double offset);

  double operator()(std::span<const double> x, std::span<const double> y) const;

  /// `linear`, `poly:d=2`, `rbf:sigma=0.5`, `rbf:gamma=2`,
  /// `laplacian:sigma=1`, `sigmoid:alpha=0.1,c=0`.
  static Kernel parse(std::string_view text);
  std::string to_string() const;
};

double kernel_eval(const Kernel& k, std::span<const double> x, std::span<const double> y);

struct SvmParams {
  double C = 1.0;
  Kernel kernel;
  double tol = 1e-3;
  int max_passes = 5;                ///< consecutive full passes without an update
  std::size_t max_sweeps = 1000000;  ///< all passes, full or not
};

/// Binary soft-margin SVM; only rows with alpha > 0 are kept.
struct SvmModel {
  Kernel kernel;
  double C = 1.0;
  std::vector<std::string> classes;  ///< {label for -1, label for +1}
  std::vector<std::string> feature_names;
  Matrix support_vectors;
  std::vector<double> alpha;
  std::vector<double> y;  ///< +-1 per support vector
  double bias = 0.0;
};

struct SvmTrace {
  std::vector<double> dual_objective;  ///< after every pass
  std::size_t sweeps = 0;
  std::size_t updates = 0;
};

struct SvmFit {
  SvmModel model;
  SvmTrace trace;
  std::vector<double> alpha;  ///< one multiplier per training row
};

/// SMO on the dual. A row is a KKT violator when y_i E_i < -tol with
/// alpha_i < C, or y_i E_i > tol with alpha_i > 0. The second multiplier
/// maximises |E_i - E_j|; when that pair makes no progress the other rows
/// are tried in index order. Passes over all rows alternate with passes over
/// the non-bound rows; training stops after max_passes consecutive full
/// passes without an update. The final bias averages
/// y_k - sum_i alpha_i y_i K(x_i, x_k) over non-bound support vectors.
SvmFit svm_fit(const Matrix& x, std::span<const double> y, const SvmParams& params);

/// Labels are mapped lexicographically: smaller label -> -1.
SvmFit svm_fit(const Dataset& d, const SvmParams& params);

/// Dual objective sum(alpha) - 1/2 sum_ij alpha_i alpha_j y_i y_j K_ij.
double svm_dual_objective(const Matrix& gram, std::span<const double> y, std::span<const double> alpha);
Matrix gram_matrix(const Matrix& x, const Kernel& k);

double decision_function(const SvmModel& m, std::span<const double> row);
/// sign of the decision value, with 0 mapped to the +1 class.
std::string svm_predict_row(const SvmModel& m, std::span<const double> row);
std::vector<std::string> svm_predict(const SvmModel& m, const Dataset& d);

/// One binary SVM per class (that class vs the rest); prediction takes the
/// class with the largest decision value.
struct SvmOvrModel {
  std::vector<std::string> classes;
  std::vector<SvmModel> models;
};

SvmOvrModel svm_fit_ovr(const Dataset& d, const SvmParams& params);
std::vector<std::string> svm_predict(const SvmOvrModel& m, const Dataset& d);

}  // namespace tabula
