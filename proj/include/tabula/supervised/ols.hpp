#pragma once

#include <span>
#include <string>
#include <vector>

#include "tabula/dataset.hpp"
#include "tabula/matrix.hpp"

namespace tabula {

enum class OlsForm { simple, polynomial, multiple };

/// Least-squares fit; coefficients are intercept first. Polynomial models
/// hold a0..a_degree over a single input, multiple models one slope per
/// input column.
struct OlsModel {
  OlsForm form = OlsForm::multiple;
  std::size_t degree = 1;
  std::vector<std::string> feature_names;
  std::vector<double> coefficients;
};

/// y = a + b x with b = Cov(x, y) / Var(x) and a = mean(y) - b mean(x).
OlsModel ols_fit_simple(std::span<const double> x, std::span<const double> y);
/// Solves the normal equations sum(y x^k) = sum_j a_j sum(x^(j+k)).
OlsModel ols_fit_polynomial(std::span<const double> x, std::span<const double> y, std::size_t degree);
/// B = (X'X)^-1 X'Y with an intercept column prepended to X.
OlsModel ols_fit_multiple(const Matrix& x, std::span<const double> y);

/// Dispatches on form using the dataset's numeric features and targets.
OlsModel ols_fit(const Dataset& d, OlsForm form, std::size_t degree = 1);

/// Expanded design row (leading 1) for one input row.
std::vector<double> ols_design_row(const OlsModel& m, std::span<const double> inputs);
Matrix ols_design_matrix(const OlsModel& m, const Matrix& inputs);

double ols_predict_row(const OlsModel& m, std::span<const double> inputs);
std::vector<double> ols_predict(const OlsModel& m, const Matrix& inputs);
std::vector<double> ols_predict(const OlsModel& m, const Dataset& d);

std::string_view to_string(OlsForm f);
OlsForm parse_ols_form(std::string_view text);

}  // namespace tabula
