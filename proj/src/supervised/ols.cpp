#include "tabula/supervised/ols.hpp"

#include <cmath>

#include "tabula/error.hpp"

namespace tabula {

namespace {

void check_pair(std::size_t nx, std::size_t ny) {
  if (nx != ny) throw Error(ErrorCode::length_mismatch, std::to_string(nx) + " inputs vs " + std::to_string(ny) + " targets");
  if (nx == 0) throw Error(ErrorCode::empty, "no observations");
}

void check_finite(const OlsModel& m) {
  for (double c : m.coefficients)
    if (!std::isfinite(c)) throw Error(ErrorCode::rank_deficient, "non-finite coefficient");
}

std::vector<double> solve_normal_equations(const Matrix& design, std::span<const double> y) {
  const std::size_t p = design.cols();
  Matrix xtx(p, p);
  std::vector<double> xty(p, 0.0);
  for (std::size_t r = 0; r < design.rows(); ++r) {
    auto row = design.row(r);
    for (std::size_t i = 0; i < p; ++i) {
      xty[i] += row[i] * y[r];
      for (std::size_t j = 0; j < p; ++j) xtx(i, j) += row[i] * row[j];
    }
  }
  return solve_linear(std::move(xtx), std::move(xty));
}

}  // namespace

OlsModel ols_fit_simple(std::span<const double> x, std::span<const double> y) {
  check_pair(x.size(), y.size());
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double cov = 0.0, var = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    cov += (x[i] - mx) * (y[i] - my);
    var += (x[i] - mx) * (x[i] - mx);
  }
  if (!(var > 1e-10 * std::max(1.0, mx * mx)))
    throw Error(ErrorCode::rank_deficient, "input has zero variance");
  const double b = cov / var;
  OlsModel m{OlsForm::simple, 1, {}, {my - b * mx, b}};
  check_finite(m);
  return m;
}

OlsModel ols_fit_polynomial(std::span<const double> x, std::span<const double> y, std::size_t degree) {
  check_pair(x.size(), y.size());
  if (degree < 1) throw Error(ErrorCode::invalid_argument, "degree must be >= 1");
  OlsModel m{OlsForm::polynomial, degree, {}, {}};
  Matrix inputs(x.size(), 1);
  for (std::size_t i = 0; i < x.size(); ++i) inputs(i, 0) = x[i];
  m.coefficients = solve_normal_equations(ols_design_matrix(m, inputs), y);
  check_finite(m);
  return m;
}

OlsModel ols_fit_multiple(const Matrix& x, std::span<const double> y) {
  check_pair(x.rows(), y.size());
  OlsModel m{OlsForm::multiple, 1, {}, {}};
  m.coefficients = solve_normal_equations(ols_design_matrix(m, x), y);
  check_finite(m);
  return m;
}

OlsModel ols_fit(const Dataset& d, OlsForm form, std::size_t degree) {
  const Matrix x = d.numeric_matrix();
  const auto y = d.targets();
  OlsModel m;
  if (form == OlsForm::multiple) {
    m = ols_fit_multiple(x, y);
  } else {
    if (x.cols() != 1) throw Error(ErrorCode::shape_mismatch, "simple/polynomial regression takes one input column");
    const auto col = x.column(0);
    m = form == OlsForm::simple ? ols_fit_simple(col, y) : ols_fit_polynomial(col, y, degree);
  }
  m.feature_names = d.feature_names();
  return m;
}

std::vector<double> ols_design_row(const OlsModel& m, std::span<const double> inputs) {
  std::vector<double> row{1.0};
  if (m.form == OlsForm::multiple) {
    row.insert(row.end(), inputs.begin(), inputs.end());
    return row;
  }
  if (inputs.size() != 1) throw Error(ErrorCode::shape_mismatch, "expected one input");
  double p = 1.0;
  for (std::size_t k = 1; k <= m.degree; ++k) {
    p *= inputs[0];
    row.push_back(p);
  }
  return row;
}

Matrix ols_design_matrix(const OlsModel& m, const Matrix& inputs) {
  const std::size_t width = m.form == OlsForm::multiple ? inputs.cols() + 1 : m.degree + 1;
  Matrix design(inputs.rows(), width);
  for (std::size_t r = 0; r < inputs.rows(); ++r) {
    const auto row = ols_design_row(m, inputs.row(r));
    std::copy(row.begin(), row.end(), design.row(r).begin());
  }
  return design;
}

double ols_predict_row(const OlsModel& m, std::span<const double> inputs) {
  const auto row = ols_design_row(m, inputs);
  if (row.size() != m.coefficients.size()) throw Error(ErrorCode::shape_mismatch, "input width vs coefficients");
  return dot(row, m.coefficients);
}

std::vector<double> ols_predict(const OlsModel& m, const Matrix& inputs) {
  std::vector<double> out(inputs.rows());
  for (std::size_t r = 0; r < inputs.rows(); ++r) out[r] = ols_predict_row(m, inputs.row(r));
  return out;
}

std::vector<double> ols_predict(const OlsModel& m, const Dataset& d) {
  return ols_predict(m, m.feature_names.empty() ? d.numeric_matrix() : d.numeric_matrix(m.feature_names));
}

std::string_view to_string(OlsForm f) {
  switch (f) {
    case OlsForm::simple:
      return "simple";
    case OlsForm::polynomial:
      return "polynomial";
    case OlsForm::multiple:
      return "multiple";
  }
  return "unknown";
}

OlsForm parse_ols_form(std::string_view text) {
  if (text == "simple") return OlsForm::simple;
  if (text == "polynomial" || text == "poly") return OlsForm::polynomial;
  if (text == "multiple") return OlsForm::multiple;
  throw Error(ErrorCode::invalid_argument, "unknown regression form '" + std::string(text) + "'");
}

}  // namespace tabula
