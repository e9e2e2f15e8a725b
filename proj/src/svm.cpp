#include "tabula/svm.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "tabula/error.hpp"
#include "tabula/model.hpp"

namespace tabula {

// ---- kernels ----

Kernel Kernel::polynomial(int degree) {
  if (degree < 1) throw Error(ErrorCode::invalid_argument, "polynomial degree must be >= 1");
  Kernel k;
  k.kind = KernelKind::polynomial;
  k.degree = degree;
  return k;
}

Kernel Kernel::rbf(double sigma) {
  if (!(sigma > 0.0)) throw Error(ErrorCode::invalid_argument, "rbf sigma must be > 0");
  Kernel k;
  k.kind = KernelKind::rbf;
  k.sigma = sigma;
  return k;
}

Kernel Kernel::rbf_gamma(double gamma) {
  if (!(gamma > 0.0)) throw Error(ErrorCode::invalid_argument, "rbf gamma must be > 0");
  return rbf(std::sqrt(1.0 / (2.0 * gamma)));
}

Kernel Kernel::laplacian(double sigma) {
  if (!(sigma > 0.0)) throw Error(ErrorCode::invalid_argument, "laplacian sigma must be > 0");
  Kernel k;
  k.kind = KernelKind::laplacian;
  k.sigma = sigma;
  return k;
}

Kernel Kernel::sigmoid(double alpha, double offset) {
  Kernel k;
  k.kind = KernelKind::sigmoid;
  k.alpha = alpha;
  k.offset = offset;
  return k;
}

double Kernel::operator()(std::span<const double> x, std::span<const double> y) const {
  if (x.size() != y.size()) throw Error(ErrorCode::length_mismatch, "kernel arguments differ in length");
  switch (kind) {
    case KernelKind::linear:
      return dot(x, y);
    case KernelKind::polynomial:
      return std::pow(dot(x, y), degree);
    case KernelKind::rbf:
      return std::exp(-squared_euclidean(x, y) / (2.0 * sigma * sigma));
    case KernelKind::laplacian:
      return std::exp(-std::sqrt(squared_euclidean(x, y)) / sigma);
    case KernelKind::sigmoid:
      return std::tanh(alpha * dot(x, y) + offset);
  }
  return 0.0;
}

double kernel_eval(const Kernel& k, std::span<const double> x, std::span<const double> y) { return k(x, y); }

Kernel Kernel::parse(std::string_view text) {
  const AlgoSpec spec = AlgoSpec::parse(text);
  if (spec.name == "linear") {
    spec.expect_keys({});
    return linear();
  }
  if (spec.name == "poly" || spec.name == "polynomial") {
    spec.expect_keys({"d"});
    return polynomial(static_cast<int>(spec.integer("d", 2)));
  }
  if (spec.name == "rbf" || spec.name == "gaussian") {
    spec.expect_keys({"sigma", "gamma"});
    if (spec.has("gamma")) return rbf_gamma(spec.real("gamma", 1.0));
    return rbf(spec.real("sigma", 1.0));
  }
  if (spec.name == "laplacian") {
    spec.expect_keys({"sigma"});
    return laplacian(spec.real("sigma", 1.0));
  }
  if (spec.name == "sigmoid") {
    spec.expect_keys({"alpha", "c"});
    return sigmoid(spec.real("alpha", 1.0), spec.real("c", 0.0));
  }
  throw Error(ErrorCode::invalid_argument, "unknown kernel '" + spec.name + "'");
}

std::string Kernel::to_string() const {
  switch (kind) {
    case KernelKind::linear:
      return "linear";
    case KernelKind::polynomial:
      return "poly:d=" + std::to_string(degree);
    case KernelKind::rbf:
      return "rbf:sigma=" + format_real(sigma);
    case KernelKind::laplacian:
      return "laplacian:sigma=" + format_real(sigma);
    case KernelKind::sigmoid:
      return "sigmoid:alpha=" + format_real(alpha) + ",c=" + format_real(offset);
  }
  return "linear";
}

Matrix gram_matrix(const Matrix& x, const Kernel& k) {
  Matrix g(x.rows(), x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = i; j < x.rows(); ++j) g(i, j) = g(j, i) = k(x.row(i), x.row(j));
  return g;
}

double svm_dual_objective(const Matrix& gram, std::span<const double> y, std::span<const double> alpha) {
  double linear = 0.0;
  double quad = 0.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    linear += alpha[i];
    if (alpha[i] == 0.0) continue;
    for (std::size_t j = 0; j < alpha.size(); ++j) quad += alpha[i] * alpha[j] * y[i] * y[j] * gram(i, j);
  }
  return linear - 0.5 * quad;
}

// ---- SMO ----

namespace {

constexpr double kStepEps = 1e-5;
// Multipliers within kBoundEps * C of a bound are placed on it.
constexpr double kBoundEps = 1e-8;

class Smo {
 public:
  Smo(const Matrix& x, std::span<const double> y, const SvmParams& p)
      : y_(y.begin(), y.end()), p_(p), gram_(gram_matrix(x, p.kernel)), alpha_(y.size(), 0.0), error_(y.size()) {
    // f = 0 initially, so E_i = -y_i.
    for (std::size_t i = 0; i < y_.size(); ++i) error_[i] = -y_[i];
  }

  // Alternates full passes with passes over the non-bound multipliers, as
  // in Platt's outer loop. Only full passes count towards max_passes.
  void run(SvmTrace& trace) {
    const std::size_t n = y_.size();
    int quiet = 0;
    bool full = true;
    while (quiet < p_.max_passes) {
      if (trace.sweeps >= p_.max_sweeps)
        throw Error(ErrorCode::no_convergence, "SMO exceeded " + std::to_string(p_.max_sweeps) + " sweeps");
      std::size_t changed = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (!full && !non_bound(i)) continue;
        if (violates_kkt(i) && optimize(i)) ++changed;
      }
      ++trace.sweeps;
      trace.updates += changed;
      trace.dual_objective.push_back(svm_dual_objective(gram_, y_, alpha_));
      if (full) {
        quiet = changed == 0 ? quiet + 1 : 0;
        full = false;
      } else if (changed == 0) {
        full = true;
      }
    }
  }

  const std::vector<double>& alpha() const { return alpha_; }
  const Matrix& gram() const { return gram_; }
  double bias() const { return b_; }

 private:
  bool violates_kkt(std::size_t i) const {
    const double r = y_[i] * error_[i];
    return (r < -p_.tol && alpha_[i] < p_.C) || (r > p_.tol && alpha_[i] > 0.0);
  }

  bool non_bound(std::size_t i) const { return alpha_[i] > 0.0 && alpha_[i] < p_.C; }

  // Second multiplier maximising |E_i - E_j| (over non-bound rows when any
  // exist), then every non-bound row, then every row, in index order.
  bool optimize(std::size_t i) {
    const std::size_t n = y_.size();
    bool any_free = false;
    for (std::size_t j = 0; j < n && !any_free; ++j) any_free = j != i && non_bound(j);
    std::size_t best = i;
    double gap = -1.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i || (any_free && !non_bound(j))) continue;
      const double g = std::abs(error_[i] - error_[j]);
      if (g > gap) {
        gap = g;
        best = j;
      }
    }
    if (take_step(i, best)) return true;
    for (std::size_t j = 0; j < n; ++j)
      if (j != best && non_bound(j) && take_step(i, j)) return true;
    for (std::size_t j = 0; j < n; ++j)
      if (j != best && !non_bound(j) && take_step(i, j)) return true;
    return false;
  }

  bool take_step(std::size_t i, std::size_t j) {
    if (i == j) return false;
    const double C = p_.C;
    const double ai = alpha_[i], aj = alpha_[j];
    const double yi = y_[i], yj = y_[j];
    const double ei = error_[i], ej = error_[j];
    const double s = yi * yj;
    double lo, hi;
    if (yi != yj) {
      lo = std::max(0.0, aj - ai);
      hi = std::min(C, C + aj - ai);
    } else {
      lo = std::max(0.0, ai + aj - C);
      hi = std::min(C, ai + aj);
    }
    if (lo >= hi) return false;

    const double kii = gram_(i, i), kjj = gram_(j, j), kij = gram_(i, j);
    const double eta = kii + kjj - 2.0 * kij;
    double aj_new;
    if (eta > 0.0) {
      aj_new = std::clamp(aj + yj * (ei - ej) / eta, lo, hi);
    } else {
      // Objective along the constraint line is linear or concave here;
      // compare the (negated) dual at both ends.
      const double fi = yi * (ei - b_) - ai * kii - s * aj * kij;
      const double fj = yj * (ej - b_) - s * ai * kij - aj * kjj;
      const double li = ai + s * (aj - lo);
      const double hi_i = ai + s * (aj - hi);
      const double lobj = li * fi + lo * fj + 0.5 * li * li * kii + 0.5 * lo * lo * kjj + s * lo * li * kij;
      const double hobj = hi_i * fi + hi * fj + 0.5 * hi_i * hi_i * kii + 0.5 * hi * hi * kjj + s * hi * hi_i * kij;
      if (lobj < hobj - 1e-12) {
        aj_new = lo;
      } else if (lobj > hobj + 1e-12) {
        aj_new = hi;
      } else {
        aj_new = aj;
      }
    }
    if (std::abs(aj_new - aj) < kStepEps * (aj_new + aj + kStepEps)) return false;

    const double snap = kBoundEps * C;
    if (aj_new < snap) {
      aj_new = 0.0;
    } else if (aj_new > C - snap) {
      aj_new = C;
    }
    double ai_new = ai + s * (aj - aj_new);
    if (ai_new < snap) {
      aj_new += s * ai_new;
      ai_new = 0.0;
    } else if (ai_new > C - snap) {
      aj_new += s * (ai_new - C);
      ai_new = C;
    }
    aj_new = std::clamp(aj_new, 0.0, C);

    const double di = yi * (ai_new - ai);
    const double dj = yj * (aj_new - aj);
    const double b1 = b_ - ei - di * kii - dj * kij;
    const double b2 = b_ - ej - di * kij - dj * kjj;
    double b_new;
    if (ai_new > 0.0 && ai_new < C) {
      b_new = b1;
    } else if (aj_new > 0.0 && aj_new < C) {
      b_new = b2;
    } else {
      b_new = 0.5 * (b1 + b2);
    }
    const double db = b_new - b_;
    for (std::size_t k = 0; k < y_.size(); ++k) error_[k] += di * gram_(i, k) + dj * gram_(j, k) + db;
    alpha_[i] = ai_new;
    alpha_[j] = aj_new;
    b_ = b_new;
    return true;
  }

  std::vector<double> y_;
  SvmParams p_;
  Matrix gram_;
  std::vector<double> alpha_;
  std::vector<double> error_;
  double b_ = 0.0;
};

}  // namespace

SvmFit svm_fit(const Matrix& x, std::span<const double> y, const SvmParams& params) {
  if (x.rows() != y.size()) throw Error(ErrorCode::length_mismatch, "rows vs labels");
  if (!(params.C > 0.0)) throw Error(ErrorCode::invalid_argument, "C must be > 0");
  bool has_pos = false, has_neg = false;
  for (double v : y) {
    if (v == 1.0) {
      has_pos = true;
    } else if (v == -1.0) {
      has_neg = true;
    } else {
      throw Error(ErrorCode::not_binary, "labels must be +-1");
    }
  }
  if (!has_pos || !has_neg) throw Error(ErrorCode::not_binary, "both classes must be present");

  Smo smo(x, y, params);
  SvmFit fit;
  smo.run(fit.trace);
  fit.alpha = smo.alpha();

  SvmModel& m = fit.model;
  m.kernel = params.kernel;
  m.C = params.C;
  std::vector<std::size_t> sv;
  for (std::size_t i = 0; i < fit.alpha.size(); ++i)
    if (fit.alpha[i] > 0.0) sv.push_back(i);
  m.support_vectors = x.select_rows(sv);
  for (std::size_t i : sv) {
    m.alpha.push_back(fit.alpha[i]);
    m.y.push_back(y[i]);
  }

  const Matrix& g = smo.gram();
  double b_sum = 0.0;
  std::size_t free_count = 0;
  for (std::size_t k : sv) {
    if (fit.alpha[k] >= params.C) continue;
    double f = 0.0;
    for (std::size_t i : sv) f += fit.alpha[i] * y[i] * g(i, k);
    b_sum += y[k] - f;
    ++free_count;
  }
  m.bias = free_count > 0 ? b_sum / static_cast<double>(free_count) : smo.bias();
  return fit;
}

SvmFit svm_fit(const Dataset& d, const SvmParams& params) {
  if (!d.all_numeric()) throw Error(ErrorCode::non_numeric_feature, "SVM needs numeric features");
  const auto labels = d.class_labels();
  std::set<std::string> distinct(labels.begin(), labels.end());
  if (distinct.size() != 2)
    throw Error(ErrorCode::not_binary, "SVM needs exactly two classes, got " + std::to_string(distinct.size()));
  std::vector<double> y;
  for (const auto& l : labels) y.push_back(l == *distinct.begin() ? -1.0 : 1.0);
  SvmFit fit = svm_fit(d.numeric_matrix(), y, params);
  fit.model.classes.assign(distinct.begin(), distinct.end());
  fit.model.feature_names = d.feature_names();
  return fit;
}

double decision_function(const SvmModel& m, std::span<const double> row) {
  double f = m.bias;
  for (std::size_t i = 0; i < m.alpha.size(); ++i) f += m.alpha[i] * m.y[i] * m.kernel(m.support_vectors.row(i), row);
  return f;
}

std::string svm_predict_row(const SvmModel& m, std::span<const double> row) {
  return decision_function(m, row) >= 0.0 ? m.classes.at(1) : m.classes.at(0);
}

std::vector<std::string> svm_predict(const SvmModel& m, const Dataset& d) {
  const Matrix x = d.numeric_matrix(m.feature_names);
  std::vector<std::string> out(x.rows());
  for (std::size_t r = 0; r < x.rows(); ++r) out[r] = svm_predict_row(m, x.row(r));
  return out;
}

SvmOvrModel svm_fit_ovr(const Dataset& d, const SvmParams& params) {
  if (!d.all_numeric()) throw Error(ErrorCode::non_numeric_feature, "SVM needs numeric features");
  const auto labels = d.class_labels();
  const auto groups = group_by_class(labels);
  if (groups.classes.size() < 2) throw Error(ErrorCode::not_binary, "one-vs-rest needs at least two classes");
  const Matrix x = d.numeric_matrix();
  SvmOvrModel ovr;
  ovr.classes = groups.classes;
  for (const auto& cls : groups.classes) {
    std::vector<double> y;
    for (const auto& l : labels) y.push_back(l == cls ? 1.0 : -1.0);
    SvmFit fit = svm_fit(x, y, params);
    fit.model.classes = {"rest", cls};
    fit.model.feature_names = d.feature_names();
    ovr.models.push_back(std::move(fit.model));
  }
  return ovr;
}

std::vector<std::string> svm_predict(const SvmOvrModel& m, const Dataset& d) {
  const Matrix x = d.numeric_matrix(m.models.front().feature_names);
  std::vector<std::string> out(x.rows());
  for (std::size_t r = 0; r < x.rows(); ++r) {
    std::size_t best = 0;
    double best_value = -std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < m.models.size(); ++c) {
      const double v = decision_function(m.models[c], x.row(r));
      if (v > best_value) {
        best_value = v;
        best = c;
      }
    }
    out[r] = m.classes[best];
  }
  return out;
}

}  // namespace tabula
