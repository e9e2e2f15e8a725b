#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "tabula/dataset.hpp"

namespace tabula {

using Json = nlohmann::json;

enum class Task { classification, regression };

/// `name:key=value,key=value` algorithm descriptor, e.g. `knn:k=5,scale=standard`.
/// Values containing commas (nested specs) are written in brackets:
/// `bagging:base=[tree:max_depth=1],T=25`.
struct AlgoSpec {
  std::string name;
  std::map<std::string, std::string> params;

  static AlgoSpec parse(std::string_view text);
  std::string to_string() const;

  bool has(const std::string& key) const { return params.contains(key); }
  std::string text(const std::string& key, std::string fallback) const;
  double real(const std::string& key, double fallback) const;
  long integer(const std::string& key, long fallback) const;
  bool flag(const std::string& key, bool fallback) const;
  AlgoSpec with(const std::map<std::string, std::string>& overrides) const;

  /// Throws invalid_argument naming the first key not in `allowed`.
  void expect_keys(std::initializer_list<std::string_view> allowed) const;
};

/// A fitted, immutable model.
class Predictor {
 public:
  virtual ~Predictor() = default;
  virtual Task task() const = 0;
  virtual std::vector<std::string> predict_labels(const Dataset& d) const;
  virtual std::vector<double> predict_values(const Dataset& d) const;
  /// {"type": ..., "params": {...}}
  virtual Json to_json() const = 0;
};

/// An unfitted learner described by an AlgoSpec. Copyable; fit is const and
/// safe to call concurrently.
class Estimator {
 public:
  explicit Estimator(AlgoSpec spec);

  const AlgoSpec& spec() const noexcept { return spec_; }
  Task task() const;

  std::unique_ptr<Predictor> fit(const Dataset& train, std::uint64_t seed) const;
  /// Row-weighted fit. Learners with native weight support (trees, stumps)
  /// use the weights directly; others train on a seeded weighted resample.
  std::unique_ptr<Predictor> fit_weighted(const Dataset& train, std::span<const double> weights,
                                          std::uint64_t seed) const;
  bool supports_weights() const;

 private:
  AlgoSpec spec_;
};

std::unique_ptr<Predictor> predictor_from_json(const Json& j);

}  // namespace tabula
