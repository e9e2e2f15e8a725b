#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "tabula/distance.hpp"
#include "tabula/matrix.hpp"

namespace tabula {

inline constexpr int kNoise = -1;

/// Per-row cluster id in 0..k-1, or kNoise.
struct ClusterAssignment {
  std::vector<int> ids;
  int k = 0;

  /// Renumbers non-noise ids to 0..k-1 preserving their relative order.
  static ClusterAssignment compact(std::vector<int> ids);

  std::size_t size() const noexcept { return ids.size(); }
  std::size_t noise_count() const;
  std::vector<std::vector<std::size_t>> members() const;
};

// ---- k-means ----

enum class KMeansInit { first_k, seeded_random };

struct KMeansOptions {
  std::size_t k = 2;
  KMeansInit init = KMeansInit::first_k;
  std::uint64_t seed = 0;
  std::size_t max_iter = 300;
  double tol = 0.0;                  ///< stop when no center moves more than this
  std::optional<Matrix> centers;     ///< explicit initial centers override `init`
};

struct KMeansModel {
  Matrix centers;
  double objective = 0.0;            ///< sum of squared distances to assigned centers
  std::size_t iterations = 0;
  bool converged = false;
  std::vector<double> objective_trace;  ///< after each update step
  std::vector<Matrix> center_trace;     ///< centers after each update step
};

struct KMeansResult {
  KMeansModel model;
  ClusterAssignment assignment;
};

KMeansResult kmeans(const Matrix& x, const KMeansOptions& options);
std::size_t nearest_center(const Matrix& centers, std::span<const double> row);

// ---- Gaussian mixture ----

struct GmmInit {
  std::vector<double> weights;
  Matrix means;
  std::vector<Matrix> covariances;
};

struct GmmOptions {
  std::size_t k = 2;
  std::uint64_t seed = 0;
  std::size_t max_iter = 200;
  double tol = 1e-8;          ///< on |delta LL|
  bool ridge = true;          ///< add 1e-6 * trace(S) / dim to each covariance diagonal
  std::optional<GmmInit> init;
};

struct GmmModel {
  std::vector<double> weights;
  Matrix means;
  std::vector<Matrix> covariances;
  std::vector<double> log_likelihood;  ///< at the initial parameters, then after each M-step
  std::size_t iterations = 0;
  bool converged = false;
};

struct GmmResult {
  GmmModel model;
  Matrix responsibilities;  ///< n x k, for the final parameters
  ClusterAssignment assignment;
};

/// Responsibilities under fixed parameters, plus the total log-likelihood.
struct EStep {
  Matrix gamma;
  double log_likelihood = 0.0;
};

EStep gmm_e_step(const Matrix& x, const std::vector<double>& weights, const Matrix& means,
                 const std::vector<Matrix>& covariances);
/// New parameters from responsibilities.
GmmInit gmm_m_step(const Matrix& x, const Matrix& gamma, bool ridge);
GmmResult gmm_em(const Matrix& x, const GmmOptions& options);
double gaussian_log_density(std::span<const double> x, std::span<const double> mean, const Cholesky& chol);

// ---- hierarchical ----

enum class Linkage { single, complete, average };
enum class DendrogramKind { agglomerative, diana };

struct DendrogramNode {
  int left = -1;   ///< -1 for leaves
  int right = -1;
  double height = 0.0;
  std::vector<std::size_t> members;  ///< sorted row indices
};

/// Leaves are nodes 0..n-1; internal nodes follow. `split_order` lists the
/// internal nodes in the order a top-down cut opens them.
struct Dendrogram {
  DendrogramKind kind = DendrogramKind::agglomerative;
  std::optional<Linkage> linkage;
  std::vector<DendrogramNode> nodes;
  std::vector<int> split_order;
  int root = -1;

  std::size_t leaf_count() const noexcept { return (nodes.size() + 1) / 2; }
  ClusterAssignment cut(std::size_t k) const;
};

/// Nested {"left","right","height"} objects; leaves are {"leaf": i, "name": ...}.
nlohmann::json to_json(const Dendrogram& tree, std::span<const std::string> names = {});
/// Branch lengths are height differences, so the tree is drawn to scale.
std::string to_newick(const Dendrogram& tree, std::span<const std::string> names = {});

/// Validates a pairwise distance matrix: square, symmetric, zero diagonal,
/// non-negative.
void check_distance_matrix(const Matrix& d);

Dendrogram agglomerative(const Matrix& distances, Linkage linkage);

struct DianaMove {
  std::size_t row;
  double gain;  ///< D_x when it moved
};

struct DianaSplit {
  std::vector<std::size_t> cluster;
  double diameter = 0.0;
  std::size_t seed;  ///< first splinter member
  std::vector<DianaMove> moves;
  std::vector<std::size_t> remaining;
  std::vector<std::size_t> splinter;
};

struct DianaResult {
  Dendrogram tree;
  std::vector<DianaSplit> splits;
};

DianaResult diana(const Matrix& distances);

std::string to_string(Linkage l);
Linkage parse_linkage(std::string_view text);

// ---- DBSCAN ----

enum class PointRole { core, border, noise };

struct DbscanResult {
  ClusterAssignment assignment;
  std::vector<PointRole> roles;
  std::vector<std::size_t> core_points;
};

/// Neighbourhoods are closed balls that include the point itself. Clusters
/// grow from unprocessed core points taken first from `seed_order`, then in
/// ascending row order; a border point joins the first cluster reaching it.
DbscanResult dbscan(const Matrix& x, double eps, std::size_t min_pts, const DistanceMetric& metric,
                    std::span<const std::size_t> seed_order = {});

std::string_view to_string(PointRole r);

// ---- validity indices ----

struct PairCounts {
  std::uint64_t a = 0;  ///< same cluster in both
  std::uint64_t b = 0;  ///< same in the first only
  std::uint64_t c = 0;  ///< same in the reference only
  std::uint64_t d = 0;  ///< different in both
};

struct ExternalIndices {
  PairCounts pairs;
  std::optional<double> jaccard;
  std::optional<double> fowlkes_mallows;
  std::optional<double> rand;
};

/// Rows that are noise in either assignment are left out.
ExternalIndices external_indices(const ClusterAssignment& a, const ClusterAssignment& reference);

struct InternalIndices {
  double davies_bouldin = 0.0;
  double dunn = 0.0;  ///< +inf when every cluster has zero diameter
};

/// Euclidean; noise rows are left out.
InternalIndices internal_indices(const Matrix& x, const ClusterAssignment& a);

nlohmann::json to_json(const ExternalIndices& e);
nlohmann::json to_json(const InternalIndices& i);

}  // namespace tabula
