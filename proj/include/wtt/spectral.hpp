#ifndef WTT_SPECTRAL_HPP
#define WTT_SPECTRAL_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "wtt/similarity.hpp"

namespace wtt {

// Dense weight, degree and unnormalised Laplacian (L = D - W) of a graph.
struct LaplacianPair {
  Eigen::MatrixXd weights;
  Eigen::VectorXd degrees;
  Eigen::MatrixXd laplacian;
  std::vector<int> isolated;  // vertices with zero degree
};

LaplacianPair laplacian(const SimilarityGraph& graph);

// Smallest generalized eigenpairs of L u = lambda D u, ascending. Columns of
// `vectors` are D-orthonormal.
struct Spectrum {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
};

// Solved through the symmetric matrix D^-1/2 L D^-1/2 with u = D^-1/2 y.
// Throws DataError when some degree is zero; isolated vertices must be removed
// first.
Spectrum generalized_eigs(const LaplacianPair& pair, int count);

// k in [k_min, k_max] maximising lambda_{k+1} - lambda_k (1-based, ascending
// eigenvalues). Ties go to the smallest k. k_max is clamped to size - 1.
int eigengap_select(std::span<const double> eigenvalues, int k_min, int k_max);

struct KMeansOptions {
  int restarts = 10;
  int max_iterations = 100;
  std::uint64_t seed = 0;
};

struct KMeansResult {
  std::vector<int> labels;  // 0..k-1
  Eigen::MatrixXd centers;  // k x dim
  double objective = 0.0;   // within-cluster sum of squares
  // Objective after each assignment step of the winning restart.
  std::vector<double> trace;
};

// Lloyd iterations from distance-weighted (k-means++) seeding, best of
// `restarts` runs. Rows of `points` are the samples. Every cluster is
// non-empty in the result.
KMeansResult kmeans(const Eigen::MatrixXd& points, int k, const KMeansOptions& options = {});

// labels[i] in 1..k, or -1 for vertices left out of the clustering.
struct Clustering {
  std::vector<int> labels;
  int k = 0;
};

struct SpectralParams {
  std::optional<int> k;  // chosen by eigengap when empty
  int k_min = 2;
  int k_max_cap = 60;       // search range upper end is min(cap, n / 10)
  int min_component_size = 5;  // components smaller than this are labelled -1
  int max_vertices = 5000;
  bool normalize_rows = true;  // unit-length embedding rows before k-means
  KMeansOptions kmeans;
};

struct SpectralResult {
  Clustering clustering;
  std::vector<double> eigenvalues;  // smallest generalized eigenvalues computed
};

SpectralResult spectral_cluster(const SimilarityGraph& graph, const SpectralParams& params = {});

// 1/2 sum_A W(A, complement) / vol(A). DataError if a cluster has zero volume
// or an unlabelled vertex carries edges.
double ncut(const SimilarityGraph& graph, const Clustering& clustering);

// Components labelled 1..c in order of their smallest vertex.
Clustering connected_components(const SimilarityGraph& graph);

// CSV `index,eigenvalue`, 1-based index.
void write_spectrum(std::ostream& out, std::span<const double> eigenvalues);

}  // namespace wtt

#endif
