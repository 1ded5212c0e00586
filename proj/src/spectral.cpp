#include "wtt/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <string>

#include <lapacke.h>

namespace wtt {

LaplacianPair laplacian(const SimilarityGraph& graph) {
  const int n = graph.vertices;
  LaplacianPair p;
  p.weights = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : graph.edges) {
    p.weights(e.i, e.j) += e.weight;
    p.weights(e.j, e.i) += e.weight;
  }
  p.degrees = p.weights.rowwise().sum();
  p.laplacian = -p.weights;
  p.laplacian.diagonal() += p.degrees;
  for (int i = 0; i < n; ++i)
    if (p.degrees(i) == 0.0) p.isolated.push_back(i);
  return p;
}

Spectrum generalized_eigs(const LaplacianPair& pair, int count) {
  const int n = static_cast<int>(pair.degrees.size());
  if (count < 1 || count > n) throw DataError("generalized_eigs: requested eigenpair count out of range");
  if (!pair.isolated.empty() || (pair.degrees.array() <= 0.0).any())
    throw DataError("generalized_eigs: degree matrix is singular; remove isolated vertices first");

  const Eigen::VectorXd inv_sqrt = pair.degrees.array().rsqrt();
  Eigen::MatrixXd sym = inv_sqrt.asDiagonal() * pair.laplacian * inv_sqrt.asDiagonal();

  Eigen::VectorXd w(n);
  Eigen::MatrixXd z(n, count);
  std::vector<lapack_int> support(2 * static_cast<std::size_t>(n));
  lapack_int found = 0;
  const lapack_int info = LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', 'I', 'L', n, sym.data(), n, 0.0, 0.0, 1, count,
                                         0.0, &found, w.data(), z.data(), n, support.data());
  if (info != 0 || found != count)
    throw DataError("generalized_eigs: LAPACK dsyevr failed (info " + std::to_string(info) + ")");

  Spectrum s;
  s.values = w.head(count);
  s.vectors = inv_sqrt.asDiagonal() * z;
  return s;
}

int eigengap_select(std::span<const double> eigenvalues, int k_min, int k_max) {
  const int size = static_cast<int>(eigenvalues.size());
  if (k_min < 1) throw ConfigError("eigengap: k_min must be >= 1");
  if (size < k_min + 1) throw DataError("eigengap: fewer eigenvalues than k_min + 1");
  k_max = std::min(k_max, size - 1);
  if (k_max < k_min) throw ConfigError("eigengap: k_max < k_min");

  double best = -std::numeric_limits<double>::infinity();
  double scale = 0.0;
  for (int k = k_min; k <= k_max; ++k) {
    best = std::max(best, eigenvalues[k] - eigenvalues[k - 1]);
    scale = std::max({scale, std::abs(eigenvalues[k]), std::abs(eigenvalues[k - 1])});
  }
  const double slack = 1e-9 * std::max(scale, 1.0);
  for (int k = k_min; k <= k_max; ++k)
    if (eigenvalues[k] - eigenvalues[k - 1] >= best - slack) return k;
  return k_min;
}

namespace {

// Uniform double in [0, 1) from raw 64-bit output; keeps runs bit-identical
// across standard library implementations.
double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

struct LloydRun {
  std::vector<int> labels;
  Eigen::MatrixXd centers;
  double objective = 0.0;
  std::vector<double> trace;
};

Eigen::MatrixXd seed_centers(const Eigen::MatrixXd& x, int k, std::mt19937_64& rng) {
  const Eigen::Index n = x.rows();
  Eigen::MatrixXd c(k, x.cols());
  auto pick = static_cast<Eigen::Index>(uniform01(rng) * static_cast<double>(n));
  c.row(0) = x.row(std::min(pick, n - 1));
  Eigen::VectorXd d2 = (x.rowwise() - c.row(0)).rowwise().squaredNorm();
  for (int j = 1; j < k; ++j) {
    const double total = d2.sum();
    Eigen::Index chosen = n - 1;
    if (total > 0.0) {
      double target = uniform01(rng) * total;
      for (Eigen::Index i = 0; i < n; ++i) {
        target -= d2(i);
        if (target < 0.0) {
          chosen = i;
          break;
        }
      }
    } else {
      chosen = std::min(static_cast<Eigen::Index>(uniform01(rng) * static_cast<double>(n)), n - 1);
    }
    c.row(j) = x.row(chosen);
    d2 = d2.cwiseMin((x.rowwise() - c.row(j)).rowwise().squaredNorm());
  }
  return c;
}

// Nearest-center assignment; returns the objective.
double assign(const Eigen::MatrixXd& x, const Eigen::MatrixXd& c, std::vector<int>& labels,
              std::vector<double>& dist) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    int best = 0;
    double bd = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < c.rows(); ++j) {
      const double d = (x.row(i) - c.row(j)).squaredNorm();
      if (d < bd) {
        bd = d;
        best = static_cast<int>(j);
      }
    }
    labels[i] = best;
    dist[i] = bd;
    total += bd;
  }
  return total;
}

// Moves the point farthest from its center into each empty cluster.
void repair_empty(const Eigen::MatrixXd& x, Eigen::MatrixXd& c, std::vector<int>& labels,
                  std::vector<double>& dist, int k) {
  for (;;) {
    std::vector<int> sizes(k, 0);
    for (int l : labels) ++sizes[l];
    auto empty = std::find(sizes.begin(), sizes.end(), 0);
    if (empty == sizes.end()) return;
    Eigen::Index far = -1;
    for (Eigen::Index i = 0; i < x.rows(); ++i)
      if (sizes[labels[i]] > 1 && (far < 0 || dist[i] > dist[far])) far = i;
    if (far < 0) return;  // n < k cannot happen; guarded by caller
    const int target = static_cast<int>(empty - sizes.begin());
    labels[far] = target;
    dist[far] = 0.0;
    c.row(target) = x.row(far);
  }
}

LloydRun lloyd(const Eigen::MatrixXd& x, int k, int max_iterations, std::mt19937_64& rng) {
  const Eigen::Index n = x.rows();
  LloydRun run;
  run.centers = seed_centers(x, k, rng);
  run.labels.assign(n, -1);
  std::vector<int> previous;
  std::vector<double> dist(n);
  for (int it = 0; it < max_iterations; ++it) {
    previous = run.labels;
    run.objective = assign(x, run.centers, run.labels, dist);
    repair_empty(x, run.centers, run.labels, dist, k);
    run.objective = std::accumulate(dist.begin(), dist.end(), 0.0);
    run.trace.push_back(run.objective);
    if (run.labels == previous) break;

    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, x.cols());
    std::vector<int> counts(k, 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      sums.row(run.labels[i]) += x.row(i);
      ++counts[run.labels[i]];
    }
    for (int j = 0; j < k; ++j)
      if (counts[j] > 0) run.centers.row(j) = sums.row(j) / counts[j];
  }
  return run;
}

}  // namespace

KMeansResult kmeans(const Eigen::MatrixXd& points, int k, const KMeansOptions& options) {
  if (k < 1) throw ConfigError("kmeans: k must be >= 1");
  if (k > points.rows()) throw DataError("kmeans: k exceeds number of points");
  if (options.restarts < 1 || options.max_iterations < 1)
    throw ConfigError("kmeans: restarts and max_iterations must be >= 1");

  std::mt19937_64 rng(options.seed);
  LloydRun best;
  bool have = false;
  for (int r = 0; r < options.restarts; ++r) {
    LloydRun run = lloyd(points, k, options.max_iterations, rng);
    if (!have || run.objective < best.objective) {
      best = std::move(run);
      have = true;
    }
  }
  return {std::move(best.labels), std::move(best.centers), best.objective, std::move(best.trace)};
}

namespace {

SimilarityGraph induced_subgraph(const SimilarityGraph& g, const std::vector<int>& keep,
                                 std::vector<int>& new_index) {
  new_index.assign(g.vertices, -1);
  for (std::size_t i = 0; i < keep.size(); ++i) new_index[keep[i]] = static_cast<int>(i);
  SimilarityGraph sub;
  sub.vertices = static_cast<int>(keep.size());
  for (const auto& e : g.edges)
    if (new_index[e.i] >= 0 && new_index[e.j] >= 0) sub.edges.push_back({new_index[e.i], new_index[e.j], e.weight});
  return sub;
}

}  // namespace

SpectralResult spectral_cluster(const SimilarityGraph& graph, const SpectralParams& params) {
  if (params.k && *params.k < 1) throw ConfigError("spectral: k must be >= 1");
  if (params.k_min < 1) throw ConfigError("spectral: k_min must be >= 1");

  SpectralResult result;
  result.clustering.labels.assign(graph.vertices, -1);
  if (graph.vertices == 0) return result;

  const Clustering comps = connected_components(graph);
  std::vector<int> comp_size(comps.k + 1, 0);
  for (int l : comps.labels) ++comp_size[l];
  std::vector<int> degree(graph.vertices, 0);
  for (const auto& e : graph.edges) ++degree[e.i], ++degree[e.j];

  std::vector<int> keep;
  for (int v = 0; v < graph.vertices; ++v)
    if (degree[v] > 0 && comp_size[comps.labels[v]] >= params.min_component_size) keep.push_back(v);
  if (keep.empty()) return result;

  const int n = static_cast<int>(keep.size());
  if (n > params.max_vertices)
    throw DataError("spectral: " + std::to_string(n) + " vertices exceeds the dense limit of " +
                    std::to_string(params.max_vertices) + "; use shorter time windows");

  std::vector<int> new_index;
  const SimilarityGraph sub = induced_subgraph(graph, keep, new_index);
  const LaplacianPair pair = laplacian(sub);

  int k = 1;
  Spectrum spectrum;
  if (params.k) {
    k = std::min(*params.k, n);
    spectrum = generalized_eigs(pair, std::min(n, k + 1));
  } else if (n == 1) {
    spectrum = generalized_eigs(pair, 1);
  } else {
    const int k_min = std::min(params.k_min, n - 1);
    const int k_max = std::clamp(std::min(params.k_max_cap, n / 10), k_min, n - 1);
    spectrum = generalized_eigs(pair, k_max + 1);
    std::vector<double> ev(spectrum.values.data(), spectrum.values.data() + spectrum.values.size());
    k = eigengap_select(ev, k_min, k_max);
  }
  result.eigenvalues.assign(spectrum.values.data(), spectrum.values.data() + spectrum.values.size());

  // Rows are scaled to unit length. Without it a component's rows sit at
  // distance ~1/sqrt(vol) from the origin, and k-means prefers splitting a
  // small fragment over separating two large trains.
  Eigen::MatrixXd embedding = spectrum.vectors.leftCols(k);
  if (params.normalize_rows)
    for (Eigen::Index i = 0; i < embedding.rows(); ++i) {
      const double norm = embedding.row(i).norm();
      if (norm > 0.0) embedding.row(i) /= norm;
    }
  const KMeansResult km = kmeans(embedding, k, params.kmeans);
  for (int i = 0; i < n; ++i) result.clustering.labels[keep[i]] = km.labels[i] + 1;
  result.clustering.k = k;
  return result;
}

double ncut(const SimilarityGraph& graph, const Clustering& clustering) {
  if (static_cast<int>(clustering.labels.size()) != graph.vertices)
    throw DataError("ncut: clustering size does not match graph");
  std::vector<double> vol(clustering.k + 1, 0.0), cut(clustering.k + 1, 0.0);
  for (const auto& e : graph.edges) {
    const int a = clustering.labels[e.i];
    const int b = clustering.labels[e.j];
    if (a < 1 || b < 1) throw DataError("ncut: unlabelled vertex carries edges");
    vol[a] += e.weight;
    vol[b] += e.weight;
    if (a != b) {
      cut[a] += e.weight;
      cut[b] += e.weight;
    }
  }
  double total = 0.0;
  for (int c = 1; c <= clustering.k; ++c) {
    if (vol[c] <= 0.0) throw DataError("ncut: cluster " + std::to_string(c) + " has zero volume");
    total += cut[c] / vol[c];
  }
  return 0.5 * total;
}

Clustering connected_components(const SimilarityGraph& graph) {
  const int n = graph.vertices;
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (const auto& e : graph.edges) {
    const int a = find(e.i), b = find(e.j);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  Clustering c;
  c.labels.assign(n, 0);
  std::vector<int> root_label(n, 0);
  for (int v = 0; v < n; ++v) {
    const int r = find(v);
    if (root_label[r] == 0) root_label[r] = ++c.k;
    c.labels[v] = root_label[r];
  }
  return c;
}

void write_spectrum(std::ostream& out, std::span<const double> eigenvalues) {
  out << "index,eigenvalue\n";
  std::ostringstream line;
  line.precision(17);
  for (std::size_t i = 0; i < eigenvalues.size(); ++i) {
    line.str("");
    line << (i + 1) << ',' << eigenvalues[i] << '\n';
    out << line.str();
  }
}

}  // namespace wtt
