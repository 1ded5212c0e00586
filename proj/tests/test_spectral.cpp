#include <doctest.h>

#include <map>
#include <numeric>
#include <random>
#include <set>

#include <Eigen/Eigenvalues>

#include "wtt/spectral.hpp"

using namespace wtt;

namespace {

SimilarityGraph graph(int n, std::initializer_list<Edge> edges) { return {n, edges}; }

SimilarityGraph cliques(const std::vector<int>& sizes) {
  SimilarityGraph g;
  int base = 0;
  for (int s : sizes) {
    for (int i = 0; i < s; ++i)
      for (int j = i + 1; j < s; ++j) g.edges.push_back({base + i, base + j, 1.0});
    base += s;
  }
  g.vertices = base;
  return g;
}

int find(std::vector<int>& parent, int x) {
  while (parent[x] != x) x = parent[x] = parent[parent[x]];
  return x;
}

int union_find_count(const SimilarityGraph& g) {
  std::vector<int> parent(g.vertices);
  std::iota(parent.begin(), parent.end(), 0);
  for (const auto& e : g.edges) parent[find(parent, e.i)] = find(parent, e.j);
  std::set<int> roots;
  for (int v = 0; v < g.vertices; ++v) roots.insert(find(parent, v));
  return static_cast<int>(roots.size());
}

// Two labelings describe the same partition.
bool same_partition(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size()) return false;
  std::map<int, int> ab, ba;
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto [x, fx] = ab.emplace(a[i], b[i]);
    auto [y, fy] = ba.emplace(b[i], a[i]);
    if (x->second != b[i] || y->second != a[i]) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("laplacian of a path and of an edgeless graph") {
  const auto p = laplacian(graph(3, {{0, 1, 1}, {1, 2, 1}}));
  Eigen::Matrix3d expect;
  expect << 1, -1, 0, -1, 2, -1, 0, -1, 1;
  CHECK(p.laplacian.isApprox(expect));
  CHECK(p.degrees(1) == 2);

  const auto e = laplacian(graph(3, {}));
  CHECK(e.laplacian.isZero());
  CHECK(e.isolated == std::vector<int>{0, 1, 2});
}

TEST_CASE("generalized eigenvalues of small graphs") {
  const auto edge = generalized_eigs(laplacian(graph(2, {{0, 1, 1}})), 2);
  CHECK(edge.values(0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(edge.values(1) == doctest::Approx(2.0));

  const auto tri = generalized_eigs(laplacian(cliques({3})), 3);
  CHECK(std::abs(tri.values(0)) < 1e-10);
  CHECK(tri.values(1) == doctest::Approx(1.5));
  CHECK(tri.values(2) == doctest::Approx(1.5));

  const auto two = generalized_eigs(laplacian(graph(4, {{0, 1, 1}, {2, 3, 1}})), 4);
  CHECK(std::abs(two.values(0)) < 1e-10);
  CHECK(std::abs(two.values(1)) < 1e-10);
  CHECK(two.values(2) > 1.0);

  CHECK_THROWS_AS(generalized_eigs(laplacian(graph(3, {{0, 1, 1}})), 2), DataError);
}

TEST_CASE("generalized eigenpairs agree with a direct solver") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> w(0.1, 5.0);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 12;
    SimilarityGraph g{n, {}};
    for (int i = 0; i + 1 < n; ++i) g.edges.push_back({i, i + 1, w(rng)});
    for (int i = 0; i < n; ++i)
      for (int j = i + 2; j < n; ++j)
        if (rng() % 4 == 0) g.edges.push_back({i, j, w(rng)});
    const auto pair = laplacian(g);
    const auto ours = generalized_eigs(pair, 5);
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> direct(pair.laplacian,
                                                                     Eigen::MatrixXd(pair.degrees.asDiagonal()));
    for (int i = 0; i < 5; ++i) CHECK(ours.values(i) == doctest::Approx(direct.eigenvalues()(i)).epsilon(1e-9));
    const Eigen::MatrixXd gram = ours.vectors.transpose() * pair.degrees.asDiagonal() * ours.vectors;
    CHECK(gram.isIdentity(1e-9));
    const Eigen::MatrixXd resid =
        pair.laplacian * ours.vectors - pair.degrees.asDiagonal() * ours.vectors * ours.values.asDiagonal();
    CHECK(resid.norm() < 1e-8);
  }
}

TEST_CASE("eigengap selection") {
  CHECK(eigengap_select(std::vector<double>{0, 0, 0, 0.5, 0.6, 0.7}, 1, 5) == 3);
  CHECK(eigengap_select(std::vector<double>{0, 0.1, 0.2, 0.3, 0.4, 0.5}, 2, 4) == 2);
  CHECK_THROWS_AS(eigengap_select(std::vector<double>{0, 0.1}, 3, 4), DataError);
}

TEST_CASE("kmeans on small point sets") {
  Eigen::MatrixXd pts(4, 1);
  pts << 0, 1, 100, 101;
  auto r = kmeans(pts, 2, {10, 100, 1});
  CHECK(r.labels[0] == r.labels[1]);
  CHECK(r.labels[2] == r.labels[3]);
  CHECK(r.labels[0] != r.labels[2]);
  CHECK(r.objective == doctest::Approx(1.0));

  r = kmeans(pts, 1);
  CHECK(r.labels == std::vector<int>{0, 0, 0, 0});

  r = kmeans(pts, 4);
  CHECK(std::set<int>(r.labels.begin(), r.labels.end()).size() == 4);
  CHECK(r.objective == 0.0);

  CHECK_THROWS_AS(kmeans(pts, 5), DataError);
  CHECK_THROWS_AS(kmeans(pts, 0), ConfigError);
}

TEST_CASE("kmeans objective never increases and seeds are reproducible") {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> gauss;
  Eigen::MatrixXd pts(300, 3);
  for (int i = 0; i < 300; ++i)
    for (int d = 0; d < 3; ++d) pts(i, d) = gauss(rng) + 4.0 * (i % 5 == d);
  const auto a = kmeans(pts, 5, {5, 100, 42});
  for (std::size_t i = 1; i < a.trace.size(); ++i) CHECK(a.trace[i] <= a.trace[i - 1] + 1e-9);
  const auto b = kmeans(pts, 5, {5, 100, 42});
  CHECK(a.labels == b.labels);
  CHECK(a.objective == b.objective);
}

TEST_CASE("connected components and ncut") {
  const auto cc = connected_components(graph(5, {{0, 3, 1}, {1, 2, 1}}));
  CHECK(cc.k == 3);
  CHECK(cc.labels == std::vector<int>{1, 2, 2, 1, 3});
  CHECK(connected_components(graph(4, {})).k == 4);
  CHECK(connected_components(graph(4, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}})).k == 1);
  CHECK(connected_components(cliques({4, 3})).k == 2);

  const auto g = cliques({4, 3});
  CHECK(ncut(g, connected_components(g)) == 0.0);
  CHECK(ncut(g, Clustering{std::vector<int>(7, 1), 1}) == 0.0);
  CHECK(ncut(graph(2, {{0, 1, 1}}), Clustering{{1, 2}, 2}) == doctest::Approx(1.0));
}

TEST_CASE("spectral clustering recovers disjoint components") {
  const auto g = cliques({6, 8});
  SpectralParams p;
  p.k = 2;
  const auto r = spectral_cluster(g, p);
  CHECK(same_partition(r.clustering.labels, connected_components(g).labels));
}

TEST_CASE("eigengap finds the planted components and small ones are dropped") {
  std::vector<int> sizes(12, 10);
  sizes.push_back(2);
  const auto g = cliques(sizes);
  const auto r = spectral_cluster(g, {});
  CHECK(r.clustering.k == 12);
  for (int v = 120; v < 122; ++v) CHECK(r.clustering.labels[v] == -1);
  std::vector<int> kept(r.clustering.labels.begin(), r.clustering.labels.begin() + 120);
  std::vector<int> truth(kept.size());
  for (int v = 0; v < 120; ++v) truth[v] = v / 10;
  CHECK(same_partition(kept, truth));

  const auto again = spectral_cluster(g, {});
  CHECK(again.clustering.labels == r.clustering.labels);
}

TEST_CASE("zero-eigenvalue multiplicity equals the component count") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 20 + static_cast<int>(rng() % 40);
    SimilarityGraph g{n, {}};
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (rng() % 10 == 0) g.edges.push_back({i, j, 1.0 + static_cast<double>(rng() % 3)});
    std::vector<int> degree(n, 0);
    for (const auto& e : g.edges) ++degree[e.i], ++degree[e.j];
    std::vector<int> keep;
    for (int v = 0; v < n; ++v)
      if (degree[v] > 0) keep.push_back(v);
    std::vector<int> index(n, -1);
    for (std::size_t i = 0; i < keep.size(); ++i) index[keep[i]] = static_cast<int>(i);
    SimilarityGraph sub{static_cast<int>(keep.size()), {}};
    for (const auto& e : g.edges) sub.edges.push_back({index[e.i], index[e.j], e.weight});
    const auto s = generalized_eigs(laplacian(sub), sub.vertices);
    int zeros = 0;
    for (int i = 0; i < s.values.size(); ++i) zeros += std::abs(s.values(i)) <= 1e-8;
    CHECK(zeros == union_find_count(sub));
  }
}

TEST_CASE("too many vertices is a data error") {
  SpectralParams p;
  p.max_vertices = 5;
  CHECK_THROWS_AS(spectral_cluster(cliques({6}), p), DataError);
}
