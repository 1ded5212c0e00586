#ifndef WTT_SIMILARITY_HPP
#define WTT_SIMILARITY_HPP

#include <iosfwd>
#include <limits>
#include <span>
#include <variant>
#include <vector>

#include "wtt/journey.hpp"

namespace wtt {

// Entry value for a station where the journey was not recorded.
inline constexpr double kUnobserved = std::numeric_limits<double>::infinity();

// A journey embedded over a fixed ordered station set: leg midpoints in
// seconds, kUnobserved elsewhere.
struct JourneyVector {
  std::vector<double> entries;
  std::vector<int> stations;
};

// Stations 0..line_length-1 minus `excluded`, ascending.
std::vector<int> station_set(int line_length, std::span<const int> excluded = {});

// Throws DataError if no leg falls inside `stations`.
JourneyVector vectorize(const Journey& journey, std::span<const int> stations);

std::size_t l0_norm(std::span<const double> v);
// Largest |finite entry|; kUnobserved when there is none.
double linf_norm(std::span<const double> v);
// Entrywise a - b with any unobserved operand giving unobserved. Station sets
// must match (DataError otherwise).
JourneyVector vec_difference(const JourneyVector& a, const JourneyVector& b);

struct HardMetric {
  double tau = 30.0;  // seconds
};
struct SoftMetric {
  double two_sigma_sq = 30.0;  // seconds^2
};
using SimilarityMetric = std::variant<HardMetric, SoftMetric>;

void validate(const SimilarityMetric& metric);

// Hard: l0(a-b) if linf(a-b) <= tau, else 0.
// Soft: l0(a-b) * exp(-linf(a-b)^2 / (2 sigma^2)).
double similarity(std::span<const double> a, std::span<const double> b, const SimilarityMetric& metric);
double similarity(const JourneyVector& a, const JourneyVector& b, const SimilarityMetric& metric);

struct Edge {
  int i = 0;
  int j = 0;
  double weight = 0.0;
};

// Undirected weighted graph, edges stored once with i < j, sorted by (i, j).
struct SimilarityGraph {
  int vertices = 0;
  std::vector<Edge> edges;

  // Fraction of off-diagonal weight-matrix entries that are zero.
  double sparsity() const;
};

struct GraphOptions {
  // Soft-metric pairs whose time ranges are further apart than this are
  // skipped (weights below exp(-cutoff^2 / 2 sigma^2) are truncated).
  double soft_cutoff = 1800.0;
};

// Pairs are enumerated over a sweep sorted by each vector's earliest finite
// entry; for the hard metric this is exact.
SimilarityGraph build_graph(std::span<const JourneyVector> vectors, const SimilarityMetric& metric,
                            const GraphOptions& options = {});

// Header `vertices N`, then one `i j weight` line per edge.
void write_graph(std::ostream& out, const SimilarityGraph& graph);
SimilarityGraph read_graph(std::istream& in);

}  // namespace wtt

#endif
