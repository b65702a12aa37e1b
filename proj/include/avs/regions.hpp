#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "avs/priors.hpp"
#include "json.hpp"

namespace avs {

// Read-only view of `count` points of `dim` coordinates stored row-major.
struct PointsView {
  std::span<const double> data;
  int dim = 0;

  PointsView(std::span<const double> values, int d) : data(values), dim(d) {}
  PointsView(const FeatureField& f) : data(f.data), dim(f.dim) {}  // NOLINT(google-explicit-constructor)

  int count() const { return dim > 0 ? static_cast<int>(data.size()) / dim : 0; }
  const double* row(int i) const { return data.data() + static_cast<std::size_t>(i) * dim; }
};

struct RegionPartition {
  int k = 0;
  std::vector<int> labels;        // one per cell, in [0,k)
  std::vector<int> region_sizes;  // L_r

  int region_of(Cell c) const { return labels[static_cast<std::size_t>(c)]; }
  bool operator==(const RegionPartition&) const = default;
};

// Builds a partition from raw labels, renumbering so that every region is
// non-empty and regions are ordered by first appearance.
RegionPartition make_partition(const std::vector<int>& labels);

struct KMeansOptions {
  int max_iterations = 100;
  double tolerance = 1e-8;  // max centroid shift that counts as converged
};

struct KMeansResult {
  std::vector<int> labels;
  std::vector<double> centroids;     // k rows of dim values
  double wcss = 0.0;                 // of the returned labels around their means
  std::vector<double> wcss_history;  // after each assignment step
  int iterations = 0;
};

// Lloyd's algorithm with k-means++ seeding. Throws DegenerateInputError when
// k exceeds the number of distinct points.
KMeansResult kmeans(const PointsView& points, int k, std::uint64_t seed,
                    const KMeansOptions& options = {});

int count_distinct_points(const PointsView& points);

// Mean silhouette; singleton clusters score 0. Needs at least two clusters.
double silhouette(const PointsView& points, const std::vector<int>& labels);

// k at the maximum perpendicular distance from the chord joining the first and
// last points of the WCSS curve. ks and wcss are parallel arrays.
int elbow_k(const std::vector<int>& ks, const std::vector<double>& wcss);

// min(cap, round_half_up((k_silhouette + k_elbow) / 2))
int combine_k_votes(int k_silhouette, int k_elbow, int cap);

struct KSelection {
  int k = 0;
  int k_silhouette = 0;
  int k_elbow = 0;
  std::vector<int> ks;
  std::vector<double> silhouettes;
  std::vector<double> wcss;
};

KSelection select_k_detailed(const PointsView& points, int k_min, int k_max, int cap,
                             std::uint64_t seed);

inline int select_k(const PointsView& points, std::uint64_t seed, int k_min = 2,
                    int k_max = 8, int cap = 4) {
  return select_k_detailed(points, k_min, k_max, cap, seed).k;
}

RegionPartition partition(const FeatureField& features, std::uint64_t seed);

nlohmann::json partition_to_json(const RegionPartition& p);
RegionPartition partition_from_json(const nlohmann::json& j);

}  // namespace avs
