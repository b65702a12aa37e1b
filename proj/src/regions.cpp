#include "avs/regions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "avs/error.hpp"

namespace avs {

namespace {

double sq_dist(const double* a, const double* b, int dim) {
  double s = 0.0;
  for (int d = 0; d < dim; ++d) {
    const double diff = a[d] - b[d];
    s += diff * diff;
  }
  return s;
}

int nearest(const double* point, const std::vector<double>& centroids, int k, int dim,
            double* best_dist) {
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (int c = 0; c < k; ++c) {
    const double d = sq_dist(point, centroids.data() + static_cast<std::size_t>(c) * dim, dim);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  if (best_dist) *best_dist = best_d;
  return best;
}

double wcss_of(const PointsView& f, const std::vector<int>& labels, int k) {
  const int dim = f.dim;
  std::vector<double> means(static_cast<std::size_t>(k) * dim, 0.0);
  std::vector<int> counts(k, 0);
  for (int i = 0; i < f.count(); ++i) {
    const int l = labels[i];
    ++counts[l];
    for (int d = 0; d < dim; ++d) means[static_cast<std::size_t>(l) * dim + d] += f.row(i)[d];
  }
  for (int c = 0; c < k; ++c) {
    if (counts[c] == 0) continue;
    for (int d = 0; d < dim; ++d) means[static_cast<std::size_t>(c) * dim + d] /= counts[c];
  }
  double total = 0.0;
  for (int i = 0; i < f.count(); ++i) {
    total += sq_dist(f.row(i), means.data() + static_cast<std::size_t>(labels[i]) * dim, dim);
  }
  return total;
}

std::vector<double> seed_plus_plus(const PointsView& f, int k, std::mt19937_64& rng) {
  const int npts = f.count();
  const int dim = f.dim;
  std::vector<double> centroids;
  centroids.reserve(static_cast<std::size_t>(k) * dim);
  std::uniform_int_distribution<int> first(0, npts - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  const int i0 = first(rng);
  centroids.insert(centroids.end(), f.row(i0), f.row(i0) + dim);
  std::vector<double> d2(static_cast<std::size_t>(npts));
  for (int i = 0; i < npts; ++i) d2[i] = sq_dist(f.row(i), f.row(i0), dim);

  for (int c = 1; c < k; ++c) {
    const double total = std::accumulate(d2.begin(), d2.end(), 0.0);
    const double target = unit(rng) * total;
    int chosen = -1;
    double acc = 0.0;
    for (int i = 0; i < npts; ++i) {
      if (d2[i] <= 0.0) continue;
      acc += d2[i];
      chosen = i;
      if (acc > target) break;
    }
    if (chosen < 0) throw DegenerateInputError("kmeans: not enough distinct points to seed");
    centroids.insert(centroids.end(), f.row(chosen), f.row(chosen) + dim);
    for (int i = 0; i < npts; ++i) {
      d2[i] = std::min(d2[i], sq_dist(f.row(i), f.row(chosen), dim));
    }
  }
  return centroids;
}

}  // namespace

RegionPartition make_partition(const std::vector<int>& labels) {
  RegionPartition p;
  std::vector<int> remap;
  p.labels.reserve(labels.size());
  for (int l : labels) {
    if (l < 0) throw ParameterError("negative region label");
    if (static_cast<std::size_t>(l) >= remap.size()) remap.resize(static_cast<std::size_t>(l) + 1, -1);
    if (remap[l] < 0) remap[l] = p.k++;
    p.labels.push_back(remap[l]);
  }
  p.region_sizes.assign(static_cast<std::size_t>(p.k), 0);
  for (int l : p.labels) ++p.region_sizes[l];
  return p;
}

int count_distinct_points(const PointsView& f) {
  std::vector<int> order(static_cast<std::size_t>(f.count()));
  std::iota(order.begin(), order.end(), 0);
  auto less = [&](int a, int b) {
    return std::lexicographical_compare(f.row(a), f.row(a) + f.dim, f.row(b), f.row(b) + f.dim);
  };
  std::sort(order.begin(), order.end(), less);
  int distinct = order.empty() ? 0 : 1;
  for (std::size_t i = 1; i < order.size(); ++i) {
    if (less(order[i - 1], order[i])) ++distinct;
  }
  return distinct;
}

KMeansResult kmeans(const PointsView& f, int k, std::uint64_t seed, const KMeansOptions& opt) {
  if (f.dim < 1 || f.count() < 1 || f.data.size() != static_cast<std::size_t>(f.count()) * f.dim) {
    throw ParameterError("kmeans: need at least one point of dimension >= 1");
  }
  for (double v : f.data) {
    if (!std::isfinite(v)) throw ParameterError("kmeans: non-finite feature value");
  }
  const int npts = f.count();
  const int dim = f.dim;
  if (k < 1 || k > npts) throw ParameterError("kmeans: k must be in [1, number of points]");
  if (k > count_distinct_points(f)) {
    throw DegenerateInputError("kmeans: k=" + std::to_string(k) + " exceeds the number of distinct points");
  }

  std::mt19937_64 rng(seed);
  KMeansResult res;
  std::vector<double> centroids = seed_plus_plus(f, k, rng);
  std::vector<int> labels(static_cast<std::size_t>(npts), 0);
  std::vector<double> dist(static_cast<std::size_t>(npts), 0.0);

  for (int it = 0; it < opt.max_iterations; ++it) {
    res.iterations = it + 1;
    double cost = 0.0;
    for (int i = 0; i < npts; ++i) {
      labels[i] = nearest(f.row(i), centroids, k, dim, &dist[i]);
      cost += dist[i];
    }
    res.wcss_history.push_back(cost);

    std::vector<double> next(static_cast<std::size_t>(k) * dim, 0.0);
    std::vector<int> counts(static_cast<std::size_t>(k), 0);
    for (int i = 0; i < npts; ++i) {
      ++counts[labels[i]];
      double* c = next.data() + static_cast<std::size_t>(labels[i]) * dim;
      for (int d = 0; d < dim; ++d) c[d] += f.row(i)[d];
    }
    for (int c = 0; c < k; ++c) {
      double* cen = next.data() + static_cast<std::size_t>(c) * dim;
      if (counts[c] > 0) {
        for (int d = 0; d < dim; ++d) cen[d] /= counts[c];
        continue;
      }
      // Empty cluster: move it onto the point farthest from its centroid.
      const auto far = std::max_element(dist.begin(), dist.end()) - dist.begin();
      std::copy(f.row(static_cast<int>(far)), f.row(static_cast<int>(far)) + dim, cen);
      dist[far] = 0.0;
    }

    double shift = 0.0;
    for (int c = 0; c < k; ++c) {
      shift = std::max(shift, std::sqrt(sq_dist(next.data() + static_cast<std::size_t>(c) * dim,
                                                centroids.data() + static_cast<std::size_t>(c) * dim, dim)));
    }
    centroids = std::move(next);
    if (shift < opt.tolerance) break;
  }

  res.labels = std::move(labels);
  res.centroids = std::move(centroids);
  res.wcss = wcss_of(f, res.labels, k);
  return res;
}

double silhouette(const PointsView& f, const std::vector<int>& labels) {
  const int npts = f.count();
  if (labels.size() != static_cast<std::size_t>(npts)) {
    throw ParameterError("silhouette: one label per point required");
  }
  const int k = labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
  std::vector<int> sizes(static_cast<std::size_t>(std::max(k, 0)), 0);
  for (int l : labels) ++sizes[l];
  const auto populated = std::count_if(sizes.begin(), sizes.end(), [](int s) { return s > 0; });
  if (populated < 2) throw CriterionUndefinedError("silhouette needs at least two clusters");

  double total = 0.0;
  std::vector<double> sums(static_cast<std::size_t>(k));
  for (int i = 0; i < npts; ++i) {
    const int own = labels[i];
    if (sizes[own] == 1) continue;  // singleton scores 0
    std::fill(sums.begin(), sums.end(), 0.0);
    for (int j = 0; j < npts; ++j) {
      if (j == i) continue;
      sums[labels[j]] += std::sqrt(sq_dist(f.row(i), f.row(j), f.dim));
    }
    const double a = sums[own] / (sizes[own] - 1);
    double b = std::numeric_limits<double>::infinity();
    for (int c = 0; c < k; ++c) {
      if (c == own || sizes[c] == 0) continue;
      b = std::min(b, sums[c] / sizes[c]);
    }
    const double m = std::max(a, b);
    if (m > 0.0) total += (b - a) / m;
  }
  return total / npts;
}

int elbow_k(const std::vector<int>& ks, const std::vector<double>& wcss) {
  if (ks.empty() || ks.size() != wcss.size()) throw ParameterError("elbow_k: bad curve");
  const std::size_t last = ks.size() - 1;
  if (last == 0) return ks[0];
  const double x0 = ks[0];
  const double y0 = wcss[0];
  const double dx = ks[last] - x0;
  const double dy = wcss[last] - y0;
  const double len = std::hypot(dx, dy);
  if (len == 0.0) return ks[0];
  int best = ks[0];
  double best_d = -1.0;
  for (std::size_t i = 0; i <= last; ++i) {
    const double d = std::abs(dx * (wcss[i] - y0) - dy * (ks[i] - x0)) / len;
    if (d > best_d) {
      best_d = d;
      best = ks[i];
    }
  }
  return best;
}

int combine_k_votes(int k_silhouette, int k_elbow, int cap) {
  const int rounded = (k_silhouette + k_elbow + 1) / 2;  // half up
  return std::min(cap, rounded);
}

KSelection select_k_detailed(const PointsView& f, int k_min, int k_max, int cap,
                             std::uint64_t seed) {
  if (k_min < 2 || k_max < k_min) throw ParameterError("select_k: need k_max >= k_min >= 2");
  KSelection sel;
  double best_sil = -std::numeric_limits<double>::infinity();
  for (int k = k_min; k <= k_max; ++k) {
    const KMeansResult km = kmeans(f, k, seed);
    const double s = silhouette(f, km.labels);
    sel.ks.push_back(k);
    sel.silhouettes.push_back(s);
    sel.wcss.push_back(km.wcss);
    if (s > best_sil) {
      best_sil = s;
      sel.k_silhouette = k;
    }
  }
  sel.k_elbow = elbow_k(sel.ks, sel.wcss);
  sel.k = combine_k_votes(sel.k_silhouette, sel.k_elbow, cap);
  return sel;
}

RegionPartition partition(const FeatureField& f, std::uint64_t seed) {
  const int k = select_k(f, seed);
  return make_partition(kmeans(f, k, seed).labels);
}

nlohmann::json partition_to_json(const RegionPartition& p) {
  return {{"k", p.k}, {"labels", p.labels}};
}

RegionPartition partition_from_json(const nlohmann::json& j) {
  try {
    RegionPartition p;
    p.k = j.at("k").get<int>();
    p.labels = j.at("labels").get<std::vector<int>>();
    if (p.k < 1) throw ConfigError("partition json: k must be >= 1");
    p.region_sizes.assign(static_cast<std::size_t>(p.k), 0);
    for (int l : p.labels) {
      if (l < 0 || l >= p.k) throw ConfigError("partition json: label out of range");
      ++p.region_sizes[l];
    }
    for (int size : p.region_sizes) {
      if (size == 0) throw ConfigError("partition json: empty region");
    }
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("partition json: ") + e.what());
  }
}

}  // namespace avs
