#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <vector>

#include "avs/regions.hpp"

namespace avs::testing {

struct Cloud {
  std::vector<double> data;
  int dim = 0;
  PointsView view() const { return PointsView(data, dim); }
};

inline Cloud gaussian_blobs(const std::vector<std::vector<double>>& centers, int per_blob, double sigma,
                            std::mt19937_64& rng) {
  std::normal_distribution<double> noise(0.0, sigma);
  Cloud c;
  c.dim = static_cast<int>(centers.front().size());
  for (const auto& center : centers) {
    for (int i = 0; i < per_blob; ++i) {
      for (double x : center) c.data.push_back(x + noise(rng));
    }
  }
  return c;
}

inline Cloud uniform_cloud(int count, int dim, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Cloud c;
  c.dim = dim;
  c.data.resize(static_cast<std::size_t>(count) * dim);
  for (double& x : c.data) x = u(rng);
  return c;
}

// Three centres with pairwise distance >= 3.
inline std::vector<std::vector<double>> separated_centers(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 8.0);
  for (;;) {
    std::vector<std::vector<double>> c(3, std::vector<double>(2));
    for (auto& p : c) p = {u(rng), u(rng)};
    bool ok = true;
    for (int i = 0; i < 3; ++i) {
      for (int j = i + 1; j < 3; ++j) {
        if (std::hypot(c[i][0] - c[j][0], c[i][1] - c[j][1]) < 3.0) ok = false;
      }
    }
    if (ok) return c;
  }
}

inline double dist(const Cloud& c, int i, int j) {
  double s = 0.0;
  for (int d = 0; d < c.dim; ++d) {
    const double diff = c.data[i * c.dim + d] - c.data[j * c.dim + d];
    s += diff * diff;
  }
  return std::sqrt(s);
}

inline double brute_silhouette(const Cloud& c, const std::vector<int>& labels) {
  const int n = static_cast<int>(labels.size());
  std::map<int, int> size;
  for (int l : labels) ++size[l];
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    if (size[labels[i]] == 1) continue;
    double a = 0.0;
    for (int j = 0; j < n; ++j) {
      if (j != i && labels[j] == labels[i]) a += dist(c, i, j);
    }
    a /= size[labels[i]] - 1;
    double b = INFINITY;
    for (const auto& [other, count] : size) {
      if (other == labels[i]) continue;
      double s = 0.0;
      for (int j = 0; j < n; ++j) {
        if (labels[j] == other) s += dist(c, i, j);
      }
      b = std::min(b, s / count);
    }
    if (std::max(a, b) > 0) total += (b - a) / std::max(a, b);
  }
  return total / n;
}

}  // namespace avs::testing
