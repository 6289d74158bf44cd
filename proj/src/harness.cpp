#include "gkpd/harness.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

#include "gkpd/rng.hpp"

namespace gkpd {

DatasetKind dataset_kind_from_string(const std::string& name) {
  if (name == "circle_with_outliers") return DatasetKind::circle_with_outliers;
  if (name == "gaussian_clusters") return DatasetKind::gaussian_clusters;
  if (name == "uniform_cube") return DatasetKind::uniform_cube;
  if (name == "embedded_circle_highD") return DatasetKind::embedded_circle_highD;
  throw std::invalid_argument("unknown dataset kind '" + name + "'");
}

std::string to_string(DatasetKind kind) {
  switch (kind) {
    case DatasetKind::circle_with_outliers: return "circle_with_outliers";
    case DatasetKind::gaussian_clusters: return "gaussian_clusters";
    case DatasetKind::uniform_cube: return "uniform_cube";
    case DatasetKind::embedded_circle_highD: return "embedded_circle_highD";
  }
  throw std::logic_error("unreachable dataset kind");
}

namespace {

// Circle of radius 1 in the first two coordinates plus planar outliers.
// Draw order (outliers, then rotation, then noise) is part of the
// reproducibility contract; do not reorder.
Matrix circle_cloud(const DatasetSpec& spec, bool rotate, SeededRng& rng) {
  if (spec.ambient_dim < 2)
    throw std::invalid_argument("generate: circle kinds need ambient_dim >= 2");
  const int total = spec.n + spec.outliers;
  Matrix points = Matrix::Zero(total, spec.ambient_dim);
  for (int i = 0; i < spec.n; ++i) {
    const double angle = 2.0 * M_PI * i / spec.n;
    points(i, 0) = std::cos(angle);
    points(i, 1) = std::sin(angle);
  }
  for (int i = 0; i < spec.outliers; ++i) {
    points(spec.n + i, 0) = rng.uniform(-2.5, 2.5);
    points(spec.n + i, 1) = rng.uniform(-2.5, 2.5);
  }
  if (rotate) {
    Matrix gauss(spec.ambient_dim, spec.ambient_dim);
    for (Eigen::Index r = 0; r < gauss.rows(); ++r)
      for (Eigen::Index c = 0; c < gauss.cols(); ++c) gauss(r, c) = rng.normal();
    const Matrix q = Eigen::HouseholderQR<Matrix>(gauss).householderQ();
    points = points * q.transpose();
  }
  if (spec.noise > 0.0)
    for (Eigen::Index r = 0; r < points.rows(); ++r)
      for (Eigen::Index c = 0; c < points.cols(); ++c) points(r, c) += spec.noise * rng.normal();
  return points;
}

}  // namespace

Matrix generate(const DatasetSpec& spec) {
  if (spec.n < 1) throw std::invalid_argument("generate: n must be >= 1");
  if (spec.ambient_dim < 1) throw std::invalid_argument("generate: ambient_dim must be >= 1");
  if (spec.outliers < 0) throw std::invalid_argument("generate: outliers must be >= 0");
  if (!(spec.noise >= 0.0)) throw std::invalid_argument("generate: noise must be >= 0");

  SeededRng rng(spec.seed);
  switch (spec.kind) {
    case DatasetKind::circle_with_outliers:
      return circle_cloud(spec, false, rng);
    case DatasetKind::embedded_circle_highD:
      return circle_cloud(spec, true, rng);
    case DatasetKind::gaussian_clusters: {
      constexpr int kClusters = 3;
      Matrix centers(kClusters, spec.ambient_dim);
      for (int k = 0; k < kClusters; ++k)
        for (Eigen::Index c = 0; c < centers.cols(); ++c)
          centers(k, c) = 4.0 * spec.noise * rng.normal();
      Matrix points(spec.n, spec.ambient_dim);
      for (int i = 0; i < spec.n; ++i)
        for (Eigen::Index c = 0; c < points.cols(); ++c)
          points(i, c) = centers(i % kClusters, c) + spec.noise * rng.normal();
      return points;
    }
    case DatasetKind::uniform_cube: {
      Matrix points(spec.n, spec.ambient_dim);
      for (int i = 0; i < spec.n; ++i)
        for (Eigen::Index c = 0; c < points.cols(); ++c)
          points(i, c) = spec.noise * rng.uniform01();
      return points;
    }
  }
  throw std::logic_error("unreachable dataset kind");
}

namespace {

// GF(2) column rank; columns are bit-packed over row indices.
long gf2_rank(std::vector<std::vector<std::uint64_t>> columns) {
  std::map<long, std::size_t> pivot_for_bit;
  long rank = 0;
  for (std::size_t c = 0; c < columns.size(); ++c) {
    while (true) {
      long high = -1;
      for (long w = static_cast<long>(columns[c].size()) - 1; w >= 0; --w) {
        if (columns[c][static_cast<std::size_t>(w)] != 0) {
          const int bit = 63 - __builtin_clzll(columns[c][static_cast<std::size_t>(w)]);
          high = w * 64 + bit;
          break;
        }
      }
      if (high < 0) break;
      const auto it = pivot_for_bit.find(high);
      if (it == pivot_for_bit.end()) {
        pivot_for_bit.emplace(high, c);
        ++rank;
        break;
      }
      const auto& pivot = columns[it->second];
      for (std::size_t w = 0; w < columns[c].size(); ++w) columns[c][w] ^= pivot[w];
    }
  }
  return rank;
}

}  // namespace

std::vector<long> betti_oracle(const FilteredComplex& complex, double value) {
  assert_monotone(complex);
  // Sublevel simplices grouped by dimension, with per-dimension row indices.
  std::vector<std::map<std::vector<int>, long>> by_dim(static_cast<std::size_t>(complex.d_max) + 1);
  for (const auto& s : complex.simplices) {
    if (s.value > value) continue;
    auto& level = by_dim[static_cast<std::size_t>(s.dim())];
    const long idx = static_cast<long>(level.size());
    level.emplace(s.vertices, idx);
  }

  std::vector<long> ranks(static_cast<std::size_t>(complex.d_max) + 2, 0);
  for (int k = 1; k <= complex.d_max; ++k) {
    const auto& rows = by_dim[static_cast<std::size_t>(k - 1)];
    const auto& cols = by_dim[static_cast<std::size_t>(k)];
    if (cols.empty()) continue;
    const std::size_t words = rows.size() / 64 + 1;
    std::vector<std::vector<std::uint64_t>> matrix;
    matrix.reserve(cols.size());
    std::vector<int> facet;
    for (const auto& [vertices, col_idx] : cols) {
      std::vector<std::uint64_t> column(words, 0);
      for (std::size_t drop = 0; drop < vertices.size(); ++drop) {
        facet = vertices;
        facet.erase(facet.begin() + static_cast<std::ptrdiff_t>(drop));
        const long row = rows.at(facet);
        column[static_cast<std::size_t>(row) / 64] |= 1ULL << (static_cast<std::size_t>(row) % 64);
      }
      matrix.push_back(std::move(column));
    }
    ranks[static_cast<std::size_t>(k)] = gf2_rank(std::move(matrix));
  }

  std::vector<long> betti(static_cast<std::size_t>(complex.d_max) + 1, 0);
  for (int k = 0; k <= complex.d_max; ++k) {
    const long n_k = static_cast<long>(by_dim[static_cast<std::size_t>(k)].size());
    betti[static_cast<std::size_t>(k)] =
        n_k - ranks[static_cast<std::size_t>(k)] - ranks[static_cast<std::size_t>(k) + 1];
  }
  return betti;
}

long alive_bars(const PersistenceDiagram& diagram, int degree, double value) {
  long count = 0;
  for (const auto& p : diagram.points)
    if (p.degree == degree && p.birth <= value && value < p.death) ++count;
  for (const auto& p : diagram.truncated)
    if (p.degree == degree && p.birth <= value && value < p.death) ++count;
  return count;
}

}  // namespace gkpd
