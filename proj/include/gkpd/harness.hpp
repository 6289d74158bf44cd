#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gkpd/filtration.hpp"
#include "gkpd/persistence.hpp"
#include "gkpd/types.hpp"

namespace gkpd {

enum class DatasetKind {
  circle_with_outliers,
  gaussian_clusters,
  uniform_cube,
  embedded_circle_highD,
};

DatasetKind dataset_kind_from_string(const std::string& name);
std::string to_string(DatasetKind kind);

// n is the core sample count; outliers come on top of it (circle kinds).
// noise is the isotropic noise scale, except for uniform_cube where it is the
// cube side. The seed is consumed as-is; callers split a master seed first.
struct DatasetSpec {
  DatasetKind kind = DatasetKind::circle_with_outliers;
  int n = 0;
  int ambient_dim = 2;
  double noise = 0.0;
  int outliers = 0;
  std::uint64_t seed = 0;
};

// Deterministic per seed. Circle points sit at angles 2 pi k / n, radius 1;
// outliers are uniform in [-2.5, 2.5]^2 in the circle plane;
// embedded_circle_highD applies a seeded random rotation before adding noise.
Matrix generate(const DatasetSpec& spec);

// Betti numbers of the sublevel complex at `value`, degrees 0 .. d_max, via
// Z/2 boundary ranks. Independent of the reduction in compute_persistence.
std::vector<long> betti_oracle(const FilteredComplex& complex, double value);

// Bars alive at `value` (birth <= value < death) in the given degree,
// truncated top-degree bars included.
long alive_bars(const PersistenceDiagram& diagram, int degree, double value);

}  // namespace gkpd
