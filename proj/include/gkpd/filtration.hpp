#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "gkpd/kernel.hpp"
#include "gkpd/types.hpp"

namespace gkpd {

struct FiltSimplex {
  std::vector<int> vertices;  // sorted ascending, distinct
  double value = 0.0;         // squared power radius
  int dim() const { return static_cast<int>(vertices.size()) - 1; }
};

// Simplices in filtration order: (value, dimension, lexicographic vertices).
// Values are monotone along face inclusions by construction; negative values
// (possible under exotic weights) are stored untouched.
struct FilteredComplex {
  std::vector<FiltSimplex> simplices;
  int d_max = 0;
  int n_vertices = 0;
};

// Weighted Cech filtration up to dimension d_max. Vertex values are -w_i;
// higher simplices get their smallest enclosing power-ball radius, computed by
// meb_gram on the kernel Gram submatrix. value_cap drops simplices whose value
// exceeds it (faces of surviving simplices always survive too).
FilteredComplex build_filtration_gkpd(const WeightedPointCloud& cloud, int d_max,
                                      std::optional<double> value_cap = std::nullopt,
                                      int threads = 1);

// Same complex over explicit coordinates (image space) with supplied weights,
// radii via meb_coordinates.
FilteredComplex build_filtration_euclidean(const Matrix& points, const Vector& weights, int d_max,
                                           std::optional<double> value_cap = std::nullopt,
                                           int threads = 1);

// Validates face closure, duplicate-freeness, vertex ordering, nondecreasing
// values with faces listed before cofaces, and facet-value monotonicity.
// Throws std::runtime_error naming the first violation.
void assert_monotone(const FilteredComplex& complex);

// Line-oriented text format "dim v0 v1 ... vk value", one simplex per line in
// filtration order; re-export of an imported complex is byte-identical.
void write_complex(std::ostream& out, const FilteredComplex& complex);
FilteredComplex read_complex(std::istream& in);

}  // namespace gkpd
