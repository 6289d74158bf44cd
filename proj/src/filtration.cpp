#include "gkpd/filtration.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "gkpd/io.hpp"
#include "gkpd/meb.hpp"
#include "gkpd/parallel.hpp"

namespace gkpd {

namespace {

bool simplex_order(const FiltSimplex& a, const FiltSimplex& b) {
  if (a.value != b.value) return a.value < b.value;
  if (a.vertices.size() != b.vertices.size()) return a.vertices.size() < b.vertices.size();
  return a.vertices < b.vertices;
}

// Enumerates all (k+1)-subsets of [n] in lexicographic order.
std::vector<std::vector<int>> combinations(int n, int k_plus_1) {
  std::vector<std::vector<int>> out;
  std::vector<int> combo(k_plus_1);
  for (int i = 0; i < k_plus_1; ++i) combo[i] = i;
  while (true) {
    out.push_back(combo);
    int pos = k_plus_1 - 1;
    while (pos >= 0 && combo[pos] == n - k_plus_1 + pos) --pos;
    if (pos < 0) break;
    ++combo[pos];
    for (int i = pos + 1; i < k_plus_1; ++i) combo[i] = combo[i - 1] + 1;
  }
  return out;
}

using RadiusFn = std::function<double(const std::vector<int>&)>;

FilteredComplex build_filtration_impl(int n, int d_max, std::optional<double> value_cap,
                                      int threads, const Vector& weights,
                                      const RadiusFn& radius) {
  if (n < 1) throw std::invalid_argument("build_filtration: empty point set");
  if (d_max < 0) throw std::invalid_argument("build_filtration: d_max must be >= 0");
  if (value_cap && !std::isfinite(*value_cap))
    throw std::invalid_argument("build_filtration: value_cap must be finite");

  FilteredComplex complex;
  complex.d_max = d_max;
  complex.n_vertices = n;

  // Monotone values of the previous dimension, kept uncapped so facet lookups
  // stay valid while the cap prunes emitted simplices.
  std::map<std::vector<int>, double> prev_values;
  for (int dim = 0; dim <= d_max; ++dim) {
    if (dim + 1 > n) break;
    const auto combos = combinations(n, dim + 1);
    std::vector<double> values(combos.size());
    if (dim == 0) {
      for (std::size_t i = 0; i < combos.size(); ++i) values[i] = -weights(combos[i][0]);
    } else {
      parallel_for(static_cast<int>(combos.size()), threads,
                   [&](int i) { values[static_cast<std::size_t>(i)] = radius(combos[static_cast<std::size_t>(i)]); });
    }

    std::map<std::vector<int>, double> level_values;
    std::vector<int> facet;
    for (std::size_t i = 0; i < combos.size(); ++i) {
      double v = values[i];
      if (dim > 0) {
        // Monotone enforcement: a simplex enters no earlier than its facets.
        for (std::size_t drop = 0; drop < combos[i].size(); ++drop) {
          facet = combos[i];
          facet.erase(facet.begin() + static_cast<std::ptrdiff_t>(drop));
          const auto it = prev_values.find(facet);
          if (it == prev_values.end())
            throw std::runtime_error("build_filtration: missing facet during construction");
          v = std::max(v, it->second);
        }
      }
      level_values.emplace(combos[i], v);
      if (!value_cap || v <= *value_cap)
        complex.simplices.push_back(FiltSimplex{combos[i], v});
    }
    prev_values = std::move(level_values);
  }

  std::sort(complex.simplices.begin(), complex.simplices.end(), simplex_order);
  assert_monotone(complex);
  return complex;
}

}  // namespace

FilteredComplex build_filtration_gkpd(const WeightedPointCloud& cloud, int d_max,
                                      std::optional<double> value_cap, int threads) {
  const Matrix full_gram = gram(cloud.points(), cloud.config()).entries();
  const Vector& w = cloud.weights();
  const RadiusFn radius = [&](const std::vector<int>& vertices) {
    const int k = static_cast<int>(vertices.size());
    Matrix sub(k, k);
    Vector wsub(k);
    for (int r = 0; r < k; ++r) {
      wsub(r) = w(vertices[static_cast<std::size_t>(r)]);
      for (int c = 0; c < k; ++c)
        sub(r, c) = full_gram(vertices[static_cast<std::size_t>(r)], vertices[static_cast<std::size_t>(c)]);
    }
    return meb_gram(sub, wsub).radius_sq;
  };
  return build_filtration_impl(cloud.size(), d_max, value_cap, threads, w, radius);
}

FilteredComplex build_filtration_euclidean(const Matrix& points, const Vector& weights, int d_max,
                                           std::optional<double> value_cap, int threads) {
  if (points.rows() != weights.size())
    throw std::invalid_argument("build_filtration: points/weights size mismatch");
  if (!points.allFinite() || !weights.allFinite())
    throw std::invalid_argument("build_filtration: non-finite input");
  const RadiusFn radius = [&](const std::vector<int>& vertices) {
    const int k = static_cast<int>(vertices.size());
    Matrix sub(k, points.cols());
    Vector wsub(k);
    for (int r = 0; r < k; ++r) {
      sub.row(r) = points.row(vertices[static_cast<std::size_t>(r)]);
      wsub(r) = weights(vertices[static_cast<std::size_t>(r)]);
    }
    return meb_coordinates(sub, wsub).radius_sq;
  };
  return build_filtration_impl(static_cast<int>(points.rows()), d_max, value_cap, threads,
                               weights, radius);
}

void assert_monotone(const FilteredComplex& complex) {
  std::map<std::vector<int>, double> seen;
  const FiltSimplex* prev = nullptr;
  for (const auto& s : complex.simplices) {
    if (s.vertices.empty()) throw std::runtime_error("complex integrity: empty simplex");
    if (!std::is_sorted(s.vertices.begin(), s.vertices.end()) ||
        std::adjacent_find(s.vertices.begin(), s.vertices.end()) != s.vertices.end())
      throw std::runtime_error("complex integrity: vertices not sorted/distinct");
    if (s.vertices.front() < 0 || s.vertices.back() >= complex.n_vertices)
      throw std::runtime_error("complex integrity: vertex index out of range");
    if (s.dim() > complex.d_max) throw std::runtime_error("complex integrity: dimension above d_max");
    // Only value order is binding; equal-value simplices may appear in any
    // order that keeps faces first, and the facet check below enforces that.
    if (prev && s.value < prev->value)
      throw std::runtime_error("complex integrity: simplices out of filtration order");
    if (!seen.emplace(s.vertices, s.value).second)
      throw std::runtime_error("complex integrity: duplicate simplex");
    if (s.dim() > 0) {
      std::vector<int> facet;
      for (std::size_t drop = 0; drop < s.vertices.size(); ++drop) {
        facet = s.vertices;
        facet.erase(facet.begin() + static_cast<std::ptrdiff_t>(drop));
        const auto it = seen.find(facet);
        if (it == seen.end()) {
          std::ostringstream msg;
          msg << "complex integrity: missing facet (";
          for (int v : facet) msg << ' ' << v;
          msg << " ) of simplex (";
          for (int v : s.vertices) msg << ' ' << v;
          msg << " )";
          throw std::runtime_error(msg.str());
        }
        if (it->second > s.value) {
          std::ostringstream msg;
          msg << "complex integrity: facet value " << it->second << " exceeds coface value "
              << s.value << " for simplex (";
          for (int v : s.vertices) msg << ' ' << v;
          msg << " )";
          throw std::runtime_error(msg.str());
        }
      }
    }
    prev = &s;
  }
}

void write_complex(std::ostream& out, const FilteredComplex& complex) {
  for (const auto& s : complex.simplices) {
    out << s.dim();
    for (int v : s.vertices) out << ' ' << v;
    out << ' ' << format_double(s.value) << '\n';
  }
}

FilteredComplex read_complex(std::istream& in) {
  FilteredComplex complex;
  std::string line;
  int max_vertex = -1;
  int max_dim = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::vector<std::string> tokens;
    std::string tok;
    while (ss >> tok) tokens.push_back(tok);
    if (tokens.size() < 3)
      throw std::runtime_error("complex parse: expected 'dim v0 ... vk value' in '" + line + "'");
    const int dim = static_cast<int>(parse_double(tokens[0]));
    if (dim < 0 || tokens.size() != static_cast<std::size_t>(dim) + 3)
      throw std::runtime_error("complex parse: token count does not match dimension in '" + line + "'");
    FiltSimplex s;
    for (int i = 0; i <= dim; ++i) {
      const double v = parse_double(tokens[static_cast<std::size_t>(i) + 1]);
      if (v != std::floor(v) || v < 0)
        throw std::runtime_error("complex parse: bad vertex index in '" + line + "'");
      s.vertices.push_back(static_cast<int>(v));
      max_vertex = std::max(max_vertex, static_cast<int>(v));
    }
    s.value = parse_double(tokens.back());
    max_dim = std::max(max_dim, dim);
    complex.simplices.push_back(std::move(s));
  }
  if (complex.simplices.empty()) throw std::runtime_error("complex parse: empty complex");
  complex.n_vertices = max_vertex + 1;
  complex.d_max = max_dim;
  assert_monotone(complex);
  return complex;
}

}  // namespace gkpd
