#include "gkpd/persistence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

#include "gkpd/io.hpp"

namespace gkpd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<int> symmetric_difference(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) out.push_back(a[i++]);
    else if (b[j] < a[i]) out.push_back(b[j++]);
    else { ++i; ++j; }
  }
  out.insert(out.end(), a.begin() + static_cast<std::ptrdiff_t>(i), a.end());
  out.insert(out.end(), b.begin() + static_cast<std::ptrdiff_t>(j), b.end());
  return out;
}

bool point_order(const DiagramPoint& a, const DiagramPoint& b) {
  if (a.degree != b.degree) return a.degree < b.degree;
  if (a.birth != b.birth) return a.birth < b.birth;
  return a.death < b.death;
}

}  // namespace

PersistenceDiagram compute_persistence(const FilteredComplex& complex, bool keep_zero) {
  assert_monotone(complex);
  const std::size_t m = complex.simplices.size();

  std::map<std::vector<int>, int> position;
  for (std::size_t i = 0; i < m; ++i)
    position.emplace(complex.simplices[i].vertices, static_cast<int>(i));

  // Left-to-right column reduction over Z/2, pivot = highest facet position.
  std::vector<std::vector<int>> reduced(m);
  std::vector<int> pivot_owner(m, -1);
  std::vector<int> killed_by(m, -1);
  for (std::size_t j = 0; j < m; ++j) {
    const FiltSimplex& s = complex.simplices[j];
    std::vector<int> col;
    if (s.dim() > 0) {
      std::vector<int> facet;
      for (std::size_t drop = 0; drop < s.vertices.size(); ++drop) {
        facet = s.vertices;
        facet.erase(facet.begin() + static_cast<std::ptrdiff_t>(drop));
        col.push_back(position.at(facet));
      }
      std::sort(col.begin(), col.end());
      if (!col.empty() && col.back() >= static_cast<int>(j))
        throw std::runtime_error("persistence: facet does not precede coface in filtration order");
    }
    while (!col.empty()) {
      const int owner = pivot_owner[static_cast<std::size_t>(col.back())];
      if (owner < 0) break;
      col = symmetric_difference(col, reduced[static_cast<std::size_t>(owner)]);
    }
    if (!col.empty()) {
      pivot_owner[static_cast<std::size_t>(col.back())] = static_cast<int>(j);
      killed_by[static_cast<std::size_t>(col.back())] = static_cast<int>(j);
    }
    reduced[j] = std::move(col);
  }

  PersistenceDiagram diagram;
  diagram.d_max = complex.d_max;
  for (std::size_t i = 0; i < m; ++i) {
    const bool positive = reduced[i].empty();
    if (!positive) continue;
    const int degree = complex.simplices[i].dim();
    DiagramPoint p;
    p.birth = complex.simplices[i].value;
    p.degree = degree;
    if (killed_by[i] >= 0) {
      p.death = complex.simplices[static_cast<std::size_t>(killed_by[i])].value;
      if (!keep_zero && p.death == p.birth) continue;
    } else {
      p.death = kInf;
    }
    if (degree < complex.d_max) diagram.points.push_back(p);
    else diagram.truncated.push_back(p);
  }
  std::sort(diagram.points.begin(), diagram.points.end(), point_order);
  std::sort(diagram.truncated.begin(), diagram.truncated.end(), point_order);
  return diagram;
}

std::string diagram_to_json(const PersistenceDiagram& diagram) {
  nlohmann::json blocks = nlohmann::json::array();
  for (int degree = 0; degree < diagram.d_max; ++degree) {
    nlohmann::json pairs = nlohmann::json::array();
    for (const auto& p : diagram.points) {
      if (p.degree != degree) continue;
      nlohmann::json pair = nlohmann::json::array();
      pair.push_back(p.birth);
      if (std::isinf(p.death)) pair.push_back("inf");
      else pair.push_back(p.death);
      pairs.push_back(std::move(pair));
    }
    blocks.push_back({{"degree", degree}, {"pairs", std::move(pairs)}});
  }
  nlohmann::json top_pairs = nlohmann::json::array();
  for (const auto& p : diagram.truncated) {
    nlohmann::json pair = nlohmann::json::array();
    pair.push_back(p.birth);
    if (std::isinf(p.death)) pair.push_back("inf");
    else pair.push_back(p.death);
    top_pairs.push_back(std::move(pair));
  }
  blocks.push_back(
      {{"degree", diagram.d_max}, {"pairs", std::move(top_pairs)}, {"truncated", true}});
  return blocks.dump(2) + "\n";
}

PersistenceDiagram diagram_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("diagram json: ") + e.what());
  }
  if (!j.is_array() || j.empty())
    throw std::invalid_argument("diagram json: expected a non-empty array of degree blocks");
  PersistenceDiagram diagram;
  try {
    for (const auto& block : j) {
      const int degree = block.at("degree").get<int>();
      const bool truncated = block.value("truncated", false);
      if (truncated) diagram.d_max = degree;
      for (const auto& pair : block.at("pairs")) {
        if (!pair.is_array() || pair.size() != 2)
          throw std::invalid_argument("diagram json: pair must be [birth, death]");
        DiagramPoint p;
        p.degree = degree;
        p.birth = pair[0].get<double>();
        if (pair[1].is_string()) {
          if (pair[1].get<std::string>() != "inf")
            throw std::invalid_argument("diagram json: bad death token");
          p.death = kInf;
        } else {
          p.death = pair[1].get<double>();
        }
        if (truncated) diagram.truncated.push_back(p);
        else diagram.points.push_back(p);
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("diagram json: ") + e.what());
  }
  for (const auto& p : diagram.points)
    if (p.degree >= diagram.d_max)
      throw std::invalid_argument("diagram json: non-truncated degree at or above the truncated block");
  std::sort(diagram.points.begin(), diagram.points.end(), point_order);
  std::sort(diagram.truncated.begin(), diagram.truncated.end(), point_order);
  return diagram;
}

void write_diagram_csv(std::ostream& out, const PersistenceDiagram& diagram) {
  out << "degree,birth,death\n";
  for (const auto& p : diagram.points)
    out << p.degree << ',' << format_double(p.birth) << ',' << format_double(p.death) << '\n';
  for (const auto& p : diagram.truncated)
    out << p.degree << ',' << format_double(p.birth) << ',' << format_double(p.death) << '\n';
}

}  // namespace gkpd
