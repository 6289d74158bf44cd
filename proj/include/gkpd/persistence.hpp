#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "gkpd/filtration.hpp"

namespace gkpd {

struct DiagramPoint {
  double birth = 0.0;
  double death = 0.0;  // +infinity for essential classes
  int degree = 0;
};

// Bars of degree < d_max live in `points`. Bars created by top-dimension
// simplices can never die in a d_max-truncated complex; they are real output
// but flagged apart in `truncated`.
struct PersistenceDiagram {
  std::vector<DiagramPoint> points;
  std::vector<DiagramPoint> truncated;
  int d_max = 0;
};

// Z/2 boundary-matrix reduction in filtration order. Zero-persistence pairs
// (birth equal to death) are dropped unless keep_zero is set.
PersistenceDiagram compute_persistence(const FilteredComplex& complex, bool keep_zero = false);

// JSON form: one block per degree, {"degree": k, "pairs": [[birth, death],
// ...]}, with "inf" for infinite deaths; the top-dimension block carries
// "truncated": true. parse(serialize(d)) == d byte-for-byte on valid input.
std::string diagram_to_json(const PersistenceDiagram& diagram);
PersistenceDiagram diagram_from_json(const std::string& text);

// CSV export "degree,birth,death" (header included, truncated bars last).
void write_diagram_csv(std::ostream& out, const PersistenceDiagram& diagram);

}  // namespace gkpd
