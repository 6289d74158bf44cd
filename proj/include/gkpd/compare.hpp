#pragma once

#include <string>
#include <utility>
#include <vector>

#include "gkpd/persistence.hpp"

namespace gkpd {

// Bottleneck distance between the degree-k points of two diagrams. Matched
// pairs cost L-infinity, diagonal assignments cost (death - birth) / 2, and
// infinite bars match only infinite bars (by birth; unequal counts give
// +infinity). Exact: the search runs over the finite set of candidate costs.
double bottleneck(const PersistenceDiagram& a, const PersistenceDiagram& b, int degree);

// Smallest beta such that a beta-multiplicative matching exists on the
// squared-radius scale: exp(2 * bottleneck) of the diagrams mapped through
// v -> ln(v) / 2. Points with birth <= 0 are excluded and counted; if a
// nonempty side loses every point the factor is undefined and this throws.
double multiplicative_factor(const PersistenceDiagram& a, const PersistenceDiagram& b, int degree);

struct DegreeCertificate {
  int degree = 0;
  double factor = 1.0;
  // Indices refer to positions in each diagram's per-degree pairs array.
  std::vector<std::pair<int, int>> matched;
  std::vector<int> a_diagonal;
  std::vector<int> b_diagonal;
  int a_excluded = 0;  // birth <= 0, kept out of the log-scale matching
  int b_excluded = 0;
};

struct InterleavingCertificate {
  double epsilon = 0.0;
  double slack = 0.0;
  double factor_bound = 0.0;    // (1 + slack) / (1 - epsilon)
  double factor_measured = 1.0; // max over degrees, >= 1
  bool pass = false;
  std::vector<DegreeCertificate> degrees;
};

// Certifies every reported degree (0 .. d_max - 1) of two diagrams with equal
// d_max: pass iff the worst measured factor stays within the bound.
InterleavingCertificate certify_interleaving(const PersistenceDiagram& a,
                                             const PersistenceDiagram& b, double epsilon,
                                             double slack = 0.05);

std::string certificate_to_json(const InterleavingCertificate& certificate);

}  // namespace gkpd
