#include "gkpd/compare.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

#include "gkpd/io.hpp"

namespace gkpd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Planar {
  double birth = 0.0;
  double death = 0.0;
  int orig = 0;  // position in the source degree's pairs array
};

struct MatchingResult {
  double distance = 0.0;
  std::vector<std::pair<int, int>> matched;
  std::vector<int> a_diagonal;
  std::vector<int> b_diagonal;
};

double diag_cost(const Planar& p) { return (p.death - p.birth) / 2.0; }

double linf(const Planar& p, const Planar& q) {
  const double db = std::abs(p.birth - q.birth);
  if (std::isinf(p.death) && std::isinf(q.death)) return db;
  if (std::isinf(p.death) || std::isinf(q.death)) return kInf;
  return std::max(db, std::abs(p.death - q.death));
}

// Kuhn augmenting-path matcher over the ghost-augmented bipartite graph:
// left = finite A points + one ghost per finite B point, right symmetric.
// A perfect matching at cost c exists iff bottleneck(finite parts) <= c.
class GhostMatcher {
 public:
  GhostMatcher(const std::vector<Planar>& a, const std::vector<Planar>& b)
      : a_(a), b_(b), na_(static_cast<int>(a.size())), nb_(static_cast<int>(b.size())) {}

  bool feasible(double c) {
    c_ = c;
    match_left_.assign(static_cast<std::size_t>(na_ + nb_), -1);
    match_right_.assign(static_cast<std::size_t>(nb_ + na_), -1);
    for (int l = 0; l < na_ + nb_; ++l) {
      visited_.assign(static_cast<std::size_t>(nb_ + na_), false);
      if (!augment(l)) return false;
    }
    return true;
  }

  MatchingResult extract() const {
    MatchingResult out;
    for (int l = 0; l < na_; ++l) {
      const int r = match_left_[static_cast<std::size_t>(l)];
      if (r >= 0 && r < nb_) out.matched.emplace_back(a_[static_cast<std::size_t>(l)].orig,
                                                      b_[static_cast<std::size_t>(r)].orig);
      else out.a_diagonal.push_back(a_[static_cast<std::size_t>(l)].orig);
    }
    for (int r = 0; r < nb_; ++r) {
      const int l = match_right_[static_cast<std::size_t>(r)];
      if (l < 0 || l >= na_) out.b_diagonal.push_back(b_[static_cast<std::size_t>(r)].orig);
    }
    return out;
  }

 private:
  bool edge(int l, int r) const {
    const bool left_real = l < na_;
    const bool right_real = r < nb_;
    if (left_real && right_real)
      return linf(a_[static_cast<std::size_t>(l)], b_[static_cast<std::size_t>(r)]) <= c_;
    if (left_real) return diag_cost(a_[static_cast<std::size_t>(l)]) <= c_;
    if (right_real) return diag_cost(b_[static_cast<std::size_t>(r)]) <= c_;
    return true;  // ghost-to-ghost is free
  }

  bool augment(int l) {
    for (int r = 0; r < nb_ + na_; ++r) {
      if (visited_[static_cast<std::size_t>(r)] || !edge(l, r)) continue;
      visited_[static_cast<std::size_t>(r)] = true;
      if (match_right_[static_cast<std::size_t>(r)] < 0 ||
          augment(match_right_[static_cast<std::size_t>(r)])) {
        match_right_[static_cast<std::size_t>(r)] = l;
        match_left_[static_cast<std::size_t>(l)] = r;
        return true;
      }
    }
    return false;
  }

  const std::vector<Planar>& a_;
  const std::vector<Planar>& b_;
  int na_;
  int nb_;
  double c_ = 0.0;
  std::vector<int> match_left_;
  std::vector<int> match_right_;
  std::vector<bool> visited_;
};

// Exact bottleneck between two finite planar diagrams (infinite bars handled
// by the caller): binary search over the candidate cost set.
MatchingResult bottleneck_finite(const std::vector<Planar>& a, const std::vector<Planar>& b) {
  std::vector<double> candidates{0.0};
  for (const auto& p : a) candidates.push_back(diag_cost(p));
  for (const auto& q : b) candidates.push_back(diag_cost(q));
  for (const auto& p : a)
    for (const auto& q : b) {
      const double c = linf(p, q);
      if (std::isfinite(c)) candidates.push_back(c);
    }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  GhostMatcher matcher(a, b);
  std::size_t lo = 0;
  std::size_t hi = candidates.size() - 1;
  // The largest candidate sends everything to the diagonal, hence feasible.
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (matcher.feasible(candidates[mid])) hi = mid;
    else lo = mid + 1;
  }
  if (!matcher.feasible(candidates[lo]))
    throw std::runtime_error("bottleneck: no feasible matching at the maximal candidate cost");
  MatchingResult out = matcher.extract();
  out.distance = candidates[lo];
  return out;
}

// Full bottleneck: infinite bars pair by sorted birth, finite part as above.
// Unequal infinite counts make the distance +infinity.
MatchingResult bottleneck_planar(const std::vector<Planar>& a, const std::vector<Planar>& b) {
  std::vector<Planar> a_fin, b_fin, a_inf, b_inf;
  for (const auto& p : a) (std::isinf(p.death) ? a_inf : a_fin).push_back(p);
  for (const auto& q : b) (std::isinf(q.death) ? b_inf : b_fin).push_back(q);

  if (a_inf.size() != b_inf.size()) {
    MatchingResult out;
    out.distance = kInf;
    return out;
  }
  const auto by_birth = [](const Planar& x, const Planar& y) { return x.birth < y.birth; };
  std::sort(a_inf.begin(), a_inf.end(), by_birth);
  std::sort(b_inf.begin(), b_inf.end(), by_birth);
  double inf_cost = 0.0;
  for (std::size_t i = 0; i < a_inf.size(); ++i)
    inf_cost = std::max(inf_cost, std::abs(a_inf[i].birth - b_inf[i].birth));

  MatchingResult out = bottleneck_finite(a_fin, b_fin);
  out.distance = std::max(out.distance, inf_cost);
  for (std::size_t i = 0; i < a_inf.size(); ++i)
    out.matched.emplace_back(a_inf[i].orig, b_inf[i].orig);
  return out;
}

std::vector<Planar> degree_points(const PersistenceDiagram& d, int degree) {
  std::vector<Planar> out;
  int orig = 0;
  const auto collect = [&](const std::vector<DiagramPoint>& pts) {
    for (const auto& p : pts) {
      if (p.degree != degree) continue;
      if (!std::isfinite(p.birth))
        throw std::invalid_argument("compare: non-finite birth value");
      if (p.death < p.birth)
        throw std::invalid_argument("compare: death before birth");
      out.push_back(Planar{p.birth, p.death, orig++});
    }
  };
  collect(d.points);
  collect(d.truncated);
  return out;
}

// Log-scale copy for the multiplicative matching: u = ln(v) / 2, so that
// exp(2 * bottleneck) is the multiplicative interleaving factor.
std::vector<Planar> log_half_scale(const std::vector<Planar>& pts, int* excluded) {
  std::vector<Planar> out;
  for (const auto& p : pts) {
    if (p.birth <= 0.0) {
      ++*excluded;
      continue;
    }
    Planar q;
    q.birth = 0.5 * std::log(p.birth);
    q.death = std::isinf(p.death) ? kInf : 0.5 * std::log(p.death);
    q.orig = p.orig;
    out.push_back(q);
  }
  return out;
}

DegreeCertificate factor_with_matching(const PersistenceDiagram& a, const PersistenceDiagram& b,
                                       int degree) {
  const std::vector<Planar> pa = degree_points(a, degree);
  const std::vector<Planar> pb = degree_points(b, degree);

  DegreeCertificate cert;
  cert.degree = degree;
  const std::vector<Planar> la = log_half_scale(pa, &cert.a_excluded);
  const std::vector<Planar> lb = log_half_scale(pb, &cert.b_excluded);

  if ((la.empty() && !pa.empty()) || (lb.empty() && !pb.empty()))
    throw std::invalid_argument(
        "multiplicative_factor: undefined on diagrams with no positive births");
  if (la.empty() && lb.empty()) {
    cert.factor = 1.0;
    return cert;
  }

  MatchingResult m = bottleneck_planar(la, lb);
  cert.factor = std::isinf(m.distance) ? kInf : std::exp(2.0 * m.distance);
  cert.matched = std::move(m.matched);
  cert.a_diagonal = std::move(m.a_diagonal);
  cert.b_diagonal = std::move(m.b_diagonal);
  return cert;
}

}  // namespace

double bottleneck(const PersistenceDiagram& a, const PersistenceDiagram& b, int degree) {
  if (degree < 0) throw std::invalid_argument("bottleneck: degree must be >= 0");
  return bottleneck_planar(degree_points(a, degree), degree_points(b, degree)).distance;
}

double multiplicative_factor(const PersistenceDiagram& a, const PersistenceDiagram& b,
                             int degree) {
  if (degree < 0) throw std::invalid_argument("multiplicative_factor: degree must be >= 0");
  return factor_with_matching(a, b, degree).factor;
}

InterleavingCertificate certify_interleaving(const PersistenceDiagram& a,
                                             const PersistenceDiagram& b, double epsilon,
                                             double slack) {
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw std::invalid_argument("certify_interleaving: epsilon must be in (0, 1)");
  if (!(slack >= 0.0)) throw std::invalid_argument("certify_interleaving: slack must be >= 0");
  if (a.d_max != b.d_max)
    throw std::invalid_argument("certify_interleaving: diagrams disagree on d_max");

  InterleavingCertificate cert;
  cert.epsilon = epsilon;
  cert.slack = slack;
  cert.factor_bound = (1.0 + slack) / (1.0 - epsilon);
  cert.factor_measured = 1.0;
  for (int degree = 0; degree < a.d_max; ++degree) {
    DegreeCertificate dc = factor_with_matching(a, b, degree);
    cert.factor_measured = std::max(cert.factor_measured, dc.factor);
    cert.degrees.push_back(std::move(dc));
  }
  cert.pass = cert.factor_measured <= cert.factor_bound;
  return cert;
}

std::string certificate_to_json(const InterleavingCertificate& certificate) {
  nlohmann::json j;
  j["epsilon"] = certificate.epsilon;
  j["slack"] = certificate.slack;
  j["factor_bound"] = certificate.factor_bound;
  if (std::isinf(certificate.factor_measured)) j["factor_measured"] = "inf";
  else j["factor_measured"] = certificate.factor_measured;
  // Alpha-unit view of the same bound: radii scale with the square root.
  if (std::isinf(certificate.factor_measured)) j["alpha_factor_measured"] = "inf";
  else j["alpha_factor_measured"] = std::sqrt(certificate.factor_measured);
  j["pass"] = certificate.pass;
  nlohmann::json degrees = nlohmann::json::array();
  for (const auto& dc : certificate.degrees) {
    nlohmann::json d;
    d["degree"] = dc.degree;
    if (std::isinf(dc.factor)) d["factor"] = "inf";
    else d["factor"] = dc.factor;
    nlohmann::json matched = nlohmann::json::array();
    for (const auto& [ia, ib] : dc.matched) matched.push_back({ia, ib});
    d["matched"] = std::move(matched);
    d["a_diagonal"] = dc.a_diagonal;
    d["b_diagonal"] = dc.b_diagonal;
    d["a_excluded"] = dc.a_excluded;
    d["b_excluded"] = dc.b_excluded;
    degrees.push_back(std::move(d));
  }
  j["degrees"] = std::move(degrees);
  return j.dump(2) + "\n";
}

}  // namespace gkpd
