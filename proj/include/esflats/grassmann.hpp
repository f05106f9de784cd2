#pragma once

// Gr(k,d) as a metric space in binary64, with principal angles as the basic
// measurement. Randomized epsilon-nets keep a record of their coverage audit.

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace esflats::gr {

/// Comparisons between floating quantities in this module carry this slack.
inline constexpr double kTol = 1e-9;
/// Subspaces closer than this are treated as equal.
inline constexpr double kSameAngle = 1e-9;

/// A k-dimensional linear subspace of R^d, stored as an orthonormal d x k basis.
class Subspace {
 public:
  /// Rejects bases whose Gram matrix deviates from the identity by more than 1e-12.
  explicit Subspace(Eigen::MatrixXd basis);
  /// Orthonormalizes the columns (which must be independent).
  static Subspace spanned_by(const Eigen::MatrixXd& columns);

  Eigen::Index ambient_dim() const { return basis_.rows(); }
  Eigen::Index dim() const { return basis_.cols(); }
  const Eigen::MatrixXd& basis() const { return basis_; }

  /// Orthogonal projection of x onto the subspace.
  Eigen::VectorXd project(const Eigen::VectorXd& x) const { return basis_ * (basis_.transpose() * x); }

 private:
  Eigen::MatrixXd basis_;
};

/// Principal angles in ascending order, each in [0, pi/2].
std::vector<double> principal_angles(const Subspace& u, const Subspace& v);

/// Hausdorff distance of the unit-ball slices: sin of the largest principal angle.
double gr_distance(const Subspace& u, const Subspace& v);

/// Largest principal angle, asin(gr_distance).
double max_angle(const Subspace& u, const Subspace& v);

/// Haar-uniform random subspace via QR of a Gaussian d x k matrix.
Subspace random_subspace(Eigen::Index d, Eigen::Index k, std::mt19937_64& rng);

struct NetAudit {
  std::size_t samples = 0;
  double max_observed_gap = 0;
};

struct EpsNet {
  Eigen::Index d = 0;
  Eigen::Index k = 0;
  double eps = 0;
  std::uint64_t seed = 0;
  std::vector<Subspace> elements;
  NetAudit audit;
};

struct NetOptions {
  std::size_t audit_samples = 100000;
  /// Packing stops after this many consecutive candidates were already covered.
  std::size_t stall_limit = 20000;
  /// Cap on elements; 0 means read ESFLATS_MAX_NET_SIZE (default 200000).
  std::size_t max_size = 0;
};

/// Greedy packing: coordinate subspaces first, then uniform random candidates, each
/// kept when its angle to every element is at least eps (balls of radius eps/2 are
/// disjoint). A fresh audit sample set then measures the coverage gap; uncovered
/// samples are inserted and the audit repeats until it is clean. For 2k > d the net
/// consists of the orthogonal complements of a net over Gr(d-k, d). Throws ResourceError
/// when the net would exceed the size cap.
EpsNet build_eps_net(Eigen::Index d, Eigen::Index k, double eps, std::uint64_t seed, const NetOptions& opts = {});

struct NetHit {
  std::size_t index = 0;
  double angle = 0;
};

/// Exhaustive scan for the element of least largest-principal-angle.
NetHit nearest_in_net(const EpsNet& net, const Subspace& v);

struct OrthogonalPick {
  std::size_t index = 0;
  Subspace complement_choice;  // U_0, a k-subspace orthogonal to the span
  double angle = 0;            // angle between the net element and U_0
  double max_inner = 0;        // max |u.v| over unit u in the element, unit v in the span
};

/// For span dimension s <= d-k: takes U_0 from the first k left singular vectors of
/// the complement projector and returns the net element nearest to it.
OrthogonalPick near_orthogonal_pick(const EpsNet& net, std::span<const Eigen::VectorXd> span);

/// max |u.v| over unit vectors u in U and v in span(vs) (vs need not be orthonormal).
double max_abs_inner(const Subspace& u, std::span<const Eigen::VectorXd> vs);

std::size_t default_max_net_size();

}  // namespace esflats::gr
