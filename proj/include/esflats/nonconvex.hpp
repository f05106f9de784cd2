#pragma once

// Families of flats that are not in convex position. The perturbed octahedron
// family is checked with exact LPs; cones are refuted against Grassmannian nets,
// whose sections give affine flats.

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "esflats/convexpos.hpp"
#include "esflats/geom.hpp"
#include "esflats/grassmann.hpp"

namespace esflats::nonconvex {

/// min(1/(12 d), 1/(4 d!)).
double eps_threshold(int d);

/// Checks det(m) >= 1 - t! * delta - 1e-9 for a t x t matrix with unit diagonal
/// and off-diagonal entries bounded by delta. Throws InputError when m is not such a matrix.
bool det_bound_check(const Eigen::MatrixXd& m, double delta);

/// A polyhedral cone {x : n . x >= 0 for every facet normal n}, stored exactly.
/// Built from generators (positive hull) or from inward halfspace normals.
class Cone {
 public:
  static Cone from_generators(const std::vector<Eigen::VectorXd>& gens);
  static Cone from_halfspaces(const std::vector<Eigen::VectorXd>& normals);

  std::size_t dim() const { return d_; }
  /// Irredundant inward facet normals (exact); empty for the whole space.
  const std::vector<RVec>& facets() const { return facets_; }
  const std::vector<Eigen::VectorXd>& generators() const { return gens_; }
  const std::vector<Eigen::VectorXd>& halfspaces() const { return halfspaces_; }
  /// Unit interior direction maximizing the smallest normalized facet margin.
  const Eigen::VectorXd& interior_direction() const { return interior_; }

  /// min over facets of n.z / |n| for the unit vector along z; +1 when there are no facets.
  double margin(const Eigen::VectorXd& z) const;

 private:
  Cone() = default;
  void finish();

  std::size_t d_ = 0;
  std::vector<Eigen::VectorXd> gens_;
  std::vector<Eigen::VectorXd> halfspaces_;
  std::vector<RVec> facets_;
  std::vector<Eigen::VectorXd> unit_facets_;
  Eigen::VectorXd interior_;
};

struct RefutationTrace {
  std::vector<Eigen::VectorXd> a_vectors;
  std::vector<std::size_t> a_net_indices;  // net element used for a_1.., a_0 comes from the cone
  std::vector<Eigen::VectorXd> b_vectors;
  std::vector<Eigen::VectorXd> c_vectors;
  std::vector<Eigen::VectorXd> c_star;
  Eigen::VectorXd b;
  Eigen::VectorXd b_star;
  std::vector<double> x;  // x_0 .. x_{d-k}
  std::vector<double> y_j;
  double y = 0;
  double det_m = 0;
  double det_mtm = 0;
  double det_mstar_tmstar = 0;
  double eta = 0;
  double w_angle = 0;  // angle between W and the chosen net element
};

/// The chosen net element meets the open cone in z.
struct RefutationCertificate {
  std::size_t net_index = 0;
  Eigen::VectorXd witness_z;
  double margin_interior = 0;
  double membership_residual = 0;
  RefutationTrace trace;
  std::vector<std::string> notes;
};

/// A net element violating the face conditions directly: condition 1 is
/// "U meets the cone only at 0", condition 2 is "U meets the open cone" (witness set).
struct EarlyRefutation {
  int condition = 0;
  std::size_t net_index = 0;
  std::optional<Eigen::VectorXd> witness_z;
  double margin = 0;
  std::vector<std::string> notes;
};

using Refutation = std::variant<RefutationCertificate, EarlyRefutation>;

struct RefuteOptions {
  double tau = 1e-6;
  /// Scan the whole net for condition violations before the construction.
  bool full_scan = false;
};

/// How a subspace meets the cone.
enum class Contact { Interior, Boundary, Disjoint };

struct Probe {
  Contact contact = Contact::Disjoint;
  Eigen::VectorXd point;  // unit; set for Interior and Boundary
  double margin = 0;
};

/// Exact LPs over the subspace: best normalized margin, then a nonzero boundary point.
Probe probe_subspace(const Cone& cone, const gr::Subspace& u, double tau = 1e-6);

/// Runs the almost-orthogonal construction against the net. Throws InputError
/// when the cone has empty interior or dimensions disagree, ConstructionError
/// when an in-run guard fails.
Refutation refute_cone(const Cone& cone, const gr::EpsNet& net, const RefuteOptions& opts = {});

struct OctaFamily {
  std::size_t d = 0;
  std::uint64_t seed = 0;
  Rat magnitude;
  /// h_1..h_d (perturbed x_i = 0), then h_delta for t = 0..2^d-1 with
  /// delta_i = -1 exactly when bit i of t is set.
  std::vector<geom::Hyperplane> hyperplanes;
};

/// Perturbed octahedron family for 2 <= d <= 4, in exact general position.
/// magnitude = 0 gives the unperturbed family (not in general position).
OctaFamily octa_family(std::size_t d, std::uint64_t seed, const Rat& magnitude = Rat(1, 1000));

/// Index of h_delta inside the family.
std::size_t delta_index(std::size_t d, const convexpos::SignVector& delta);

struct OctaVerdict {
  bool certified = false;
  std::vector<std::string> log;
};

/// For each orthant-like cone sigma cut out by h_1..h_d, checks with an exact LP
/// that the cone misses h_{-sigma}.
OctaVerdict verify_octa_nonconvex(const OctaFamily& fam);

struct SectionResult {
  std::vector<geom::Flat> flats;       // in R^d
  std::vector<std::size_t> net_index;  // source element of each flat
  std::vector<std::size_t> parallel;   // elements parallel to the section hyperplane
};

/// Intersects each element of a net over Gr(k+1, d+1) with {x_{d+1} = 1}. Elements
/// within 1e-9 of parallel are skipped and reported; more than 1% of them aborts.
SectionResult section_to_affine(const gr::EpsNet& net);

}  // namespace esflats::nonconvex
