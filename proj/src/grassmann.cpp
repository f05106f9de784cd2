#include "esflats/grassmann.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <string>
#include <unordered_map>

#include "esflats/error.hpp"

namespace esflats::gr {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

void require_same_shape(const Subspace& u, const Subspace& v) {
  if (u.ambient_dim() != v.ambient_dim() || u.dim() != v.dim())
    throw InputError("subspaces of different shape: Gr(" + std::to_string(u.dim()) + "," +
                     std::to_string(u.ambient_dim()) + ") vs Gr(" + std::to_string(v.dim()) + "," +
                     std::to_string(v.ambient_dim()) + ")");
}

MatrixXd orthonormalize(const MatrixXd& cols) {
  Eigen::ColPivHouseholderQR<MatrixXd> piv(cols);
  if (piv.rank() < cols.cols()) throw InputError("spanning vectors are linearly dependent");
  Eigen::HouseholderQR<MatrixXd> qr(cols);
  return qr.householderQ() * MatrixXd::Identity(cols.rows(), cols.cols());
}

/// Squared smallest singular value of a small square block, i.e. cos^2 of the
/// largest principal angle when the block is U^T V.
double min_cos_sq(const MatrixXd& m) {
  const MatrixXd g = m.transpose() * m;
  if (g.rows() == 2) {
    const double tr = g(0, 0) + g(1, 1);
    const double det = g(0, 0) * g(1, 1) - g(0, 1) * g(1, 0);
    return std::max(0.0, tr / 2 - std::sqrt(std::max(0.0, tr * tr / 4 - det)));
  }
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(g, Eigen::EigenvaluesOnly);
  return std::max(0.0, es.eigenvalues()(0));
}

/// All element bases stacked as rows of one (n k) x d matrix, so a candidate is
/// compared against every element with a single product.
class StackedBases {
 public:
  StackedBases(Index d, Index k) : d_(d), k_(k) {}

  void push(const MatrixXd& basis) {
    const MatrixXd t = basis.transpose();
    for (Index r = 0; r < k_; ++r)
      for (Index c = 0; c < d_; ++c) data_.push_back(t(r, c));
    ++n_;
  }

  /// Index of the element maximizing the smallest cosine with v, and that cos^2.
  /// With `threshold` set, stops at the first element whose cos^2 exceeds it.
  std::pair<std::size_t, double> best(const MatrixXd& v, double threshold = 2.0) const {
    using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    const Eigen::Map<const RowMat> b(data_.data(), static_cast<Index>(n_) * k_, d_);
    const MatrixXd g = b * v;
    std::pair<std::size_t, double> out{0, -1.0};
    const double kk = static_cast<double>(k_);
    for (std::size_t i = 0; i < n_; ++i) {
      const auto blk = g.middleRows(static_cast<Index>(i) * k_, k_);
      const double fro = blk.squaredNorm();
      // sum of cos^2 is fro; the smallest is at most fro/k and at least fro - (k-1)
      if (fro / kk <= out.second) continue;
      const double lower = fro - (kk - 1);
      double c2;
      if (lower > threshold) c2 = lower;
      else if (fro / kk <= threshold && threshold <= 1.0) continue;
      else c2 = min_cos_sq(blk);
      if (c2 > out.second) out = {i, c2};
      if (out.second > threshold) break;
    }
    return out;
  }

  std::size_t size() const { return n_; }

 private:
  Index d_;
  Index k_;
  std::size_t n_ = 0;
  std::vector<double> data_;
};

/// Grid hash over unit vectors for Gr(1,d): each line is stored as +u and -u.
class LineIndex {
 public:
  LineIndex(Index d, double cell) : d_(d), cell_(cell) {}

  void insert(std::size_t id, const VectorXd& u) {
    table_[key(u)].push_back({id, u});
    table_[key(-u)].push_back({id, -u});
  }

  /// Least angle to a stored line among those within the chord radius `cell_`;
  /// returns a negative value when no stored line is that close.
  double nearest_angle(const VectorXd& u, std::size_t* id = nullptr) const {
    std::vector<long> base(static_cast<std::size_t>(d_));
    for (Index i = 0; i < d_; ++i) base[static_cast<std::size_t>(i)] = coord(u(i));
    double best_cos = -1;
    std::vector<long> cur(base.size());
    const long total = ipow3(d_);
    for (long code = 0; code < total; ++code) {
      long c = code;
      for (std::size_t i = 0; i < base.size(); ++i) {
        cur[i] = base[i] + (c % 3) - 1;
        c /= 3;
      }
      const auto it = table_.find(hash(cur));
      if (it == table_.end()) continue;
      for (const auto& e : it->second) {
        const double cs = std::abs(e.u.dot(u));
        if (cs > best_cos) {
          best_cos = cs;
          if (id) *id = e.id;
        }
      }
    }
    if (best_cos < 0) return -1;
    return std::acos(std::min(1.0, best_cos));
  }

 private:
  struct Entry {
    std::size_t id;
    VectorXd u;
  };

  static long ipow3(Index n) {
    long r = 1;
    for (Index i = 0; i < n; ++i) r *= 3;
    return r;
  }
  long coord(double x) const { return static_cast<long>(std::floor(x / cell_)); }
  static std::uint64_t hash(const std::vector<long>& c) {
    std::uint64_t h = 1469598103934665603ull;
    for (long x : c) {
      h ^= static_cast<std::uint64_t>(x) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
      h *= 1099511628211ull;
    }
    return h;
  }
  std::uint64_t key(const VectorXd& u) const {
    std::vector<long> c(static_cast<std::size_t>(d_));
    for (Index i = 0; i < d_; ++i) c[static_cast<std::size_t>(i)] = coord(u(i));
    return hash(c);
  }

  Index d_;
  double cell_;
  std::unordered_map<std::uint64_t, std::vector<Entry>> table_;
};

/// Accumulates net elements and answers "is some element within angle eps".
class NetBuilder {
 public:
  NetBuilder(Index d, Index k, double eps, std::size_t cap)
      : k_(k), eps_(eps), cos_sq_eps_(std::pow(std::cos(std::min(eps, std::numbers::pi / 2)), 2)), cap_(cap),
        lines_(d, 2 * std::sin(std::min(eps, std::numbers::pi / 2) / 2)), stacked_(d, k) {}

  /// Inserts `s` when it is at angle >= eps from every element.
  bool offer(const Subspace& s) {
    if (covered(s)) return false;
    if (elements.size() >= cap_)
      throw ResourceError("epsilon-net exceeds the size cap of " + std::to_string(cap_) +
                          " elements (raise ESFLATS_MAX_NET_SIZE or eps)");
    add(s);
    return true;
  }

  bool covered(const Subspace& s) const {
    if (eps_ > std::numbers::pi / 2) return !elements.empty();
    if (k_ == 1) {
      const double a = lines_.nearest_angle(s.basis().col(0));
      return a >= 0 && a < eps_;
    }
    return !elements.empty() && stacked_.best(s.basis(), cos_sq_eps_).second > cos_sq_eps_;
  }

  /// Exact least largest-angle to the net.
  double gap(const Subspace& s) const {
    if (k_ == 1) {
      const double a = lines_.nearest_angle(s.basis().col(0));
      if (a >= 0 && a < eps_) return a;
    }
    if (elements.empty()) return std::numbers::pi / 2;
    return max_angle(elements[stacked_.best(s.basis()).first], s);
  }

  std::vector<Subspace> elements;

 private:
  void add(const Subspace& s) {
    if (k_ == 1) lines_.insert(elements.size(), s.basis().col(0));
    stacked_.push(s.basis());
    elements.push_back(s);
  }

  Index k_;
  double eps_;
  double cos_sq_eps_;
  std::size_t cap_;
  LineIndex lines_;
  StackedBases stacked_;
};

void coordinate_subspaces(Index d, Index k, Index start, std::vector<Index>& pick, std::vector<Subspace>& out) {
  if (static_cast<Index>(pick.size()) == k) {
    MatrixXd b = MatrixXd::Zero(d, k);
    for (Index j = 0; j < k; ++j) b(pick[static_cast<std::size_t>(j)], j) = 1;
    out.emplace_back(b);
    return;
  }
  for (Index i = start; i < d; ++i) {
    pick.push_back(i);
    coordinate_subspaces(d, k, i + 1, pick, out);
    pick.pop_back();
  }
}

}  // namespace

Subspace::Subspace(MatrixXd basis) : basis_(std::move(basis)) {
  if (basis_.rows() < 1 || basis_.cols() < 1 || basis_.cols() > basis_.rows())
    throw InputError("subspace basis must be d x k with 1 <= k <= d");
  if (!basis_.allFinite()) throw InputError("subspace basis has non-finite entries");
  const MatrixXd gram = basis_.transpose() * basis_;
  const double dev = (gram - MatrixXd::Identity(basis_.cols(), basis_.cols())).cwiseAbs().maxCoeff();
  if (dev > 1e-12) throw InputError("subspace basis is not orthonormal (Gram deviation " + std::to_string(dev) + ")");
}

Subspace Subspace::spanned_by(const MatrixXd& columns) { return Subspace(orthonormalize(columns)); }

std::vector<double> principal_angles(const Subspace& u, const Subspace& v) {
  require_same_shape(u, v);
  const Index k = u.dim();
  Eigen::JacobiSVD<MatrixXd> cs(u.basis().transpose() * v.basis());
  const VectorXd cosv = cs.singularValues();  // descending
  const MatrixXd resid = v.basis() - u.basis() * (u.basis().transpose() * v.basis());
  Eigen::JacobiSVD<MatrixXd> sn(resid);
  VectorXd sinv = sn.singularValues();  // descending, length k
  std::vector<double> sines(sinv.data(), sinv.data() + sinv.size());
  std::sort(sines.begin(), sines.end());
  std::vector<double> out(static_cast<std::size_t>(k));
  for (Index i = 0; i < k; ++i) {
    const double c = std::clamp(cosv(i), 0.0, 1.0);
    const double s = std::clamp(sines[static_cast<std::size_t>(i)], 0.0, 1.0);
    // acos is ill-conditioned near 0 and asin near pi/2
    out[static_cast<std::size_t>(i)] = c * c < 0.5 ? std::acos(c) : std::asin(s);
  }
  std::sort(out.begin(), out.end());
  return out;
}

double gr_distance(const Subspace& u, const Subspace& v) {
  require_same_shape(u, v);
  const MatrixXd resid = v.basis() - u.basis() * (u.basis().transpose() * v.basis());
  Eigen::JacobiSVD<MatrixXd> sn(resid);
  return std::clamp(sn.singularValues()(0), 0.0, 1.0);
}

double max_angle(const Subspace& u, const Subspace& v) { return principal_angles(u, v).back(); }

Subspace random_subspace(Index d, Index k, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  for (;;) {
    MatrixXd m(d, k);
    for (Index j = 0; j < k; ++j)
      for (Index i = 0; i < d; ++i) m(i, j) = g(rng);
    Eigen::ColPivHouseholderQR<MatrixXd> piv(m);
    if (piv.rank() < k) continue;
    Eigen::HouseholderQR<MatrixXd> qr(m);
    return Subspace(qr.householderQ() * MatrixXd::Identity(d, k));
  }
}

std::size_t default_max_net_size() {
  if (const char* env = std::getenv("ESFLATS_MAX_NET_SIZE")) {
    try {
      const long long v = std::stoll(env);
      if (v > 0) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
    }
    throw InputError(std::string("ESFLATS_MAX_NET_SIZE is not a positive integer: ") + env);
  }
  return 200000;
}

EpsNet build_eps_net(Index d, Index k, double eps, std::uint64_t seed, const NetOptions& opts) {
  if (!(k > 0 && k < d)) throw InputError("net requires 0 < k < d");
  if (!(eps > 0) || !std::isfinite(eps)) throw InputError("eps must be positive");
  const std::size_t cap = opts.max_size ? opts.max_size : default_max_net_size();

  if (2 * k > d) {
    // U -> U^perp preserves principal angles between equal-dimensional subspaces
    // and maps the uniform measure to the uniform measure.
    EpsNet net = build_eps_net(d, d - k, eps, seed, opts);
    for (auto& el : net.elements) {
      Eigen::HouseholderQR<MatrixXd> qr(el.basis());
      const MatrixXd q = qr.householderQ() * MatrixXd::Identity(d, d);
      el = Subspace(q.rightCols(d - el.dim()));
    }
    net.k = k;
    return net;
  }

  std::mt19937_64 rng(seed);
  NetBuilder nb(d, k, eps, cap);
  std::vector<Index> pick;
  std::vector<Subspace> coords;
  coordinate_subspaces(d, k, 0, pick, coords);
  for (const auto& c : coords) nb.offer(c);

  std::size_t stall = 0;
  while (stall < opts.stall_limit) {
    if (nb.offer(random_subspace(d, k, rng))) stall = 0;
    else ++stall;
  }

  EpsNet net;
  net.d = d;
  net.k = k;
  net.eps = eps;
  net.seed = seed;
  // Audit with fresh samples; any uncovered sample joins the net and the audit restarts.
  constexpr int kMaxRounds = 50;
  for (int round = 0;; ++round) {
    if (round == kMaxRounds) throw ResourceError("epsilon-net audit did not settle");
    double worst = 0;
    bool repaired = false;
    for (std::size_t i = 0; i < opts.audit_samples; ++i) {
      const Subspace s = random_subspace(d, k, rng);
      const double g = nb.gap(s);
      if (g >= eps) {
        nb.offer(s);
        repaired = true;
      }
      worst = std::max(worst, g);
    }
    if (!repaired) {
      net.audit = {opts.audit_samples, worst};
      break;
    }
  }
  net.elements = std::move(nb.elements);
  return net;
}

NetHit nearest_in_net(const EpsNet& net, const Subspace& v) {
  if (net.elements.empty()) throw InputError("empty net");
  require_same_shape(net.elements.front(), v);
  NetHit best{0, 0};
  double best_cos = -1;
  for (std::size_t i = 0; i < net.elements.size(); ++i) {
    const MatrixXd& u = net.elements[i].basis();
    const double c = u.cols() == 1 ? std::abs(u.col(0).dot(v.basis().col(0)))
                                   : std::sqrt(min_cos_sq(u.transpose() * v.basis()));
    if (c > best_cos) {
      best_cos = c;
      best.index = i;
    }
  }
  best.angle = max_angle(net.elements[best.index], v);
  return best;
}

double max_abs_inner(const Subspace& u, std::span<const VectorXd> vs) {
  if (vs.empty()) return 0;
  MatrixXd cols(u.ambient_dim(), static_cast<Index>(vs.size()));
  for (std::size_t j = 0; j < vs.size(); ++j) {
    if (vs[j].size() != u.ambient_dim()) throw InputError("vector dimension mismatch");
    cols.col(static_cast<Index>(j)) = vs[j];
  }
  Eigen::ColPivHouseholderQR<MatrixXd> piv(cols);
  const Index r = piv.rank();
  if (r == 0) return 0;
  const MatrixXd q = (piv.householderQ() * MatrixXd::Identity(cols.rows(), r));
  Eigen::JacobiSVD<MatrixXd> svd(u.basis().transpose() * q);
  return svd.singularValues()(0);
}

OrthogonalPick near_orthogonal_pick(const EpsNet& net, std::span<const VectorXd> span) {
  if (net.elements.empty()) throw InputError("empty net");
  const Index d = net.d;
  const Index k = net.k;
  MatrixXd proj = MatrixXd::Identity(d, d);
  if (!span.empty()) {
    MatrixXd cols(d, static_cast<Index>(span.size()));
    for (std::size_t j = 0; j < span.size(); ++j) {
      if (span[j].size() != d) throw InputError("vector dimension mismatch");
      cols.col(static_cast<Index>(j)) = span[j];
    }
    Eigen::ColPivHouseholderQR<MatrixXd> piv(cols);
    const Index s = piv.rank();
    if (s > d - k)
      throw InputError("span dimension " + std::to_string(s) + " exceeds d - k = " + std::to_string(d - k));
    if (s > 0) {
      const MatrixXd q = piv.householderQ() * MatrixXd::Identity(d, s);
      proj -= q * q.transpose();
    }
  }
  Eigen::JacobiSVD<MatrixXd> svd(proj, Eigen::ComputeFullU);
  Subspace u0 = Subspace::spanned_by(svd.matrixU().leftCols(k));
  const NetHit hit = nearest_in_net(net, u0);
  OrthogonalPick out{hit.index, std::move(u0), hit.angle, 0};
  out.max_inner = max_abs_inner(net.elements[hit.index], span);
  return out;
}

}  // namespace esflats::gr
