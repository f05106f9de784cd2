#include "esflats/instances.hpp"

#include "esflats/convexpos.hpp"
#include "esflats/error.hpp"
#include "esflats/random.hpp"

namespace esflats::instances {

namespace {

constexpr int kAttempts = 100;

bool collinear_free(const std::vector<RVec>& pts, const RVec& p) {
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (pts[i] == p) return false;
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      if (collinear(pts[i], pts[j], p)) return false;
  }
  return true;
}

}  // namespace

std::vector<RVec> random_points(std::size_t d, std::size_t n, std::uint64_t seed) {
  if (d < 2) throw InputError("random_points needs d >= 2");
  RatSampler rs(seed, 100);
  std::vector<RVec> pts;
  while (pts.size() < n) {
    RVec p = rs.vector(d, -10, 10);
    if (collinear_free(pts, p)) pts.push_back(std::move(p));
  }
  return pts;
}

std::vector<geom::Flat> random_flats(std::size_t d, std::size_t k, std::size_t n, std::uint64_t seed) {
  if (k + 1 >= d) throw InputError("random_flats needs k < d - 1");
  RatSampler rs(seed, 100);
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    std::vector<geom::Flat> flats;
    while (flats.size() < n) {
      RMat dirs;
      for (std::size_t j = 0; j < k; ++j) {
        RVec v(d);
        for (auto& x : v) x = Rat(rs.integer(-5, 5));
        dirs.push_back(std::move(v));
      }
      if (rank(dirs) != k) continue;
      flats.emplace_back(rs.vector(d, -10, 10), std::move(dirs));
    }
    if (n < d - k + 1 || convexpos::general_position_flats(flats, {seed, 32}).ok) return flats;
  }
  throw ResourceError("could not sample flats in general position");
}

std::vector<geom::Hyperplane> random_hyperplanes(std::size_t d, std::size_t n, std::uint64_t seed) {
  if (d < 2) throw InputError("random_hyperplanes needs d >= 2");
  RatSampler rs(seed, 100);
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    std::vector<geom::Hyperplane> hps;
    while (hps.size() < n) {
      RVec normal(d);
      for (auto& x : normal) x = Rat(rs.integer(-9, 9));
      if (is_zero(normal)) continue;
      hps.emplace_back(std::move(normal), rs.uniform(-5, 5));
    }
    if (n < d || convexpos::general_position_hyperplanes(hps).ok) return hps;
  }
  throw ResourceError("could not sample hyperplanes in general position");
}

}  // namespace esflats::instances
