#include "esflats/polytope.hpp"

#include <algorithm>

#include "esflats/error.hpp"

namespace esflats::geom {

bool lex_less(const RVec& a, const RVec& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

void sort_unique(std::vector<RVec>& pts) {
  std::sort(pts.begin(), pts.end(), lex_less);
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
}

std::vector<RVec> vertex_enumeration(const std::vector<Halfspace>& halfspaces, std::size_t dim) {
  for (const auto& h : halfspaces) {
    if (h.normal.size() != dim) throw InputError("halfspace dimension mismatch");
  }
  std::vector<RVec> out;
  const std::size_t m = halfspaces.size();
  if (m < dim || dim == 0) return out;

  std::vector<std::size_t> idx(dim);
  for (std::size_t i = 0; i < dim; ++i) idx[i] = i;
  while (true) {
    RMat a;
    RVec b;
    for (auto i : idx) {
      a.push_back(halfspaces[i].normal);
      b.push_back(halfspaces[i].bound);
    }
    if (auto x = solve_unique(a, b)) {
      const bool inside = std::all_of(halfspaces.begin(), halfspaces.end(), [&](const Halfspace& h) {
        return dot(h.normal, *x) <= h.bound;
      });
      if (inside) out.push_back(std::move(*x));
    }
    // next combination
    std::size_t pos = dim;
    while (pos > 0 && idx[pos - 1] == m - dim + pos - 1) --pos;
    if (pos == 0) break;
    ++idx[pos - 1];
    for (std::size_t j = pos; j < dim; ++j) idx[j] = idx[j - 1] + 1;
  }
  sort_unique(out);
  return out;
}

}  // namespace esflats::geom
