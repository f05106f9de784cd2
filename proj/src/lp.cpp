#include "esflats/lp.hpp"

#include <cstdlib>
#include <optional>
#include <string>

#include "esflats/error.hpp"

namespace esflats::lp {

namespace {

// Dense tableau for: maximize c.z subject to A z = b, z >= 0, b >= 0.
class Tableau {
 public:
  Tableau(RMat rows, std::vector<std::size_t> basis, std::size_t cols)
      : rows_(std::move(rows)), basis_(std::move(basis)), cols_(cols), allowed_(cols, true) {}

  void set_objective(const RVec& c) {
    cost_ = c;
    obj_ = zeros(cols_ + 1);
    for (std::size_t j = 0; j < cols_; ++j) obj_[j] = -c[j];
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      const Rat& cb = c[basis_[i]];
      if (sgn(cb) == 0) continue;
      for (std::size_t j = 0; j <= cols_; ++j) {
        if (sgn(rows_[i][j]) != 0) obj_[j] += cb * rows_[i][j];
      }
    }
  }

  /// Runs Bland's rule to optimality; false when unbounded.
  bool optimize() {
    const std::size_t cap = max_pivots();
    for (std::size_t iter = 0;; ++iter) {
      if (iter >= cap) throw ResourceError("LP pivot cap exceeded (" + std::to_string(cap) + ")");
      std::size_t enter = cols_;
      for (std::size_t j = 0; j < cols_; ++j) {
        if (allowed_[j] && sgn(obj_[j]) < 0) {
          enter = j;
          break;
        }
      }
      if (enter == cols_) return true;
      std::size_t leave = rows_.size();
      Rat best_ratio;
      for (std::size_t i = 0; i < rows_.size(); ++i) {
        if (sgn(rows_[i][enter]) <= 0) continue;
        Rat ratio = rows_[i][cols_] / rows_[i][enter];
        if (leave == rows_.size() || ratio < best_ratio ||
            (ratio == best_ratio && basis_[i] < basis_[leave])) {
          leave = i;
          best_ratio = std::move(ratio);
        }
      }
      if (leave == rows_.size()) return false;
      pivot(leave, enter);
    }
  }

  void pivot(std::size_t r, std::size_t c) {
    RVec& pr = rows_[r];
    const Rat inv = 1 / pr[c];
    for (std::size_t j = 0; j <= cols_; ++j) {
      if (sgn(pr[j]) != 0) pr[j] *= inv;
    }
    auto eliminate = [&](RVec& row) {
      if (sgn(row[c]) == 0) return;
      const Rat f = row[c];
      for (std::size_t j = 0; j <= cols_; ++j) {
        if (sgn(pr[j]) != 0) row[j] -= f * pr[j];
      }
    };
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      if (i != r) eliminate(rows_[i]);
    }
    eliminate(obj_);
    basis_[r] = c;
  }

  Rat value() const { return obj_[cols_]; }
  std::size_t cols() const { return cols_; }

  RVec solution() const {
    RVec z = zeros(cols_);
    for (std::size_t i = 0; i < rows_.size(); ++i) z[basis_[i]] = rows_[i][cols_];
    return z;
  }

  /// After phase 1: pivot artificial columns [first, cols) out of the basis and forbid them.
  void retire_artificials(std::size_t first) {
    for (std::size_t i = 0; i < rows_.size();) {
      if (basis_[i] < first) {
        ++i;
        continue;
      }
      std::size_t col = first;
      for (std::size_t j = 0; j < first; ++j) {
        if (sgn(rows_[i][j]) != 0) {
          col = j;
          break;
        }
      }
      if (col == first) {
        rows_.erase(rows_.begin() + static_cast<std::ptrdiff_t>(i));
        basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(i));
        continue;
      }
      pivot(i, col);
      ++i;
    }
    for (std::size_t j = first; j < cols_; ++j) allowed_[j] = false;
  }

 private:
  RMat rows_;
  std::vector<std::size_t> basis_;
  std::size_t cols_;
  std::vector<bool> allowed_;
  RVec cost_;
  RVec obj_;
};

struct Model {
  std::size_t dim = 0;
  std::size_t gap_col = 0;  // valid when has_gap
  bool has_gap = false;
  std::size_t structural = 0;  // columns before artificials
  std::optional<Tableau> tab;
  std::size_t artificial_first = 0;
  bool phase1_needed = false;
};

// Builds the phase-1 tableau. Columns: x+ (dim), x- (dim), [gap], slacks, artificials.
Model build(std::span<const Constraint> cons, std::size_t dim, bool with_gap) {
  Model md;
  md.dim = dim;
  md.has_gap = with_gap;
  std::size_t col = 2 * dim;
  if (with_gap) md.gap_col = col++;

  struct Row {
    RVec coeffs;  // over x (dim)
    bool strict;
    bool equality;
    Rat rhs;
  };
  std::vector<Row> rows;
  for (const auto& c : cons) {
    if (c.coeffs.size() != dim) throw InputError("LP constraint dimension mismatch");
    switch (c.rel) {
      case Rel::Le: rows.push_back({c.coeffs, false, false, c.rhs}); break;
      case Rel::Lt: rows.push_back({c.coeffs, true, false, c.rhs}); break;
      case Rel::Ge: rows.push_back({scale(-1, c.coeffs), false, false, -c.rhs}); break;
      case Rel::Gt: rows.push_back({scale(-1, c.coeffs), true, false, -c.rhs}); break;
      case Rel::Eq: rows.push_back({c.coeffs, false, true, c.rhs}); break;
    }
  }
  std::size_t slack_count = 0;
  for (const auto& r : rows) slack_count += r.equality ? 0 : 1;
  if (with_gap) ++slack_count;  // g <= 1
  const std::size_t slack_first = col;
  col += slack_count;
  md.structural = col;

  const std::size_t m = rows.size() + (with_gap ? 1 : 0);
  // Worst case every row needs an artificial.
  const std::size_t total = col + m;
  RMat t(m, zeros(total + 1));
  std::vector<std::size_t> basis(m);
  std::vector<bool> needs_art(m, false);
  std::size_t slack = slack_first;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Row& r = rows[i];
    for (std::size_t j = 0; j < dim; ++j) {
      t[i][j] = r.coeffs[j];
      t[i][dim + j] = -r.coeffs[j];
    }
    if (r.strict) t[i][md.gap_col] = 1;
    std::optional<std::size_t> s;
    if (!r.equality) {
      s = slack++;
      t[i][*s] = 1;
    }
    t[i][total] = r.rhs;
    if (sgn(r.rhs) < 0) {
      for (auto& x : t[i]) x = -x;
    }
    if (s && sgn(t[i][*s]) > 0) {
      basis[i] = *s;
    } else {
      needs_art[i] = true;
    }
  }
  if (with_gap) {
    const std::size_t i = rows.size();
    t[i][md.gap_col] = 1;
    t[i][slack] = 1;
    t[i][total] = 1;
    basis[i] = slack++;
  }
  std::size_t art = col;
  for (std::size_t i = 0; i < m; ++i) {
    if (!needs_art[i]) continue;
    t[i][art] = 1;
    basis[i] = art++;
    md.phase1_needed = true;
  }
  // Drop unused artificial columns.
  const std::size_t used = art;
  for (auto& row : t) {
    row[used] = row[total];
    row.resize(used + 1);
  }
  md.artificial_first = col;
  md.tab.emplace(std::move(t), std::move(basis), used);
  return md;
}

// Phase 1; false when infeasible. Leaves a feasible basis without artificials.
bool phase_one(Model& md) {
  Tableau& tab = *md.tab;
  const std::size_t cols = md.tab->cols();
  if (md.phase1_needed) {
    RVec c = zeros(cols);
    for (std::size_t j = md.artificial_first; j < cols; ++j) c[j] = -1;
    tab.set_objective(c);
    tab.optimize();
    if (sgn(tab.value()) < 0) return false;
  }
  tab.retire_artificials(md.artificial_first);
  return true;
}

RVec extract_x(const Model& md, const RVec& z) {
  RVec x(md.dim);
  for (std::size_t j = 0; j < md.dim; ++j) x[j] = z[j] - z[md.dim + j];
  return x;
}

}  // namespace

std::size_t max_pivots() {
  static const std::size_t cap = [] {
    if (const char* env = std::getenv("ESFLATS_MAX_LP_PIVOTS")) {
      try {
        const long long v = std::stoll(env);
        if (v > 0) return static_cast<std::size_t>(v);
      } catch (const std::exception&) {
      }
    }
    return std::size_t{200000};
  }();
  return cap;
}

bool satisfies(const Constraint& c, const RVec& x) {
  const int s = sgn(dot(c.coeffs, x) - c.rhs);
  switch (c.rel) {
    case Rel::Lt: return s < 0;
    case Rel::Le: return s <= 0;
    case Rel::Eq: return s == 0;
    case Rel::Ge: return s >= 0;
    case Rel::Gt: return s > 0;
  }
  return false;
}

LPStatus lp_feasible(std::span<const Constraint> constraints, std::size_t dim) {
  if (constraints.empty()) return LPStatus::feasible(zeros(dim));
  bool strict = false;
  for (const auto& c : constraints) strict = strict || c.rel == Rel::Lt || c.rel == Rel::Gt;
  Model md = build(constraints, dim, strict);
  if (!phase_one(md)) return LPStatus::infeasible();
  if (strict) {
    const std::size_t cols = md.tab->cols();
    RVec c = zeros(cols);
    c[md.gap_col] = 1;
    md.tab->set_objective(c);
    md.tab->optimize();  // bounded by g <= 1
    if (sgn(md.tab->value()) <= 0) return LPStatus::infeasible();
  }
  RVec x = extract_x(md, md.tab->solution());
  for (const auto& c : constraints) {
    if (!satisfies(c, x)) throw ConstructionError("LP witness failed re-substitution");
  }
  return LPStatus::feasible(std::move(x));
}

OptResult lp_maximize(const RVec& objective, std::span<const Constraint> constraints, std::size_t dim) {
  if (objective.size() != dim) throw InputError("LP objective dimension mismatch");
  for (const auto& c : constraints) {
    if (c.rel == Rel::Lt || c.rel == Rel::Gt) throw InputError("lp_maximize takes non-strict constraints only");
  }
  Model md = build(constraints, dim, false);
  if (!phase_one(md)) return {OptStatus::Infeasible, {}, 0};
  const std::size_t cols = md.tab->cols();
  RVec c = zeros(cols);
  for (std::size_t j = 0; j < dim; ++j) {
    c[j] = objective[j];
    c[dim + j] = -objective[j];
  }
  md.tab->set_objective(c);
  if (!md.tab->optimize()) return {OptStatus::Unbounded, {}, 0};
  RVec x = extract_x(md, md.tab->solution());
  Rat value = dot(objective, x);
  return {OptStatus::Optimal, std::move(x), std::move(value)};
}

}  // namespace esflats::lp
