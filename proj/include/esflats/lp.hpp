#pragma once

// Exact rational linear programming: dense two-phase simplex with Bland's rule.
//
// Strict inequalities are handled with one auxiliary gap variable g, 0 <= g <= 1,
// added to every strict row; the system is feasible iff the maximal gap is positive.

#include <cstddef>
#include <span>
#include <vector>

#include "esflats/rational.hpp"

namespace esflats::lp {

enum class Rel { Lt, Le, Eq, Ge, Gt };

/// coeffs . x  rel  rhs
struct Constraint {
  RVec coeffs;
  Rel rel;
  Rat rhs;
};

class LPStatus {
 public:
  static LPStatus feasible(RVec witness) { return LPStatus(true, std::move(witness)); }
  static LPStatus infeasible() { return LPStatus(false, {}); }

  bool is_feasible() const { return feasible_; }
  /// Only meaningful when feasible.
  const RVec& witness() const { return witness_; }

 private:
  LPStatus(bool f, RVec w) : feasible_(f), witness_(std::move(w)) {}
  bool feasible_;
  RVec witness_;
};

enum class OptStatus { Optimal, Infeasible, Unbounded };

struct OptResult {
  OptStatus status;
  RVec x;     // optimal point when Optimal
  Rat value;  // objective value when Optimal
};

/// Decides feasibility of the system over R^dim exactly. An empty system is
/// feasible at the origin.
LPStatus lp_feasible(std::span<const Constraint> constraints, std::size_t dim);

/// maximize objective . x subject to non-strict constraints (Lt/Gt are rejected).
OptResult lp_maximize(const RVec& objective, std::span<const Constraint> constraints, std::size_t dim);

/// True iff x satisfies the constraint exactly.
bool satisfies(const Constraint& c, const RVec& x);

/// Pivot cap per solve; read once from ESFLATS_MAX_LP_PIVOTS (default 200000).
std::size_t max_pivots();

}  // namespace esflats::lp
