#include "esflats/rational.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "esflats/error.hpp"

namespace esflats {

Rat parse_rat(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw InputError("empty rational literal");
  const auto dot_pos = s.find('.');
  const bool has_exp = s.find_first_of("eE") != std::string::npos;
  if (has_exp) {
    // Scientific notation only appears for floats; route through double.
    try {
      return rat_from_double(std::stod(s));
    } catch (const std::exception&) {
      throw InputError("bad rational literal: " + s);
    }
  }
  if (dot_pos != std::string::npos) {
    std::string digits = s.substr(0, dot_pos) + s.substr(dot_pos + 1);
    const std::size_t frac_len = s.size() - dot_pos - 1;
    Rat q;
    try {
      q = Rat(mpz_class(digits.empty() || digits == "-" ? "0" : digits, 10));
    } catch (const std::exception&) {
      throw InputError("bad decimal literal: " + s);
    }
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, frac_len);
    q /= den;
    q.canonicalize();
    return q;
  }
  Rat q;
  if (q.set_str(s, 10) != 0) throw InputError("bad rational literal: " + s);
  if (q.get_den() == 0) throw InputError("zero denominator: " + s);
  q.canonicalize();
  return q;
}

std::string format_rat(const Rat& q) {
  Rat c(q);
  c.canonicalize();
  return c.get_str();
}

Rat rat_from_double(double v) {
  if (!std::isfinite(v)) throw InputError("non-finite value cannot be made rational");
  Rat q(v);
  q.canonicalize();
  return q;
}

double to_double(const Rat& q) { return q.get_d(); }

RVec zeros(std::size_t n) { return RVec(n, Rat(0)); }

RVec unit_vector(std::size_t n, std::size_t i) {
  RVec e = zeros(n);
  e.at(i) = 1;
  return e;
}

RVec add(const RVec& a, const RVec& b) {
  RVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

RVec sub(const RVec& a, const RVec& b) {
  RVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

RVec scale(const Rat& s, const RVec& a) {
  RVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = s * a[i];
  return r;
}

RVec axpy(const RVec& a, const Rat& s, const RVec& b) {
  RVec r(a);
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += s * b[i];
  return r;
}

Rat dot(const RVec& a, const RVec& b) {
  Rat s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Rat norm_sq(const RVec& a) { return dot(a, a); }

Rat norm1(const RVec& a) {
  Rat s = 0;
  for (const auto& x : a) s += abs(x);
  return s;
}

bool is_zero(const RVec& a) {
  return std::all_of(a.begin(), a.end(), [](const Rat& x) { return sgn(x) == 0; });
}

RVec centroid(std::span<const RVec> pts) {
  if (pts.empty()) throw InputError("centroid of empty set");
  RVec c = zeros(pts.front().size());
  for (const auto& p : pts) c = add(c, p);
  return scale(Rat(1, static_cast<unsigned long>(pts.size())), c);
}

std::vector<double> to_doubles(const RVec& v) {
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i].get_d();
  return out;
}

RVec from_doubles(std::span<const double> v) {
  RVec out;
  out.reserve(v.size());
  for (double x : v) out.push_back(rat_from_double(x));
  return out;
}

std::vector<std::size_t> rref(RMat& m) {
  std::vector<std::size_t> pivots;
  if (m.empty()) return pivots;
  const std::size_t rows = m.size();
  const std::size_t cols = m.front().size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && sgn(m[p][c]) == 0) ++p;
    if (p == rows) continue;
    std::swap(m[p], m[r]);
    const Rat inv = 1 / m[r][c];
    for (std::size_t j = c; j < cols; ++j) m[r][j] *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || sgn(m[i][c]) == 0) continue;
      const Rat f = m[i][c];
      for (std::size_t j = c; j < cols; ++j) {
        if (sgn(m[r][j]) != 0) m[i][j] -= f * m[r][j];
      }
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

std::size_t rank(RMat rows) { return rref(rows).size(); }

Rat determinant(RMat m) {
  const std::size_t n = m.size();
  Rat det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && sgn(m[p][c]) == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      std::swap(m[p], m[c]);
      det = -det;
    }
    det *= m[c][c];
    for (std::size_t i = c + 1; i < n; ++i) {
      if (sgn(m[i][c]) == 0) continue;
      const Rat f = m[i][c] / m[c][c];
      for (std::size_t j = c; j < n; ++j) m[i][j] -= f * m[c][j];
    }
  }
  return det;
}

RMat nullspace(const RMat& a, std::size_t cols) {
  RMat m = a;
  const auto pivots = rref(m);
  std::vector<bool> is_pivot(cols, false);
  for (auto p : pivots) is_pivot[p] = true;
  RMat basis;
  for (std::size_t f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    RVec v = zeros(cols);
    v[f] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m[r][f];
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<RVec> solve_any(const RMat& a, const RVec& b, std::size_t cols) {
  RMat m;
  m.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    RVec row = a[i];
    row.push_back(b[i]);
    m.push_back(std::move(row));
  }
  const auto pivots = rref(m);
  if (!pivots.empty() && pivots.back() == cols) return std::nullopt;
  RVec x = zeros(cols);
  for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = m[r][cols];
  return x;
}

std::optional<RVec> solve_unique(const RMat& a, const RVec& b) {
  const std::size_t n = a.size();
  RMat m;
  m.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    RVec row = a[i];
    row.push_back(b[i]);
    m.push_back(std::move(row));
  }
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && sgn(m[p][c]) == 0) ++p;
    if (p == n) return std::nullopt;
    std::swap(m[p], m[c]);
    for (std::size_t i = c + 1; i < n; ++i) {
      if (sgn(m[i][c]) == 0) continue;
      const Rat f = m[i][c] / m[c][c];
      for (std::size_t j = c; j <= n; ++j) m[i][j] -= f * m[c][j];
    }
  }
  RVec x(n);
  for (std::size_t i = n; i-- > 0;) {
    Rat s = m[i][n];
    for (std::size_t j = i + 1; j < n; ++j) s -= m[i][j] * x[j];
    x[i] = s / m[i][i];
  }
  return x;
}

int affine_dimension(std::span<const RVec> pts) {
  if (pts.empty()) return -1;
  RMat diffs;
  for (std::size_t i = 1; i < pts.size(); ++i) diffs.push_back(sub(pts[i], pts[0]));
  if (diffs.empty()) return 0;
  return static_cast<int>(rank(std::move(diffs)));
}

bool collinear(const RVec& a, const RVec& b, const RVec& c) {
  return rank(RMat{sub(b, a), sub(c, a)}) < 2;
}

RMat gram_schmidt(const RMat& vs) {
  RMat out;
  for (const auto& v : vs) {
    RVec w = v;
    for (const auto& u : out) w = axpy(w, -dot(v, u) / norm_sq(u), u);
    if (!is_zero(w)) out.push_back(std::move(w));
  }
  return out;
}

}  // namespace esflats
