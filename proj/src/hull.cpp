#include <gmpxx.h>

#include "kak/admissible.hpp"

namespace kak {

namespace {

mpq_class toMpq(const Rational& r) {
  mpq_class q(mpz_class(std::to_string(r.numerator())), mpz_class(std::to_string(r.denominator())));
  q.canonicalize();
  return q;
}

}  // namespace

// Feasibility of lambda >= 0, sum lambda = 1, sum lambda_i p_i = 0.
// Phase I with one artificial per row; Bland's rule avoids cycling.
bool zeroInHull(const std::vector<ExponentVec>& points) {
  if (points.empty()) throw std::domain_error("zeroInHull: empty spectrum");
  const std::size_t d = points.front().size();
  for (const auto& p : points)
    if (p.size() != d) throw DimensionError("zeroInHull: points differ in dimension");
  const std::size_t n = points.size(), m = d + 1, cols = n + m;

  std::vector<std::vector<mpq_class>> T(m, std::vector<mpq_class>(cols + 1, 0));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < n; ++j) T[i][j] = toMpq(points[j][i]);
  for (std::size_t j = 0; j < n; ++j) T[d][j] = 1;
  T[d][cols] = 1;
  // rows with negative rhs would be negated; here every rhs is 0 or 1
  for (std::size_t i = 0; i < m; ++i) T[i][n + i] = 1;

  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) basis[i] = n + i;

  // reduced costs of the phase-I objective sum of artificials
  std::vector<mpq_class> cost(cols + 1, 0);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < m; ++i) cost[j] -= T[i][j];
  for (std::size_t i = 0; i < m; ++i) cost[cols] -= T[i][cols];

  for (;;) {
    std::size_t enter = cols;
    for (std::size_t j = 0; j < cols; ++j)
      if (cost[j] < 0) {
        enter = j;
        break;
      }
    if (enter == cols) break;
    std::size_t leave = m;
    mpq_class best;
    for (std::size_t i = 0; i < m; ++i) {
      if (T[i][enter] <= 0) continue;
      mpq_class ratio = T[i][cols] / T[i][enter];
      if (leave == m || ratio < best || (ratio == best && basis[i] < basis[leave])) {
        leave = i;
        best = ratio;
      }
    }
    if (leave == m) break;  // unbounded cannot happen in phase I
    const mpq_class piv = T[leave][enter];
    for (auto& v : T[leave]) v /= piv;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == leave || T[i][enter] == 0) continue;
      const mpq_class f = T[i][enter];
      for (std::size_t j = 0; j <= cols; ++j) T[i][j] -= f * T[leave][j];
    }
    if (cost[enter] != 0) {
      const mpq_class f = cost[enter];
      for (std::size_t j = 0; j <= cols; ++j) cost[j] -= f * T[leave][j];
    }
    basis[leave] = enter;
  }
  // optimum of the phase-I objective is -cost[cols]
  return cost[cols] == 0;
}

}  // namespace kak
