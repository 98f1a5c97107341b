#include "cibeam/qp_simplex.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>

namespace {

// Gosper's hack: next larger bitmask with the same popcount.
std::uint32_t next_same_popcount(std::uint32_t m) {
  const std::uint32_t c = m & (~m + 1u);
  const std::uint32_t r = m + c;
  return (((r ^ m) >> 2) / c) | r;
}

}  // namespace

namespace cibeam {

SimplexQp::SimplexQp(const RealMatrix& v) : chol_(v) {}

RealVector SimplexQp::apply_form(const RealVector& x) const {
  return chol_.solve(std::span<const double>(x));
}

double SimplexQp::objective(const RealVector& u) const {
  return dot(u, apply_form(u));
}

RealVector project_simplex(RealVector v) {
  const std::size_t n = v.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (v[a] != v[b]) return v[a] > v[b];
    return a < b;
  });
  double cum = 0.0;
  double tau = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    cum += v[order[j]];
    const double cand = (cum - 1.0) / static_cast<double>(j + 1);
    if (v[order[j]] - cand > 0.0) tau = cand;
  }
  for (auto& e : v) e = std::max(e - tau, 0.0);
  return v;
}

SimplexSolution solve_active_set_enum(const SimplexQp& qp) {
  const std::size_t n = qp.dim();
  if (n > kEnumDimCap) {
    throw TooLarge("support enumeration capped at dim " + std::to_string(kEnumDimCap) +
                   " (got " + std::to_string(n) + ")");
  }

  // Explicit inverse form A = V^{-1}, column by column through the factorization.
  RealMatrix a(n, n);
  RealVector e(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    e[j] = 1.0;
    RealVector col = qp.apply_form(e);
    e[j] = 0.0;
    for (std::size_t i = 0; i < n; ++i) a(i, j) = col[i];
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double avg = 0.5 * (a(i, j) + a(j, i));
      a(i, j) = avg;
      a(j, i) = avg;
    }
  }

  SimplexSolution best;
  best.objective = std::numeric_limits<double>::infinity();
  std::size_t tried = 0;

  std::vector<std::size_t> support;
  RealVector ones;
  // Largest supports first: the optimal support excludes only the few active
  // constraints, so the certified optimum is found almost immediately.
  for (std::size_t card = n; card >= 1; --card) {
    const auto last = static_cast<std::uint32_t>(((1u << card) - 1u) << (n - card));
    for (std::uint32_t mask = (1u << card) - 1u;; mask = next_same_popcount(mask)) {
      ++tried;
      support.clear();
      for (std::size_t i = 0; i < n; ++i) {
        if (mask & (1u << i)) support.push_back(i);
      }
      const std::size_t m = support.size();
      RealMatrix aff(m, m);
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) aff(i, j) = a(support[i], support[j]);
      }
      RealCholesky chol(aff);  // principal submatrix of a PD form
      ones.assign(m, 1.0);
      RealVector w = chol.solve(std::span<const double>(ones));
      const double sum_w = std::accumulate(w.begin(), w.end(), 0.0);
      const double obj = 1.0 / sum_w;

      bool primal = true;
      for (double wi : w) {
        if (wi / sum_w < -kFeasEps) {
          primal = false;
          break;
        }
      }
      if (primal) {
        RealVector u(n, 0.0);
        for (std::size_t i = 0; i < m; ++i) u[support[i]] = w[i] / sum_w;
        bool dual_ok = true;
        for (std::size_t i = 0; i < n && dual_ok; ++i) {
          if (mask & (1u << i)) continue;
          double au = 0.0;
          for (std::size_t j = 0; j < m; ++j) au += a(i, support[j]) * u[support[j]];
          if (2.0 * au - 2.0 * obj < -kFeasEps) dual_ok = false;
        }
        if (dual_ok) {
          SimplexSolution sol;
          sol.u = std::move(u);
          sol.objective = obj;
          sol.supports_tried = tried;
          return sol;
        }
        if (obj < best.objective) {
          best.u = std::move(u);
          best.objective = obj;
        }
      }
      if (mask == last) break;
    }
    if (card == 1) break;
  }
  best.supports_tried = tried;
  return best;
}

SimplexSolution solve_projected_gradient(const SimplexQp& qp, double tol,
                                         std::size_t max_iter) {
  if (!(tol > 0.0)) throw BadParameter("projected gradient: tol must be > 0");
  const std::size_t n = qp.dim();

  // Lipschitz constant of the gradient: 2 * lambda_max(V^{-1}), estimated by
  // power iteration through the factorization. A fixed non-degenerate start
  // keeps the estimate deterministic; 10% headroom covers slow tails.
  RealVector x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = 1.0 + 1e-3 * static_cast<double>(i + 1);
  double lam = 1.0;
  for (int it = 0; it < 80; ++it) {
    RealVector y = qp.apply_form(x);
    const double ny = norm2(std::span<const double>(y));
    lam = ny / norm2(std::span<const double>(x));
    for (auto& v : y) v /= ny;
    x = std::move(y);
  }
  const double step = 1.0 / (1.1 * 2.0 * lam);

  RealVector u(n, 1.0 / static_cast<double>(n));
  double res = std::numeric_limits<double>::infinity();
  for (std::size_t it = 1; it <= max_iter; ++it) {
    RealVector g = qp.apply_form(u);
    RealVector v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = u[i] - step * 2.0 * g[i];
    RealVector next = project_simplex(std::move(v));
    double diff = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = next[i] - u[i];
      diff += d * d;
    }
    res = std::sqrt(diff) / step;
    u = std::move(next);
    if (res <= tol) {
      SimplexSolution sol;
      sol.objective = qp.objective(u);
      sol.u = std::move(u);
      sol.iterations = it;
      sol.residual = res;
      return sol;
    }
  }
  throw NotConverged("projected gradient: residual " + std::to_string(res) +
                         " above tol " + std::to_string(tol) + " after " +
                         std::to_string(max_iter) + " iterations",
                     res);
}

}  // namespace cibeam
