#include "cibeam/ci_iterative.hpp"

#include <algorithm>
#include <numeric>

#include "cibeam/qp_simplex.hpp"

namespace cibeam {

namespace {

double min_entry(const RealVector& v) {
  double m = v[0];
  for (double e : v) m = std::min(m, e);
  return m;
}

// State rebuild for a given ordered active set: multipliers from the
// principal block of g, then the affine reconstruction of u.
// Returns false on factorization breakdown (handled by the oracle fallback).
bool rebuild_state(const CiKernel& k, const std::vector<std::size_t>& active,
                   RealVector& q, RealVector& u) {
  const std::size_t n = k.dim;
  const std::size_t m = active.size();
  u.assign(n, 0.0);
  const double inv_c = 1.0 / k.c;
  for (std::size_t i = 0; i < n; ++i) u[i] = k.a[i] * inv_c;
  q.assign(m, 0.0);
  if (m == 0) return true;

  RealMatrix z(m, m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) z(i, j) = k.g(active[i], active[j]);
  }
  RealVector a_sub(m);
  for (std::size_t i = 0; i < m; ++i) a_sub[i] = k.a[active[i]];
  try {
    RealCholesky chol(z);
    RealVector w = chol.solve(std::span<const double>(a_sub));
    for (std::size_t i = 0; i < m; ++i) q[i] = -2.0 * inv_c * w[i];
  } catch (const NotPositiveDefinite&) {
    return false;
  }
  for (std::size_t j = 0; j < m; ++j) {
    const double coef = 0.5 * q[j];
    auto g_row = k.g.row(active[j]);  // g is symmetric; row doubles as column
    for (std::size_t i = 0; i < n; ++i) u[i] += coef * g_row[i];
  }
  return true;
}

double tracked_objective(const CiKernel& k, const std::vector<std::size_t>& active,
                         const RealVector& q) {
  double aq = 0.0;
  for (std::size_t i = 0; i < active.size(); ++i) aq += k.a[active[i]] * q[i];
  return (2.0 - aq) / (2.0 * k.c);
}

void finish_with_oracle(const CiKernel& kernel, IterativeResult& res) {
  SimplexQp qp(kernel.v);
  SimplexSolution sol = solve_projected_gradient(qp, 1e-10, 200000);
  res.u = std::move(sol.u);
  res.converged = true;
  res.fallback = true;
  res.active_set.clear();
  res.multipliers.clear();
}

}  // namespace

RowSumClass classify(const CiKernel& kernel) {
  for (double e : kernel.a) {
    if (e < -kNegEntryEps) return RowSumClass::kNonEmptyS;
  }
  return RowSumClass::kEmptyS;
}

IterativeResult solve_iterative(const CiKernel& kernel, std::size_t n_max,
                                bool record_trace) {
  const std::size_t n = kernel.dim;
  IterativeResult res;

  RealVector u(n);
  const double inv_c = 1.0 / kernel.c;
  for (std::size_t i = 0; i < n; ++i) u[i] = kernel.a[i] * inv_c;

  if (classify(kernel) == RowSumClass::kEmptyS) {
    res.u = std::move(u);
    res.converged = true;
    res.objective = dot(res.u, kernel.v_chol.solve(std::span<const double>(res.u)));
    return res;
  }

  const bool unlimited = (n_max == kUnlimited);
  const std::size_t cap = unlimited ? 10 * n : n_max;

  std::vector<std::size_t> active;
  std::vector<char> in_active(n, 0);
  std::vector<std::size_t> counters{1};
  std::size_t rank = 1;  // t: which ranked candidate the next extension takes
  std::size_t iter = 0;

  RealVector q;  // multipliers aligned with the active set

  // Best closed-form state seen so far, by the subspace dual objective.
  // Budget-limited calls return it, which keeps the achieved margin
  // monotone in n_max even across retraction transients.
  RealVector best_u = u;
  std::vector<std::size_t> best_active;
  RealVector best_q;
  double best_obj = 1.0 / kernel.c;

  std::vector<std::size_t> order(n);
  bool broke_down = false;

  while (min_entry(u) < -kFeasEps && iter < cap) {
    const std::size_t candidates = n - active.size();
    if (rank > candidates) {
      broke_down = true;  // selector exhausted; theoretically unreachable
      break;
    }

    // rank the entries of u ascending (ties by index) and pick the
    // rank-th smallest among indices not already active
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
      if (u[x] != u[y]) return u[x] < u[y];
      return x < y;
    });
    std::size_t sel = n;
    std::size_t seen = 0;
    for (std::size_t idx : order) {
      if (in_active[idx]) continue;
      if (++seen == rank) {
        sel = idx;
        break;
      }
    }

    if (kernel.g(sel, sel) <= 0.0) {
      broke_down = true;
      break;
    }

    active.push_back(sel);
    in_active[sel] = 1;
    counters.push_back(1);

    RealVector cand_q;
    RealVector cand_u;
    if (!rebuild_state(kernel, active, cand_q, cand_u)) {
      broke_down = true;
      break;
    }

    bool accepted = false;
    std::size_t retract_position = 0;
    double qmin = cand_q[0];
    std::size_t qmin_pos = 0;
    for (std::size_t i = 1; i < cand_q.size(); ++i) {
      if (cand_q[i] < qmin) {
        qmin = cand_q[i];
        qmin_pos = i;
      }
    }

    if (qmin >= -kFeasEps) {
      accepted = true;
      u = std::move(cand_u);
      q = std::move(cand_q);
      rank = 1;
      const double obj = tracked_objective(kernel, active, q);
      if (obj > best_obj) {
        best_obj = obj;
        best_u = u;
        best_active = active;
        best_q = q;
      }
    } else {
      // truncate at the most negative multiplier and advance that
      // position's rank counter
      retract_position = qmin_pos + 1;
      for (std::size_t i = retract_position - 1; i < active.size(); ++i) {
        in_active[active[i]] = 0;
      }
      active.resize(retract_position - 1);
      if (!rebuild_state(kernel, active, q, u)) {
        broke_down = true;
        break;
      }
      counters.resize(retract_position);
      counters[retract_position - 1] += 1;
      rank = counters[retract_position - 1];
    }
    ++iter;

    if (record_trace) {
      IterationTrace entry;
      entry.iteration = iter;
      entry.selected = sel;
      entry.accepted = accepted;
      entry.retract_position = retract_position;
      entry.active = active;
      entry.counters = counters;
      entry.min_u = min_entry(u);
      entry.dual_objective = tracked_objective(kernel, active, q);
      res.trace.push_back(std::move(entry));
    }
  }

  res.iterations = iter;

  if (broke_down) {
    finish_with_oracle(kernel, res);
  } else if (min_entry(u) >= -kFeasEps) {
    res.u = std::move(u);
    res.converged = true;
    res.active_set = std::move(active);
    res.multipliers = std::move(q);
  } else if (unlimited) {
    // the generous internal cap ran out without optimality
    finish_with_oracle(kernel, res);
  } else {
    res.u = std::move(best_u);
    res.converged = false;
    res.active_set = std::move(best_active);
    res.multipliers = std::move(best_q);
  }

  res.objective = dot(res.u, kernel.v_chol.solve(std::span<const double>(res.u)));
  return res;
}

IterativeResult solve_with_budget(const CiKernel& kernel, std::size_t n_max,
                                  bool record_trace) {
  return solve_iterative(kernel, n_max, record_trace);
}

}  // namespace cibeam
