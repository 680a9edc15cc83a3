#pragma once

// Test-only reference computations. Nothing here calls into the library's
// belief, solver or evaluation code; only plain model types are shared.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "ehaoi/model.hpp"

namespace oracle {

using Mat = std::vector<std::vector<double>>;

inline Mat lambda_matrix(double lambda, int cap) {
  Mat m(cap + 1, std::vector<double>(cap + 1, 0.0));
  for (int j = 0; j < cap; ++j) {
    m[j][j] = 1.0 - lambda;
    m[j + 1][j] = lambda;
  }
  m[cap][cap] = 1.0;
  return m;
}

inline Mat identity(int n) {
  Mat m(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i) m[i][i] = 1.0;
  return m;
}

inline Mat multiply(const Mat& a, const Mat& b) {
  const std::size_t n = a.size(), k = b.size(), p = b[0].size();
  Mat out(n, std::vector<double>(p, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t l = 0; l < k; ++l)
      for (std::size_t j = 0; j < p; ++j) out[i][j] += a[i][l] * b[l][j];
  return out;
}

inline Mat iterated_power(double lambda, int cap, int m) {
  const Mat base = lambda_matrix(lambda, cap);
  Mat out = identity(cap + 1);
  for (int i = 0; i < m; ++i) out = multiply(base, out);
  return out;
}

inline std::vector<double> apply(const Mat& a, const std::vector<double>& v) {
  std::vector<double> out(a.size(), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) out[i] += a[i][j] * v[j];
  return out;
}

/// Smallest m >= 1 (scanning to `limit`) with max_g |L^m g - L^(m+1) g| < eps.
inline int scan_truncation(double lambda, int cap, const std::vector<std::vector<double>>& gens, double eps,
                           int limit = 1024) {
  const Mat base = lambda_matrix(lambda, cap);
  Mat now = base;
  for (int m = 1; m <= limit; ++m) {
    const Mat next = multiply(base, now);
    double worst = 0.0;
    for (const auto& g : gens) {
      const auto x = oracle::apply(now, g);
      const auto y = oracle::apply(next, g);
      for (std::size_t i = 0; i < x.size(); ++i) worst = std::max(worst, std::abs(x[i] - y[i]));
    }
    if (worst < eps) return m;
    now = next;
  }
  return -1;
}

/// Gaussian elimination with partial pivoting; solves a x = b.
inline std::vector<double> solve_dense(Mat a, std::vector<double> b) {
  const std::size_t n = a.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    std::swap(a[c], a[piv]);
    std::swap(b[c], b[piv]);
    if (std::abs(a[c][c]) < 1e-300) throw std::runtime_error("singular system");
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      const double f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  for (std::size_t i = 0; i < n; ++i) b[i] /= a[i][i];
  return b;
}

/// Stationary cost of an irreducible chain given as a dense row-stochastic matrix.
inline double stationary_cost(const Mat& p, const std::vector<double>& cost) {
  const std::size_t n = p.size();
  Mat a(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[j][i] = (i == j ? 1.0 : 0.0) - p[i][j];
  for (std::size_t j = 0; j < n; ++j) a[n - 1][j] = 1.0;
  std::vector<double> rhs(n, 0.0);
  rhs[n - 1] = 1.0;
  const auto pi = solve_dense(a, rhs);
  double c = 0.0;
  for (std::size_t i = 0; i < n; ++i) c += pi[i] * cost[i];
  return c;
}

/// Average cost along the eventual cycle of a deterministic map.
inline double deterministic_cycle_cost(int start, const std::function<int(int)>& next,
                                       const std::function<double(int)>& cost) {
  std::map<int, int> seen;
  std::vector<int> path;
  int s = start;
  while (!seen.contains(s)) {
    seen[s] = static_cast<int>(path.size());
    path.push_back(s);
    s = next(s);
  }
  double total = 0.0;
  const int first = seen[s];
  for (std::size_t i = static_cast<std::size_t>(first); i < path.size(); ++i) total += cost(path[i]);
  return total / static_cast<double>(path.size() - static_cast<std::size_t>(first));
}

/// Exact posterior over b(t+k) for every positive-probability history of k
/// actions, by enumerating initial battery, energy arrivals and requests.
struct History {
  std::vector<int> actions;
  std::vector<ehaoi::Observation> observations;  // o(1) .. o(k+1)

  bool operator<(const History& o) const {
    if (actions != o.actions) return actions < o.actions;
    auto key = [](const ehaoi::Observation& x) { return std::tuple(x.r, x.delta, x.b_tilde); };
    return std::lexicographical_compare(observations.begin(), observations.end(), o.observations.begin(),
                                        o.observations.end(),
                                        [&](const auto& a, const auto& b) { return key(a) < key(b); });
  }
};

inline std::map<History, std::vector<double>> brute_force_posteriors(const ehaoi::SystemConfig& c, int k) {
  std::map<History, std::vector<double>> out;
  const int cap = c.battery_capacity;
  for (int b1 = 0; b1 <= cap; ++b1) {
    const double w_b = c.initial_belief[b1];
    if (w_b == 0.0) continue;
    for (int r1 = 0; r1 <= 1; ++r1) {
      for (std::uint32_t acts = 0; acts < (1u << k); ++acts) {
        for (std::uint32_t energy = 0; energy < (1u << k); ++energy) {
          for (std::uint32_t reqs = 0; reqs < (1u << k); ++reqs) {
            double w = w_b * (r1 ? c.p : 1.0 - c.p);
            int b = b1, r = r1, delta = c.initial_delta, bt = c.initial_b_tilde;
            History h;
            h.observations.push_back({r, delta, bt});
            for (int t = 0; t < k; ++t) {
              const int a = (acts >> t) & 1;
              const int e = (energy >> t) & 1;
              const int rn = (reqs >> t) & 1;
              w *= (e ? c.lambda : 1.0 - c.lambda) * (rn ? c.p : 1.0 - c.p);
              const int d = (a == 1 && b >= 1) ? 1 : 0;
              if (d) bt = b;
              b = std::min(b + e - d, cap);
              delta = d ? 1 : std::min(delta + 1, c.delta_max);
              r = rn;
              h.actions.push_back(a);
              h.observations.push_back({r, delta, bt});
            }
            if (w == 0.0) continue;
            auto& post = out[h];
            post.resize(cap + 1, 0.0);
            post[b] += w;
          }
        }
      }
    }
  }
  for (auto& [h, post] : out) {
    double s = 0.0;
    for (double x : post) s += x;
    for (double& x : post) x /= s;
  }
  return out;
}

}  // namespace oracle
