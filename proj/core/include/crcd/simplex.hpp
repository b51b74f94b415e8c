#pragma once

// Derivative-free Nelder-Mead simplex minimizer. Deterministic: no RNG,
// the initial simplex is x0 plus one step along each coordinate.

#include <algorithm>
#include <functional>
#include <vector>

#include "crcd/types.hpp"

namespace crcd {

struct SimplexResult {
  Vec x;
  double value = 0.0;
  int evaluations = 0;
  bool converged = false;
};

inline SimplexResult nelder_mead(const std::function<double(const Vec&)>& f,
                                 const Vec& x0, const Vec& steps,
                                 double param_tol, int max_eval) {
  const int n = int(x0.size());
  std::vector<Vec> xs(n + 1, x0);
  std::vector<double> fs(n + 1);
  int evals = 0;
  auto eval = [&](const Vec& x) {
    ++evals;
    return f(x);
  };
  for (int i = 0; i < n; ++i) xs[i + 1](i) += steps(i);
  for (int i = 0; i <= n; ++i) fs[i] = eval(xs[i]);

  const double alpha = 1.0, gamma = 2.0, rho = 0.5, sigma = 0.5;
  std::vector<int> order(n + 1);
  SimplexResult res;
  while (evals < max_eval) {
    for (int i = 0; i <= n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return fs[a] < fs[b]; });
    // simplex diameter in parameter space
    double diam = 0.0;
    for (int i = 1; i <= n; ++i)
      diam = std::max(diam, (xs[order[i]] - xs[order[0]]).cwiseAbs().maxCoeff());
    if (diam < param_tol) {
      res.converged = true;
      break;
    }
    Vec centroid = Vec::Zero(n);
    for (int i = 0; i < n; ++i) centroid += xs[order[i]];
    centroid /= double(n);
    const int worst = order[n];
    Vec xr = centroid + alpha * (centroid - xs[worst]);
    double fr = eval(xr);
    if (fr < fs[order[0]]) {
      Vec xe = centroid + gamma * (xr - centroid);
      double fe = eval(xe);
      if (fe < fr) {
        xs[worst] = xe;
        fs[worst] = fe;
      } else {
        xs[worst] = xr;
        fs[worst] = fr;
      }
    } else if (fr < fs[order[n - 1]]) {
      xs[worst] = xr;
      fs[worst] = fr;
    } else {
      Vec xc = centroid + rho * (xs[worst] - centroid);
      double fc = eval(xc);
      if (fc < fs[worst]) {
        xs[worst] = xc;
        fs[worst] = fc;
      } else {
        for (int i = 1; i <= n; ++i) {
          int idx = order[i];
          xs[idx] = xs[order[0]] + sigma * (xs[idx] - xs[order[0]]);
          fs[idx] = eval(xs[idx]);
        }
      }
    }
  }
  int best = 0;
  for (int i = 1; i <= n; ++i)
    if (fs[i] < fs[best]) best = i;
  res.x = xs[best];
  res.value = fs[best];
  res.evaluations = evals;
  return res;
}

}  // namespace crcd
