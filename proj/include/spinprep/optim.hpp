#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace spinprep {

template <typename Real>
struct NelderMeadResultT {
  Eigen::Matrix<Real, Eigen::Dynamic, 1> x;
  Real value{};
  int evaluations{};
};

using NelderMeadResult = NelderMeadResultT<double>;

// Derivative-free simplex minimizer with the standard reflection /
// expansion / contraction / shrink moves. Stops on the evaluation budget
// or when the simplex value spread falls below ftol.
template <typename Real, typename F>
NelderMeadResultT<Real> nelder_mead(F&& f, const Eigen::Matrix<Real, Eigen::Dynamic, 1>& x0,
                                    Real step, int max_evals, Real ftol) {
  using Vec = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
  const int n = static_cast<int>(x0.size());
  int evals = 0;
  auto eval = [&](const Vec& x) {
    ++evals;
    return f(x);
  };

  std::vector<Vec> pts(n + 1, x0);
  std::vector<Real> vals(n + 1);
  for (int i = 1; i <= n; ++i) pts[i](i - 1) += step;
  for (int i = 0; i <= n; ++i) vals[i] = eval(pts[i]);

  const Real alpha = 1, gamma = 2, rho = Real(0.5), sigma = Real(0.5);
  std::vector<int> order(n + 1);
  while (evals < max_evals) {
    for (int i = 0; i <= n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) { return vals[a] < vals[b]; });
    const int best = order[0], worst = order[n], second = order[n - 1];
    if (vals[worst] - vals[best] < ftol) break;

    Vec centroid = Vec::Zero(n);
    for (int i = 0; i <= n; ++i)
      if (i != worst) centroid += pts[i];
    centroid /= Real(n);

    Vec refl = centroid + alpha * (centroid - pts[worst]);
    Real frefl = eval(refl);
    if (frefl < vals[best]) {
      Vec expd = centroid + gamma * (refl - centroid);
      Real fexpd = eval(expd);
      if (fexpd < frefl) {
        pts[worst] = expd;
        vals[worst] = fexpd;
      } else {
        pts[worst] = refl;
        vals[worst] = frefl;
      }
    } else if (frefl < vals[second]) {
      pts[worst] = refl;
      vals[worst] = frefl;
    } else {
      Vec contr = centroid + rho * (pts[worst] - centroid);
      Real fcontr = eval(contr);
      if (fcontr < vals[worst]) {
        pts[worst] = contr;
        vals[worst] = fcontr;
      } else {
        for (int i = 0; i <= n; ++i) {
          if (i == best) continue;
          pts[i] = pts[best] + sigma * (pts[i] - pts[best]);
          vals[i] = eval(pts[i]);
        }
      }
    }
  }

  int best = 0;
  for (int i = 1; i <= n; ++i)
    if (vals[i] < vals[best]) best = i;
  return {pts[best], vals[best], evals};
}

}  // namespace spinprep
