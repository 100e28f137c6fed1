#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <vector>

namespace curvcert::detail {

struct SimplexResult {
  std::vector<double> x;
  double f = 0.0;
  std::size_t evals = 0;
};

// Nelder-Mead on the unit cube: every trial point is clamped into [0, 1]^d
// before evaluation. Stops when both the simplex diameter and the spread of
// values fall below their tolerances, when the best value reaches `target`,
// or after max_evals evaluations.
template <class F>
SimplexResult nelder_mead_cube(F&& f, std::vector<double> start, double step, double xtol,
                               double ftol, std::size_t max_evals,
                               double target = -std::numeric_limits<double>::infinity()) {
  const std::size_t d = start.size();
  auto clamp_all = [](std::vector<double>& x) {
    for (double& v : x) v = std::clamp(v, 0.0, 1.0);
  };
  clamp_all(start);
  SimplexResult out;
  std::vector<std::vector<double>> pts(d + 1, start);
  std::vector<double> vals(d + 1);
  for (std::size_t k = 0; k < d; ++k) {
    double& c = pts[k + 1][k];
    c = c + step <= 1.0 ? c + step : c - step;
    c = std::clamp(c, 0.0, 1.0);
  }
  for (std::size_t k = 0; k <= d; ++k) vals[k] = f(pts[k]);
  out.evals = d + 1;

  std::vector<std::size_t> order(d + 1);
  std::vector<double> centroid(d), trial(d), trial2(d);
  while (out.evals < max_evals) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
    const std::size_t best = order.front(), worst = order.back(),
                      second = order[order.size() - 2];
    double diameter = 0.0;
    for (std::size_t k = 0; k <= d; ++k)
      for (std::size_t c = 0; c < d; ++c)
        diameter = std::max(diameter, std::abs(pts[k][c] - pts[best][c]));
    if (diameter <= xtol && vals[worst] - vals[best] <= ftol) break;
    if (vals[best] <= target) break;

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t k = 0; k <= d; ++k) {
      if (k == worst) continue;
      for (std::size_t c = 0; c < d; ++c) centroid[c] += pts[k][c];
    }
    for (double& c : centroid) c /= static_cast<double>(d);

    auto along = [&](double coef, std::vector<double>& dst) {
      for (std::size_t c = 0; c < d; ++c)
        dst[c] = centroid[c] + coef * (pts[worst][c] - centroid[c]);
      clamp_all(dst);
      ++out.evals;
      return f(dst);
    };

    const double fr = along(-1.0, trial);
    if (fr < vals[best]) {
      const double fe = along(-2.0, trial2);
      if (fe < fr) {
        pts[worst] = trial2;
        vals[worst] = fe;
      } else {
        pts[worst] = trial;
        vals[worst] = fr;
      }
    } else if (fr < vals[second]) {
      pts[worst] = trial;
      vals[worst] = fr;
    } else {
      const bool outside = fr < vals[worst];
      const double fc = along(outside ? -0.5 : 0.5, trial2);
      if (fc < (outside ? fr : vals[worst])) {
        pts[worst] = trial2;
        vals[worst] = fc;
      } else {
        for (std::size_t k = 0; k <= d; ++k) {
          if (k == best) continue;
          for (std::size_t c = 0; c < d; ++c)
            pts[k][c] = pts[best][c] + 0.5 * (pts[k][c] - pts[best][c]);
          vals[k] = f(pts[k]);
          ++out.evals;
        }
      }
    }
  }
  const auto it = std::min_element(vals.begin(), vals.end());
  out.f = *it;
  out.x = pts[static_cast<std::size_t>(it - vals.begin())];
  return out;
}

// Repeats the simplex descent from its own best point until a restart stops
// improving the value by more than ftol.
template <class F>
SimplexResult nelder_mead_restarting(F&& f, std::vector<double> start, double step, double xtol,
                                     double ftol, std::size_t max_evals,
                                     double target = -std::numeric_limits<double>::infinity(),
                                     int max_restarts = 6) {
  SimplexResult best = nelder_mead_cube(f, std::move(start), step, xtol, ftol, max_evals, target);
  for (int r = 0; r < max_restarts && best.f > target; ++r) {
    SimplexResult next = nelder_mead_cube(f, best.x, step * 0.5, xtol, ftol, max_evals, target);
    next.evals += best.evals;
    const bool improved = next.f < best.f - ftol;
    if (next.f <= best.f) best = std::move(next);
    else best.evals = next.evals;
    if (!improved) break;
  }
  return best;
}

}  // namespace curvcert::detail
