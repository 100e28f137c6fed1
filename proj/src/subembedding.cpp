#include "curvcert/subembedding.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "nelder_mead.hpp"

namespace curvcert {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double tuple_scale(const TupleTable& t) {
  return t.dist.empty() ? 0.0 : *std::max_element(t.dist.begin(), t.dist.end());
}

// Uniform double in [0, 1) from the top 53 bits; independent of the
// standard library's distribution implementations.
double unit_draw(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// The fan parameterization of one ordered chain over a (normalized or raw)
// distance table.
class ChainProblem {
 public:
  ChainProblem(std::vector<double> dist, std::size_t n) : d_(std::move(dist)), n_(n) {
    if (!d_.empty()) snap_ = 1e-14 * *std::max_element(d_.begin(), d_.end());
    lo_.resize(n_);
    chain_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      lo_[i] = at(0, i);
      chain_[i] = at(i, (i + 1) % n_);
    }
    // Backward-feasible intervals for each diagonal.
    back_lo_.assign(n_, 0.0);
    back_hi_.assign(n_, 0.0);
    if (n_ >= 2) {
      back_lo_[n_ - 1] = back_hi_[n_ - 1] = lo_[n_ - 1];
      for (std::size_t i = n_ - 2; i >= 2 && i < n_; --i) {
        const double c = chain_[i];
        const double a = std::max(back_lo_[i + 1], lo_[i] - c);
        const double b = back_hi_[i + 1];
        const double gap = c < a ? a - c : (c > b ? c - b : 0.0);
        back_lo_[i] = std::max(lo_[i], gap);
        back_hi_[i] = std::max(back_lo_[i], b + c);
      }
    }
  }

  std::size_t size() const { return n_; }
  std::size_t free_count() const { return n_ >= 3 ? n_ - 3 : 0; }
  std::size_t fold_count() const { return n_ >= 3 ? n_ - 2 : 0; }
  double at(std::size_t i, std::size_t j) const { return d_[i * n_ + j]; }

  // Interval allowed for r_i given r_{i-1}.
  std::pair<double, double> window(std::size_t i, double prev) const {
    const double c = chain_[i - 1];
    double lower = std::max(std::abs(prev - c), back_lo_[i]);
    double upper = std::min(prev + c, back_hi_[i]);
    if (upper < lower) upper = lower;
    return {lower, upper};
  }

  // Diagonals r_1..r_{n-1} (index 0 unused) from cube coordinates.
  void diagonals_from_cube(std::span<const double> u, std::vector<double>& r) const {
    r.assign(n_, 0.0);
    if (n_ < 2) return;
    r[1] = lo_[1];
    for (std::size_t i = 2; i + 1 < n_; ++i) {
      const auto [lower, upper] = window(i, r[i - 1]);
      r[i] = lower + u[i - 2] * (upper - lower);
    }
    r[n_ - 1] = lo_[n_ - 1];
  }

  // Cube coordinates of the tight fan r_i = d(x_1, x_i).
  std::vector<double> tight_fan_cube() const {
    std::vector<double> u(free_count(), 0.0);
    double prev = n_ >= 2 ? lo_[1] : 0.0;
    for (std::size_t i = 2; i + 1 < n_; ++i) {
      const auto [lower, upper] = window(i, prev);
      const double r = std::clamp(lo_[i], lower, upper);
      u[i - 2] = upper > lower ? (r - lower) / (upper - lower) : 0.0;
      prev = r;
    }
    return u;
  }

  void realize(const std::vector<double>& r, std::span<const int> folds,
               std::vector<Point2>& pts) const {
    pts.assign(n_, Point2{});
    if (n_ < 2) return;
    pts[1] = {r[1], 0.0};
    double phi = 0.0;
    int orientation = 1;
    for (std::size_t i = 1; i + 1 < n_; ++i) {
      const double theta = fan_angle(r[i], r[i + 1], chain_[i]);
      if (i == 1) {
        orientation = folds[0] >= 0 ? 1 : -1;
      } else if (folds[i - 1] > 0) {
        orientation = -orientation;
      }
      phi += orientation * theta;
      pts[i + 1] = {r[i + 1] * std::cos(phi), r[i + 1] * std::sin(phi)};
    }
  }

  // Worst condition-3 violation over non-adjacent pairs (adjacent pairs are
  // equalities by construction).
  double violation(const std::vector<Point2>& pts) const {
    double worst = -kInf;
    for (std::size_t i = 1; i < n_; ++i)
      for (std::size_t j = i + 2; j < n_; ++j)
        worst = std::max(worst, at(i, j) - dist(pts[i], pts[j]));
    return worst;
  }

  // Condition-3 gaps over non-adjacent pairs, in (i, j) order.
  void gaps(const std::vector<Point2>& pts, std::vector<double>& out) const {
    out.clear();
    for (std::size_t i = 1; i < n_; ++i)
      for (std::size_t j = i + 2; j < n_; ++j) out.push_back(at(i, j) - dist(pts[i], pts[j]));
  }

  std::vector<int> pattern(std::size_t p) const {
    std::vector<int> folds(fold_count(), 1);
    for (std::size_t k = 1; k < folds.size(); ++k) folds[k] = (p >> (k - 1)) & 1U ? -1 : 1;
    return folds;
  }
  std::size_t pattern_count() const { return std::size_t{1} << (fold_count() > 0 ? fold_count() - 1 : 0); }

 private:
  // Angle at ox_1 between diagonals a and b with chain side c. Triangles
  // degenerate up to rounding are treated as exactly flat, since the angle
  // there grows like the square root of the rounding error.
  double fan_angle(double a, double b, double c) const {
    if (std::abs(a - b) >= c - snap_) return 0.0;
    if (a + b <= c + snap_) return std::numbers::pi;
    return included_angle(a, b, c);
  }

  std::vector<double> d_;
  double snap_ = 0.0;
  std::size_t n_;
  std::vector<double> lo_, chain_, back_lo_, back_hi_;
};

// Tuple with zero-length chain sides removed. alias[k] is the kept position
// whose placement x_k copies.
struct Collapsed {
  std::vector<std::size_t> kept;
  std::vector<std::size_t> alias;
};

Collapsed collapse_chain(const TupleTable& t, double tol) {
  const std::size_t n = t.size();
  Collapsed c;
  c.alias.resize(n);
  if (n == 0) return c;
  c.kept.push_back(0);
  c.alias[0] = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (t(c.kept.back(), i) <= tol) {
      c.alias[i] = c.kept.back();
    } else {
      c.kept.push_back(i);
      c.alias[i] = i;
    }
  }
  while (c.kept.size() > 1 && t(c.kept.back(), 0) <= tol) {
    const std::size_t gone = c.kept.back();
    c.kept.pop_back();
    for (auto& a : c.alias)
      if (a == gone) a = 0;
  }
  return c;
}

std::vector<double> sub_table(const TupleTable& t, const std::vector<std::size_t>& kept, double scale) {
  const std::size_t m = kept.size();
  std::vector<double> d(m * m);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) d[a * m + b] = t(kept[a], kept[b]) / scale;
  return d;
}

bool lex_less(const std::vector<double>& a, const std::vector<double>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

// Gauss-Newton solve of g_a(u) = g_b(u) over the active gaps, moving only the
// interior cube coordinates. Used where the simplex stalls on the kink of the
// max. Returns the improved point, or `u` unchanged.
std::vector<double> equalize_active(const ChainProblem& problem, const std::vector<int>& folds,
                                    std::vector<double> u) {
  std::vector<double> r, g;
  std::vector<Point2> pts;
  auto eval = [&](const std::vector<double>& x, std::vector<double>& out) {
    problem.diagonals_from_cube(x, r);
    problem.realize(r, folds, pts);
    problem.gaps(pts, out);
    return *std::max_element(out.begin(), out.end());
  };
  double v = eval(u, g);
  for (double band : {1e-6, 1e-5, 1e-4}) {
    std::vector<double> x = u;
    std::vector<std::size_t> active, moving;
    for (std::size_t k = 0; k < g.size(); ++k)
      if (g[k] >= v - band) active.push_back(k);
    for (std::size_t c = 0; c < x.size(); ++c)
      if (x[c] > 1e-12 && x[c] < 1.0 - 1e-12) moving.push_back(c);
    const std::size_t eq = active.size() - 1, dim = moving.size();
    if (eq == 0 || eq != dim) continue;
    std::vector<double> gx, gp, gm, jac(eq * dim), rhs(eq);
    bool ok = true;
    for (int it = 0; it < 30 && ok; ++it) {
      eval(x, gx);
      double res = 0.0;
      for (std::size_t e = 0; e < eq; ++e) {
        rhs[e] = -(gx[active[e + 1]] - gx[active[0]]);
        res = std::max(res, std::abs(rhs[e]));
      }
      if (res < 1e-15) break;
      for (std::size_t c = 0; c < dim; ++c) {
        const double h = 1e-7;
        std::vector<double> xp = x, xm = x;
        xp[moving[c]] = std::min(1.0, x[moving[c]] + h);
        xm[moving[c]] = std::max(0.0, x[moving[c]] - h);
        const double span = xp[moving[c]] - xm[moving[c]];
        eval(xp, gp);
        eval(xm, gm);
        for (std::size_t e = 0; e < eq; ++e)
          jac[e * dim + c] = ((gp[active[e + 1]] - gp[active[0]]) - (gm[active[e + 1]] - gm[active[0]])) / span;
      }
      // Gaussian elimination with partial pivoting.
      for (std::size_t col = 0; col < dim && ok; ++col) {
        std::size_t piv = col;
        for (std::size_t row = col + 1; row < eq; ++row)
          if (std::abs(jac[row * dim + col]) > std::abs(jac[piv * dim + col])) piv = row;
        if (std::abs(jac[piv * dim + col]) < 1e-14) {
          ok = false;
          break;
        }
        for (std::size_t k = 0; k < dim; ++k) std::swap(jac[col * dim + k], jac[piv * dim + k]);
        std::swap(rhs[col], rhs[piv]);
        for (std::size_t row = col + 1; row < eq; ++row) {
          const double f = jac[row * dim + col] / jac[col * dim + col];
          for (std::size_t k = col; k < dim; ++k) jac[row * dim + k] -= f * jac[col * dim + k];
          rhs[row] -= f * rhs[col];
        }
      }
      if (!ok) break;
      std::vector<double> step(dim);
      for (std::size_t col = dim; col-- > 0;) {
        double acc = rhs[col];
        for (std::size_t k = col + 1; k < dim; ++k) acc -= jac[col * dim + k] * step[k];
        step[col] = acc / jac[col * dim + col];
      }
      for (std::size_t c = 0; c < dim; ++c) x[moving[c]] = std::clamp(x[moving[c]] + step[c], 0.0, 1.0);
    }
    if (!ok) continue;
    const double vx = eval(x, gx);
    if (vx < v) return x;
  }
  return u;
}

}  // namespace

ChainConfig chain_config(std::vector<Point2> pts) {
  ChainConfig cfg;
  for (std::size_t i = 1; i < pts.size(); ++i) cfg.diagonals.push_back(norm(pts[i] - pts[0]));
  cfg.folds = folds_from_points(pts);
  cfg.points = std::move(pts);
  return cfg;
}

std::vector<int> folds_from_points(std::span<const Point2> pts) {
  const std::size_t n = pts.size();
  if (n < 3) return {};
  std::vector<int> folds(n - 2, 1);
  int prev = 1;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double o = cross(pts[i] - pts[0], pts[i + 1] - pts[0]);
    const int cur = o > 0.0 ? 1 : (o < 0.0 ? -1 : prev);
    folds[i - 1] = i == 1 ? cur : (cur == prev ? -1 : 1);
    prev = cur;
  }
  return folds;
}

ChainConfig realize_chain(const TupleTable& tuple, std::span<const double> free_diagonals,
                          std::span<const int> folds) {
  const std::size_t n = tuple.size();
  if (n < 2) {
    ChainConfig cfg;
    cfg.points.assign(n, Point2{});
    return cfg;
  }
  const std::size_t free = n >= 3 ? n - 3 : 0;
  if (free_diagonals.size() != free || folds.size() != (n >= 3 ? n - 2 : 0)) {
    throw Error(ErrorCode::FanTriangleInfeasible, "expected " + std::to_string(free) +
                                                      " free diagonals and " +
                                                      std::to_string(n >= 3 ? n - 2 : 0) + " folds");
  }
  const ChainProblem problem(tuple.dist, n);
  std::vector<double> r(n, 0.0);
  r[1] = tuple(0, 1);
  for (std::size_t k = 0; k < free; ++k) r[k + 2] = free_diagonals[k];
  r[n - 1] = tuple(0, n - 1);
  const double tol = 1e-9 * std::max(1.0, tuple_scale(tuple));
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double c = tuple(i, i + 1);
    if (r[i] < -tol || std::abs(r[i] - r[i + 1]) > c + tol || c > r[i] + r[i + 1] + tol) {
      throw Error(ErrorCode::FanTriangleInfeasible,
                  "fan triangle " + std::to_string(i + 1) + " violates the triangle inequality",
                  {i + 1});
    }
  }
  ChainConfig cfg;
  problem.realize(r, folds, cfg.points);
  cfg.diagonals.assign(r.begin() + 1, r.end());
  cfg.folds.assign(folds.begin(), folds.end());
  return cfg;
}

SubembeddingCertificate subembedding_slack(const TupleTable& tuple, const ChainConfig& config,
                                           double C) {
  const std::size_t n = tuple.size();
  if (config.points.size() != n) {
    throw Error(ErrorCode::ChainMismatch, "placement has " + std::to_string(config.points.size()) +
                                              " points for a " + std::to_string(n) + "-tuple");
  }
  const double tol = kSlackTolerance * std::max(1.0, tuple_scale(tuple));
  SubembeddingCertificate cert;
  cert.config = config;
  cert.C = C;
  cert.ordering = tuple.indices;
  const auto& p = config.points;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t prev = (i + n - 1) % n;
    const double gap = dist(p[i], p[prev]) - tuple(i, prev);
    cert.cond1.push_back(gap);
    if (std::abs(gap) > tol) {
      throw Error(ErrorCode::ChainMismatch,
                  "|ox_" + std::to_string(i + 1) + " - ox_" + std::to_string(prev + 1) +
                      "| differs from the chain distance",
                  {i, prev});
    }
  }
  bool pass = true;
  for (std::size_t i = 1; i < n; ++i) {
    const double s = dist(p[0], p[i]) - tuple(0, i);
    cert.cond2.push_back(s);
    if (s < -tol) pass = false;
  }
  double worst = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double gap = tuple(i, j) - dist(p[i], p[j]);
      worst = std::max(worst, gap);
      const double s = C - gap;
      cert.cond3.push_back({i, j, s});
      if (s < -tol) pass = false;
    }
  }
  cert.achieved = worst;
  cert.pass = pass;
  return cert;
}

OrderedDefect minimal_defect_ordered(const TupleTable& tuple, const SearchOptions& options) {
  const std::size_t n = tuple.size();
  if (n > 8) throw Error(ErrorCode::TooLarge, "ordered search supports at most 8 points");
  const double scale = tuple_scale(tuple);
  OrderedDefect out;
  if (n < 3 || scale <= 0.0) {
    ChainConfig cfg;
    cfg.points.assign(n, Point2{});
    if (n == 2) cfg.points[1] = {tuple(0, 1), 0.0};
    if (n >= 2) cfg = chain_config(cfg.points);
    out.cert = subembedding_slack(tuple, cfg, 0.0);
    return out;
  }

  const Collapsed col = collapse_chain(tuple, 1e-12 * scale);
  const std::size_t m = col.kept.size();
  const ChainProblem problem(sub_table(tuple, col.kept, scale), m);
  const double stop = options.stop_below / scale;

  std::vector<double> best_r;
  std::vector<int> best_folds;
  std::vector<double> best_u;
  double best_v = kInf;
  std::vector<double> r;
  std::vector<Point2> pts;

  auto consider = [&](double v, const std::vector<double>& rr, const std::vector<int>& folds,
                      const std::vector<double>& u) {
    const double tie = 1e-14;
    if (v < best_v - tie || (std::abs(v - best_v) <= tie && lex_less(rr, best_r))) {
      best_v = v;
      best_r = rr;
      best_folds = folds;
      best_u = u;
    }
  };

  if (m < 3) {
    best_r.assign(m, 0.0);
    if (m == 2) best_r[1] = problem.at(0, 1);
    best_v = -kInf;
  } else {
    const std::size_t free = problem.free_count();
    // Cheap pass: the tight fan under every fold pattern.
    for (std::size_t p = 0; p < problem.pattern_count() && free > 0; ++p) {
      const std::vector<int> folds = problem.pattern(p);
      problem.diagonals_from_cube(problem.tight_fan_cube(), r);
      problem.realize(r, folds, pts);
      consider(problem.violation(pts), r, folds, problem.tight_fan_cube());
    }
    const std::size_t patterns = problem.pattern_count();
    std::vector<std::vector<int>> fold_sets;
    std::vector<std::mt19937_64> rngs;
    for (std::size_t p = 0; p < patterns; ++p) {
      fold_sets.push_back(problem.pattern(p));
      rngs.emplace_back(options.seed * 0x9E3779B97F4A7C15ULL + p);
    }
    // Starts are interleaved across fold patterns so that the pattern
    // matching the tuple's shape is reached early.
    const std::size_t rounds = free == 0 ? 1 : options.restarts + 1;
    for (std::size_t s = 0; s < rounds && best_v > stop; ++s) {
      for (std::size_t p = 0; p < patterns && best_v > stop; ++p) {
        const std::vector<int>& folds = fold_sets[p];
        auto objective = [&](const std::vector<double>& u) {
          problem.diagonals_from_cube(u, r);
          problem.realize(r, folds, pts);
          return problem.violation(pts);
        };
        if (free == 0) {
          consider(objective({}), r, folds, {});
          continue;
        }
        std::vector<double> start = problem.tight_fan_cube();
        if (s > 0)
          for (double& x : start) x = unit_draw(rngs[p]);
        const auto res = detail::nelder_mead_restarting(objective, start, 0.15, 1e-9, 1e-12,
                                                        400 * (free + 1), stop);
        objective(res.x);
        consider(res.f, r, folds, res.x);
      }
    }
    // Thin zero sets can evade random starts; in low dimension scan a grid of
    // the cube under every fold pattern and descend from the best cells. Both
    // ends of a window are flat triangles where the fan angle moves like a
    // square root, so the scan and descent use u = sin^2(pi t / 2).
    if (free > 0 && free <= 3 && best_v > stop) {
      const std::size_t res = free == 1 ? 2049 : free == 2 ? 129 : 24;
      struct Cell {
        double v;
        std::size_t p;
        std::vector<double> u;
      };
      auto warp = [](std::vector<double> t) {
        for (double& x : t) {
          const double s = std::sin(0.5 * std::numbers::pi * std::clamp(x, 0.0, 1.0));
          x = s * s;
        }
        return t;
      };
      std::vector<Cell> cells;
      std::vector<double> u(free);
      std::vector<std::size_t> idx(free, 0);
      for (std::size_t p = 0; p < patterns; ++p) {
        std::fill(idx.begin(), idx.end(), 0);
        std::vector<Cell> top;
        while (true) {
          for (std::size_t k = 0; k < free; ++k)
            u[k] = static_cast<double>(idx[k]) / static_cast<double>(res - 1);
          problem.diagonals_from_cube(warp(u), r);
          problem.realize(r, fold_sets[p], pts);
          const double v = problem.violation(pts);
          if (top.size() < 4 || v < top.back().v) {
            if (top.size() == 4) top.pop_back();
            auto at = std::find_if(top.begin(), top.end(), [&](const Cell& c) { return v < c.v; });
            top.insert(at, Cell{v, p, u});
          }
          std::size_t k = 0;
          while (k < free && ++idx[k] == res) idx[k++] = 0;
          if (k == free) break;
        }
        for (Cell& c : top) cells.push_back(std::move(c));
      }
      std::sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) {
        return a.v < b.v || (a.v == b.v && a.p < b.p);
      });
      for (const Cell& c : cells) {
        if (best_v <= stop) break;
        const std::vector<int>& folds = fold_sets[c.p];
        auto objective = [&](const std::vector<double>& t) {
          problem.diagonals_from_cube(warp(t), r);
          problem.realize(r, folds, pts);
          return problem.violation(pts);
        };
        const auto res_nm = detail::nelder_mead_restarting(objective, c.u, 1.0 / static_cast<double>(res - 1),
                                                           1e-12, 0.0, 1000 * (free + 1), stop, 8);
        objective(res_nm.x);
        consider(res_nm.f, r, folds, warp(res_nm.x));
      }
    }
    // Polish the winner with a small simplex and tight tolerances.
    if (free > 0 && best_v > stop) {
      const std::vector<int> folds = best_folds;
      auto objective = [&](const std::vector<double>& u) {
        problem.diagonals_from_cube(u, r);
        problem.realize(r, folds, pts);
        return problem.violation(pts);
      };
      const auto res = detail::nelder_mead_restarting(objective, best_u, 1e-3, 1e-15, 0.0,
                                                      2000 * (free + 1), stop, 12);
      const std::vector<double> x = equalize_active(problem, folds, res.x);
      consider(objective(x), r, folds, x);
    }
  }

  // Rebuild the placement in the tuple's own units and restore collapsed points.
  std::vector<Point2> kept_pts;
  if (m >= 3) {
    std::vector<double> rr(best_r.size());
    for (std::size_t i = 0; i < rr.size(); ++i) rr[i] = best_r[i] * scale;
    const ChainProblem raw(sub_table(tuple, col.kept, 1.0), m);
    raw.realize(rr, best_folds, kept_pts);
  } else {
    kept_pts.assign(m, Point2{});
    if (m == 2) kept_pts[1] = {tuple(col.kept[0], col.kept[1]), 0.0};
  }
  std::vector<Point2> full(n);
  for (std::size_t k = 0; k < m; ++k) full[col.kept[k]] = kept_pts[k];
  for (std::size_t i = 0; i < n; ++i) full[i] = full[col.alias[i]];

  ChainConfig cfg = chain_config(full);
  if (m == n && m >= 3) cfg.folds = best_folds;
  SubembeddingCertificate probe = subembedding_slack(tuple, cfg, 0.0);
  out.C = probe.achieved;
  out.cert = subembedding_slack(tuple, cfg, out.C);
  return out;
}

std::vector<std::vector<std::size_t>> canonical_orderings(std::span<const std::size_t> indices) {
  std::vector<std::size_t> perm(indices.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::vector<std::vector<std::size_t>> out;
  const std::size_t n = perm.size();
  do {
    if (n >= 3 && perm[1] > perm[n - 1]) continue;
    std::vector<std::size_t> ord(n);
    for (std::size_t k = 0; k < n; ++k) ord[k] = indices[perm[k]];
    out.push_back(std::move(ord));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

SetDefect minimal_defect_set(const FiniteMetric& metric, std::span<const std::size_t> indices,
                             const SetOptions& options) {
  for (std::size_t i : indices)
    if (i >= metric.size()) throw Error(ErrorCode::IndexOutOfRange, "set index out of range", {i});
  const std::size_t n = indices.size();
  std::vector<std::vector<std::size_t>> orderings;
  if (n > options.max_full_enumeration) {
    if (!options.sample_orderings) {
      throw Error(ErrorCode::TooManyOrderings,
                  std::to_string(n) + " points exceed full enumeration; enable ordering sampling");
    }
    std::mt19937_64 rng(options.search.seed ^ 0x5DEECE66DULL);
    std::vector<std::size_t> ord(indices.begin(), indices.end());
    for (std::size_t s = 0; s < *options.sample_orderings; ++s) {
      for (std::size_t k = n - 1; k > 0; --k) {
        const std::size_t j = static_cast<std::size_t>(unit_draw(rng) * static_cast<double>(k + 1));
        std::swap(ord[k], ord[std::min(j, k)]);
      }
      orderings.push_back(ord);
    }
  } else {
    orderings = canonical_orderings(indices);
  }

  if (orderings.empty()) throw Error(ErrorCode::BudgetZero, "no orderings to check");
  SetDefect out;
  double scale = 0.0;
  for (std::size_t a : indices)
    for (std::size_t b : indices) scale = std::max(scale, metric(a, b));
  const double slack = 1e-9 * scale;
  std::vector<OrderedDefect> results;
  results.reserve(orderings.size());
  double best = 0.0;
  for (const auto& ord : orderings) {
    SearchOptions search = options.search;
    search.stop_below = results.empty() ? slack : std::max(best, slack);
    results.push_back(minimal_defect_ordered(tuple_distances(metric, ord), search));
    best = std::max(best, results.back().C);
  }
  out.orderings_checked = orderings.size();
  // Early-stopped values are upper bounds. Re-run the current worst ordering
  // in full until the maximum sits on a fully searched ordering.
  std::vector<bool> full(orderings.size(), false);
  while (true) {
    std::size_t w = 0;
    for (std::size_t k = 1; k < results.size(); ++k)
      if (results[k].C > results[w].C) w = k;
    if (full[w] || results[w].C <= slack) {
      out.C = results[w].C;
      out.worst_ordering = orderings[w];
      out.cert = std::move(results[w].cert);
      break;
    }
    OrderedDefect rerun = minimal_defect_ordered(tuple_distances(metric, orderings[w]), options.search);
    if (rerun.C <= results[w].C) results[w] = std::move(rerun);
    full[w] = true;
  }
  return out;
}

OracleResult brute_force_oracle(const TupleTable& tuple, std::size_t resolution) {
  const std::size_t n = tuple.size();
  if (n > 5) throw Error(ErrorCode::TooLarge, "grid oracle supports at most 5 points");
  OracleResult out;
  if (n < 4) {
    out.C = 0.0;
    out.violation = -kInf;
    if (n == 3) out.folds = {1};
    return out;
  }
  resolution = std::max<std::size_t>(resolution, 3);
  auto d = [&](std::size_t i, std::size_t j) { return tuple(i, j); };
  const double tol = 1e-12 * std::max(1.0, tuple_scale(tuple));
  const std::size_t free = n - 3;

  // Coarse box for r_3 (and r_4): [d(x1, x_i), d(x1, x_{i-1}) + chain sum bound].
  std::vector<double> box_lo(free), box_hi(free);
  box_lo[0] = std::max(d(0, 2), std::abs(d(0, 1) - d(1, 2)));
  box_hi[0] = d(0, 1) + d(1, 2);
  if (free == 2) {
    box_lo[1] = std::max(d(0, 3), std::abs(d(0, 4) - d(3, 4)));
    box_hi[1] = d(0, 4) + d(3, 4);
  }

  auto feasible = [&](const std::vector<double>& r) {
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double c = d(i, i + 1);
      if (r[i] < d(0, i) - tol) return false;
      if (std::abs(r[i] - r[i + 1]) > c + tol || c > r[i] + r[i + 1] + tol) return false;
    }
    return true;
  };

  // Independent placement: explicit law of cosines angles.
  auto evaluate = [&](const std::vector<double>& r, const std::vector<int>& orient) {
    std::vector<Point2> p(n);
    p[1] = {r[1], 0.0};
    double phi = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double c = d(i, i + 1);
      double cosv = r[i] > 0 && r[i + 1] > 0
                        ? (r[i] * r[i] + r[i + 1] * r[i + 1] - c * c) / (2.0 * r[i] * r[i + 1])
                        : 1.0;
      cosv = std::clamp(cosv, -1.0, 1.0);
      phi += orient[i - 1] * std::acos(cosv);
      p[i + 1] = {r[i + 1] * std::cos(phi), r[i + 1] * std::sin(phi)};
    }
    double worst = -kInf;
    for (std::size_t i = 1; i < n; ++i)
      for (std::size_t j = i + 2; j < n; ++j) worst = std::max(worst, d(i, j) - dist(p[i], p[j]));
    return worst;
  };

  struct Node {
    double f;
    std::vector<double> free_r;
    std::size_t pattern;
  };

  // Absolute orientations: first triangle counterclockwise, others free.
  const std::size_t patterns = std::size_t{1} << (n - 3);
  auto orientations = [&](std::size_t p) {
    std::vector<int> o(n - 2, 1);
    for (std::size_t k = 1; k < o.size(); ++k) o[k] = (p >> (k - 1)) & 1U ? -1 : 1;
    return o;
  };

  auto full_r = [&](const std::vector<double>& fr) {
    std::vector<double> r(n, 0.0);
    r[1] = d(0, 1);
    for (std::size_t k = 0; k < free; ++k) r[k + 2] = fr[k];
    r[n - 1] = d(0, n - 1);
    return r;
  };

  auto scan = [&](const std::vector<double>& lo, const std::vector<double>& hi, std::size_t nodes,
                  std::size_t p, std::vector<Node>& sink, double* lipschitz) {
    const std::vector<int> o = orientations(p);
    const std::size_t ny = free == 2 ? nodes : 1;
    std::vector<double> grid_f(nodes * ny, kInf);
    auto coord = [&](std::size_t axis, std::size_t k) {
      if (hi[axis] <= lo[axis]) return lo[axis];
      return k + 1 == nodes ? hi[axis]
                            : lo[axis] + (hi[axis] - lo[axis]) * static_cast<double>(k) /
                                             static_cast<double>(nodes - 1);
    };
    for (std::size_t a = 0; a < nodes; ++a) {
      for (std::size_t b = 0; b < ny; ++b) {
        std::vector<double> fr = {coord(0, a)};
        if (free == 2) fr.push_back(coord(1, b));
        const std::vector<double> r = full_r(fr);
        if (!feasible(r)) continue;
        const double f = evaluate(r, o);
        grid_f[a * ny + b] = f;
        sink.push_back({f, fr, p});
      }
    }
    if (lipschitz) {
      for (std::size_t a = 0; a < nodes; ++a)
        for (std::size_t b = 0; b < ny; ++b) {
          const double f = grid_f[a * ny + b];
          if (!std::isfinite(f)) continue;
          if (a + 1 < nodes && std::isfinite(grid_f[(a + 1) * ny + b]))
            *lipschitz = std::max(*lipschitz, std::abs(grid_f[(a + 1) * ny + b] - f));
          if (b + 1 < ny && std::isfinite(grid_f[a * ny + b + 1]))
            *lipschitz = std::max(*lipschitz, std::abs(grid_f[a * ny + b + 1] - f));
        }
    }
  };

  std::vector<Node> nodes;
  for (std::size_t p = 0; p < patterns; ++p) scan(box_lo, box_hi, resolution, p, nodes, nullptr);
  if (nodes.empty()) {
    throw Error(ErrorCode::FanTriangleInfeasible, "no feasible grid node");
  }
  std::vector<double> spacing(free);
  for (std::size_t k = 0; k < free; ++k)
    spacing[k] = (box_hi[k] - box_lo[k]) / static_cast<double>(resolution - 1);

  // Zoom into the best few cells repeatedly.
  constexpr std::size_t kSeeds = 8;
  constexpr std::size_t kZoomNodes = 21;
  constexpr int kLevels = 9;
  double step_jump = 0.0;
  for (int level = 0; level < kLevels; ++level) {
    std::sort(nodes.begin(), nodes.end(), [](const Node& a, const Node& b) { return a.f < b.f; });
    std::vector<Node> seeds;
    for (const Node& nd : nodes) {
      bool distinct = true;
      for (const Node& s : seeds) {
        bool near = s.pattern == nd.pattern;
        for (std::size_t k = 0; k < free && near; ++k)
          near = std::abs(s.free_r[k] - nd.free_r[k]) <= 2.0 * spacing[k];
        if (near) distinct = false;
      }
      if (distinct) seeds.push_back(nd);
      if (seeds.size() == kSeeds) break;
    }
    std::vector<Node> next = seeds;
    step_jump = 0.0;
    for (const Node& s : seeds) {
      std::vector<double> lo(free), hi(free);
      for (std::size_t k = 0; k < free; ++k) {
        lo[k] = std::max(box_lo[k], s.free_r[k] - 2.0 * spacing[k]);
        hi[k] = std::min(box_hi[k], s.free_r[k] + 2.0 * spacing[k]);
      }
      scan(lo, hi, kZoomNodes, s.pattern, next, &step_jump);
    }
    for (std::size_t k = 0; k < free; ++k) spacing[k] *= 4.0 / static_cast<double>(kZoomNodes - 1);
    nodes = std::move(next);
  }
  const auto best = std::min_element(nodes.begin(), nodes.end(),
                                     [](const Node& a, const Node& b) { return a.f < b.f; });
  out.violation = best->f;
  out.C = std::max(0.0, best->f);
  out.diagonals = best->free_r;
  // Report folds in the relative convention used by realize_chain.
  const std::vector<int> o = orientations(best->pattern);
  out.folds.assign(o.size(), 1);
  for (std::size_t k = 1; k < o.size(); ++k) out.folds[k] = o[k] == o[k - 1] ? -1 : 1;
  out.grid_error = step_jump * std::sqrt(static_cast<double>(free));
  return out;
}

}  // namespace curvcert
