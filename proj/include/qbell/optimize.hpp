#pragma once

/// Small derivative-free minimizers: a Nelder-Mead simplex with the standard
/// reflection/expansion/contraction/shrink moves, and a compass (coordinate
/// pattern) search used to polish a near-optimal point.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <vector>

namespace qbell {

struct NelderMeadOptions {
  std::size_t max_iterations = 500;
  double stagnation_tol = 1e-10;  // simplex collapses when the f-spread drops below this
  double initial_step = 0.5;
  std::size_t restarts = 2;  // rebuild the simplex around the best point on stagnation
};

struct NelderMeadResult {
  std::vector<double> x;
  double fval = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

template <typename F>
NelderMeadResult nelder_mead_minimize(F&& f, const std::vector<double>& x0,
                                      const NelderMeadOptions& opt = {}) {
  const std::size_t n = x0.size();
  struct Vertex {
    std::vector<double> x;
    double f;
  };

  NelderMeadResult result;
  result.x = x0;
  result.fval = f(x0);

  double step = opt.initial_step;
  std::size_t iterations = 0;

  for (std::size_t round = 0; round <= opt.restarts && iterations < opt.max_iterations;
       ++round) {
    std::vector<Vertex> simplex;
    simplex.reserve(n + 1);
    simplex.push_back({result.x, result.fval});
    for (std::size_t i = 0; i < n; ++i) {
      auto x = result.x;
      x[i] += step;
      simplex.push_back({x, f(x)});
    }

    while (iterations < opt.max_iterations) {
      std::sort(simplex.begin(), simplex.end(),
                [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
      if (simplex.back().f - simplex.front().f <= opt.stagnation_tol) {
        result.converged = true;
        break;
      }
      ++iterations;

      std::vector<double> centroid(n, 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) centroid[j] += simplex[i].x[j];
      }
      for (auto& c : centroid) c /= static_cast<double>(n);

      auto affine = [&](double coeff) {
        std::vector<double> x(n);
        for (std::size_t j = 0; j < n; ++j)
          x[j] = centroid[j] + coeff * (simplex.back().x[j] - centroid[j]);
        return x;
      };

      const auto reflected = affine(-1.0);
      const double fr = f(reflected);
      if (fr < simplex.front().f) {
        const auto expanded = affine(-2.0);
        const double fe = f(expanded);
        simplex.back() = fe < fr ? Vertex{expanded, fe} : Vertex{reflected, fr};
        continue;
      }
      if (fr < simplex[n - 1].f) {
        simplex.back() = {reflected, fr};
        continue;
      }
      const bool outside = fr < simplex.back().f;
      const auto contracted = affine(outside ? -0.5 : 0.5);
      const double fc = f(contracted);
      if (fc < (outside ? fr : simplex.back().f)) {
        simplex.back() = {contracted, fc};
        continue;
      }
      // shrink toward the best vertex
      for (std::size_t i = 1; i <= n; ++i) {
        for (std::size_t j = 0; j < n; ++j)
          simplex[i].x[j] = simplex[0].x[j] + 0.5 * (simplex[i].x[j] - simplex[0].x[j]);
        simplex[i].f = f(simplex[i].x);
      }
    }

    std::sort(simplex.begin(), simplex.end(),
              [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
    if (simplex.front().f < result.fval) {
      result.x = simplex.front().x;
      result.fval = simplex.front().f;
    }
    step *= 0.25;
  }
  result.iterations = iterations;
  return result;
}

/// Coordinate pattern search from x with geometrically shrinking steps.
/// Linear but robust; used to sharpen optima past simplex resolution.
template <typename F>
std::pair<std::vector<double>, double> compass_polish(F&& f, std::vector<double> x,
                                                      double step0 = 0.05,
                                                      double step_min = 1e-9) {
  double fx = f(x);
  for (double step = step0; step >= step_min; step *= 0.25) {
    bool improved = true;
    while (improved) {
      improved = false;
      for (std::size_t i = 0; i < x.size(); ++i) {
        for (const double delta : {step, -step}) {
          auto y = x;
          y[i] += delta;
          const double fy = f(y);
          if (fy < fx) {
            x = y;
            fx = fy;
            improved = true;
          }
        }
      }
    }
  }
  return {x, fx};
}

}  // namespace qbell
