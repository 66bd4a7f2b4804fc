#include "wer/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_min.h>
#include <gsl/gsl_multimin.h>

#include "wer/errors.hpp"

namespace wer {

namespace {

struct MinimizerDeleter {
  void operator()(gsl_multimin_fminimizer* m) const { gsl_multimin_fminimizer_free(m); }
  void operator()(gsl_min_fminimizer* m) const { gsl_min_fminimizer_free(m); }
  void operator()(gsl_vector* v) const { gsl_vector_free(v); }
};

struct SimplexContext {
  const Objective* f;
  int evaluations = 0;
};

double simplex_thunk(const gsl_vector* v, void* params) {
  auto* ctx = static_cast<SimplexContext*>(params);
  ++ctx->evaluations;
  const double value = (*ctx->f)(std::span<const double>(v->data, v->size));
  return std::isfinite(value) ? value : std::numeric_limits<double>::max();
}

double scalar_thunk(double x, void* params) {
  return (*static_cast<const std::function<double(double)>*>(params))(x);
}

// GSL's default handler aborts; errors here are reported through status codes.
struct ErrorHandlerGuard {
  gsl_error_handler_t* previous = gsl_set_error_handler_off();
  ~ErrorHandlerGuard() { gsl_set_error_handler(previous); }
};

}  // namespace

namespace {

SimplexResult nelder_mead_once(const Objective& f, const std::vector<double>& x0, const std::vector<double>& step,
                               const SimplexOptions& opts) {
  require(!x0.empty() && x0.size() == step.size(), "nelder_mead: start and step sizes differ");
  ErrorHandlerGuard guard;
  const std::size_t n = x0.size();

  std::unique_ptr<gsl_vector, MinimizerDeleter> x(gsl_vector_alloc(n));
  std::unique_ptr<gsl_vector, MinimizerDeleter> ss(gsl_vector_alloc(n));
  for (std::size_t i = 0; i < n; ++i) {
    gsl_vector_set(x.get(), i, x0[i]);
    gsl_vector_set(ss.get(), i, step[i]);
  }

  SimplexContext ctx{&f};
  gsl_multimin_function fn{&simplex_thunk, n, &ctx};
  std::unique_ptr<gsl_multimin_fminimizer, MinimizerDeleter> m(
      gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n));
  gsl_multimin_fminimizer_set(m.get(), &fn, x.get(), ss.get());

  SimplexResult result;
  // The minimizer's fval is only written by the first iteration.
  double best_value = std::numeric_limits<double>::infinity();
  int since_improvement = 0;
  bool stepped = false;
  while (ctx.evaluations < opts.max_evaluations) {
    ++result.iterations;
    if (gsl_multimin_fminimizer_iterate(m.get()) != GSL_SUCCESS) break;
    stepped = true;
    result.size = gsl_multimin_fminimizer_size(m.get());
    if (gsl_multimin_test_size(result.size, opts.size_tolerance) == GSL_SUCCESS) {
      result.converged = true;
      break;
    }
    const double value = gsl_multimin_fminimizer_minimum(m.get());
    if (value < best_value - opts.value_tolerance) {
      best_value = value;
      since_improvement = 0;
    } else if (opts.stall_iterations > 0 && ++since_improvement >= opts.stall_iterations) {
      result.converged = true;
      result.stalled = true;
      break;
    }
  }

  const gsl_vector* best = gsl_multimin_fminimizer_x(m.get());
  result.x.assign(best->data, best->data + n);
  result.value = stepped ? gsl_multimin_fminimizer_minimum(m.get()) : simplex_thunk(best, &ctx);
  result.evaluations = ctx.evaluations;
  return result;
}

}  // namespace

SimplexResult nelder_mead(const Objective& f, std::vector<double> x0, std::vector<double> step,
                          const SimplexOptions& opts) {
  SimplexResult result = nelder_mead_once(f, x0, step, opts);
  for (int k = 0; k < opts.polish_restarts; ++k) {
    SimplexResult next = nelder_mead_once(f, result.x, step, opts);
    next.evaluations += result.evaluations;
    next.iterations += result.iterations;
    const bool improved = next.value < result.value - opts.value_tolerance;
    if (next.value <= result.value) result = next;
    if (!improved) break;
  }
  return result;
}

double brent_minimize(const std::function<double(double)>& f, double lo, double mid, double hi,
                      double tolerance, int max_iterations) {
  ErrorHandlerGuard guard;
  std::unique_ptr<gsl_min_fminimizer, MinimizerDeleter> m(gsl_min_fminimizer_alloc(gsl_min_fminimizer_brent));
  gsl_function fn{&scalar_thunk, const_cast<std::function<double(double)>*>(&f)};
  if (gsl_min_fminimizer_set(m.get(), &fn, mid, lo, hi) != GSL_SUCCESS) return mid;
  for (int it = 0; it < max_iterations; ++it) {
    if (gsl_min_fminimizer_iterate(m.get()) != GSL_SUCCESS) break;
    const double a = gsl_min_fminimizer_x_lower(m.get());
    const double b = gsl_min_fminimizer_x_upper(m.get());
    if (gsl_min_test_interval(a, b, tolerance, 0.0) == GSL_SUCCESS) break;
  }
  return gsl_min_fminimizer_x_minimum(m.get());
}

double scan_minimize(const std::function<double(double)>& f, double lo, double hi, int grid,
                     double tolerance) {
  require(hi > lo && grid >= 3, "scan_minimize: bad interval");
  std::vector<double> xs(grid), fs(grid);
  for (int i = 0; i < grid; ++i) {
    xs[i] = lo + (hi - lo) * i / (grid - 1);
    fs[i] = f(xs[i]);
  }
  const auto best = static_cast<int>(std::min_element(fs.begin(), fs.end()) - fs.begin());
  if (best == 0 || best == grid - 1) return xs[best];
  if (!(fs[best] < fs[best - 1] && fs[best] < fs[best + 1])) return xs[best];
  return brent_minimize(f, xs[best - 1], xs[best], xs[best + 1], tolerance);
}

}  // namespace wer
