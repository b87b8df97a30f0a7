#include "twophase/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "twophase/error.hpp"
#include "twophase/grid.hpp"
#include "twophase/parallel.hpp"

namespace twophase {

namespace {

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value))
    throw ParameterError(std::string(name) + " must be positive, got " + std::to_string(value));
}

void require_same_shape(const ScalarField& a, const ScalarField& b, const char* where) {
  if (!a.same_shape(b)) throw ContractError(std::string(where) + ": field shapes differ");
}

}  // namespace

void SolverParams::validate() const {
  require_positive(lambda, "lambda");
  require_positive(gamma, "gamma");
  require_positive(tau, "tau");
  require_positive(tol, "tol");
  if (avg_window < 1) throw ParameterError("avg_window must be at least 1");
  if (max_iters < 1) throw ParameterError("max_iters must be at least 1");
  if (snapshot_every < 0) throw ParameterError("snapshot_every must be non-negative");
  if (!(threshold > 0.0 && threshold < 1.0))
    throw ParameterError("threshold must lie in (0, 1), got " + std::to_string(threshold));
  if (!weight.uniform) weight.validate();
}

std::string_view to_string(StopReason reason) noexcept {
  switch (reason) {
    case StopReason::energy_rise: return "energy_rise";
    case StopReason::tolerance_met: return "tolerance_met";
    case StopReason::max_iters: return "max_iters";
    case StopReason::none: break;
  }
  return "none";
}

ScalarField residual_field(const ScalarField& f, double c1, double c2) {
  ScalarField r(f.width(), f.height());
  for (std::size_t k = 0; k < f.size(); ++k) {
    const double a = f[k] - c1;
    const double b = f[k] - c2;
    r[k] = a * a - b * b;
  }
  return r;
}

VectorField solve_d(const ScalarField& u, const VectorField& b, const ScalarField& g,
                    double gamma) {
  require_same_shape(u, g, "solve_d");
  require_same_shape(u, b.x, "solve_d");
  const VectorField grad = gradient(u);
  VectorField d(u.width(), u.height());
  for (std::size_t k = 0; k < u.size(); ++k) {
    const double zx = grad.x[k] + b.x[k];
    const double zy = grad.y[k] + b.y[k];
    const double mag = std::hypot(zx, zy);
    const double shrunk = mag - g[k] / gamma;
    if (mag > 0.0 && shrunk > 0.0) {
      const double scale = shrunk / mag;
      d.x[k] = zx * scale;
      d.y[k] = zy * scale;
    }
  }
  return d;
}

ScalarField jacobi_sweep(const ScalarField& u, const VectorField& d, const VectorField& b,
                         const ScalarField& r, double lambda, double gamma) {
  require_same_shape(u, r, "jacobi_sweep");
  require_same_shape(u, d.x, "jacobi_sweep");
  require_same_shape(u, b.x, "jacobi_sweep");
  const int w = u.width();
  const int h = u.height();

  VectorField diff(w, h);
  for (std::size_t k = 0; k < u.size(); ++k) {
    diff.x[k] = d.x[k] - b.x[k];
    diff.y[k] = d.y[k] - b.y[k];
  }
  const ScalarField div = divergence(diff);
  const double ratio = lambda / gamma;

  // laplacian(u)(p) = sum_{q ~ p} u(q) - n(p) u(p), solved for u(p) with neighbours frozen.
  ScalarField out(w, h);
  for_rows(h, u.size(), [&](int j0, int j1) {
    for (int j = j0; j < j1; ++j) {
      for (int i = 0; i < w; ++i) {
        const int n = neighbour_count(w, h, i, j);
        if (n == 0) {
          out(i, j) = u(i, j);
          continue;
        }
        double sum = 0.0;
        if (i > 0) sum += u(i - 1, j);
        if (i + 1 < w) sum += u(i + 1, j);
        if (j > 0) sum += u(i, j - 1);
        if (j + 1 < h) sum += u(i, j + 1);
        out(i, j) = (sum - ratio * r(i, j) - div(i, j)) / n;
      }
    }
  });
  return out;
}

ScalarField solve_u(const SolverState& state, const ScalarField& r, const SolverParams& params) {
  ScalarField next = jacobi_sweep(state.u, state.d, state.b, r, params.lambda, params.gamma);
  for (double& v : next) v = std::clamp(v, 0.0, 1.0);
  return next;
}

RegionAverages update_averages(const ScalarField& f, const ScalarField& u, double threshold) {
  require_same_shape(f, u, "update_averages");
  double sum1 = 0.0;
  double sum2 = 0.0;
  RegionAverages out;
  for (std::size_t k = 0; k < f.size(); ++k) {
    if (u[k] >= threshold) {
      sum1 += f[k];
      ++out.n1;
    } else {
      sum2 += f[k];
      ++out.n2;
    }
  }
  if (out.n1 > 0) out.c1 = sum1 / static_cast<double>(out.n1);
  if (out.n2 > 0) out.c2 = sum2 / static_cast<double>(out.n2);
  return out;
}

VectorField update_bregman(const VectorField& b, const ScalarField& u_next,
                           const VectorField& d_next, double tau) {
  require_same_shape(u_next, b.x, "update_bregman");
  require_same_shape(u_next, d_next.x, "update_bregman");
  const VectorField grad = gradient(u_next);
  VectorField out(b.width(), b.height());
  for (std::size_t k = 0; k < u_next.size(); ++k) {
    out.x[k] = b.x[k] + tau * (grad.x[k] - d_next.x[k]);
    out.y[k] = b.y[k] + tau * (grad.y[k] - d_next.y[k]);
  }
  return out;
}

double energy(const ScalarField& u, const ScalarField& f, const ScalarField& g, double c1,
              double c2, double lambda) {
  require_same_shape(u, f, "energy");
  require_same_shape(u, g, "energy");
  const VectorField grad = gradient(u);
  double tv = 0.0;
  double data = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    tv += g[k] * std::hypot(grad.x[k], grad.y[k]);
    const double a = f[k] - c1;
    const double b = f[k] - c2;
    data += (a * a - b * b) * u[k];
  }
  return tv + lambda * data;
}

ScalarField initialize(const ScalarField& f) {
  if (f.empty()) throw ContractError("initialize: empty image");
  const auto [lo, hi] = std::minmax_element(f.begin(), f.end());
  const double fmin = *lo;
  const double range = *hi - fmin;
  if (!(range > 0.0)) throw DegenerateInputError("initialize: constant image has no range");
  ScalarField u(f.width(), f.height());
  for (std::size_t k = 0; k < f.size(); ++k) u[k] = (f[k] - fmin) / range;
  return u;
}

StopDecision should_stop(std::span<const double> energy_trace, int m, double tol) {
  if (energy_trace.empty() || m < 1) return {};
  const std::size_t k = energy_trace.size() - 1;
  const auto window = static_cast<std::size_t>(m);
  if (k < window + 1) return {};

  double sum = 0.0;
  for (std::size_t l = k - window; l < k; ++l) sum += energy_trace[l];
  const double mean = sum / static_cast<double>(m);
  const double current = energy_trace[k];

  // A change inside the tolerance is reported as convergence even if it is a tiny rise;
  // otherwise rounding in the running mean turns a flat trace into "energy_rise".
  if (std::abs(current - mean) < tol * std::abs(energy_trace.front()))
    return {true, StopReason::tolerance_met};
  if (current > mean) return {true, StopReason::energy_rise};
  return {};
}

Mask threshold_mask(const ScalarField& u, double threshold) {
  Mask mask(u.width(), u.height());
  for (std::size_t k = 0; k < u.size(); ++k) mask[k] = u[k] >= threshold ? 1 : 0;
  return mask;
}

SegmentationResult segment(const ScalarField& f, const SolverParams& params,
                           const IterationObserver& observer) {
  params.validate();
  if (f.empty()) throw ContractError("segment: empty image");
  const auto start = std::chrono::steady_clock::now();
  const auto seconds_since_start = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };

  SegmentationResult result;
  const int w = f.width();
  const int h = f.height();

  SolverState state;
  try {
    state.u = initialize(f);
  } catch (const DegenerateInputError&) {
    // Nothing to separate: report everything as background.
    result.u_final = ScalarField(w, h, 0.0);
    result.mask = Mask(w, h, 0);
    result.c1 = result.c2 = f[0];
    result.energy_trace = {0.0};
    result.stop_reason = StopReason::tolerance_met;
    result.elapsed_seconds = seconds_since_start();
    return result;
  }

  const ScalarField g = edge_weight(f, params.weight);
  state.d = VectorField(w, h);
  state.b = VectorField(w, h);

  double fmean = 0.0;
  for (double v : f) fmean += v;
  fmean /= static_cast<double>(f.size());
  const RegionAverages initial = update_averages(f, state.u, params.threshold);
  state.c1 = initial.c1.value_or(fmean);
  state.c2 = initial.c2.value_or(fmean);
  state.energy_trace.push_back(energy(state.u, f, g, state.c1, state.c2, params.lambda));

  StopReason reason = StopReason::max_iters;
  while (state.iter < params.max_iters) {
    const ScalarField r = residual_field(f, state.c1, state.c2);
    ScalarField u_next = solve_u(state, r, params);
    VectorField d_next = solve_d(u_next, state.b, g, params.gamma);

    const RegionAverages avg = update_averages(f, u_next, params.threshold);
    state.c1 = avg.c1.value_or(state.c1);
    state.c2 = avg.c2.value_or(state.c2);

    state.b = update_bregman(state.b, u_next, d_next, params.tau);
    state.u = std::move(u_next);
    state.d = std::move(d_next);
    ++state.iter;

    const double e = energy(state.u, f, g, state.c1, state.c2, params.lambda);
    state.energy_trace.push_back(e);

    if (observer && params.snapshot_every > 0 && state.iter % params.snapshot_every == 0)
      observer(state.iter, state.u, e);

    const StopDecision decision = should_stop(state.energy_trace, params.avg_window, params.tol);
    if (decision.stop) {
      reason = decision.reason;
      break;
    }
  }

  result.mask = threshold_mask(state.u, params.threshold);
  result.u_final = std::move(state.u);
  result.c1 = state.c1;
  result.c2 = state.c2;
  result.energy_trace = std::move(state.energy_trace);
  result.iterations = state.iter;
  result.stop_reason = reason;
  result.elapsed_seconds = seconds_since_start();
  return result;
}

}  // namespace twophase
