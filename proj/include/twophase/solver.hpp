#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "twophase/field.hpp"
#include "twophase/weight.hpp"

namespace twophase {

/// Model and iteration parameters of the split Bregman segmentation.
struct SolverParams {
  double lambda = 1.0;     ///< Data-fidelity weight.
  double gamma = 0.1;      ///< Penalty on d - grad(u) - b.
  double tau = 0.01;       ///< Bregman update step.
  int avg_window = 10;     ///< Number of past energies averaged by the stopping test.
  double tol = 1e-4;       ///< Relative energy tolerance (scaled by |E^0|).
  int max_iters = 10000;
  int snapshot_every = 0;  ///< Observer period; 0 disables it.
  double threshold = 0.5;  ///< u >= threshold is foreground.
  WeightParams weight;

  /// Throws ParameterError naming the first offending field.
  void validate() const;
};

enum class StopReason { none, energy_rise, tolerance_met, max_iters };

std::string_view to_string(StopReason reason) noexcept;

struct SolverState {
  ScalarField u;
  VectorField d;
  VectorField b;
  double c1 = 0.0;
  double c2 = 0.0;
  std::vector<double> energy_trace;
  int iter = 0;
};

struct SegmentationResult {
  Mask mask;
  ScalarField u_final;
  double c1 = 0.0;
  double c2 = 0.0;
  std::vector<double> energy_trace;
  int iterations = 0;
  StopReason stop_reason = StopReason::none;
  double elapsed_seconds = 0.0;
};

/// Region means for u >= threshold (c1) and u < threshold (c2).
/// An empty region leaves its mean unset; the caller keeps the previous value.
struct RegionAverages {
  std::optional<double> c1;
  std::optional<double> c2;
  std::size_t n1 = 0;
  std::size_t n2 = 0;
};

struct StopDecision {
  bool stop = false;
  StopReason reason = StopReason::none;
};

/// Called synchronously with (iteration, u, energy).
using IterationObserver = std::function<void(int, const ScalarField&, double)>;

/// r = (f - c1)^2 - (f - c2)^2.
ScalarField residual_field(const ScalarField& f, double c1, double c2);

/// Scalar shrinkage of z = grad(u) + b: z/|z| * max(|z| - g/gamma, 0), zero where z == 0.
VectorField solve_d(const ScalarField& u, const VectorField& b, const ScalarField& g, double gamma);

/// One Jacobi sweep for laplacian(u) = (lambda/gamma) r + div(d - b), without clamping.
/// Uses the exact composed stencil, so boundary pixels divide by 3 or 2 instead of 4.
/// A pixel with no neighbours (1x1 grid) keeps its value.
ScalarField jacobi_sweep(const ScalarField& u, const VectorField& d, const VectorField& b,
                         const ScalarField& r, double lambda, double gamma);

/// jacobi_sweep() on the state's u, d, b followed by clamping to [0, 1].
ScalarField solve_u(const SolverState& state, const ScalarField& r, const SolverParams& params);

RegionAverages update_averages(const ScalarField& f, const ScalarField& u, double threshold);

/// b + tau * (grad(u_next) - d_next).
VectorField update_bregman(const VectorField& b, const ScalarField& u_next,
                           const VectorField& d_next, double tau);

/// Discrete energy sum(g |grad u|) + lambda * sum(r u). Can be negative.
double energy(const ScalarField& u, const ScalarField& f, const ScalarField& g, double c1,
              double c2, double lambda);

/// Min-max normalised copy of f. Throws DegenerateInputError for a constant image.
ScalarField initialize(const ScalarField& f);

/// Stopping rule on the energy trace E^0..E^k.
///
/// No decision before m+1 iterations (k >= m+1). Then, with Ebar the mean of
/// E^{k-m}..E^{k-1}, stops on |E^k - Ebar| < tol |E^0| (tolerance_met) or on
/// E^k > Ebar (energy_rise). When both hold the reason is tolerance_met.
StopDecision should_stop(std::span<const double> energy_trace, int m, double tol);

Mask threshold_mask(const ScalarField& u, double threshold);

/// Runs the full split Bregman segmentation of f (intensities in [0, 1]).
SegmentationResult segment(const ScalarField& f, const SolverParams& params,
                           const IterationObserver& observer = {});

}  // namespace twophase
