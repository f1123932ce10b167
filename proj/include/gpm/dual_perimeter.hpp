#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "gpm/set_model.hpp"
#include "gpm/stats.hpp"
#include "gpm/test_field.hpp"

namespace gpm {

enum class PerimeterMethod { dual, quadrature, covering };

std::string to_string(PerimeterMethod method);

struct PerimeterEstimate {
  double value = 0.0;
  double std_error = 0.0;
  PerimeterMethod method = PerimeterMethod::dual;
  std::size_t samples = 0;  // training samples, quadrature nodes per axis, or cloud size
  int iterations = 0;
  std::uint64_t seed = 0;
};

/// Monte Carlo mean of 1_A(z) grad*G(z) over n Gaussian samples.
/// Throws ContractError if the field exceeds unit norm on the batch.
MeanEstimate estimate_dual_objective(const ImplicitSet& set, const TestField& field, std::size_t n,
                                     std::uint64_t seed);

/// Copy of `raw` rescaled by its largest norm over n Gaussian samples and
/// passed through the smooth clamp, so |G| < 1 everywhere.
TestField make_admissible(const TestField& raw, std::size_t n, std::uint64_t seed);

struct DualOptions {
  int degree = 6;
  int iterations = 200;
  std::size_t samples = 100000;
  std::uint64_t seed = 1;
  /// Number of leading coordinates the field may point along; 0 means all.
  int components = 0;
  double learning_rate = 0.08;
  /// The reported value is re-estimated on this many times `samples` fresh points.
  std::size_t eval_factor = 4;
};

struct DualResult {
  PerimeterEstimate estimate;
  TestField field;
  double training_value = 0.0;  // best objective on the training pool (optimistic)
  Vec trace;                    // training objective per iteration
};

/// Gradient ascent of the dual objective over squashed Hermite fields.
///
/// The training pool is fixed (common random numbers) and the objective uses
/// the weights 1_A - kappa with kappa the pool fraction in A; since
/// E[grad*G] = 0 this keeps the mean and removes most of the variance. The
/// best iterate is re-evaluated on independent samples.
DualResult optimize_dual_field(const ImplicitSet& set, const DualOptions& options);

PerimeterEstimate maximize_perimeter(const ImplicitSet& set, int degree, int iterations, std::size_t n,
                                     std::uint64_t seed);

/// Gaussian-weighted surface area of the charted boundary; std_error holds
/// the quadrature refinement difference.
PerimeterEstimate surface_perimeter_oracle(const ImplicitSet& set, int order = 48);

struct GaussGreenResidual {
  double lhs = 0.0;  // Monte Carlo of int_A grad*G dmu
  double lhs_std_error = 0.0;
  double rhs = 0.0;  // quadrature of int <G, sigma_A> dtheta over the boundary
  double rhs_error = 0.0;
  double residual = 0.0;
  double std_error = 0.0;  // combined
};

GaussGreenResidual gauss_green_residual(const ImplicitSet& set, const TestField& field, std::size_t n,
                                        std::uint64_t seed, int order = 48);

}  // namespace gpm
