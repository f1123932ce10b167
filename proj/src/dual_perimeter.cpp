#include "gpm/dual_perimeter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "gpm/errors.hpp"
#include "gpm/gaussian.hpp"
#include "gpm/kernels.hpp"
#include "gpm/rng.hpp"

namespace gpm {

namespace {

constexpr double kAdmissibleSlack = 1e-12;

enum SeedTag : std::uint64_t { kTrainTag = 1, kEvalTag = 2 };

Vec centered_weights(const std::vector<std::uint8_t>& flags, double kappa) {
  Vec w(flags.size());
  for (std::size_t i = 0; i < flags.size(); ++i) w[i] = (flags[i] ? 1.0 : 0.0) - kappa;
  return w;
}

bool all_finite(std::span<const double> xs) {
  return std::all_of(xs.begin(), xs.end(), [](double x) { return std::isfinite(x); });
}

[[noreturn]] void fail_optimization(int iteration, double objective, const TestField& field) {
  double coeff_norm = 0.0;
  for (double c : field.coefficients()) coeff_norm += c * c;
  std::ostringstream msg;
  msg << "dual optimizer diverged at iteration " << iteration << ": objective=" << objective
      << ", log_gain=" << field.log_gain() << ", |coefficients|=" << std::sqrt(coeff_norm);
  throw OptimizationError(msg.str());
}

}  // namespace

std::string to_string(PerimeterMethod method) {
  switch (method) {
    case PerimeterMethod::dual: return "dual";
    case PerimeterMethod::quadrature: return "quadrature";
    case PerimeterMethod::covering: return "covering";
  }
  return "unknown";
}

MeanEstimate estimate_dual_objective(const ImplicitSet& set, const TestField& field, std::size_t n,
                                     std::uint64_t seed) {
  require(set.dim() == field.dim(), "estimate_dual_objective: dimension mismatch");
  if (n == 0) throw EmptyBatchError("estimate_dual_objective: n must be at least 1");
  const SampleBatch batch = sample(GaussianSpace(set.dim()), n, seed);
  if (field.norm_control() == NormControl::none) {
    const double sup = kernels::parallel::max_field_norm(field, batch);
    require(sup <= 1.0 + kAdmissibleSlack,
            "estimate_dual_objective: field exceeds unit norm (max " + std::to_string(sup) + ")");
  }
  const auto flags = kernels::parallel::membership(set, batch);
  const Vec weights = centered_weights(flags, 0.0);
  return kernels::parallel::dual_sums(field, batch, weights, false).objective.estimate();
}

TestField make_admissible(const TestField& raw, std::size_t n, std::uint64_t seed) {
  const SampleBatch batch = sample(GaussianSpace(raw.dim()), n, seed);
  TestField plain = raw;
  if (plain.norm_control() == NormControl::smooth_clamp) {
    // Measure the polynomial part only.
    TestField unclamped(raw.dim(), raw.degree(), raw.components(), NormControl::none);
    std::copy(raw.coefficients().begin(), raw.coefficients().end(), unclamped.coefficients().begin());
    unclamped.set_log_gain(raw.log_gain());
    plain = unclamped;
  }
  const double sup = kernels::parallel::max_field_norm(plain, batch);
  TestField out(raw.dim(), raw.degree(), raw.components(), NormControl::smooth_clamp);
  std::copy(raw.coefficients().begin(), raw.coefficients().end(), out.coefficients().begin());
  out.set_log_gain(plain.log_gain() - (sup > 1.0 ? std::log(sup) : 0.0));
  return out;
}

DualResult optimize_dual_field(const ImplicitSet& set, const DualOptions& options) {
  require(options.degree >= 0, "optimize_dual_field: degree must be nonnegative");
  require(options.iterations >= 1, "optimize_dual_field: iterations must be at least 1");
  require(options.samples >= 2, "optimize_dual_field: need at least 2 samples");
  require(options.eval_factor >= 1, "optimize_dual_field: eval_factor must be at least 1");
  const int m = set.dim();
  const int comps = options.components == 0 ? m : options.components;
  require(comps >= 1 && comps <= m, "optimize_dual_field: components out of range");

  const GaussianSpace space(m);
  DualResult result{{}, TestField(m, options.degree, comps, NormControl::smooth_clamp), 0.0, {}};
  result.estimate.method = PerimeterMethod::dual;
  result.estimate.samples = options.samples;
  result.estimate.iterations = options.iterations;
  result.estimate.seed = options.seed;

  const SampleBatch train = sample(space, options.samples, derive_seed(options.seed, kTrainTag));
  const auto flags = kernels::parallel::membership(set, train);
  const auto inside = static_cast<std::size_t>(std::count(flags.begin(), flags.end(), 1));
  if (inside == 0 || inside == flags.size()) return result;  // the objective vanishes identically
  const double kappa = static_cast<double>(inside) / static_cast<double>(flags.size());
  const Vec weights = centered_weights(flags, kappa);

  TestField& field = result.field;
  const std::size_t np = field.parameter_count();
  Vec theta = field.parameters();
  Vec best_theta = theta;
  double best = -std::numeric_limits<double>::infinity();
  Vec m1(np, 0.0), m2(np, 0.0);
  constexpr double kBeta1 = 0.9, kBeta2 = 0.999, kEps = 1e-12;
  double b1 = 1.0, b2 = 1.0;

  for (int it = 0; it < options.iterations; ++it) {
    const kernels::DualSums sums = kernels::parallel::dual_sums(field, train, weights, true);
    const double objective = sums.objective.mean();
    if (!std::isfinite(objective) || !all_finite(sums.gradient)) fail_optimization(it, objective, field);
    result.trace.push_back(objective);
    if (objective > best) {
      best = objective;
      best_theta = theta;
    }
    // Constant rate for the first half, then linear decay to a tenth.
    const double frac = static_cast<double>(it) / static_cast<double>(options.iterations);
    const double lr = options.learning_rate * (frac < 0.5 ? 1.0 : 1.0 - 1.8 * (frac - 0.5));
    b1 *= kBeta1;
    b2 *= kBeta2;
    for (std::size_t p = 0; p < np; ++p) {
      const double g = sums.gradient[p];
      m1[p] = kBeta1 * m1[p] + (1.0 - kBeta1) * g;
      m2[p] = kBeta2 * m2[p] + (1.0 - kBeta2) * g * g;
      theta[p] += lr * (m1[p] / (1.0 - b1)) / (std::sqrt(m2[p] / (1.0 - b2)) + kEps);
    }
    field.set_parameters(theta);
  }

  field.set_parameters(best_theta);
  result.training_value = best;
  const SampleBatch fresh =
      sample(space, options.samples * options.eval_factor, derive_seed(options.seed, kEvalTag));
  const Vec fresh_weights = centered_weights(kernels::parallel::membership(set, fresh), kappa);
  const MeanEstimate est = kernels::parallel::dual_sums(field, fresh, fresh_weights, false).objective.estimate();
  if (!std::isfinite(est.value)) fail_optimization(options.iterations, est.value, field);
  result.estimate.value = std::max(est.value, 0.0);
  result.estimate.std_error = est.std_error;
  return result;
}

PerimeterEstimate maximize_perimeter(const ImplicitSet& set, int degree, int iterations, std::size_t n,
                                     std::uint64_t seed) {
  DualOptions options;
  options.degree = degree;
  options.iterations = iterations;
  options.samples = n;
  options.seed = seed;
  return optimize_dual_field(set, options).estimate;
}

PerimeterEstimate surface_perimeter_oracle(const ImplicitSet& set, int order) {
  const auto& charts = set.charts();
  const SurfaceIntegral s = integrate_charts_refined(
      charts, order, [](std::span<const double> x, std::span<const double>) { return gaussian_density(x); });
  PerimeterEstimate est;
  est.value = s.value;
  est.std_error = s.error;
  est.method = PerimeterMethod::quadrature;
  est.samples = static_cast<std::size_t>(order);
  return est;
}

GaussGreenResidual gauss_green_residual(const ImplicitSet& set, const TestField& field, std::size_t n,
                                        std::uint64_t seed, int order) {
  require(set.dim() == field.dim(), "gauss_green_residual: dimension mismatch");
  if (!set.has_normal_field()) throw UnsupportedError("gauss_green_residual: set has no normal field");
  const auto& charts = set.charts();
  GaussGreenResidual r;
  const MeanEstimate lhs = estimate_dual_objective(set, field, n, seed);
  r.lhs = lhs.value;
  r.lhs_std_error = lhs.std_error;
  // sigma_A is the inner normal, i.e. minus the chart's outward normal.
  const SurfaceIntegral rhs = integrate_charts_refined(
      charts, order, [&field](std::span<const double> x, std::span<const double> outward) {
        const Vec g = field.value(x);
        return -dot(g, outward) * gaussian_density(x);
      });
  r.rhs = rhs.value;
  r.rhs_error = rhs.error;
  r.residual = r.lhs - r.rhs;
  r.std_error = std::hypot(r.lhs_std_error, r.rhs_error);
  return r;
}

}  // namespace gpm
