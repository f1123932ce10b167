#include "gpm/test_field.hpp"

#include <cmath>

#include "gpm/errors.hpp"
#include "gpm/gaussian.hpp"

namespace gpm {

TestField::TestField(int dim, int degree, int components, NormControl control)
    : dim_(dim),
      components_(components),
      control_(control),
      basis_(std::make_shared<HermiteBasis>(dim, degree)) {
  require(dim >= 1 && dim <= kMaxDim, "TestField: bad dimension");
  require(components >= 1 && components <= dim, "TestField: need 1 <= components <= dim");
  coeffs_.assign(static_cast<std::size_t>(components) * basis_->size(), 0.0);
}

TestField TestField::constant(std::span<const double> value) {
  TestField f(static_cast<int>(value.size()), 0, static_cast<int>(value.size()), NormControl::none);
  for (std::size_t i = 0; i < value.size(); ++i) f.coeffs_[i] = value[i];
  return f;
}

std::string TestField::norm_control_description() const {
  if (control_ == NormControl::none) return "none (raw polynomial)";
  return "smooth clamp P/(1+|P|^8)^(1/8), gain exp(" + std::to_string(log_gain_) + ")";
}

void TestField::set_log_gain(double g) {
  log_gain_ = g;
  gain_ = std::exp(g);
}

Vec TestField::parameters() const {
  Vec p = coeffs_;
  p.push_back(log_gain_);
  return p;
}

void TestField::set_parameters(std::span<const double> params) {
  require_dim(params.size(), parameter_count(), "TestField::set_parameters");
  std::copy(params.begin(), params.end() - 1, coeffs_.begin());
  set_log_gain(params.back());
}

double& TestField::coefficient(int component, std::span<const int> alpha) {
  require(component >= 0 && component < components_, "TestField::coefficient: bad component");
  return coeffs_[static_cast<std::size_t>(component) * basis_->size() + basis_->index_of(alpha)];
}

void TestField::set_constant(int component, double value) {
  std::vector<int> alpha(static_cast<std::size_t>(dim_), 0);
  coefficient(component, alpha) = value;
}

void TestField::set_linear(int component, int var, double value) {
  require(var >= 0 && var < dim_, "TestField::set_linear: bad variable");
  require(basis_->degree() >= 1, "TestField::set_linear: degree must be at least 1");
  std::vector<int> alpha(static_cast<std::size_t>(dim_), 0);
  alpha[static_cast<std::size_t>(var)] = 1;
  coefficient(component, alpha) = value;
}

FieldWorkspace TestField::make_workspace() const {
  const std::size_t m = static_cast<std::size_t>(dim_);
  const std::size_t c = static_cast<std::size_t>(components_);
  const std::size_t d1 = static_cast<std::size_t>(basis_->degree()) + 1;
  const std::size_t nb = basis_->size();
  FieldWorkspace ws;
  ws.h.resize(m * d1);
  ws.dh.resize(m * d1);
  ws.phi.resize(nb);
  ws.dphi.resize(nb * std::max<std::size_t>(d1 - 1, 1));
  ws.p.resize(c);
  ws.jac.resize(c * c);
  ws.dp.resize(c);
  ws.djac.resize(c * c);
  ws.jp.resize(c);
  ws.jtp.resize(c);
  return ws;
}

void TestField::evaluate_polynomial(std::span<const double> z, FieldWorkspace& ws, bool with_jacobian) const {
  const int deg = basis_->degree();
  const std::size_t d1 = static_cast<std::size_t>(deg) + 1;
  const std::size_t dstride = std::max<std::size_t>(d1 - 1, 1);
  const std::size_t nb = basis_->size();
  const std::size_t c = static_cast<std::size_t>(components_);
  for (int j = 0; j < dim_; ++j) {
    double* h = ws.h.data() + static_cast<std::size_t>(j) * d1;
    hermite_normalized(z[static_cast<std::size_t>(j)], deg, h);
    double* dh = ws.dh.data() + static_cast<std::size_t>(j) * d1;
    dh[0] = 0.0;
    for (int n = 1; n <= deg; ++n) dh[n] = std::sqrt(static_cast<double>(n)) * h[n - 1];
  }
  std::fill(ws.p.begin(), ws.p.end(), 0.0);
  if (with_jacobian) std::fill(ws.jac.begin(), ws.jac.end(), 0.0);

  for (std::size_t a = 0; a < nb; ++a) {
    const auto sup = basis_->support(a);
    double phi = 1.0;
    for (const auto& f : sup) phi *= ws.h[static_cast<std::size_t>(f.var) * d1 + static_cast<std::size_t>(f.power)];
    ws.phi[a] = phi;
    for (std::size_t i = 0; i < c; ++i) ws.p[i] += coeffs_[i * nb + a] * phi;
    if (!with_jacobian) continue;
    for (std::size_t s = 0; s < sup.size(); ++s) {
      const auto v = static_cast<std::size_t>(sup[s].var);
      double d = 0.0;
      if (v < c) {
        d = ws.dh[v * d1 + static_cast<std::size_t>(sup[s].power)];
        for (std::size_t t = 0; t < sup.size(); ++t)
          if (t != s) d *= ws.h[static_cast<std::size_t>(sup[t].var) * d1 + static_cast<std::size_t>(sup[t].power)];
        for (std::size_t i = 0; i < c; ++i) ws.jac[i * c + v] += coeffs_[i * nb + a] * d;
      }
      ws.dphi[a * dstride + s] = d;
    }
  }
  for (std::size_t i = 0; i < c; ++i) ws.p[i] *= gain_;
  if (with_jacobian)
    for (double& v : ws.jac) v *= gain_;
}

void TestField::clamp_factors(double s, double& psi, double& dpsi, double& ddpsi) const {
  if (control_ == NormControl::none) {
    psi = 1.0;
    dpsi = 0.0;
    ddpsi = 0.0;
    return;
  }
  if (s > 1e30) {
    psi = 1.0 / std::sqrt(s);
    dpsi = -0.5 * psi / s;
    ddpsi = 0.75 * psi / (s * s);
    return;
  }
  const double s2 = s * s;
  const double s3 = s2 * s;
  const double u = 1.0 + s2 * s2;
  const double u18 = std::pow(u, -0.125);
  const double u98 = u18 / u;
  psi = u18;
  dpsi = -0.5 * s3 * u98;
  ddpsi = -1.5 * s2 * u98 + 2.25 * s3 * s3 * u98 / u;
}

Vec TestField::value(std::span<const double> z) const {
  FieldWorkspace ws = make_workspace();
  Vec out(static_cast<std::size_t>(dim_));
  value(z, ws, out);
  return out;
}

void TestField::value(std::span<const double> z, FieldWorkspace& ws, std::span<double> out) const {
  require_dim(z.size(), static_cast<std::size_t>(dim_), "TestField::value");
  evaluate_polynomial(z, ws, false);
  double psi, dpsi, ddpsi;
  clamp_factors(norm_sq(ws.p), psi, dpsi, ddpsi);
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t i = 0; i < ws.p.size(); ++i) out[i] = psi * ws.p[i];
}

double TestField::divergence_star(std::span<const double> z) const {
  FieldWorkspace ws = make_workspace();
  return divergence_star(z, ws, {});
}

double TestField::divergence_star(std::span<const double> z, FieldWorkspace& ws, std::span<double> grad) const {
  require_dim(z.size(), static_cast<std::size_t>(dim_), "TestField::divergence_star");
  evaluate_polynomial(z, ws, true);
  const std::size_t c = static_cast<std::size_t>(components_);
  const auto& p = ws.p;
  const auto& jac = ws.jac;

  double s = 0.0, pz = 0.0, tr = 0.0, q_form = 0.0;
  for (std::size_t i = 0; i < c; ++i) {
    s += p[i] * p[i];
    pz += p[i] * z[i];
    tr += jac[i * c + i];
    double jp = 0.0, jtp = 0.0;
    for (std::size_t j = 0; j < c; ++j) {
      jp += jac[i * c + j] * p[j];
      jtp += jac[j * c + i] * p[j];
    }
    ws.jp[i] = jp;
    ws.jtp[i] = jtp;
    q_form += p[i] * jp;
  }
  double psi, dpsi, ddpsi;
  clamp_factors(s, psi, dpsi, ddpsi);
  const double q = pz - tr;
  const double f = psi * q - 2.0 * dpsi * q_form;
  if (grad.empty()) return f;

  require_dim(grad.size(), parameter_count(), "TestField::divergence_star gradient");
  for (std::size_t i = 0; i < c; ++i) {
    ws.dp[i] = 2.0 * p[i] * dpsi * q + psi * z[i] - 4.0 * p[i] * ddpsi * q_form -
               2.0 * dpsi * (ws.jp[i] + ws.jtp[i]);
    for (std::size_t j = 0; j < c; ++j)
      ws.djac[i * c + j] = -(i == j ? psi : 0.0) - 2.0 * dpsi * p[i] * p[j];
  }
  const std::size_t nb = basis_->size();
  const std::size_t dstride = std::max<std::size_t>(static_cast<std::size_t>(basis_->degree()), 1);
  for (std::size_t a = 0; a < nb; ++a) {
    const auto sup = basis_->support(a);
    for (std::size_t i = 0; i < c; ++i) {
      double g = ws.dp[i] * ws.phi[a];
      for (std::size_t t = 0; t < sup.size(); ++t) {
        const auto v = static_cast<std::size_t>(sup[t].var);
        if (v < c) g += ws.djac[i * c + v] * ws.dphi[a * dstride + t];
      }
      grad[i * nb + a] = gain_ * g;
    }
  }
  double dg = 0.0;
  for (std::size_t i = 0; i < c; ++i) {
    dg += ws.dp[i] * p[i];
    for (std::size_t j = 0; j < c; ++j) dg += ws.djac[i * c + j] * jac[i * c + j];
  }
  grad[nb * c] = dg;
  return f;
}

}  // namespace gpm
