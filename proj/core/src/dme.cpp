#include "sbq/dme.hpp"

#include <cmath>

#include "sbq/errors.hpp"

namespace sbq {

DmeSchedule dme_schedule(double t, int n) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("dme schedule: t must be finite and non-negative");
  if (n < 1) throw DomainError("dme schedule: n must be positive");
  if (!(static_cast<double>(n) > t)) {
    throw DomainError("hypothesis n > t violated");
  }
  return {t, n, t / n};
}

Channel ideal_unitary_channel(const DensityMatrix& sigma, double t) {
  if (!(t >= 0.0)) throw DomainError("ideal_unitary_channel: t must be non-negative");
  return channel_from_unitary(unitary_evolution(sigma.hermitian(), t));
}

namespace detail {

ComplexMatrix dme_step_superop(const ComplexMatrix& sigma, double delta) {
  const Eigen::Index d = sigma.rows();
  const double c2 = std::cos(delta) * std::cos(delta);
  const double s2 = std::sin(delta) * std::sin(delta);
  const double half_s2d = 0.5 * std::sin(2.0 * delta);
  const ComplexMatrix id = identity(d);
  const ComplexMatrix comm = kron(id, sigma) - kron(sigma.transpose().eval(), id);
  const ComplexVector vs = Eigen::Map<const ComplexVector>(sigma.data(), d * d);
  const ComplexVector vi = Eigen::Map<const ComplexVector>(id.data(), d * d);
  ComplexMatrix s = c2 * identity(d * d) - cplx(0.0, half_s2d) * comm;
  s += s2 * vs * vi.transpose();
  return s;
}

}  // namespace detail

namespace {

void check_delta(double delta) {
  if (!(delta >= 0.0 && delta < 1.0)) throw DomainError("dme step: delta must lie in [0, 1)");
}

}  // namespace

Channel dme_step_channel(const DensityMatrix& sigma, double delta) {
  check_delta(delta);
  return trusted_channel(sigma.dim(), sigma.dim(), detail::dme_step_superop(sigma.matrix(), delta));
}

std::vector<ComplexMatrix> dme_step_kraus(const DensityMatrix& sigma, double delta) {
  check_delta(delta);
  const int d = sigma.dim();
  const auto eig = hermitian_eig(sigma.hermitian());
  const double c = std::cos(delta), s = std::sin(delta);
  std::vector<ComplexMatrix> ks;
  for (int k = 0; k < d; ++k) {
    const double p = std::max(0.0, eig.eigenvalues(k));
    if (p == 0.0) continue;
    const double w = std::sqrt(p);
    for (int l = 0; l < d; ++l) {
      ComplexMatrix op = cplx(0.0, -s) * eig.eigenvectors.col(k) * eig.eigenvectors.col(l).adjoint();
      if (k == l) op += c * identity(d);
      ks.push_back(w * op);
    }
  }
  return ks;
}

Channel dme_channel(const DensityMatrix& sigma, const DmeSchedule& sched) {
  return power(dme_step_channel(sigma, sched.delta), sched.n);
}

DiamondEstimate dme_error_estimate(const DensityMatrix& sigma, const DmeSchedule& sched, int restarts,
                                   std::uint64_t seed) {
  const Channel ideal = ideal_unitary_channel(sigma, sched.t);
  const Channel approx = dme_channel(sigma, sched);
  AscentOptions opts;
  opts.restarts = restarts;
  opts.seed = seed;
  return diamond_lower_ascent(ideal - approx, opts);
}

double dme_bound(double t, int n) {
  const DmeSchedule s = dme_schedule(t, n);
  return 4.0 * s.t * s.t / s.n;
}

long long dme_sample_bound(double t, double eps) {
  if (!(t >= 0.0)) throw DomainError("dme_sample_bound: t must be non-negative");
  if (!(eps > 0.0 && eps <= 1.0)) throw DomainError("dme_sample_bound: eps must lie in (0, 1]");
  return static_cast<long long>(std::ceil(4.0 * t * t / eps - 1e-9));
}

double single_step_defect(const DensityMatrix& sigma, const DensityMatrix& rho_rs, double delta) {
  check_delta(delta);
  const int d = sigma.dim();
  if (rho_rs.dim() != d * d) throw DimensionError("single_step_defect: rho must live on C^d (x) C^d");
  const Channel ideal = ideal_unitary_channel(sigma, delta);
  const Channel step = dme_step_channel(sigma, delta);
  return trace_norm((ideal - step).apply_extended(rho_rs.matrix(), d));
}

}  // namespace sbq
