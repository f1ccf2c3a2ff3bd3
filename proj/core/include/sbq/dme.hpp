#pragma once

// Density matrix exponentiation: approximating e^{-i sigma t} conjugation by
// n partial-SWAP interactions with fresh copies of sigma.

#include <cstdint>
#include <vector>

#include "sbq/channels.hpp"

namespace sbq {

struct DmeSchedule {
  double t = 0.0;
  int n = 1;
  double delta = 0.0;  // t / n
};

/// Requires t >= 0 and n > t (strictly); DomainError otherwise.
DmeSchedule dme_schedule(double t, int n);

/// rho -> e^{-i sigma t} rho e^{i sigma t}.
Channel ideal_unitary_channel(const DensityMatrix& sigma, double t);

/// One DME step with time step delta in [0, 1):
///   rho -> cos^2(delta) rho - i sin(2 delta)/2 [sigma, rho] + sin^2(delta) Tr[rho] sigma.
Channel dme_step_channel(const DensityMatrix& sigma, double delta);

/// Kraus operators of the same step, written in sigma's eigenbasis.
std::vector<ComplexMatrix> dme_step_kraus(const DensityMatrix& sigma, double delta);

namespace detail {
/// Closed-form step superoperator for any real delta, including the long
/// controlled evolutions of phase estimation.
ComplexMatrix dme_step_superop(const ComplexMatrix& sigma, double delta);
}  // namespace detail

/// dme_step_channel(sigma, delta)^n.
Channel dme_channel(const DensityMatrix& sigma, const DmeSchedule& sched);

/// Ascent lower bound on (1/2)||ideal - dme_channel||_diamond.
DiamondEstimate dme_error_estimate(const DensityMatrix& sigma, const DmeSchedule& sched, int restarts = 32,
                                   std::uint64_t seed = 0);

/// 4 t^2 / n; requires n > t.
double dme_bound(double t, int n);
/// ceil(4 t^2 / eps); eps in (0, 1].
long long dme_sample_bound(double t, double eps);

/// Unnormalised ||(id (x) U_delta)(rho) - (id (x) dme step)(rho)||_1 for rho on
/// C^d (x) C^d, with the channels acting on the second factor.
double single_step_defect(const DensityMatrix& sigma, const DensityMatrix& rho_rs, double delta);

}  // namespace sbq
