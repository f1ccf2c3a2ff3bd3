#pragma once

// Wave matrix Lindbladization for a single Lindblad operator L: the target
// semigroup e^{tL} is approached by n interactions of rho with copies of the
// program state (L (x) I)|Gamma> under a fixed generator on three systems.

#include <cstdint>
#include <utility>

#include "sbq/channels.hpp"
#include "sbq/dme.hpp"

namespace sbq {

inline constexpr int kWmlDefaultMaxDim = 3;

/// Lindblad operator with unit Frobenius norm.
class LindbladSpec {
 public:
  /// Validates squareness, d >= 2 and ||L||_2 = 1 within 1e-12.
  explicit LindbladSpec(const ComplexMatrix& l);
  /// Rescales a non-zero L to unit Frobenius norm.
  static LindbladSpec normalized(const ComplexMatrix& l);

  int dim() const noexcept { return static_cast<int>(l_.rows()); }
  const ComplexMatrix& l() const noexcept { return l_; }

 private:
  ComplexMatrix l_;
};

/// Ginibre L, normalised.
LindbladSpec random_lindblad(int d, std::uint64_t seed);

/// (L (x) I) sum_j |j>|j>; entry L_ij sits at index i*d + j.
PureState program_state(const LindbladSpec& spec);

/// Superoperator of X -> A X A^dag - (1/2){A^dag A, X} for any square A.
ComplexMatrix lindblad_form_superop(const ComplexMatrix& a);

HermitianPreservingMap lindbladian_superop(const LindbladSpec& spec);
/// e^{t L}; t >= 0.
Channel ideal_lindblad_channel(const LindbladSpec& spec, double t);

struct MOperator {
  int d = 0;
  ComplexMatrix m;  // d^3 x d^3
};

/// M = d^{-1/2} (I_1 (x) |Gamma><Gamma|_23)(SWAP_12 (x) I_3).
MOperator m_operator(int d);
/// Lindblad-form generator of M on the three systems.
HermitianPreservingMap m_lindbladian_superop(int d);

/// rho -> Tr_23[e^{Delta M}(rho (x) psi_L)]; requires Delta in [0, 1/(2d)).
/// e^{Delta M} is cached per (d, Delta).
Channel wml_step_channel(const LindbladSpec& spec, double delta, int max_dim = kWmlDefaultMaxDim);

/// Schedule with the stronger hypothesis n > 2 d t.
DmeSchedule wml_schedule(double t, int n, int d);

Channel wml_channel(const LindbladSpec& spec, const DmeSchedule& sched, int max_dim = kWmlDefaultMaxDim);
/// Ascent lower bound on (1/2)||e^{tL} - wml_channel||_diamond.
DiamondEstimate wml_error_estimate(const LindbladSpec& spec, const DmeSchedule& sched, int restarts = 32,
                                   std::uint64_t seed = 0, int max_dim = kWmlDefaultMaxDim);

/// 3 t^2 d^2 / n; requires n > 2 d t.
double wml_bound(double t, int n, int d);
/// ceil(3 d^2 t^2 / eps); eps in (0, 1].
long long wml_sample_bound(double t, double eps, int d);

/// Ascent lower estimates of (||L||_diamond, ||M||_diamond). Throws
/// ValidationError if either exceeds its ceiling 2 or 2d by more than 1e-6.
std::pair<double, double> superop_diamond_ceilings(const LindbladSpec& spec, const AscentOptions& l_opts = {},
                                                   const AscentOptions& m_opts = {});

}  // namespace sbq
