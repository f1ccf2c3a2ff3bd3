#pragma once

// Sample-complexity lower bounds: zero-error query complexity of qubit
// Hamiltonian pairs, and GHZ-based discrimination of Lindblad evolutions.

#include <utility>
#include <vector>

#include "sbq/linalg.hpp"
#include "sbq/wml.hpp"

namespace sbq {

/// rho = (I + r n.sigma)/2 and sigma = (I + r' n'.sigma)/2 with n.n' = dot.
struct QubitPairConstruction {
  double r = 0.0;
  double r_prime = 0.0;
  double dot = 1.0;
  double t = 1.0;

  /// Throws ValidationError on out-of-range fields.
  void validate() const;
  /// validate(), and additionally rejects a pair of identical states.
  void require_distinct() const;
  /// Explicit matrices: n along z, n' in the x-z plane.
  DensityMatrix rho() const;
  DensityMatrix sigma() const;
};

/// Equal Bloch lengths pointing in opposite directions.
QubitPairConstruction antipodal_pair(double r, double t);

/// Rotation angle of e^{i sigma t} e^{-i rho t}, in [0, pi].
double theta(const QubitPairConstruction& c);
/// Closed-form fidelity of the two qubit states.
double pair_fidelity(const QubitPairConstruction& c);

/// ceil(pi / (2 r t)).
int m_star(double r, double t);
/// Smallest m <= m_max with unitary_pair_diamond(e^{-i rho t}, e^{-i sigma t}, m)
/// equal to 1 within 1e-9. NotFoundError past m_max.
int m_star_bruteforce(const QubitPairConstruction& c, int m_max = 10000);

/// -ln[4 m eps (1 - m eps)] / (m (-ln F)); requires m eps <= 1/2, F in (0, 1).
double hamiltonian_lb_lemma(int m_star, double eps, double fid);

/// 0 < eps < min(9t/(100 pi), 1/10).
bool hamiltonian_lb_valid(double t, double eps);
/// 0.032 t^2 / eps inside the window; DomainError outside.
double hamiltonian_lb_theorem(double t, double eps);
/// The lemma evaluated on the antipodal pair with y0 = 0.19 - eps,
/// z = ceil(y0 / eps), r = pi/(2 z t). Same window as the theorem.
double hamiltonian_lb_chain(double t, double eps);
/// -ln(1 - x^2) / x^2.
double hamiltonian_lb_constant(double x);

/// diag(1, e^{i phi}) / sqrt(2).
LindbladSpec l_phi(double phi);

/// (|0..0> + |1..1>)(<0..0| + <1..1|)/2 on m qubits, m <= 12.
DensityMatrix ghz_state(int m);

/// (1/2)||[e^{tL_phi}]^{(x)m}(GHZ) - GHZ||_1 in closed form.
double ghz_distance_closed_form(int m, double t, double phi);
/// (1 + e^{-(mt/2)(1 - cos phi)})/2 with sin phi = 2 pi/(mt); requires mt >= 2 pi.
double nu_m_lower(int m, double t);

/// -ln[1 - (nu - 2 m eps)^2] / (m (-ln F)); requires nu >= 2 m eps.
double lindblad_lb_lemma(double nu_m, int m, double eps, double fid);

/// 0 < eps <= min(0.039, 0.013 t).
bool lindblad_lb_valid(double t, double eps);
/// 1e-4 t^2 / eps inside the window.
double lindblad_lb_theorem(double t, double eps);
/// 1.8e-4 t^2 / eps inside the window.
double lindblad_lb_proof_constant(double t, double eps);
/// The lemma on the L_phi / L_0 pair with m = floor(0.08 / eps).
double lindblad_lb_chain(double t, double eps);
/// Maximiser of (alpha/2)(-ln[1 - (1/2 - 2 alpha)^2]) over a grid on (0, 1/4].
std::pair<double, double> alpha_star_search(double grid_step = 1e-4);
/// -(1/x^2) ln((1 + sqrt(1 - x^2))/2); bounded by ln 2 on (0, 1].
double lindblad_lb_constant(double x);

struct GeneralLindbladBudget {
  std::vector<double> c_coeffs;
  std::vector<double> l_norms;
};

enum class BudgetCase { positive_hamiltonian, negative_hamiltonian, dissipative };

/// sum |c_j| + sum ||L_k||_2^2.
double budget_c(const GeneralLindbladBudget& b);
/// First case, in declaration order, whose mass reaches c/3.
BudgetCase classify_case(const GeneralLindbladBudget& b);

}  // namespace sbq
