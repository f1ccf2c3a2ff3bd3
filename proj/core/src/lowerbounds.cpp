#include "sbq/lowerbounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "sbq/channels.hpp"
#include "sbq/errors.hpp"

namespace sbq {

namespace {

constexpr double kPi = std::numbers::pi;

// ceil that ignores rounding noise just above an integer.
int robust_ceil(double x) { return static_cast<int>(std::ceil(x - 1e-9)); }

DensityMatrix bloch_state(double x, double z) {
  ComplexMatrix m(2, 2);
  m << 0.5 * (1.0 + z), 0.5 * x, 0.5 * x, 0.5 * (1.0 - z);
  return DensityMatrix(m);
}

std::string window_text(double hi, bool closed) {
  return "(0, " + std::to_string(hi) + (closed ? "]" : ")");
}

}  // namespace

void QubitPairConstruction::validate() const {
  if (!(r >= 0.0 && r <= 1.0) || !(r_prime >= 0.0 && r_prime <= 1.0)) {
    throw ValidationError("Bloch lengths must lie in [0, 1]");
  }
  if (!(dot >= -1.0 && dot <= 1.0)) throw ValidationError("direction cosine must lie in [-1, 1]");
  if (!(t > 0.0)) throw ValidationError("evolution time must be positive");
}

void QubitPairConstruction::require_distinct() const {
  validate();
  if (r == r_prime && (dot == 1.0 || r == 0.0)) throw ValidationError("the two states coincide");
}

DensityMatrix QubitPairConstruction::rho() const { return bloch_state(0.0, r); }

DensityMatrix QubitPairConstruction::sigma() const {
  const double sin_b = std::sqrt(std::max(0.0, 1.0 - dot * dot));
  return bloch_state(r_prime * sin_b, r_prime * dot);
}

QubitPairConstruction antipodal_pair(double r, double t) {
  QubitPairConstruction c{r, r, -1.0, t};
  c.require_distinct();
  return c;
}

double theta(const QubitPairConstruction& c) {
  c.validate();
  const double a = 0.5 * c.r * c.t, b = 0.5 * c.r_prime * c.t;
  const double x = std::cos(a) * std::cos(b) + std::sin(a) * std::sin(b) * c.dot;
  return std::acos(std::clamp(x, -1.0, 1.0));
}

double pair_fidelity(const QubitPairConstruction& c) {
  c.validate();
  return 0.5 * (1.0 + c.r * c.r_prime * c.dot +
                std::sqrt((1.0 - c.r * c.r) * (1.0 - c.r_prime * c.r_prime)));
}

int m_star(double r, double t) {
  if (!(r > 0.0 && r <= 1.0)) throw DomainError("m_star: r must lie in (0, 1]");
  if (!(t > 0.0)) throw DomainError("m_star: t must be positive");
  return std::max(1, robust_ceil(kPi / (2.0 * r * t)));
}

int m_star_bruteforce(const QubitPairConstruction& c, int m_max) {
  c.require_distinct();
  const ComplexMatrix u = unitary_evolution(c.rho().hermitian(), c.t);
  const ComplexMatrix v = unitary_evolution(c.sigma().hermitian(), c.t);
  for (int m = 1; m <= m_max; ++m) {
    if (unitary_pair_diamond(u, v, m) >= 1.0 - 1e-9) return m;
  }
  throw NotFoundError("m_star_bruteforce: no perfect discrimination up to m = " + std::to_string(m_max));
}

double hamiltonian_lb_lemma(int m_star, double eps, double fid) {
  if (m_star < 1) throw DomainError("hamiltonian_lb_lemma: m* must be positive");
  if (!(eps > 0.0)) throw DomainError("hamiltonian_lb_lemma: eps must be positive");
  if (!(fid > 0.0 && fid < 1.0)) throw DomainError("hamiltonian_lb_lemma: fidelity must lie in (0, 1)");
  const double me = m_star * eps;
  if (me > 0.5) throw DomainError("hamiltonian_lb_lemma: hypothesis m* eps <= 1/2 violated");
  return -std::log(4.0 * me * (1.0 - me)) / (m_star * -std::log(fid));
}

bool hamiltonian_lb_valid(double t, double eps) {
  return t > 0.0 && eps > 0.0 && eps < std::min(9.0 * t / (100.0 * kPi), 0.1);
}

double hamiltonian_lb_theorem(double t, double eps) {
  if (!hamiltonian_lb_valid(t, eps)) {
    throw DomainError("hamiltonian lower bound: eps outside window " +
                      window_text(std::min(9.0 * t / (100.0 * kPi), 0.1), false));
  }
  return 0.032 * t * t / eps;
}

double hamiltonian_lb_chain(double t, double eps) {
  hamiltonian_lb_theorem(t, eps);
  const double y0 = 0.19 - eps;
  const int z = robust_ceil(y0 / eps);
  const double r = kPi / (2.0 * z * t);
  const int m = m_star(r, t);
  return hamiltonian_lb_lemma(m, eps, 1.0 - r * r);
}

double hamiltonian_lb_constant(double x) {
  if (!(x > 0.0 && x < 1.0)) throw DomainError("hamiltonian_lb_constant: x must lie in (0, 1)");
  return -std::log1p(-x * x) / (x * x);
}

LindbladSpec l_phi(double phi) {
  ComplexMatrix l = ComplexMatrix::Zero(2, 2);
  l(0, 0) = 1.0 / std::sqrt(2.0);
  l(1, 1) = std::polar(1.0 / std::sqrt(2.0), phi);
  return LindbladSpec(l);
}

DensityMatrix ghz_state(int m) {
  if (m < 1 || m > 12) throw DimensionError("ghz_state: m must lie in [1, 12]");
  const Eigen::Index n = Eigen::Index{1} << m;
  ComplexMatrix g = ComplexMatrix::Zero(n, n);
  g(0, 0) = g(0, n - 1) = g(n - 1, 0) = g(n - 1, n - 1) = 0.5;
  return DensityMatrix(g);
}

double ghz_distance_closed_form(int m, double t, double phi) {
  if (m < 1) throw DomainError("ghz_distance_closed_form: m must be positive");
  if (!(t >= 0.0)) throw DomainError("ghz_distance_closed_form: t must be non-negative");
  const double mt = m * t;
  const double decay = std::exp(-0.5 * mt * (1.0 - std::cos(phi)));
  const double inner = 1.0 + decay * decay - 2.0 * decay * std::cos(0.5 * mt * std::sin(phi));
  return 0.5 * std::sqrt(std::max(0.0, inner));
}

double nu_m_lower(int m, double t) {
  if (m < 1 || !(t > 0.0)) throw DomainError("nu_m_lower: m and t must be positive");
  const double mt = m * t;
  if (mt < 2.0 * kPi) throw DomainError("nu_m_lower: requires m t >= 2 pi");
  const double phi = std::asin(2.0 * kPi / mt);
  const double nu = 0.5 * (1.0 + std::exp(-0.5 * mt * (1.0 - std::cos(phi))));
  if (nu < 0.5) throw ValidationError("nu_m_lower fell below 1/2");
  return nu;
}

double lindblad_lb_lemma(double nu_m, int m, double eps, double fid) {
  if (m < 1) throw DomainError("lindblad_lb_lemma: m must be positive");
  if (!(eps > 0.0)) throw DomainError("lindblad_lb_lemma: eps must be positive");
  if (!(fid > 0.0 && fid < 1.0)) throw DomainError("lindblad_lb_lemma: fidelity must lie in (0, 1)");
  const double gap = nu_m - 2.0 * m * eps;
  if (gap < 0.0) throw DomainError("lindblad_lb_lemma: hypothesis nu_m >= 2 m eps violated");
  return -std::log1p(-gap * gap) / (m * -std::log(fid));
}

bool lindblad_lb_valid(double t, double eps) {
  return t > 0.0 && eps > 0.0 && eps <= std::min(0.039, 0.013 * t);
}

double lindblad_lb_theorem(double t, double eps) {
  if (!lindblad_lb_valid(t, eps)) {
    throw DomainError("lindblad lower bound: eps outside window " +
                      window_text(std::min(0.039, 0.013 * t), true));
  }
  return 1e-4 * t * t / eps;
}

double lindblad_lb_proof_constant(double t, double eps) { return 1.8 * lindblad_lb_theorem(t, eps); }

double lindblad_lb_chain(double t, double eps) {
  lindblad_lb_theorem(t, eps);
  const int m = static_cast<int>(std::floor(0.08 / eps));
  // At the upper window edge m t can dip just below 2 pi; sin(phi) is then
  // capped at 1 and nu is taken from the exact GHZ distance.
  const double phi = std::asin(std::min(1.0, 2.0 * kPi / (m * t)));
  const double nu = ghz_distance_closed_form(m, t, phi);
  const double fid = 0.5 * (1.0 + std::cos(phi));
  return lindblad_lb_lemma(nu, m, eps, fid);
}

std::pair<double, double> alpha_star_search(double grid_step) {
  if (!(grid_step > 0.0 && grid_step < 0.25)) throw DomainError("alpha_star_search: grid step must lie in (0, 1/4)");
  double best_alpha = 0.0, best_value = -1.0;
  const int steps = static_cast<int>(std::floor(0.25 / grid_step + 1e-9));
  for (int k = 1; k <= steps; ++k) {
    const double alpha = k * grid_step;
    const double b = 0.5 - 2.0 * alpha;
    const double value = 0.5 * alpha * -std::log1p(-b * b);
    if (value > best_value) {
      best_value = value;
      best_alpha = alpha;
    }
  }
  return {best_alpha, best_value};
}

double lindblad_lb_constant(double x) {
  if (!(x > 0.0 && x <= 1.0)) throw DomainError("lindblad_lb_constant: x must lie in (0, 1]");
  return -std::log(0.5 * (1.0 + std::sqrt(1.0 - x * x))) / (x * x);
}

double budget_c(const GeneralLindbladBudget& b) {
  bool nonzero = false;
  double c = 0.0;
  for (double cj : b.c_coeffs) {
    c += std::abs(cj);
    nonzero = nonzero || cj != 0.0;
  }
  for (double lk : b.l_norms) {
    if (!(lk >= 0.0)) throw ValidationError("budget: Lindblad operator norms must be non-negative");
    c += lk * lk;
    nonzero = nonzero || lk != 0.0;
  }
  if (!nonzero) throw ValidationError("budget: at least one entry must be non-zero");
  return c;
}

BudgetCase classify_case(const GeneralLindbladBudget& b) {
  const double c = budget_c(b);
  double pos = 0.0, neg = 0.0, diss = 0.0;
  for (double cj : b.c_coeffs) (cj > 0.0 ? pos : neg) += std::abs(cj);
  for (double lk : b.l_norms) diss += lk * lk;
  const double third = c / 3.0;
  if (pos >= third) return BudgetCase::positive_hamiltonian;
  if (neg >= third) return BudgetCase::negative_hamiltonian;
  if (diss >= third) return BudgetCase::dissipative;
  // Unreachable: the three masses sum to c.
  return BudgetCase::dissipative;
}

}  // namespace sbq
