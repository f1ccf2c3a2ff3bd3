#include "sbq/qpca.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "sbq/dme.hpp"
#include "sbq/errors.hpp"

namespace sbq {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kMaxBits = 6;

ComplexMatrix projector_one() {
  ComplexMatrix p = ComplexMatrix::Zero(2, 2);
  p(1, 1) = 1.0;
  return p;
}

void check_closed_form_args(double t, int n) {
  if (!(t >= 0.0)) throw DomainError("controlled DME: t must be non-negative");
  if (n < 1 || !(static_cast<double>(n) > t)) throw DomainError("controlled DME: hypothesis n > t violated");
}

ComplexMatrix closed_form(const ControlQubit& g, double r, double t, int n, const ComplexMatrix& chi,
                          const ComplexMatrix& rho) {
  g.validate();
  check_closed_form_args(t, n);
  const double c2n = std::pow(std::cos(t / n), 2 * n);
  const cplx phase = std::pow(cplx(1.0, r * std::tan(t / n)), n);
  ComplexMatrix ctrl(2, 2);
  ctrl(0, 0) = 1.0 + g.z;
  ctrl(0, 1) = cplx(g.x, -g.y) * phase;
  ctrl(1, 0) = cplx(g.x, g.y) * std::conj(phase);
  ctrl(1, 1) = 1.0 - g.z;
  return 0.5 * c2n * kron(ctrl, chi) + (1.0 - c2n) * kron(projector_one(), rho);
}

void check_step_hypotheses(double t, int n) {
  if (!(t >= 0.0)) throw DomainError("qpca step: t must be non-negative");
  if (n < 1 || !(static_cast<double>(n) > t)) throw DomainError("hypothesis n > t violated");
  if (n < static_cast<int>(std::ceil(2.0 * t / kPi))) throw DomainError("hypothesis n >= 2t/pi violated");
}

// K acting on (register qubit q, system) embedded into the full
// register (x) system space; qubit 0 is the most significant factor.
ComplexMatrix embed(const ComplexMatrix& k, int q, int bits) {
  const int dim = (1 << bits) * 2;
  const int shift = bits - 1 - q;
  ComplexMatrix full = ComplexMatrix::Zero(dim, dim);
  for (int a = 0; a < dim; ++a) {
    const int reg_a = a >> 1, sa = a & 1;
    const int qa = (reg_a >> shift) & 1;
    const int rest = reg_a & ~(1 << shift);
    for (int qb = 0; qb < 2; ++qb) {
      for (int sb = 0; sb < 2; ++sb) {
        const int b = ((rest | (qb << shift)) << 1) | sb;
        full(a, b) = k(qa * 2 + sa, qb * 2 + sb);
      }
    }
  }
  return full;
}

}  // namespace

void ControlQubit::validate() const {
  if (x * x + y * y + z * z > 1.0 + 1e-12) throw ValidationError("control qubit Bloch vector is longer than 1");
}

ComplexMatrix ControlQubit::matrix() const {
  validate();
  ComplexMatrix g(2, 2);
  g << 0.5 * (1.0 + z), 0.5 * cplx(x, -y), 0.5 * cplx(x, y), 0.5 * (1.0 - z);
  return g;
}

void QpcaInstance::validate() const {
  if (rho.dim() != 2) throw DimensionError("qpca: system dimension must be 2");
  if (bits < 1 || bits > kMaxBits) throw DimensionError("qpca: register size must lie in [1, 6]");
  if (m < 1) throw DomainError("qpca: m must be positive");
}

Channel controlled_dme_step(const DensityMatrix& rho, double delta) {
  return dme_step_channel(DensityMatrix(kron(projector_one(), rho.matrix())), delta);
}

DensityMatrix controlled_dme_closed_form(const ControlQubit& gamma, double r, double t, int n) {
  if (!(r >= 0.0 && r <= 1.0)) throw DomainError("controlled DME: r must lie in [0, 1]");
  ComplexMatrix chi = ComplexMatrix::Zero(2, 2);
  chi(0, 0) = 1.0;
  ComplexMatrix rho = ComplexMatrix::Zero(2, 2);
  rho(0, 0) = r;
  rho(1, 1) = 1.0 - r;
  return DensityMatrix::normalized(closed_form(gamma, r, t, n, chi, rho));
}

DensityMatrix controlled_dme_closed_form(const ControlQubit& gamma, const DensityMatrix& rho, int eigen_index,
                                         double t, int n) {
  if (rho.dim() != 2) throw DimensionError("controlled DME closed form: rho must be a qubit state");
  if (eigen_index < 0 || eigen_index >= 2) throw DimensionError("controlled DME closed form: bad eigen index");
  const auto eig = hermitian_eig(rho.hermitian());
  const ComplexVector v = eig.eigenvectors.col(eigen_index);
  const double r = std::clamp(eig.eigenvalues(eigen_index), 0.0, 1.0);
  return DensityMatrix::normalized(closed_form(gamma, r, t, n, v * v.adjoint(), rho.matrix()));
}

double qpca_step_error(double r, double t, int n) {
  if (!(r >= 0.0 && r <= 1.0)) throw DomainError("qpca_step_error: r must lie in [0, 1]");
  check_step_hypotheses(t, n);
  const double c = std::cos(t / n), s = std::sin(t / n);
  const double c2n = std::pow(c, 2 * n);
  const cplx off = std::pow(c, n) * std::pow(cplx(c, r * s), n) - std::polar(1.0, r * t);
  ComplexMatrix diff(2, 2);
  diff(0, 0) = 0.5 * (c2n - 1.0);
  diff(0, 1) = 0.5 * off;
  diff(1, 0) = 0.5 * std::conj(off);
  diff(1, 1) = 0.5 * (1.0 - 2.0 * r) * (c2n - 1.0);
  return 0.5 * trace_norm(diff) + 0.5 * (1.0 - r) * (1.0 - c2n);
}

double qpca_step_bound(double t, int n) {
  check_step_hypotheses(t, n);
  return (1.5 + 4.0 / (kPi * kPi)) * t * t / n;
}

double qpca_total_bound(double t, int n) {
  if (!(t > 1.0)) throw DomainError("qpca_total_bound: requires t > 1");
  if (n < 1) throw DomainError("qpca_total_bound: n must be positive");
  return (2.0 / 3.0) * t * (t + 4.0 * kPi) / n * std::log2(t);
}

double qpca_total_time(int bits) {
  if (bits < 1) throw DomainError("qpca_total_time: bits must be positive");
  return 2.0 * kPi * ((1 << bits) - 1);
}

double qpca_weighted_error(const QpcaInstance& inst) {
  inst.validate();
  const auto eig = hermitian_eig(inst.rho.hermitian());
  double total = 0.0;
  for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i) {
    const double r = std::clamp(eig.eigenvalues(i), 0.0, 1.0);
    double per_state = 0.0;
    for (int j = 1; j <= inst.bits; ++j) per_state += qpca_step_error(r, 2.0 * kPi * (1 << (j - 1)), inst.m);
    total += r * per_state;
  }
  return total;
}

std::string QpcaResult::outcome(int y) const {
  std::string s(static_cast<std::size_t>(bits), '0');
  for (int b = 0; b < bits; ++b) {
    if ((y >> (bits - 1 - b)) & 1) s[static_cast<std::size_t>(b)] = '1';
  }
  return s;
}

double QpcaResult::estimate(int y) const { return static_cast<double>(y) / (1 << bits); }

QpcaResult run_qpca(const QpcaInstance& inst, int shots, std::uint64_t seed, QpcaOracle oracle) {
  inst.validate();
  if (shots < 0) throw DomainError("run_qpca: shots must be non-negative");
  const int bits = inst.bits;
  const int n_reg = 1 << bits;
  const int dim = n_reg * 2;

  ComplexMatrix plus = ComplexMatrix::Constant(n_reg, n_reg, cplx(1.0 / n_reg, 0.0));
  ComplexMatrix state = kron(plus, inst.rho.matrix());

  const DensityMatrix program(kron(projector_one(), inst.rho.matrix()));
  for (int j = 1; j <= bits; ++j) {
    const double tj = 2.0 * kPi * (1 << (j - 1));
    std::vector<ComplexMatrix> ks;
    if (oracle == QpcaOracle::ideal) {
      ks.push_back(unitary_evolution(program.hermitian(), tj));
    } else {
      // t_j / m may exceed 1 here; the closed-form step is a channel for any delta.
      const Channel step = trusted_channel(4, 4, detail::dme_step_superop(program.matrix(), tj / inst.m));
      ks = kraus(power(step, inst.m));
    }
    ComplexMatrix next = ComplexMatrix::Zero(dim, dim);
    for (const auto& k : ks) {
      const ComplexMatrix kf = embed(k, j - 1, bits);
      next += kf * state * kf.adjoint();
    }
    state = std::move(next);
  }

  // Fourier transform with the register bits read in reverse order.
  ComplexMatrix f(n_reg, n_reg);
  for (int idx = 0; idx < n_reg; ++idx) {
    int k = 0;
    for (int b = 0; b < bits; ++b) k |= ((idx >> b) & 1) << (bits - 1 - b);
    for (int y = 0; y < n_reg; ++y) {
      f(y, idx) = std::polar(1.0 / std::sqrt(static_cast<double>(n_reg)), 2.0 * kPi * k * y / n_reg);
    }
  }
  const ComplexMatrix ff = kron(f, identity(2));
  state = ff * state * ff.adjoint();

  QpcaResult res;
  res.bits = bits;
  res.shots = shots;
  res.probabilities.assign(static_cast<std::size_t>(n_reg), 0.0);
  res.counts.assign(static_cast<std::size_t>(n_reg), 0);
  double total = 0.0;
  for (int y = 0; y < n_reg; ++y) {
    const double p = std::max(0.0, state(2 * y, 2 * y).real() + state(2 * y + 1, 2 * y + 1).real());
    res.probabilities[static_cast<std::size_t>(y)] = p;
    total += p;
  }
  for (double& p : res.probabilities) p /= total;

  int last_supported = n_reg - 1;
  while (last_supported > 0 && res.probabilities[static_cast<std::size_t>(last_supported)] == 0.0) --last_supported;
  for (int shot = 0; shot < shots; ++shot) {
    SplitMix64 rng(seed, static_cast<std::uint64_t>(shot));
    const double u = rng.uniform();
    double acc = 0.0;
    int y = last_supported;
    for (int k = 0; k < n_reg; ++k) {
      acc += res.probabilities[static_cast<std::size_t>(k)];
      if (u < acc) {
        y = k;
        break;
      }
    }
    ++res.counts[static_cast<std::size_t>(y)];
  }
  return res;
}

}  // namespace sbq
