#include "sbq/channels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>

#include "sbq/errors.hpp"

namespace sbq {

namespace {

constexpr double kChoiHermitianTol = 1e-10;
constexpr double kTracePreservingTol = 1e-9;
constexpr double kChoiPsdTol = 1e-8;
constexpr double kUnitaryTol = 1e-9;

ComplexVector vec(const ComplexMatrix& x) {
  return Eigen::Map<const ComplexVector>(x.data(), x.size());
}

ComplexMatrix unvec(const ComplexVector& v, Eigen::Index rows, Eigen::Index cols) {
  return Eigen::Map<const ComplexMatrix>(v.data(), rows, cols);
}

void check_superop_shape(int in_dim, int out_dim, const ComplexMatrix& s) {
  if (in_dim <= 0 || out_dim <= 0) throw DimensionError("map dimensions must be positive");
  const Eigen::Index rows = static_cast<Eigen::Index>(out_dim) * out_dim;
  const Eigen::Index cols = static_cast<Eigen::Index>(in_dim) * in_dim;
  if (s.rows() != rows || s.cols() != cols) {
    throw DimensionError("superoperator is " + std::to_string(s.rows()) + "x" + std::to_string(s.cols()) +
                         ", expected " + std::to_string(rows) + "x" + std::to_string(cols));
  }
}

ComplexMatrix choi_of(int in_dim, int out_dim, const ComplexMatrix& s) {
  const Eigen::Index n = static_cast<Eigen::Index>(in_dim) * out_dim;
  ComplexMatrix j(n, n);
  for (int jj = 0; jj < in_dim; ++jj) {
    for (int ii = 0; ii < in_dim; ++ii) {
      const Eigen::Index col = ii + static_cast<Eigen::Index>(jj) * in_dim;
      for (int b = 0; b < out_dim; ++b) {
        for (int a = 0; a < out_dim; ++a) {
          j(static_cast<Eigen::Index>(ii) * out_dim + a, static_cast<Eigen::Index>(jj) * out_dim + b) =
              s(a + static_cast<Eigen::Index>(b) * out_dim, col);
        }
      }
    }
  }
  return j;
}

}  // namespace

// -- HermitianPreservingMap ----------------------------------------------------

HermitianPreservingMap::HermitianPreservingMap(int in_dim, int out_dim, ComplexMatrix superop)
    : in_dim_(in_dim), out_dim_(out_dim), superop_(std::move(superop)) {
  check_superop_shape(in_dim_, out_dim_, superop_);
  const double defect = hermiticity_defect(choi_of(in_dim_, out_dim_, superop_));
  if (defect > kChoiHermitianTol) {
    throw ValidationError("map is not Hermiticity-preserving: Choi defect " + std::to_string(defect));
  }
}

ComplexMatrix HermitianPreservingMap::operator()(const ComplexMatrix& x) const {
  if (x.rows() != in_dim_ || x.cols() != in_dim_) throw DimensionError("map applied to wrong-size matrix");
  return unvec(superop_ * vec(x), out_dim_, out_dim_);
}

ComplexMatrix HermitianPreservingMap::apply_extended(const ComplexMatrix& x, int ref_dim) const {
  const Eigen::Index di = in_dim_, dout = out_dim_, r = ref_dim;
  if (x.rows() != r * di || x.cols() != r * di) {
    throw DimensionError("apply_extended: input is not (ref x in)-dimensional");
  }
  // Column (r1 + r2 * ref) holds vec of block (r1, r2).
  ComplexMatrix blocks(di * di, r * r);
  for (Eigen::Index r2 = 0; r2 < r; ++r2) {
    for (Eigen::Index r1 = 0; r1 < r; ++r1) {
      const ComplexMatrix blk = x.block(r1 * di, r2 * di, di, di);
      blocks.col(r1 + r2 * r) = vec(blk);
    }
  }
  const ComplexMatrix mapped = superop_ * blocks;
  ComplexMatrix y(r * dout, r * dout);
  for (Eigen::Index r2 = 0; r2 < r; ++r2) {
    for (Eigen::Index r1 = 0; r1 < r; ++r1) {
      y.block(r1 * dout, r2 * dout, dout, dout) = unvec(mapped.col(r1 + r2 * r), dout, dout);
    }
  }
  return y;
}

HermitianPreservingMap HermitianPreservingMap::adjoint() const {
  return HermitianPreservingMap(Unchecked{}, out_dim_, in_dim_, superop_.adjoint());
}

HermitianPreservingMap operator-(const HermitianPreservingMap& a, const HermitianPreservingMap& b) {
  if (a.in_dim() != b.in_dim() || a.out_dim() != b.out_dim()) {
    throw DimensionError("difference of maps with different dimensions");
  }
  return HermitianPreservingMap(HermitianPreservingMap::Unchecked{}, a.in_dim(), a.out_dim(),
                                a.superop() - b.superop());
}

HermitianPreservingMap operator*(double s, const HermitianPreservingMap& m) {
  return HermitianPreservingMap(HermitianPreservingMap::Unchecked{}, m.in_dim(), m.out_dim(), s * m.superop());
}

// -- Channel ---------------------------------------------------------------------

Channel::Channel(int in_dim, int out_dim, ComplexMatrix superop)
    : HermitianPreservingMap(in_dim, out_dim, std::move(superop)) {
  // Trace preservation: vec(I_out)^T S = vec(I_in)^T.
  ComplexVector tr_row = ComplexVector::Zero(static_cast<Eigen::Index>(in_dim) * in_dim);
  for (int a = 0; a < out_dim; ++a) tr_row += superop_.row(a + static_cast<Eigen::Index>(a) * out_dim).transpose();
  const ComplexVector id_in = vec(sbq::identity(in_dim));
  const double tp_defect = (tr_row - id_in).cwiseAbs().maxCoeff();
  if (tp_defect > kTracePreservingTol) {
    throw ValidationError("channel is not trace preserving: defect " + std::to_string(tp_defect));
  }
  const ComplexMatrix j = choi_of(in_dim, out_dim, superop_);
  const double min_eig = hermitian_eig(HermitianMatrix::symmetrized(j)).eigenvalues.minCoeff();
  if (min_eig < -kChoiPsdTol) {
    throw ValidationError("channel is not completely positive: Choi eigenvalue " + std::to_string(min_eig));
  }
  const int dims[] = {in_dim, out_dim};
  const int keep[] = {0};
  const double marginal = max_abs_diff(partial_trace(j, dims, keep), sbq::identity(in_dim));
  if (marginal > kChoiPsdTol) {
    throw ValidationError("channel Choi marginal deviates from identity by " + std::to_string(marginal));
  }
}

Channel Channel::identity(int d) {
  return Channel(Unchecked{}, d, d, sbq::identity(static_cast<Eigen::Index>(d) * d));
}

DensityMatrix Channel::apply(const DensityMatrix& rho) const {
  if (rho.dim() != in_dim_) throw DimensionError("channel applied to state of wrong dimension");
  const ComplexMatrix out = (*this)(rho.matrix());
  return DensityMatrix(0.5 * (out + out.adjoint()));
}

Channel trusted_channel(int in_dim, int out_dim, ComplexMatrix superop) {
  check_superop_shape(in_dim, out_dim, superop);
  return Channel(Channel::Unchecked{}, in_dim, out_dim, std::move(superop));
}

Channel channel_from_unitary(const ComplexMatrix& u) {
  if (!is_unitary(u, kUnitaryTol)) throw ValidationError("channel_from_unitary: matrix is not unitary");
  const int d = static_cast<int>(u.rows());
  return trusted_channel(d, d, kron(u.conjugate().eval(), u));
}

Channel channel_from_kraus(std::span<const ComplexMatrix> ks) {
  if (ks.empty()) throw ValidationError("channel_from_kraus: empty Kraus family");
  const Eigen::Index din = ks.front().cols(), dout = ks.front().rows();
  ComplexMatrix completeness = ComplexMatrix::Zero(din, din);
  ComplexMatrix s = ComplexMatrix::Zero(dout * dout, din * din);
  for (const auto& k : ks) {
    if (k.cols() != din || k.rows() != dout) throw DimensionError("channel_from_kraus: inconsistent shapes");
    completeness += k.adjoint() * k;
    s += kron(k.conjugate().eval(), k);
  }
  const double defect = max_abs_diff(completeness, identity(din));
  if (defect > kUnitaryTol) {
    throw ValidationError("channel_from_kraus: sum K^dag K deviates from I by " + std::to_string(defect));
  }
  return trusted_channel(static_cast<int>(din), static_cast<int>(dout), std::move(s));
}

DensityMatrix apply(const Channel& c, const DensityMatrix& rho) { return c.apply(rho); }

Channel compose(const Channel& a, const Channel& b) {
  if (a.in_dim() != b.out_dim()) throw DimensionError("compose: output of b does not feed input of a");
  return trusted_channel(b.in_dim(), a.out_dim(), a.superop() * b.superop());
}

Channel power(const Channel& c, int n) {
  if (n < 0) throw DomainError("power: exponent must be non-negative");
  if (c.in_dim() != c.out_dim()) throw DimensionError("power: channel is not square");
  const Eigen::Index sz = c.superop().rows();
  ComplexMatrix result = ComplexMatrix::Identity(sz, sz);
  ComplexMatrix base = c.superop();
  for (int e = n; e > 0; e >>= 1) {
    if (e & 1) result = (result * base).eval();
    if (e > 1) base = (base * base).eval();
  }
  return trusted_channel(c.in_dim(), c.out_dim(), std::move(result));
}

Channel tensor(const Channel& a, const Channel& b) {
  const int ia = a.in_dim(), ib = b.in_dim(), oa = a.out_dim(), ob = b.out_dim();
  const Eigen::Index din = static_cast<Eigen::Index>(ia) * ib, dout = static_cast<Eigen::Index>(oa) * ob;
  ComplexMatrix s(dout * dout, din * din);
  for (int j1 = 0; j1 < ia; ++j1) {
    for (int i1 = 0; i1 < ia; ++i1) {
      const ComplexMatrix ablk = unvec(a.superop().col(i1 + static_cast<Eigen::Index>(j1) * ia), oa, oa);
      for (int j2 = 0; j2 < ib; ++j2) {
        for (int i2 = 0; i2 < ib; ++i2) {
          const ComplexMatrix bblk = unvec(b.superop().col(i2 + static_cast<Eigen::Index>(j2) * ib), ob, ob);
          const Eigen::Index row = static_cast<Eigen::Index>(i1) * ib + i2;
          const Eigen::Index col = static_cast<Eigen::Index>(j1) * ib + j2;
          s.col(row + col * din) = vec(kron(ablk, bblk));
        }
      }
    }
  }
  return trusted_channel(static_cast<int>(din), static_cast<int>(dout), std::move(s));
}

Channel extend_with_reference(const Channel& c, int ref_dim) {
  if (ref_dim <= 0) throw DimensionError("extend_with_reference: reference dimension must be positive");
  return tensor(Channel::identity(ref_dim), c);
}

ComplexMatrix choi(const HermitianPreservingMap& m) { return choi_of(m.in_dim(), m.out_dim(), m.superop()); }

std::vector<ComplexMatrix> kraus(const Channel& c, double threshold) {
  const auto eig = hermitian_eig(HermitianMatrix::symmetrized(choi(c)));
  std::vector<ComplexMatrix> ks;
  for (Eigen::Index k = eig.eigenvalues.size(); k-- > 0;) {
    const double lambda = eig.eigenvalues(k);
    if (lambda <= threshold) continue;
    const ComplexVector v = eig.eigenvectors.col(k);
    ks.push_back(std::sqrt(lambda) * unvec(v, c.out_dim(), c.in_dim()));
  }
  return ks;
}

// -- diamond distance --------------------------------------------------------

namespace {

struct AscentState {
  double value;
  ComplexMatrix sign;  // sgn of the extended output
};

AscentState evaluate(const HermitianPreservingMap& m, const ComplexVector& psi) {
  const ComplexMatrix out = m.apply_extended(psi * psi.adjoint(), m.in_dim());
  const auto eig = hermitian_eig(HermitianMatrix::symmetrized(out));
  const double value = 0.5 * eig.eigenvalues.cwiseAbs().sum();
  ComplexMatrix sign = spectral_apply(eig, [](double l) { return cplx(l > 0.0 ? 1.0 : (l < 0.0 ? -1.0 : 0.0), 0.0); });
  return {value, std::move(sign)};
}

}  // namespace

DiamondEstimate diamond_lower_ascent(const HermitianPreservingMap& m, const AscentOptions& opts) {
  if (m.in_dim() != m.out_dim()) throw DimensionError("diamond_lower_ascent: map must be square");
  if (opts.restarts < 1) throw DomainError("diamond_lower_ascent: restarts must be >= 1");
  const int d = m.in_dim();
  const int joint = d * d;
  const HermitianPreservingMap adj = m.adjoint();

  DiamondEstimate best{0.0, DiamondKind::ascent_lower_bound, 0, false};
  bool have_best = false;
  for (int restart = 0; restart < opts.restarts; ++restart) {
    ComplexVector psi;
    if (restart == 0) {
      psi = ComplexVector::Zero(joint);
      for (int k = 0; k < d; ++k) psi(k * d + k) = 1.0 / std::sqrt(static_cast<double>(d));
    } else {
      SplitMix64 rng(opts.seed, static_cast<std::uint64_t>(restart) + 1000);
      psi = random_ginibre(joint, 1, rng).col(0);
      psi.normalize();
    }
    AscentState state = evaluate(m, psi);
    bool converged = false;
    for (int it = 0; it < opts.max_iterations; ++it) {
      const ComplexMatrix g = adj.apply_extended(state.sign, d);
      const auto geig = hermitian_eig(HermitianMatrix::symmetrized(g));
      const ComplexVector next = geig.eigenvectors.col(geig.eigenvectors.cols() - 1);
      AscentState trial = evaluate(m, next);
      const double gain = trial.value - state.value;
      if (gain > 0.0) state = std::move(trial);
      if (gain < opts.tol) {
        converged = true;
        break;
      }
    }
    if (!have_best || state.value > best.value) {
      best.value = state.value;
      best.converged = converged;
      have_best = true;
    }
    best.restarts_used = restart + 1;
  }
  return best;
}

double hull_min_distance(std::span<const cplx> points) {
  if (points.empty()) throw ValidationError("hull_min_distance: empty point set");
  std::vector<double> angles;
  angles.reserve(points.size());
  for (const cplx& p : points) {
    if (std::abs(std::abs(p) - 1.0) > 1e-12) throw ValidationError("hull_min_distance: point off the unit circle");
    double a = std::arg(p);
    if (a < 0.0) a += 2.0 * std::numbers::pi;
    angles.push_back(a);
  }
  std::sort(angles.begin(), angles.end());
  double max_gap = 2.0 * std::numbers::pi - (angles.back() - angles.front());
  for (std::size_t k = 1; k < angles.size(); ++k) max_gap = std::max(max_gap, angles[k] - angles[k - 1]);
  if (max_gap <= std::numbers::pi) return 0.0;
  // All points sit on an arc shorter than pi; the nearest hull point is the
  // midpoint of the chord joining the arc's endpoints.
  const double spread = 2.0 * std::numbers::pi - max_gap;
  return std::max(0.0, std::cos(0.5 * spread));
}

namespace {

std::vector<double> unitary_phases(const ComplexMatrix& w) {
  Eigen::ComplexEigenSolver<ComplexMatrix> solver(w, false);
  if (solver.info() != Eigen::Success) throw ValidationError("unitary_pair_diamond: eigensolver failed");
  std::vector<double> phases;
  for (Eigen::Index k = 0; k < solver.eigenvalues().size(); ++k) phases.push_back(std::arg(solver.eigenvalues()(k)));
  return phases;
}

void dedupe_mod_2pi(std::vector<double>& phases) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  for (double& p : phases) {
    p = std::fmod(p, two_pi);
    if (p < 0.0) p += two_pi;
  }
  std::sort(phases.begin(), phases.end());
  std::vector<double> out;
  for (double p : phases) {
    if (out.empty() || p - out.back() > 1e-13) out.push_back(p);
  }
  if (out.size() > 1 && out.front() + two_pi - out.back() <= 1e-13) out.pop_back();
  phases = std::move(out);
}

}  // namespace

double unitary_pair_diamond(const ComplexMatrix& u, const ComplexMatrix& v, int m) {
  if (u.rows() != v.rows() || u.cols() != v.cols()) throw DimensionError("unitary_pair_diamond: shape mismatch");
  if (!is_unitary(u, kUnitaryTol) || !is_unitary(v, kUnitaryTol)) {
    throw ValidationError("unitary_pair_diamond: inputs must be unitary");
  }
  if (m < 1) throw DomainError("unitary_pair_diamond: m must be >= 1");
  const std::vector<double> base = unitary_phases(v.adjoint() * u);
  std::vector<double> sums = base;
  dedupe_mod_2pi(sums);
  std::vector<double> unique_base = base;
  dedupe_mod_2pi(unique_base);
  for (int k = 1; k < m; ++k) {
    std::vector<double> next;
    next.reserve(sums.size() * unique_base.size());
    for (double s : sums) {
      for (double b : unique_base) next.push_back(s + b);
    }
    dedupe_mod_2pi(next);
    sums = std::move(next);
  }
  std::vector<cplx> points;
  points.reserve(sums.size());
  for (double p : sums) points.push_back(std::polar(1.0, p));
  const double delta = hull_min_distance(points);
  return std::sqrt(std::max(0.0, 1.0 - delta * delta));
}

DiamondEstimate unitary_pair_estimate(const ComplexMatrix& u, const ComplexMatrix& v, int m) {
  return {unitary_pair_diamond(u, v, m), DiamondKind::exact_unitary_pair, 0, true};
}

}  // namespace sbq
