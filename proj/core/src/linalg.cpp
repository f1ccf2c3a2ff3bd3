#include "sbq/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <unsupported/Eigen/KroneckerProduct>

#include "sbq/errors.hpp"

namespace sbq {

namespace {

void require_square(const ComplexMatrix& a, const char* what) {
  if (a.rows() != a.cols()) {
    throw DimensionError(std::string(what) + ": matrix is " + std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()) + ", expected square");
  }
}

std::vector<Eigen::Index> strides_of(std::span<const int> dims) {
  std::vector<Eigen::Index> s(dims.size());
  Eigen::Index acc = 1;
  for (std::size_t k = dims.size(); k-- > 0;) {
    s[k] = acc;
    acc *= dims[k];
  }
  return s;
}

Eigen::Index product_of(std::span<const int> dims) {
  Eigen::Index p = 1;
  for (int d : dims) {
    if (d <= 0) throw DimensionError("subsystem dimensions must be positive");
    p *= d;
  }
  return p;
}

// Full-space offsets contributed by every multi-index over `subsystems`.
std::vector<Eigen::Index> offsets_over(std::span<const int> dims,
                                       const std::vector<Eigen::Index>& strides,
                                       const std::vector<int>& subsystems) {
  std::vector<Eigen::Index> out{0};
  for (int k : subsystems) {
    std::vector<Eigen::Index> next;
    next.reserve(out.size() * static_cast<std::size_t>(dims[k]));
    for (Eigen::Index base : out) {
      for (int v = 0; v < dims[k]; ++v) next.push_back(base + v * strides[k]);
    }
    out = std::move(next);
  }
  return out;
}

}  // namespace

double hermiticity_defect(const ComplexMatrix& a) {
  require_square(a, "hermiticity_defect");
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("max_abs_diff: shape mismatch");
  }
  if (a.size() == 0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff();
}

HermitianMatrix::HermitianMatrix(const ComplexMatrix& m, double tol) {
  require_square(m, "HermitianMatrix");
  const double defect = m.size() == 0 ? 0.0 : hermiticity_defect(m);
  if (defect > tol) {
    throw ValidationError("matrix is not Hermitian: max |A - A^dag| = " + std::to_string(defect));
  }
  m_ = 0.5 * (m + m.adjoint());
}

HermitianMatrix HermitianMatrix::symmetrized(const ComplexMatrix& m) {
  require_square(m, "HermitianMatrix::symmetrized");
  return HermitianMatrix(Trusted{}, 0.5 * (m + m.adjoint()));
}

HermitianEig hermitian_eig(const HermitianMatrix& a) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(a.matrix());
  if (solver.info() != Eigen::Success) {
    throw ValidationError("hermitian_eig: eigensolver did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

HermitianEig hermitian_eig(const ComplexMatrix& a) { return hermitian_eig(HermitianMatrix(a)); }

ComplexMatrix identity(Eigen::Index d) { return ComplexMatrix::Identity(d, d); }

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  return Eigen::kroneckerProduct(a, b).eval();
}

ComplexVector kron(const ComplexVector& a, const ComplexVector& b) {
  ComplexVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, std::span<const int> dims,
                            std::span<const int> keep) {
  require_square(m, "partial_trace");
  const Eigen::Index total = product_of(dims);
  if (total != m.rows()) {
    throw DimensionError("partial_trace: product of dims " + std::to_string(total) +
                         " does not match matrix size " + std::to_string(m.rows()));
  }
  const int n = static_cast<int>(dims.size());
  std::vector<bool> kept(static_cast<std::size_t>(n), false);
  for (int k : keep) {
    if (k < 0 || k >= n) throw DimensionError("partial_trace: keep index out of range");
    kept[static_cast<std::size_t>(k)] = true;
  }
  std::vector<int> kept_list, traced_list;
  for (int k = 0; k < n; ++k) (kept[static_cast<std::size_t>(k)] ? kept_list : traced_list).push_back(k);

  const auto strides = strides_of(dims);
  const auto kofs = offsets_over(dims, strides, kept_list);
  const auto tofs = offsets_over(dims, strides, traced_list);
  const auto dk = static_cast<Eigen::Index>(kofs.size());

  ComplexMatrix out = ComplexMatrix::Zero(dk, dk);
  for (Eigen::Index c = 0; c < dk; ++c) {
    for (Eigen::Index r = 0; r < dk; ++r) {
      cplx acc{0.0, 0.0};
      for (Eigen::Index t : tofs) acc += m(kofs[r] + t, kofs[c] + t);
      out(r, c) = acc;
    }
  }
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, std::initializer_list<int> dims,
                            std::initializer_list<int> keep) {
  return partial_trace(m, std::span<const int>(dims.begin(), dims.size()),
                       std::span<const int>(keep.begin(), keep.size()));
}

ComplexMatrix permute_subsystems(const ComplexMatrix& m, std::span<const int> dims,
                                 std::span<const int> order) {
  require_square(m, "permute_subsystems");
  if (order.size() != dims.size()) throw DimensionError("permute_subsystems: order/dims size mismatch");
  const Eigen::Index total = product_of(dims);
  if (total != m.rows()) throw DimensionError("permute_subsystems: dims do not match matrix size");
  std::vector<int> sorted(order.begin(), order.end());
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    if (sorted[k] != static_cast<int>(k)) throw DimensionError("permute_subsystems: order is not a permutation");
  }

  const auto in_strides = strides_of(dims);
  std::vector<int> out_dims(dims.size());
  for (std::size_t k = 0; k < dims.size(); ++k) out_dims[k] = dims[static_cast<std::size_t>(order[k])];
  const auto out_strides = strides_of(out_dims);

  std::vector<Eigen::Index> source(static_cast<std::size_t>(total));
  for (Eigen::Index idx = 0; idx < total; ++idx) {
    Eigen::Index src = 0;
    for (std::size_t k = 0; k < out_dims.size(); ++k) {
      const Eigen::Index digit = (idx / out_strides[k]) % out_dims[k];
      src += digit * in_strides[static_cast<std::size_t>(order[k])];
    }
    source[static_cast<std::size_t>(idx)] = src;
  }
  ComplexMatrix out(total, total);
  for (Eigen::Index c = 0; c < total; ++c) {
    for (Eigen::Index r = 0; r < total; ++r) out(r, c) = m(source[r], source[c]);
  }
  return out;
}

ComplexMatrix swap_operator(int d) {
  if (d < 2) throw DimensionError("swap_operator: d must be >= 2");
  const Eigen::Index n = static_cast<Eigen::Index>(d) * d;
  ComplexMatrix s = ComplexMatrix::Zero(n, n);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) s(j * d + i, i * d + j) = 1.0;
  }
  return s;
}

ComplexMatrix matrix_exp(const ComplexMatrix& a) {
  require_square(a, "matrix_exp");
  const Eigen::Index n = a.rows();
  if (n == 0) return a;

  // Higham (2005) degree-13 coefficients and the accompanying theta_13 threshold.
  static constexpr double b[] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                                 1187353796428800.0,  129060195264000.0,   10559470521600.0,
                                 670442572800.0,      33522128640.0,       1323241920.0,
                                 40840800.0,          960960.0,            16380.0,
                                 182.0,               1.0};
  constexpr double theta13 = 5.371920351148152;

  const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm1 > theta13) squarings = static_cast<int>(std::ceil(std::log2(norm1 / theta13)));
  const ComplexMatrix as = a / std::ldexp(1.0, squarings);

  const ComplexMatrix id = ComplexMatrix::Identity(n, n);
  const ComplexMatrix a2 = as * as;
  const ComplexMatrix a4 = a2 * a2;
  const ComplexMatrix a6 = a4 * a2;

  const ComplexMatrix u_inner = a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2);
  const ComplexMatrix u = as * (u_inner + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id);
  const ComplexMatrix v_inner = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2);
  const ComplexMatrix v = v_inner + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;

  ComplexMatrix r = (v - u).partialPivLu().solve(v + u);
  for (int k = 0; k < squarings; ++k) r = (r * r).eval();
  return r;
}

ComplexMatrix matrix_exp(const HermitianMatrix& h) {
  return spectral_apply(hermitian_eig(h), [](double l) { return cplx(std::exp(l), 0.0); });
}

ComplexMatrix unitary_evolution(const HermitianMatrix& h, double t) {
  return spectral_apply(hermitian_eig(h), [t](double l) { return std::polar(1.0, -l * t); });
}

RealVector singular_values(const ComplexMatrix& a) {
  if (a.size() == 0) return RealVector(0);
  Eigen::BDCSVD<ComplexMatrix> svd(a);
  return svd.singularValues();
}

double trace_norm(const HermitianMatrix& a) {
  return hermitian_eig(a).eigenvalues.cwiseAbs().sum();
}

double trace_norm(const ComplexMatrix& a) {
  require_square(a, "trace_norm");
  if (a.size() == 0) return 0.0;
  if (hermiticity_defect(a) <= kHermitianTol) return trace_norm(HermitianMatrix::symmetrized(a));
  return singular_values(a).sum();
}

double trace_norm_svd(const ComplexMatrix& a) { return singular_values(a).sum(); }

double operator_norm(const ComplexMatrix& a) {
  const RealVector s = singular_values(a);
  return s.size() == 0 ? 0.0 : s(0);
}

bool is_unitary(const ComplexMatrix& u, double tol) {
  if (u.rows() != u.cols()) return false;
  return max_abs_diff(u.adjoint() * u, identity(u.rows())) <= tol;
}

// -- states -------------------------------------------------------------------

DensityMatrix::DensityMatrix(const ComplexMatrix& m) {
  require_square(m, "DensityMatrix");
  if (m.rows() == 0) throw DimensionError("DensityMatrix: empty matrix");
  const HermitianMatrix h(m);
  const double tr = h.matrix().trace().real();
  if (std::abs(tr - 1.0) > kTraceTol) {
    throw ValidationError("DensityMatrix: trace " + std::to_string(tr) + " is not 1");
  }
  const double min_eig = hermitian_eig(h).eigenvalues.minCoeff();
  if (min_eig < -kPsdTol) {
    throw ValidationError("DensityMatrix: negative eigenvalue " + std::to_string(min_eig));
  }
  m_ = h.matrix();
}

DensityMatrix DensityMatrix::maximally_mixed(int d) {
  return DensityMatrix(identity(d) / static_cast<double>(d));
}

DensityMatrix DensityMatrix::basis_state(int d, int k) {
  if (k < 0 || k >= d) throw DimensionError("basis_state: index out of range");
  ComplexMatrix m = ComplexMatrix::Zero(d, d);
  m(k, k) = 1.0;
  return DensityMatrix(m);
}

DensityMatrix DensityMatrix::normalized(const ComplexMatrix& m) {
  require_square(m, "DensityMatrix::normalized");
  ComplexMatrix h = 0.5 * (m + m.adjoint());
  const double tr = h.trace().real();
  if (!(tr > 0.0)) throw ValidationError("DensityMatrix::normalized: non-positive trace");
  return DensityMatrix(h / tr);
}

HermitianMatrix DensityMatrix::hermitian() const { return HermitianMatrix::symmetrized(m_); }

PureState::PureState(const ComplexVector& amplitudes) : v_(amplitudes) {
  if (v_.size() == 0) throw DimensionError("PureState: empty vector");
  const double norm = v_.norm();
  if (std::abs(norm - 1.0) > kNormTol) {
    throw ValidationError("PureState: norm " + std::to_string(norm) + " is not 1");
  }
}

PureState PureState::normalized(const ComplexVector& v) {
  const double norm = v.norm();
  if (!(norm > 0.0)) throw ValidationError("PureState::normalized: zero vector");
  return PureState(v / norm);
}

DensityMatrix PureState::density() const {
  return DensityMatrix::normalized(v_ * v_.adjoint());
}

DensityMatrix kron(const DensityMatrix& a, const DensityMatrix& b) {
  return DensityMatrix::normalized(kron(a.matrix(), b.matrix()));
}

double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim()) throw DimensionError("trace_distance: dimension mismatch");
  return 0.5 * trace_norm(HermitianMatrix::symmetrized(rho.matrix() - sigma.matrix()));
}

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim()) throw DimensionError("fidelity: dimension mismatch");
  auto sqrt_psd = [](const DensityMatrix& s) {
    const double floor = 64.0 * std::numeric_limits<double>::epsilon();
    return spectral_apply(hermitian_eig(s.hermitian()),
                          [floor](double l) { return cplx(l > floor ? std::sqrt(l) : 0.0, 0.0); });
  };
  const double n1 = trace_norm_svd(sqrt_psd(rho) * sqrt_psd(sigma));
  return std::clamp(n1 * n1, 0.0, 1.0);
}

}  // namespace sbq
