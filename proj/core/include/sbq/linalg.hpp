#pragma once

// Dense complex linear algebra kernels shared by every module.
//
// Conventions used throughout the library:
//   * matrices are Eigen column-major, so vec(X) is the column-stacking of X;
//   * multipartite spaces are ordered as in kron(a, b): the left factor is the
//     most significant index.

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace sbq {

using cplx = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kTraceTol = 1e-12;
inline constexpr double kPsdTol = 1e-10;
inline constexpr double kNormTol = 1e-12;

/// Largest entrywise deviation |A_ij - conj(A_ji)|.
double hermiticity_defect(const ComplexMatrix& a);

/// Largest entrywise |A_ij - B_ij|; dimensions must agree.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

/// A square matrix verified Hermitian at construction. The stored matrix is
/// the exactly-symmetrised (A + A^dag)/2.
class HermitianMatrix {
 public:
  explicit HermitianMatrix(const ComplexMatrix& m, double tol = kHermitianTol);

  /// Symmetrises without validation, for matrices Hermitian by construction
  /// (e.g. outputs of Hermiticity-preserving maps) that carry rounding noise.
  static HermitianMatrix symmetrized(const ComplexMatrix& m);

  const ComplexMatrix& matrix() const noexcept { return m_; }
  Eigen::Index dim() const noexcept { return m_.rows(); }

 private:
  struct Trusted {};
  HermitianMatrix(Trusted, ComplexMatrix m) : m_(std::move(m)) {}
  ComplexMatrix m_;
};

struct HermitianEig {
  RealVector eigenvalues;      // ascending
  ComplexMatrix eigenvectors;  // columns, orthonormal
};

HermitianEig hermitian_eig(const HermitianMatrix& a);
/// Validates Hermiticity (within kHermitianTol) before decomposing.
HermitianEig hermitian_eig(const ComplexMatrix& a);

/// V f(diag(lambda)) V^dag for a real function applied to the spectrum.
template <class F>
ComplexMatrix spectral_apply(const HermitianEig& eig, F&& f) {
  const Eigen::Index n = eig.eigenvalues.size();
  ComplexVector fl(n);
  for (Eigen::Index i = 0; i < n; ++i) fl(i) = f(eig.eigenvalues(i));
  return eig.eigenvectors * fl.asDiagonal() * eig.eigenvectors.adjoint();
}

ComplexMatrix identity(Eigen::Index d);
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexVector kron(const ComplexVector& a, const ComplexVector& b);

/// Partial trace over every subsystem not listed in `keep`. Kept subsystems
/// stay in their original order.
ComplexMatrix partial_trace(const ComplexMatrix& m, std::span<const int> dims,
                            std::span<const int> keep);
ComplexMatrix partial_trace(const ComplexMatrix& m, std::initializer_list<int> dims,
                            std::initializer_list<int> keep);

/// Reorders tensor factors: output factor k is input factor `order[k]`.
ComplexMatrix permute_subsystems(const ComplexMatrix& m, std::span<const int> dims,
                                 std::span<const int> order);

/// SWAP = sum_ij |i><j| (x) |j><i| on C^d (x) C^d.
ComplexMatrix swap_operator(int d);

/// General e^A: scaling and squaring with a degree-13 Pade approximant.
ComplexMatrix matrix_exp(const ComplexMatrix& a);
/// e^H for Hermitian H via its eigendecomposition.
ComplexMatrix matrix_exp(const HermitianMatrix& h);
/// e^{-iHt} via the eigendecomposition of H.
ComplexMatrix unitary_evolution(const HermitianMatrix& h, double t);

/// Singular values, descending.
RealVector singular_values(const ComplexMatrix& a);

/// Schatten 1-norm. Hermitian input (within kHermitianTol) uses sum |lambda|,
/// anything else the singular values.
double trace_norm(const ComplexMatrix& a);
double trace_norm(const HermitianMatrix& a);
/// Always through singular values; used to cross-check the Hermitian route.
double trace_norm_svd(const ComplexMatrix& a);

double operator_norm(const ComplexMatrix& a);

bool is_unitary(const ComplexMatrix& u, double tol = 1e-9);

/// Unit-trace positive semidefinite matrix.
class DensityMatrix {
 public:
  /// Validates Hermiticity (1e-12), trace (1e-12) and min eigenvalue (>= -1e-10).
  explicit DensityMatrix(const ComplexMatrix& m);

  static DensityMatrix maximally_mixed(int d);
  static DensityMatrix basis_state(int d, int k);
  /// Hermitian-symmetrises and renormalises the trace, then validates.
  static DensityMatrix normalized(const ComplexMatrix& m);

  int dim() const noexcept { return static_cast<int>(m_.rows()); }
  const ComplexMatrix& matrix() const noexcept { return m_; }
  HermitianMatrix hermitian() const;

 private:
  ComplexMatrix m_;
};

/// Unit-norm state vector.
class PureState {
 public:
  explicit PureState(const ComplexVector& amplitudes);

  static PureState normalized(const ComplexVector& v);

  int dim() const noexcept { return static_cast<int>(v_.size()); }
  const ComplexVector& amplitudes() const noexcept { return v_; }
  DensityMatrix density() const;

 private:
  ComplexVector v_;
};

DensityMatrix kron(const DensityMatrix& a, const DensityMatrix& b);

/// (1/2) ||rho - sigma||_1.
double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma);
/// ||sqrt(rho) sqrt(sigma)||_1^2.
double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

// -- seeded sampling ---------------------------------------------------------

/// SplitMix64 generator keyed by (seed, stream). Satisfies
/// UniformRandomBitGenerator.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed, std::uint64_t stream = 0);

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~result_type{0}; }
  result_type operator()() noexcept;

  /// Uniform double in [0, 1).
  double uniform() noexcept;
  /// Standard normal deviate (Box-Muller).
  double normal() noexcept;

 private:
  std::uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Matrix with i.i.d. standard complex Gaussian entries.
ComplexMatrix random_ginibre(int rows, int cols, SplitMix64& rng);

/// G G^dag / Tr[G G^dag] for square Ginibre G.
DensityMatrix random_density(int d, std::uint64_t seed);
/// Normalised complex Gaussian vector (Haar-distributed pure state).
PureState random_pure(int d, std::uint64_t seed);
/// Haar unitary from the QR decomposition of a Ginibre matrix.
ComplexMatrix random_unitary(int d, std::uint64_t seed);

}  // namespace sbq
