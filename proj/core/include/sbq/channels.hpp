#pragma once

// Linear maps on matrices, stored as superoperators under the column-stacking
// convention vec(A X B) = (B^T (x) A) vec(X).

#include <cstdint>
#include <span>
#include <vector>

#include "sbq/linalg.hpp"

namespace sbq {

/// A linear map whose Choi matrix is Hermitian, i.e. it sends Hermitian
/// matrices to Hermitian matrices. Differences of channels and Lindbladian
/// generators live here.
class HermitianPreservingMap {
 public:
  /// Validates shape and Hermiticity of the Choi matrix (1e-10).
  HermitianPreservingMap(int in_dim, int out_dim, ComplexMatrix superop);

  int in_dim() const noexcept { return in_dim_; }
  int out_dim() const noexcept { return out_dim_; }
  const ComplexMatrix& superop() const noexcept { return superop_; }

  ComplexMatrix operator()(const ComplexMatrix& x) const;

  /// (id_R (x) this)(x) for x on C^ref_dim (x) C^in_dim.
  ComplexMatrix apply_extended(const ComplexMatrix& x, int ref_dim) const;

  /// Hilbert-Schmidt adjoint; its superoperator is the conjugate transpose.
  HermitianPreservingMap adjoint() const;

 protected:
  struct Unchecked {};
  HermitianPreservingMap(Unchecked, int in_dim, int out_dim, ComplexMatrix superop) noexcept
      : in_dim_(in_dim), out_dim_(out_dim), superop_(std::move(superop)) {}

  int in_dim_;
  int out_dim_;
  ComplexMatrix superop_;

  friend HermitianPreservingMap operator-(const HermitianPreservingMap&, const HermitianPreservingMap&);
  friend HermitianPreservingMap operator*(double, const HermitianPreservingMap&);
};

HermitianPreservingMap operator-(const HermitianPreservingMap& a, const HermitianPreservingMap& b);
HermitianPreservingMap operator*(double s, const HermitianPreservingMap& m);

/// Completely positive trace-preserving map.
class Channel : public HermitianPreservingMap {
 public:
  /// Validates trace preservation (1e-9) and complete positivity: Choi
  /// eigenvalues >= -1e-8 and Tr_out J = I within 1e-8.
  Channel(int in_dim, int out_dim, ComplexMatrix superop);

  static Channel identity(int d);

  DensityMatrix apply(const DensityMatrix& rho) const;

 private:
  Channel(Unchecked u, int in_dim, int out_dim, ComplexMatrix superop) noexcept
      : HermitianPreservingMap(u, in_dim, out_dim, std::move(superop)) {}

  friend Channel trusted_channel(int, int, ComplexMatrix);
};

/// Wraps a superoperator known to be CPTP by construction without re-running
/// the eigenvalue checks. Intended for library code composing validated parts.
Channel trusted_channel(int in_dim, int out_dim, ComplexMatrix superop);

/// X -> U X U^dag; U must be unitary within 1e-9.
Channel channel_from_unitary(const ComplexMatrix& u);
/// X -> sum_k K X K^dag; requires sum_k K^dag K = I within 1e-9.
Channel channel_from_kraus(std::span<const ComplexMatrix> kraus);

DensityMatrix apply(const Channel& c, const DensityMatrix& rho);
/// a o b: b acts first.
Channel compose(const Channel& a, const Channel& b);
/// c o c o ... (n times); power(c, 0) is the identity channel.
Channel power(const Channel& c, int n);
/// id_R (x) c on C^ref_dim (x) C^in_dim.
Channel extend_with_reference(const Channel& c, int ref_dim);
/// a (x) b acting on the tensor product of their input spaces.
Channel tensor(const Channel& a, const Channel& b);

/// J = sum_ij |i><j| (x) m(|i><j|), input factor first.
ComplexMatrix choi(const HermitianPreservingMap& m);
/// Kraus operators from the Choi spectrum; eigenvalues below `threshold` are dropped.
std::vector<ComplexMatrix> kraus(const Channel& c, double threshold = 1e-12);

// -- diamond distance ------------------------------------------------------

enum class DiamondKind { exact_unitary_pair, ascent_lower_bound };

struct DiamondEstimate {
  double value = 0.0;
  DiamondKind kind = DiamondKind::ascent_lower_bound;
  int restarts_used = 0;
  bool converged = false;
};

struct AscentOptions {
  int restarts = 32;
  double tol = 1e-10;
  int max_iterations = 500;
  std::uint64_t seed = 0;
};

/// Certified lower bound on (1/2)||m||_diamond, maximised over pure inputs
/// on C^d (x) C^d by alternating between the sign of the output and the top
/// eigenvector of the adjoint-mapped sign.
DiamondEstimate diamond_lower_ascent(const HermitianPreservingMap& m, const AscentOptions& opts = {});

/// Normalised diamond distance between U^{(x)m} and V^{(x)m} conjugations:
/// sqrt(1 - delta^2) with delta the distance from the origin to the convex
/// hull of the m-fold eigenvalue products of V^dag U.
double unitary_pair_diamond(const ComplexMatrix& u, const ComplexMatrix& v, int m = 1);
DiamondEstimate unitary_pair_estimate(const ComplexMatrix& u, const ComplexMatrix& v, int m = 1);

/// Minimum modulus over the convex hull of points on the unit circle.
double hull_min_distance(std::span<const cplx> points);

}  // namespace sbq
