#include <cmath>
#include <numbers>

#include <Eigen/QR>

#include "sbq/errors.hpp"
#include "sbq/linalg.hpp"

namespace sbq {

namespace {

std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

void require_dim(int d) {
  if (d < 2) throw DimensionError("random sampling requires d >= 2");
}

}  // namespace

SplitMix64::SplitMix64(std::uint64_t seed, std::uint64_t stream)
    : state_(mix64(seed ^ mix64(stream + kGolden))) {}

SplitMix64::result_type SplitMix64::operator()() noexcept {
  state_ += kGolden;
  return mix64(state_);
}

double SplitMix64::uniform() noexcept {
  return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

double SplitMix64::normal() noexcept {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

ComplexMatrix random_ginibre(int rows, int cols, SplitMix64& rng) {
  ComplexMatrix g(rows, cols);
  const double scale = std::sqrt(0.5);
  for (int c = 0; c < cols; ++c) {
    for (int r = 0; r < rows; ++r) {
      const double re = rng.normal();
      const double im = rng.normal();
      g(r, c) = cplx(scale * re, scale * im);
    }
  }
  return g;
}

DensityMatrix random_density(int d, std::uint64_t seed) {
  require_dim(d);
  SplitMix64 rng(seed, 1);
  const ComplexMatrix g = random_ginibre(d, d, rng);
  return DensityMatrix::normalized(g * g.adjoint());
}

PureState random_pure(int d, std::uint64_t seed) {
  require_dim(d);
  SplitMix64 rng(seed, 2);
  return PureState::normalized(random_ginibre(d, 1, rng).col(0));
}

ComplexMatrix random_unitary(int d, std::uint64_t seed) {
  require_dim(d);
  SplitMix64 rng(seed, 3);
  const ComplexMatrix g = random_ginibre(d, d, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ() * identity(d);
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < d; ++k) {
    const double mag = std::abs(r(k, k));
    if (mag > 0.0) q.col(k) *= r(k, k) / mag;
  }
  return q;
}

}  // namespace sbq
