#pragma once

// Controlled DME and a small quantum principal component analysis pipeline
// built on phase estimation.

#include <cstdint>
#include <string>
#include <vector>

#include "sbq/channels.hpp"

namespace sbq {

/// gamma = (I + x X + y Y + z Z)/2.
struct ControlQubit {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  /// Bloch vector length at most 1 + 1e-12.
  void validate() const;
  ComplexMatrix matrix() const;
};

enum class QpcaOracle { dme, ideal };

struct QpcaInstance {
  DensityMatrix rho = DensityMatrix::maximally_mixed(2);
  int bits = 1;  // T, phase-estimation register size
  int m = 1;     // program copies per controlled evolution

  /// d = 2, 1 <= bits <= 6, m >= 1.
  void validate() const;
};

/// DME step with program |1><1| (x) rho on control (x) system.
Channel controlled_dme_step(const DensityMatrix& rho, double delta);

/// n-step controlled DME applied to gamma (x) chi, written in rho's eigenbasis
/// with chi = |0><0| and rho = diag(r, 1 - r). Requires n > t.
DensityMatrix controlled_dme_closed_form(const ControlQubit& gamma, double r, double t, int n);
/// Same output for a general rho and its eigenvector `eigen_index`
/// (ascending eigenvalue order), in the computational basis.
DensityMatrix controlled_dme_closed_form(const ControlQubit& gamma, const DensityMatrix& rho, int eigen_index,
                                         double t, int n);

/// Trace distance between n-step controlled DME and the ideal controlled
/// evolution on |+><+| (x) chi, for eigenvalue r. Requires n > t and n >= ceil(2t/pi).
double qpca_step_error(double r, double t, int n);
/// (3/2 + 4/pi^2) t^2 / n under the same hypotheses.
double qpca_step_bound(double t, int n);
/// (2/3) t (t + 4 pi) / n * log2(t); t > 1.
double qpca_total_bound(double t, int n);

/// sum_i r_i sum_j qpca_step_error(r_i, 2 pi 2^{j-1}, m) over the QPE schedule.
double qpca_weighted_error(const QpcaInstance& inst);
/// Total time 2 pi (2^T - 1) of the QPE schedule.
double qpca_total_time(int bits);

struct QpcaResult {
  int bits = 0;
  int shots = 0;
  std::vector<double> probabilities;  // indexed by outcome y
  std::vector<long long> counts;

  /// T-bit string of y, most significant bit first.
  std::string outcome(int y) const;
  /// y / 2^T.
  double estimate(int y) const;
};

/// Phase estimation on rho with T register qubits. Register qubit j-1 controls
/// the evolution for t_j = 2 pi 2^{j-1}, either m-step controlled DME or the
/// exact controlled e^{-i rho t_j}. Shots are sampled from per-shot streams.
QpcaResult run_qpca(const QpcaInstance& inst, int shots = 4096, std::uint64_t seed = 0,
                    QpcaOracle oracle = QpcaOracle::dme);

}  // namespace sbq
