#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "sbq/dme.hpp"
#include "sbq/errors.hpp"
#include "sbq/qpca.hpp"

using namespace sbq;
using oracle::max_abs;

namespace {
constexpr double kPi = std::numbers::pi;

ComplexMatrix diag_state(double r) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = r;
  m(1, 1) = 1 - r;
  return m;
}

// |0><0| (x) I + |1><1| (x) e^{-i rho t}, assembled blockwise.
ComplexMatrix controlled_unitary(const ComplexMatrix& rho, double t) {
  ComplexMatrix cu = ComplexMatrix::Zero(4, 4);
  cu.block(0, 0, 2, 2) = identity(2);
  cu.block(2, 2, 2, 2) = unitary_evolution(HermitianMatrix::symmetrized(rho), t);
  return cu;
}

ComplexMatrix simulate(const ComplexMatrix& rho, const ComplexMatrix& input, double t, int n) {
  ComplexMatrix x = input;
  const ComplexMatrix program = sbq::kron(oracle::ket_bra(2, 1, 1), rho);
  for (int k = 0; k < n; ++k) x = oracle::dme_step_joint(x, program, t / n);
  return x;
}

double total_variation(const std::vector<double>& p, const std::vector<double>& q) {
  double tv = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) tv += std::abs(p[i] - q[i]);
  return 0.5 * tv;
}

const ControlQubit kControls[] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {0.6, 0, 0.8}};
}  // namespace

TEST(ControlQubit, MatrixAndValidation) {
  EXPECT_LT(max_abs(ControlQubit{0.3, -0.4, 0.5}.matrix() - oracle::bloch(0.3, -0.4, 0.5)), 1e-15);
  EXPECT_THROW((ControlQubit{1, 1, 0}.validate()), ValidationError);
  EXPECT_NO_THROW((ControlQubit{0.6, 0, 0.8}.validate()));
}

TEST(QpcaInstance, Validation) {
  QpcaInstance inst;
  EXPECT_NO_THROW(inst.validate());
  inst.bits = 7;
  EXPECT_THROW(inst.validate(), DimensionError);
  inst.bits = 0;
  EXPECT_THROW(inst.validate(), DimensionError);
  inst.bits = 2;
  inst.m = 0;
  EXPECT_THROW(inst.validate(), DomainError);
  inst.m = 4;
  inst.rho = DensityMatrix::maximally_mixed(3);
  EXPECT_THROW(inst.validate(), DimensionError);
}

TEST(ControlledDmeStep, Examples) {
  const DensityMatrix rho = random_density(2, 3);
  EXPECT_LT(max_abs(controlled_dme_step(rho, 0.0).superop() - Channel::identity(4).superop()), 1e-15);

  const double delta = 0.4;
  const ComplexMatrix chi = random_pure(2, 4).density().matrix();
  const ComplexMatrix out = controlled_dme_step(rho, delta)(sbq::kron(oracle::ket_bra(2, 0, 0), chi));
  const ComplexMatrix expected = std::pow(std::cos(delta), 2) * sbq::kron(oracle::ket_bra(2, 0, 0), chi) +
                                 std::pow(std::sin(delta), 2) * sbq::kron(oracle::ket_bra(2, 1, 1), rho.matrix());
  EXPECT_LT(max_abs(out - expected), 1e-15);
}

TEST(ControlledDmeStep, MatchesJointUnitaryOracle) {
  for (std::uint64_t s = 0; s < 5; ++s) {
    const DensityMatrix rho = random_density(2, 10 + s);
    const ComplexMatrix program = sbq::kron(oracle::ket_bra(2, 1, 1), rho.matrix());
    for (double delta : {0.05, 0.5, 0.95}) {
      const ComplexMatrix via_joint = oracle::superop_of(
          4, 4, [&](const ComplexMatrix& x) { return oracle::dme_step_joint(x, program, delta); });
      EXPECT_LT(max_abs(controlled_dme_step(rho, delta).superop() - via_joint), 1e-12);
    }
  }
}

TEST(ControlledDmeClosedForm, Examples) {
  const ControlQubit g{0.6, 0, 0.8};
  const ComplexMatrix chi = oracle::ket_bra(2, 0, 0);
  EXPECT_LT(max_abs(controlled_dme_closed_form(g, 0.3, 0.0, 1).matrix() - sbq::kron(g.matrix(), chi)), 1e-15);

  const double r = 0.7, t = 1.3;
  const ComplexMatrix big = controlled_dme_closed_form({1, 0, 0}, r, t, 100000).matrix();
  EXPECT_LT(std::abs(big(0, 2) - 0.5 * std::polar(1.0, r * t)), 1e-4);

  const ComplexMatrix one_step = controlled_dme_closed_form({1, 0, 0}, r, 0.3, 1).matrix();
  const ComplexMatrix input = sbq::kron(ControlQubit{1, 0, 0}.matrix(), chi);
  EXPECT_LT(max_abs(one_step - controlled_dme_step(DensityMatrix(diag_state(r)), 0.3)(input)), 1e-12);

  const ComplexMatrix sim = power(controlled_dme_step(DensityMatrix(diag_state(0.75)), 2 * kPi / 64), 64)(
      sbq::kron(ControlQubit{1, 0, 0}.matrix(), chi));
  EXPECT_LT(max_abs(controlled_dme_closed_form({1, 0, 0}, 0.75, 2 * kPi, 64).matrix() - sim), 1e-8);

  EXPECT_THROW(controlled_dme_closed_form(g, 0.5, 2.0, 2), DomainError);
  EXPECT_THROW(controlled_dme_closed_form(g, 1.5, 0.5, 2), DomainError);
}

TEST(ControlledDmeClosedForm, PropertyMatchesStepComposition) {
  for (double r : {0.25, 0.5, 0.75, 1.0})
    for (double t : {kPi / 2, kPi, 2 * kPi})
      for (int n : {16, 64})
        for (const ControlQubit& g : kControls) {
          const ComplexMatrix input = sbq::kron(g.matrix(), oracle::ket_bra(2, 0, 0));
          const ComplexMatrix composed =
              power(controlled_dme_step(DensityMatrix(diag_state(r)), t / n), n)(input);
          const ComplexMatrix closed = controlled_dme_closed_form(g, r, t, n).matrix();
          EXPECT_LT(max_abs(closed - composed), 1e-8) << r << " " << t << " " << n;
          EXPECT_LT(max_abs(closed - simulate(diag_state(r), input, t, n)), 1e-8);
        }
}

TEST(ControlledDmeClosedForm, PropertyGeneralBasis) {
  for (std::uint64_t s = 0; s < 8; ++s) {
    const DensityMatrix rho = random_density(2, 40 + s);
    const auto eig = hermitian_eig(rho.hermitian());
    for (int i = 0; i < 2; ++i) {
      const ComplexVector v = eig.eigenvectors.col(i);
      const ControlQubit& g = kControls[s % 4];
      const ComplexMatrix input = sbq::kron(g.matrix(), (v * v.adjoint()).eval());
      const ComplexMatrix composed = power(controlled_dme_step(rho, 3.0 / 20), 20)(input);
      EXPECT_LT(max_abs(controlled_dme_closed_form(g, rho, i, 3.0, 20).matrix() - composed), 1e-10);
    }
  }
}

TEST(QpcaStepError, Examples) {
  EXPECT_NEAR(qpca_step_error(0.4, 0.0, 1), 0.0, 1e-15);
  EXPECT_NEAR(qpca_step_bound(1.0, 10) * 10, 1.9053, 1e-4);
  EXPECT_LE(qpca_step_error(1.0, 2 * kPi, 100), 1.9053 * 4 * kPi * kPi / 100);
  EXPECT_NEAR(qpca_step_bound(2 * kPi, 100), 0.752, 1e-3);
  EXPECT_THROW(qpca_step_error(0.5, 3.0, 3), DomainError);
  EXPECT_THROW(qpca_step_bound(3.0, 3), DomainError);
}

TEST(QpcaStepError, PropertyEqualsDirectTraceDistance) {
  for (double r : {0.0, 0.25, 0.5, 0.75, 1.0})
    for (double t : {kPi / 2, kPi, 2 * kPi})
      for (int n : {16, 64}) {
        const ComplexMatrix input = sbq::kron(ControlQubit{1, 0, 0}.matrix(), oracle::ket_bra(2, 0, 0));
        const ComplexMatrix cu = controlled_unitary(diag_state(r), t);
        const DensityMatrix ideal = DensityMatrix::normalized(cu * input * cu.adjoint());
        const DensityMatrix approx = DensityMatrix::normalized(simulate(diag_state(r), input, t, n));
        EXPECT_NEAR(qpca_step_error(r, t, n), trace_distance(approx, ideal), 1e-9) << r << " " << t << " " << n;
      }
}

TEST(QpcaStepError, PropertyWithinBound) {
  for (double r : {0.25, 0.5, 0.75, 1.0})
    for (double t : {kPi / 2, kPi, 2 * kPi})
      for (int n : {16, 64}) EXPECT_LE(qpca_step_error(r, t, n), qpca_step_bound(t, n) + 1e-9);
  SplitMix64 rng(8, 0);
  for (int k = 0; k < 300; ++k) {
    const double t = 0.1 + 20 * rng.uniform();
    const int n = static_cast<int>(std::ceil(t)) + 1 + static_cast<int>(rng() % 200);
    const double r = rng.uniform();
    EXPECT_LE(qpca_step_error(r, t, n), qpca_step_bound(t, n) + 1e-9) << r << " " << t << " " << n;
  }
}

TEST(QpcaTotalBound, Examples) {
  EXPECT_NEAR(qpca_total_bound(4.0, 1000), (2.0 / 3) * 4 * (4 + 4 * kPi) / 1000 * 2, 1e-15);
  EXPECT_NEAR(qpca_total_bound(4.0, 1000), 0.0885, 2e-4);
  const double t = qpca_total_time(2);
  EXPECT_NEAR(t, 6 * kPi, 1e-14);
  for (int m : {10, 40}) {
    EXPECT_NEAR(qpca_total_bound(t, 3 * m), (2.0 / 3) * t * (t + 4 * kPi) / (3 * m) * std::log2(t), 1e-13);
  }
  double prev = qpca_total_bound(t, 1);
  for (int n = 2; n < 200; ++n) {
    const double v = qpca_total_bound(t, n);
    EXPECT_LT(v, prev);
    prev = v;
  }
  EXPECT_THROW(qpca_total_bound(1.0, 10), DomainError);
}

TEST(QpcaTotalBound, PropertyWeightedErrorWithinTotal) {
  for (std::uint64_t s = 0; s < 6; ++s)
    for (int bits : {1, 2, 3})
      for (int m : {64, 128, 512}) {
        QpcaInstance inst{random_density(2, 70 + s), bits, m};
        EXPECT_LE(qpca_weighted_error(inst), qpca_total_bound(qpca_total_time(bits), bits * m) + 1e-9)
            << s << " " << bits << " " << m;
      }
}

TEST(RunQpca, IdealOracleDyadicEigenvalues) {
  const QpcaInstance inst{DensityMatrix(diag_state(0.75)), 2, 1};
  const QpcaResult res = run_qpca(inst, 4096, 3, QpcaOracle::ideal);
  ASSERT_EQ(res.probabilities.size(), 4u);
  EXPECT_EQ(res.outcome(3), "11");
  EXPECT_EQ(res.outcome(1), "01");
  EXPECT_DOUBLE_EQ(res.estimate(3), 0.75);
  const std::vector<double> exact{0.0, 0.25, 0.0, 0.75};
  EXPECT_LT(total_variation(res.probabilities, exact), 1e-12);

  std::vector<double> empirical;
  double sigma = 0.0;
  long long total = 0;
  for (std::size_t y = 0; y < 4; ++y) {
    empirical.push_back(static_cast<double>(res.counts[y]) / res.shots);
    sigma += 0.5 * std::sqrt(exact[y] * (1 - exact[y]) / res.shots);
    total += res.counts[y];
  }
  EXPECT_EQ(total, 4096);
  EXPECT_EQ(res.counts[0] + res.counts[2], 0);
  EXPECT_LE(total_variation(empirical, exact), 3 * sigma);
}

TEST(RunQpca, GeneralBasisIdeal) {
  const ComplexMatrix u = random_unitary(2, 5);
  const DensityMatrix rho(u * diag_state(0.25) * u.adjoint());
  const QpcaResult res = run_qpca({rho, 2, 1}, 0, 0, QpcaOracle::ideal);
  EXPECT_NEAR(res.probabilities[1], 0.25, 1e-10);
  EXPECT_NEAR(res.probabilities[3], 0.75, 1e-10);
}

TEST(RunQpca, DmeDeviationShrinksWithCopies) {
  const QpcaInstance base{DensityMatrix(diag_state(0.75)), 2, 1};
  const std::vector<double> ideal = run_qpca(base, 0, 0, QpcaOracle::ideal).probabilities;
  double prev = 1.0;
  for (int m : {8, 16, 32}) {
    QpcaInstance inst = base;
    inst.m = m;
    const double tv = total_variation(run_qpca(inst, 0, 0, QpcaOracle::dme).probabilities, ideal);
    EXPECT_LT(tv, prev) << m;
    prev = tv;
  }
}

TEST(RunQpca, MaximallyMixedOneBit) {
  const QpcaResult ideal = run_qpca({DensityMatrix::maximally_mixed(2), 1, 1}, 256, 1, QpcaOracle::ideal);
  EXPECT_NEAR(ideal.probabilities[1], 1.0, 1e-12);
  EXPECT_EQ(ideal.counts[1], 256);
  double prev = 0.0;
  for (int m : {8, 32, 128}) {
    const QpcaResult res = run_qpca({DensityMatrix::maximally_mixed(2), 1, m}, 0, 0, QpcaOracle::dme);
    EXPECT_GT(res.probabilities[1], 0.5);
    EXPECT_GT(res.probabilities[1], prev);
    prev = res.probabilities[1];
  }
}

TEST(RunQpca, SeedDeterminism) {
  const QpcaInstance inst{random_density(2, 9), 3, 16};
  const QpcaResult a = run_qpca(inst, 1000, 42), b = run_qpca(inst, 1000, 42), c = run_qpca(inst, 1000, 43);
  EXPECT_EQ(a.counts, b.counts);
  EXPECT_NE(a.counts, c.counts);
  EXPECT_THROW(run_qpca(inst, -1), DomainError);
}
