// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "sbq/channels.hpp"
#include "sbq/dme.hpp"
#include "sbq/lowerbounds.hpp"
#include "sbq/qpca.hpp"
#include "sbq/wml.hpp"

using namespace sbq;

namespace {

constexpr double kPi = std::numbers::pi;

// Collects failures for one criterion; the first few are echoed.
class Check {
 public:
  void expect(bool ok, const std::string& what) {
    ++checks_;
    if (ok) return;
    ++failures_;
    if (failures_ <= 5) notes_.push_back(what);
  }
  void worst(double v) { worst_ = std::max(worst_, v); }

  int checks() const { return checks_; }
  int failures() const { return failures_; }
  double worst_value() const { return worst_; }
  const std::vector<std::string>& notes() const { return notes_; }

 private:
  int checks_ = 0;
  int failures_ = 0;
  double worst_ = 0.0;
  std::vector<std::string> notes_;
};

std::string fmt(double x, int digits = 3) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

int g_failed = 0;

void run(int id, const std::string& title, const std::function<std::string(Check&)>& body) {
  Check c;
  const auto start = std::chrono::steady_clock::now();
  std::string detail;
  try {
    detail = body(c);
  } catch (const std::exception& e) {
    c.expect(false, std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool ok = c.failures() == 0;
  if (!ok) ++g_failed;
  std::cout << (ok ? "PASS" : "FAIL") << " [" << id << "] " << title << ": " << c.checks() - c.failures() << "/"
            << c.checks() << " checks";
  if (!detail.empty()) std::cout << ", " << detail;
  std::cout << " (" << fmt(secs) << " s)\n";
  for (const auto& n : c.notes()) std::cout << "       " << n << "\n";
  std::cout.flush();
}

// -- criteria -----------------------------------------------------------------

std::string dme_sweep(Check& c) {
  for (int d : {2, 3})
    for (std::uint64_t s = 0; s < 20; ++s) {
      const DensityMatrix sigma = random_density(d, 1000 + s);
      for (double t : {0.5, 1.0, 2.0})
        for (int n : {10, 50, 200}) {
          const double v = dme_error_estimate(sigma, dme_schedule(t, n)).value;
          const double bound = dme_bound(t, n);
          c.worst(v / bound);
          c.expect(v <= bound + 1e-9, "d=" + std::to_string(d) + " t=" + fmt(t) + " n=" + std::to_string(n) +
                                          " estimate " + fmt(v) + " > " + fmt(bound));
        }
    }
  return "max estimate/bound " + fmt(c.worst_value());
}

std::string single_step(Check& c) {
  for (std::uint64_t s = 0; s < 100; ++s) {
    const DensityMatrix sigma = random_density(2, 2000 + s);
    const DensityMatrix rho = s % 2 ? random_density(4, 3000 + s) : random_pure(4, 3000 + s).density();
    for (double delta : {0.2, 0.1, 0.05}) {
      const double v = single_step_defect(sigma, rho, delta);
      c.worst(v / (8 * delta * delta));
      c.expect(v <= 8 * delta * delta, "seed " + std::to_string(s) + " delta " + fmt(delta) + ": " + fmt(v));
    }
  }
  return "max defect/(8 delta^2) " + fmt(c.worst_value());
}

std::string unitary_exactness(Check& c) {
  double worst_gap = 0.0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    const ComplexMatrix u = random_unitary(2, 4000 + s), v = random_unitary(2, 5000 + s);
    const double exact = unitary_pair_diamond(u, v);
    const double ascent = diamond_lower_ascent(channel_from_unitary(u) - channel_from_unitary(v)).value;
    worst_gap = std::max(worst_gap, std::abs(exact - ascent));
    c.expect(std::abs(exact - ascent) <= 1e-6, "pair " + std::to_string(s) + ": exact " + fmt(exact) + " ascent " +
                                                   fmt(ascent));
  }
  double worst_sin = 0.0;
  for (int k = 1; k <= 16; ++k) {
    const double t = kPi / 2 * k / 16;
    const QubitPairConstruction pair = antipodal_pair(0.5, 2 * t);
    const ComplexMatrix u = unitary_evolution(pair.rho().hermitian(), 2 * t);
    const ComplexMatrix v = unitary_evolution(pair.sigma().hermitian(), 2 * t);
    const double exact = unitary_pair_diamond(u, v, 1);
    const double ascent = diamond_lower_ascent(channel_from_unitary(u) - channel_from_unitary(v)).value;
    worst_sin = std::max({worst_sin, std::abs(exact - std::sin(t)), std::abs(ascent - std::sin(t))});
    c.expect(std::abs(exact - std::sin(t)) <= 1e-9, "exact at t=" + fmt(t));
    c.expect(std::abs(ascent - std::sin(t)) <= 1e-9, "ascent at t=" + fmt(t) + ": " + fmt(ascent));
  }
  return "max |ascent - exact| " + fmt(worst_gap) + ", max antipodal deviation " + fmt(worst_sin);
}

std::string query_complexity(Check& c) {
  for (double r : {0.25, 0.5, 1.0})
    for (double t : {0.5, 1.0, 2.0, kPi}) {
      const std::string cell = "r=" + fmt(r) + " t=" + fmt(t);
      const QubitPairConstruction pair = antipodal_pair(r, t);
      const int closed = m_star(r, t);
      int brute = -1;
      try {
        brute = m_star_bruteforce(pair);
      } catch (const std::exception& e) {
        c.expect(false, cell + ": " + e.what());
        continue;
      }
      c.expect(brute == closed, cell + ": brute force " + std::to_string(brute) + " vs closed form " +
                                    std::to_string(closed));
      if (closed >= 2) {
        const ComplexMatrix u = unitary_evolution(pair.rho().hermitian(), t);
        const ComplexMatrix v = unitary_evolution(pair.sigma().hermitian(), t);
        c.expect(unitary_pair_diamond(u, v, closed - 1) < 1.0, cell + ": m*-1 already perfect");
      }
    }
  return "";
}

std::string hamiltonian_chain(Check& c) {
  int points = 0;
  for (double t : {1.0, 2.0, 5.0, 10.0, 50.0})
    for (double frac : {0.1, 0.35, 0.6, 0.95}) {
      const double eps = frac * std::min(9 * t / (100 * kPi), 0.1);
      const int z = static_cast<int>(std::ceil((0.19 - eps) / eps - 1e-9));
      c.expect(z * eps >= 0.09 - 1e-12 && z * eps <= 0.19 + 1e-12, "z eps outside [0.09, 0.19]");
      const double chain = hamiltonian_lb_chain(t, eps);
      const double claim = hamiltonian_lb_theorem(t, eps);
      c.worst(claim / chain);
      c.expect(chain >= claim, "t=" + fmt(t) + " eps=" + fmt(eps) + ": " + fmt(chain) + " < " + fmt(claim));
      ++points;
    }
  double worst = 0.0;
  for (int k = 1; k <= 500; ++k) worst = std::max(worst, hamiltonian_lb_constant(0.5 * k / 500));
  c.expect(worst <= 1.151, "constant " + fmt(worst));
  return std::to_string(points) + " grid points, max constant " + fmt(worst);
}

std::string wml_checks(Check& c) {
  const int d = 2;
  double worst_ratio = 0.0;
  for (std::uint64_t s = 0; s < 5; ++s) {
    const LindbladSpec spec = random_lindblad(d, 6000 + s);
    const HermitianPreservingMap gen = lindbladian_superop(spec);
    const DensityMatrix rho = random_density(d, 7000 + s);
    for (double delta : {0.05, 0.025, 0.0125}) {
      const ComplexMatrix first = rho.matrix() + delta * gen(rho.matrix());
      const double defect = trace_norm(ComplexMatrix(wml_step_channel(spec, delta)(rho.matrix()) - first));
      worst_ratio = std::max(worst_ratio, defect / (delta * delta));
      c.expect(defect <= 6.0 * d * d * delta * delta, "derivative check at delta " + fmt(delta));
    }
    for (double t : {0.5, 1.0})
      for (int n : {50, 200}) {
        const double v = wml_error_estimate(spec, wml_schedule(t, n, d)).value;
        c.worst(v / wml_bound(t, n, d));
        c.expect(v <= wml_bound(t, n, d) + 1e-9, "estimate " + fmt(v) + " at t=" + fmt(t) + " n=" + std::to_string(n));
      }
  }
  return "max defect/delta^2 " + fmt(worst_ratio) + ", max estimate/bound " + fmt(c.worst_value());
}

std::string ceilings(Check& c) {
  AscentOptions l_opts;
  AscentOptions m_opts;
  m_opts.restarts = 2;
  double worst_l = 0.0;
  for (std::uint64_t s = 0; s < 10; ++s) {
    const LindbladSpec spec = random_lindblad(2, 8000 + s);
    const double l = 2.0 * diamond_lower_ascent(lindbladian_superop(spec), l_opts).value;
    worst_l = std::max(worst_l, l);
    c.expect(l <= 2.0 + 1e-6, "||L|| estimate " + fmt(l));
  }
  std::string detail = "max ||L|| " + fmt(worst_l);
  for (int d : {2, 3}) {
    AscentOptions opts = m_opts;
    if (d == 3) {
      opts.restarts = 1;
      opts.max_iterations = 25;
    }
    const double m = 2.0 * diamond_lower_ascent(m_lindbladian_superop(d), opts).value;
    c.expect(m <= 2.0 * d + 1e-6, "||M|| estimate " + fmt(m) + " at d=" + std::to_string(d));
    detail += ", ||M||(d=" + std::to_string(d) + ") " + fmt(m);
  }
  return detail;
}

std::string ghz_checks(Check& c) {
  double worst = 0.0;
  for (int m = 1; m <= 3; ++m)
    for (double t : {kPi, 2 * kPi, 4 * kPi})
      for (double phi : {kPi / 4, kPi / 2, kPi}) {
        const Channel one = ideal_lindblad_channel(l_phi(phi), t);
        Channel all = one;
        for (int k = 1; k < m; ++k) all = tensor(all, one);
        const DensityMatrix g = ghz_state(m);
        const double direct = trace_distance(all.apply(g), g);
        const double closed = ghz_distance_closed_form(m, t, phi);
        worst = std::max(worst, std::abs(direct - closed));
        c.expect(std::abs(direct - closed) <= 1e-8, "m=" + std::to_string(m) + " t=" + fmt(t) + " phi=" + fmt(phi));
      }
  for (int m = 1; m <= 30; ++m)
    for (double t : {1.0, kPi, 2 * kPi, 10.0, 40.0}) {
      if (m * t < 2 * kPi) continue;
      c.expect(nu_m_lower(m, t) >= 0.5, "nu below 1/2 at m=" + std::to_string(m));
    }
  return "max closed-form deviation " + fmt(worst);
}

std::string lindblad_constants(Check& c) {
  const auto [alpha, value] = alpha_star_search(1e-4);
  c.expect(std::abs(alpha - 0.08) <= 0.01, "alpha* " + fmt(alpha));
  c.expect(std::abs(value - 0.0049) <= 5e-4, "max value " + fmt(value));
  int points = 0;
  for (double t : {1.0, 3.0, 10.0, 30.0, 100.0})
    for (double frac : {0.5, 1.0}) {
      const double eps = frac * std::min(0.039, 0.013 * t);
      const double chain = lindblad_lb_chain(t, eps);
      const std::string cell = "t=" + fmt(t) + " eps=" + fmt(eps) + ": " + fmt(chain);
      c.worst(lindblad_lb_proof_constant(t, eps) / chain);
      c.expect(chain >= lindblad_lb_theorem(t, eps), cell + " below 1e-4 t^2/eps");
      c.expect(chain >= lindblad_lb_proof_constant(t, eps), cell + " below 1.8e-4 t^2/eps");
      ++points;
    }
  return "alpha* " + fmt(alpha) + ", max " + fmt(value) + ", " + std::to_string(points) + " window points";
}

std::string qpca_checks(Check& c) {
  const ControlQubit controls[] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {0.6, 0, 0.8}};
  double worst = 0.0;
  for (double r : {0.25, 0.5, 0.75, 1.0})
    for (double t : {kPi / 2, kPi, 2 * kPi})
      for (int n : {16, 64}) {
        ComplexMatrix rho = ComplexMatrix::Zero(2, 2);
        rho(0, 0) = r;
        rho(1, 1) = 1 - r;
        const Channel sim = power(controlled_dme_step(DensityMatrix(rho), t / n), n);
        for (const auto& g : controls) {
          const ComplexMatrix input = kron(g.matrix(), oracle::ket_bra(2, 0, 0));
          const double dev = oracle::max_abs(controlled_dme_closed_form(g, r, t, n).matrix() - sim(input));
          worst = std::max(worst, dev);
          c.expect(dev <= 1e-8, "closed form deviates " + fmt(dev));
        }
        c.expect(qpca_step_error(r, t, n) <= qpca_step_bound(t, n) + 1e-9, "step error above bound");
      }
  SplitMix64 rng(9000, 0);
  for (int k = 0; k < 500; ++k) {
    const double t = 0.05 + 30 * rng.uniform();
    const int n = static_cast<int>(std::ceil(t)) + 1 + static_cast<int>(rng() % 500);
    c.expect(qpca_step_error(rng.uniform(), t, n) <= qpca_step_bound(t, n) + 1e-9, "random step error above bound");
  }

  ComplexMatrix dyadic = ComplexMatrix::Zero(2, 2);
  dyadic(0, 0) = 0.75;
  dyadic(1, 1) = 0.25;
  const QpcaInstance inst{DensityMatrix(dyadic), 2, 1};
  const int shots = 4096;
  const QpcaResult ideal = run_qpca(inst, shots, 1, QpcaOracle::ideal);
  const std::vector<double> exact{0.0, 0.25, 0.0, 0.75};
  double tv = 0.0, sigma = 0.0, exact_dev = 0.0;
  for (std::size_t y = 0; y < 4; ++y) {
    tv += 0.5 * std::abs(static_cast<double>(ideal.counts[y]) / shots - exact[y]);
    sigma += 0.5 * std::sqrt(exact[y] * (1 - exact[y]) / shots);
    exact_dev = std::max(exact_dev, std::abs(ideal.probabilities[y] - exact[y]));
  }
  c.expect(ideal.outcome(3) == "11" && ideal.outcome(1) == "01", "outcome labels");
  c.expect(exact_dev <= 1e-12, "ideal distribution off by " + fmt(exact_dev));
  c.expect(tv <= 3 * sigma, "histogram TV " + fmt(tv) + " above 3 sigma " + fmt(3 * sigma));

  std::string trend;
  double prev = 2.0;
  for (int m : {8, 16, 32}) {
    QpcaInstance dm = inst;
    dm.m = m;
    const QpcaResult res = run_qpca(dm, shots, 1, QpcaOracle::dme);
    double dev = 0.0;
    for (std::size_t y = 0; y < 4; ++y) dev += 0.5 * std::abs(res.probabilities[y] - ideal.probabilities[y]);
    c.expect(dev < prev, "DME deviation did not shrink at m=" + std::to_string(m));
    trend += (trend.empty() ? "" : " > ") + fmt(dev, 5);
    prev = dev;
  }
  return "max closed-form deviation " + fmt(worst) + ", ideal TV " + fmt(tv) + ", DME TV " + trend;
}

std::string metric_identities(Check& c) {
  for (int k = 0; k < 200; ++k) {
    const int d = 2 + k % 3;
    const DensityMatrix a = random_density(d, 10000 + k), b = random_density(d, 20000 + k);
    c.expect(trace_distance(a, b) <= std::sqrt(1 - fidelity(a, b)) + 1e-9, "Fuchs-van de Graaf pair " + std::to_string(k));
  }
  double worst = 0.0;
  for (double r : {0.0, 0.25, 0.5, 0.75, 1.0})
    for (double rp : {0.0, 0.25, 0.5, 0.75, 1.0})
      for (double dot : {-1.0, -0.5, 0.0, 0.5}) {
        const QubitPairConstruction p{r, rp, dot, 1.0};
        const double dev = std::abs(pair_fidelity(p) - fidelity(p.rho(), p.sigma()));
        worst = std::max(worst, dev);
        c.expect(dev <= 1e-12, "pair fidelity deviates " + fmt(dev));
      }
  for (std::uint64_t s = 0; s < 50; ++s) {
    const int d = 2 + static_cast<int>(s % 3);
    const ComplexMatrix u1 = random_unitary(d, 30000 + s), u2 = random_unitary(d, 31000 + s);
    const ComplexMatrix v1 = random_unitary(d, 32000 + s), v2 = random_unitary(d, 33000 + s);
    const double lhs = unitary_pair_diamond(u2 * u1, v2 * v1);
    const double rhs = unitary_pair_diamond(u1, v1) + unitary_pair_diamond(u2, v2);
    c.expect(lhs <= rhs + 1e-9, "subadditivity at seed " + std::to_string(s));
  }
  return "max pair-fidelity deviation " + fmt(worst);
}

#ifdef SBQ_SBQSIM_PATH
std::string read_all(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int exit_code(const std::string& cmd) {
  const int status = std::system((cmd + " 2>/dev/null").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string cli_determinism(Check& c) {
  const std::string exe = SBQ_SBQSIM_PATH;
  const auto dir = std::filesystem::temp_directory_path() / "sbq_acceptance";
  std::filesystem::create_directories(dir);
  for (const std::string cmd : {"dme", "wml", "lb-ham", "lb-lind", "qpca", "diamond"}) {
    const std::string cfg = std::string(SBQ_GOLDEN_DIR) + "/" + cmd + ".cfg";
    const std::string a = (dir / (cmd + "_a.csv")).string(), b = (dir / (cmd + "_b.csv")).string();
    const int ca = exit_code("'" + exe + "' " + cmd + " --config '" + cfg + "' --out '" + a + "'");
    const int cb = exit_code("'" + exe + "' " + cmd + " --config '" + cfg + "' --out '" + b + "'");
    c.expect(ca == 0 && cb == 0, cmd + ": exit codes " + std::to_string(ca) + ", " + std::to_string(cb));
    const std::string x = read_all(a);
    c.expect(!x.empty() && x == read_all(b), cmd + ": CSV differs between runs");
  }
  const std::string viol = (dir / "violation.csv").string();
  const int cv = exit_code("'" + exe + "' wml --set dims=2 --set t_grid=1 --set n_grid=4 --set seeds=1 --out '" + viol + "'");
  c.expect(cv == 1, "violating sweep exited " + std::to_string(cv));
  const int cu = exit_code("'" + exe + "' dme --set bogus=1 --set dims=2 --set t_grid=1 --set n_grid=10 --set seeds=1");
  c.expect(cu == 2, "unknown key exited " + std::to_string(cu));
  std::filesystem::remove_all(dir);
  return "6 golden configs";
}
#else
std::string cli_determinism(Check& c) {
  c.expect(false, "built without the sbqsim tool");
  return "";
}
#endif

}  // namespace

int main() {
  run(1, "DME error within 4t^2/n", dme_sweep);
  run(2, "single-step defect within 8 delta^2", single_step);
  run(3, "unitary-pair diamond exactness", unitary_exactness);
  run(4, "zero-error query complexity", query_complexity);
  run(5, "Hamiltonian lower-bound chain", hamiltonian_chain);
  run(6, "WML first order and bound", wml_checks);
  run(7, "generator diamond ceilings", ceilings);
  run(8, "GHZ closed form and nu_m", ghz_checks);
  run(9, "Lindbladian lower-bound constants", lindblad_constants);
  run(10, "qPCA controlled DME and phase estimation", qpca_checks);
  run(11, "metric identities", metric_identities);
  run(12, "CLI determinism and exit codes", cli_determinism);
  std::cout << (g_failed == 0 ? "all criteria passed" : std::to_string(g_failed) + " criteria failed") << "\n";
  return g_failed == 0 ? 0 : 1;
}
