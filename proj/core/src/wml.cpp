#include "sbq/wml.hpp"

#include <bit>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "sbq/errors.hpp"

namespace sbq {

LindbladSpec::LindbladSpec(const ComplexMatrix& l) : l_(l) {
  if (l.rows() != l.cols()) throw DimensionError("Lindblad operator must be square");
  if (l.rows() < 2) throw DimensionError("Lindblad operator requires d >= 2");
  const double norm = l.norm();
  if (std::abs(norm - 1.0) > 1e-12) {
    throw ValidationError("Lindblad operator must have unit Frobenius norm, got " + std::to_string(norm));
  }
}

LindbladSpec LindbladSpec::normalized(const ComplexMatrix& l) {
  const double norm = l.norm();
  if (!(norm > 0.0)) throw ValidationError("cannot normalise a zero Lindblad operator");
  return LindbladSpec(l / norm);
}

LindbladSpec random_lindblad(int d, std::uint64_t seed) {
  if (d < 2) throw DimensionError("random_lindblad requires d >= 2");
  SplitMix64 rng(seed, 4);
  return LindbladSpec::normalized(random_ginibre(d, d, rng));
}

PureState program_state(const LindbladSpec& spec) {
  const int d = spec.dim();
  ComplexVector v(d * d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) v(i * d + j) = spec.l()(i, j);
  }
  return PureState::normalized(v);
}

ComplexMatrix lindblad_form_superop(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) throw DimensionError("lindblad_form_superop: operator must be square");
  const Eigen::Index d = a.rows();
  const ComplexMatrix id = identity(d);
  const ComplexMatrix ada = a.adjoint() * a;
  return kron(a.conjugate().eval(), a) - 0.5 * (kron(id, ada) + kron(ada.transpose().eval(), id));
}

HermitianPreservingMap lindbladian_superop(const LindbladSpec& spec) {
  return HermitianPreservingMap(spec.dim(), spec.dim(), lindblad_form_superop(spec.l()));
}

Channel ideal_lindblad_channel(const LindbladSpec& spec, double t) {
  if (!(t >= 0.0)) throw DomainError("ideal_lindblad_channel: t must be non-negative");
  return trusted_channel(spec.dim(), spec.dim(), matrix_exp((t * lindblad_form_superop(spec.l())).eval()));
}

MOperator m_operator(int d) {
  if (d < 2) throw DimensionError("m_operator requires d >= 2");
  ComplexVector gamma = ComplexVector::Zero(d * d);
  for (int j = 0; j < d; ++j) gamma(j * d + j) = 1.0;
  const ComplexMatrix proj = kron(identity(d), (gamma * gamma.adjoint()).eval());
  const ComplexMatrix sw = kron(swap_operator(d), identity(d));
  return {d, (proj * sw) / std::sqrt(static_cast<double>(d))};
}

HermitianPreservingMap m_lindbladian_superop(int d) {
  const MOperator m = m_operator(d);
  return HermitianPreservingMap(d * d * d, d * d * d, lindblad_form_superop(m.m));
}

namespace {

void check_dim_cap(int d, int max_dim) {
  if (d > max_dim) {
    throw DimensionError("wml: d = " + std::to_string(d) + " exceeds the dimension cap " + std::to_string(max_dim));
  }
}

// e^{Delta M} keyed on (d, bit pattern of Delta).
std::shared_ptr<const ComplexMatrix> cached_m_exponential(int d, double delta) {
  static std::mutex mutex;
  static std::map<std::pair<int, std::uint64_t>, std::shared_ptr<const ComplexMatrix>> cache;
  const auto key = std::make_pair(d, std::bit_cast<std::uint64_t>(delta));
  {
    std::lock_guard<std::mutex> lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  const ComplexMatrix gen = lindblad_form_superop(m_operator(d).m);
  auto value = std::make_shared<const ComplexMatrix>(matrix_exp((delta * gen).eval()));
  std::lock_guard<std::mutex> lock(mutex);
  return cache.try_emplace(key, std::move(value)).first->second;
}

}  // namespace

Channel wml_step_channel(const LindbladSpec& spec, double delta, int max_dim) {
  const int d = spec.dim();
  check_dim_cap(d, max_dim);
  if (!(delta >= 0.0 && delta < 1.0 / (2.0 * d))) {
    throw DomainError("wml step: delta must lie in [0, 1/(2d))");
  }
  const auto expm = cached_m_exponential(d, delta);
  const ComplexMatrix program = program_state(spec).density().matrix();
  const Eigen::Index d3 = static_cast<Eigen::Index>(d) * d * d;

  ComplexMatrix embedded(d3 * d3, d * d);
  for (int j = 0; j < d; ++j) {
    for (int i = 0; i < d; ++i) {
      ComplexMatrix e = ComplexMatrix::Zero(d, d);
      e(i, j) = 1.0;
      const ComplexMatrix joint = kron(e, program);
      embedded.col(i + j * d) = Eigen::Map<const ComplexVector>(joint.data(), joint.size());
    }
  }
  const ComplexMatrix evolved = (*expm) * embedded;

  ComplexMatrix s(d * d, d * d);
  const int dims[] = {d, d, d};
  const int keep[] = {0};
  for (Eigen::Index c = 0; c < d * d; ++c) {
    const ComplexMatrix out = Eigen::Map<const ComplexMatrix>(evolved.col(c).data(), d3, d3);
    const ComplexMatrix reduced = partial_trace(out, dims, keep);
    s.col(c) = Eigen::Map<const ComplexVector>(reduced.data(), reduced.size());
  }
  return trusted_channel(d, d, std::move(s));
}

DmeSchedule wml_schedule(double t, int n, int d) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("wml schedule: t must be finite and non-negative");
  if (n < 1) throw DomainError("wml schedule: n must be positive");
  if (!(static_cast<double>(n) > 2.0 * d * t)) throw DomainError("hypothesis n > 2dt violated");
  return {t, n, t / n};
}

Channel wml_channel(const LindbladSpec& spec, const DmeSchedule& sched, int max_dim) {
  wml_schedule(sched.t, sched.n, spec.dim());
  return power(wml_step_channel(spec, sched.delta, max_dim), sched.n);
}

DiamondEstimate wml_error_estimate(const LindbladSpec& spec, const DmeSchedule& sched, int restarts,
                                   std::uint64_t seed, int max_dim) {
  const Channel approx = wml_channel(spec, sched, max_dim);
  const Channel ideal = ideal_lindblad_channel(spec, sched.t);
  AscentOptions opts;
  opts.restarts = restarts;
  opts.seed = seed;
  return diamond_lower_ascent(ideal - approx, opts);
}

double wml_bound(double t, int n, int d) {
  const DmeSchedule s = wml_schedule(t, n, d);
  return 3.0 * s.t * s.t * d * d / s.n;
}

long long wml_sample_bound(double t, double eps, int d) {
  if (!(t >= 0.0)) throw DomainError("wml_sample_bound: t must be non-negative");
  if (!(eps > 0.0 && eps <= 1.0)) throw DomainError("wml_sample_bound: eps must lie in (0, 1]");
  if (d < 2) throw DimensionError("wml_sample_bound: d must be >= 2");
  return static_cast<long long>(std::ceil(3.0 * d * d * t * t / eps - 1e-9));
}

std::pair<double, double> superop_diamond_ceilings(const LindbladSpec& spec, const AscentOptions& l_opts,
                                                   const AscentOptions& m_opts) {
  const int d = spec.dim();
  const double l_norm = 2.0 * diamond_lower_ascent(lindbladian_superop(spec), l_opts).value;
  const double m_norm = 2.0 * diamond_lower_ascent(m_lindbladian_superop(d), m_opts).value;
  if (l_norm > 2.0 + 1e-6) throw ValidationError("||L||_diamond estimate exceeds 2: " + std::to_string(l_norm));
  if (m_norm > 2.0 * d + 1e-6) {
    throw ValidationError("||M||_diamond estimate exceeds 2d: " + std::to_string(m_norm));
  }
  return {l_norm, m_norm};
}

}  // namespace sbq
