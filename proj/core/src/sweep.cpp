#include "sbq/sweep.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <tuple>

#include "json.hpp"
#include "sbq/channels.hpp"
#include "sbq/dme.hpp"
#include "sbq/errors.hpp"
#include "sbq/lowerbounds.hpp"
#include "sbq/qpca.hpp"
#include "sbq/wml.hpp"

namespace sbq {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> items;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

template <class T>
T parse_number(const std::string& key, const std::string& token) {
  std::istringstream in(token);
  T value{};
  in >> value;
  if (in.fail() || !in.eof()) throw UsageError("config key '" + key + "': invalid value '" + token + "'");
  return value;
}

template <class T>
std::vector<T> parse_list(const std::string& key, const std::string& value) {
  std::vector<T> out;
  for (const auto& tok : split_list(value)) out.push_back(parse_number<T>(key, tok));
  return out;
}

void apply_key(SweepConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "experiment") {
    cfg.experiment = parse_experiment(value);
  } else if (key == "dims") {
    cfg.dims = parse_list<int>(key, value);
  } else if (key == "t_grid") {
    cfg.t_grid = parse_list<double>(key, value);
  } else if (key == "n_grid") {
    cfg.n_grid = parse_list<long long>(key, value);
  } else if (key == "eps_grid") {
    cfg.eps_grid = parse_list<double>(key, value);
  } else if (key == "seeds") {
    cfg.seeds = parse_list<std::uint64_t>(key, value);
  } else if (key == "bits") {
    cfg.bits = parse_list<int>(key, value);
  } else if (key == "restarts") {
    cfg.restarts = parse_number<int>(key, value);
  } else if (key == "output_path") {
    cfg.output_path = value;
  } else if (key == "seed") {
    cfg.seed = parse_number<std::uint64_t>(key, value);
  } else {
    throw UsageError("unknown config key '" + key + "'");
  }
}

void require(bool ok, const std::string& key, Experiment e) {
  if (!ok) throw UsageError("config key '" + key + "' must be a non-empty list for experiment " + to_string(e));
}

std::set<int> dim_cap(Experiment e) {
  switch (e) {
    case Experiment::dme:
    case Experiment::diamond:
      return {2, 3, 4};
    case Experiment::wml:
      return {2, 3};
    default:
      return {2};
  }
}

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// -- cell evaluators ---------------------------------------------------------

void run_dme(const SweepConfig& cfg, std::vector<ReportRow>& rows) {
  const std::string name = to_string(cfg.experiment);
  for (int d : cfg.dims) {
    for (auto s : cfg.seeds) {
      const DensityMatrix sigma = random_density(d, s);
      for (double t : cfg.t_grid) {
        for (long long n : cfg.n_grid) {
          try {
            const DmeSchedule sched = dme_schedule(t, static_cast<int>(n));
            const auto est = dme_error_estimate(sigma, sched, cfg.restarts, cfg.seed);
            rows.push_back(make_row(name, d, t, n, 0.0, est.value, dme_bound(t, static_cast<int>(n)), s));
          } catch (const DomainError& e) {
            rows.push_back(failed_row(name, d, t, n, 0.0, s, e.what()));
          }
        }
      }
    }
  }
}

void run_wml(const SweepConfig& cfg, std::vector<ReportRow>& rows) {
  const std::string name = to_string(cfg.experiment);
  for (int d : cfg.dims) {
    for (auto s : cfg.seeds) {
      const LindbladSpec spec = random_lindblad(d, s);
      for (double t : cfg.t_grid) {
        for (long long n : cfg.n_grid) {
          try {
            const DmeSchedule sched = wml_schedule(t, static_cast<int>(n), d);
            const auto est = wml_error_estimate(spec, sched, cfg.restarts, cfg.seed);
            rows.push_back(make_row(name, d, t, n, 0.0, est.value, wml_bound(t, static_cast<int>(n), d), s));
          } catch (const DomainError& e) {
            rows.push_back(failed_row(name, d, t, n, 0.0, s, e.what()));
          }
        }
      }
    }
  }
}

void run_lb_ham(const SweepConfig& cfg, std::vector<ReportRow>& rows) {
  const std::string name = to_string(cfg.experiment);
  for (double t : cfg.t_grid) {
    for (double eps : cfg.eps_grid) {
      if (!hamiltonian_lb_valid(t, eps)) continue;
      const int z = static_cast<int>(std::ceil((0.19 - eps) / eps - 1e-9));
      rows.push_back(make_row(name, 2, t, z, eps, hamiltonian_lb_theorem(t, eps), hamiltonian_lb_chain(t, eps), 0));
    }
  }
}

void run_lb_lind(const SweepConfig& cfg, std::vector<ReportRow>& rows) {
  const std::string name = to_string(cfg.experiment);
  for (double t : cfg.t_grid) {
    for (double eps : cfg.eps_grid) {
      if (!lindblad_lb_valid(t, eps)) continue;
      const long long m = static_cast<long long>(std::floor(0.08 / eps));
      rows.push_back(
          make_row(name, 2, t, m, eps, lindblad_lb_proof_constant(t, eps), lindblad_lb_chain(t, eps), 0));
    }
  }
}

void run_qpca_cells(const SweepConfig& cfg, std::vector<ReportRow>& rows) {
  const std::string name = to_string(cfg.experiment);
  const std::vector<int> bits = cfg.bits.empty() ? std::vector<int>{2} : cfg.bits;
  for (auto s : cfg.seeds) {
    const DensityMatrix rho = random_density(2, s);
    for (int T : bits) {
      const double t = qpca_total_time(T);
      for (long long m : cfg.n_grid) {
        const long long n = T * m;
        try {
          QpcaInstance inst{rho, T, static_cast<int>(m)};
          const double measured = qpca_weighted_error(inst);
          rows.push_back(make_row(name, 2, t, n, 0.0, measured, qpca_total_bound(t, static_cast<int>(n)), s));
        } catch (const DomainError& e) {
          rows.push_back(failed_row(name, 2, t, n, 0.0, s, e.what()));
        }
      }
    }
  }
}

void run_diamond(const SweepConfig& cfg, std::vector<ReportRow>& rows) {
  const std::string name = to_string(cfg.experiment);
  AscentOptions opts;
  opts.restarts = cfg.restarts;
  opts.seed = cfg.seed;
  for (int d : cfg.dims) {
    for (auto s : cfg.seeds) {
      const ComplexMatrix u = random_unitary(d, s);
      const HermitianMatrix h = random_density(d, s).hermitian();
      for (double t : cfg.t_grid) {
        if (!(t >= 0.0)) {
          rows.push_back(failed_row(name, d, t, 1, 0.0, s, "t must be non-negative"));
          continue;
        }
        const ComplexMatrix v = u * unitary_evolution(h, t);
        const double exact = unitary_pair_diamond(u, v, 1);
        const double ascent = diamond_lower_ascent(channel_from_unitary(u) - channel_from_unitary(v), opts).value;
        rows.push_back(make_row(name, d, t, 1, 0.0, ascent, exact, s));
      }
    }
  }
}

double json_number(const nlohmann::json& j) { return j.is_null() ? kNaN : j.get<double>(); }

nlohmann::json json_value(double x) {
  if (std::isfinite(x)) return x;
  return nullptr;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << content;
  out.close();
  if (!out) throw IoError("failed writing '" + path + "'");
}

}  // namespace

const char* library_version() { return "0.1.0"; }

std::string to_string(Experiment e) {
  switch (e) {
    case Experiment::dme:
      return "dme";
    case Experiment::wml:
      return "wml";
    case Experiment::lb_ham:
      return "lb_ham";
    case Experiment::lb_lind:
      return "lb_lind";
    case Experiment::qpca:
      return "qpca";
    case Experiment::diamond:
      return "diamond";
  }
  return "unknown";
}

Experiment parse_experiment(const std::string& name) {
  std::string n = name;
  std::replace(n.begin(), n.end(), '-', '_');
  for (Experiment e : {Experiment::dme, Experiment::wml, Experiment::lb_ham, Experiment::lb_lind,
                       Experiment::qpca, Experiment::diamond}) {
    if (to_string(e) == n) return e;
  }
  throw UsageError("config key 'experiment': unknown experiment '" + name + "'");
}

void SweepConfig::validate() const {
  if (restarts < 1) throw UsageError("config key 'restarts' must be >= 1");
  switch (experiment) {
    case Experiment::dme:
    case Experiment::wml:
      require(!dims.empty(), "dims", experiment);
      require(!t_grid.empty(), "t_grid", experiment);
      require(!n_grid.empty(), "n_grid", experiment);
      require(!seeds.empty(), "seeds", experiment);
      break;
    case Experiment::lb_ham:
    case Experiment::lb_lind:
      require(!t_grid.empty(), "t_grid", experiment);
      require(!eps_grid.empty(), "eps_grid", experiment);
      break;
    case Experiment::qpca:
      require(!n_grid.empty(), "n_grid", experiment);
      require(!seeds.empty(), "seeds", experiment);
      for (int b : bits) {
        if (b < 1 || b > 6) throw UsageError("config key 'bits': register size must lie in [1, 6]");
      }
      break;
    case Experiment::diamond:
      require(!dims.empty(), "dims", experiment);
      require(!t_grid.empty(), "t_grid", experiment);
      require(!seeds.empty(), "seeds", experiment);
      break;
  }
  const auto cap = dim_cap(experiment);
  for (int d : dims) {
    if (!cap.count(d)) {
      std::string allowed;
      for (int c : cap) allowed += (allowed.empty() ? "" : ", ") + std::to_string(c);
      throw UsageError("config key 'dims': d = " + std::to_string(d) + " exceeds the cap {" + allowed +
                       "} for experiment " + to_string(experiment));
    }
  }
}

SweepConfig parse_config_text(const std::string& text, const ConfigOverrides& overrides) {
  SweepConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw UsageError("config line " + std::to_string(lineno) + ": expected key = value");
    apply_key(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  for (const auto& [key, value] : overrides) apply_key(cfg, key, value);
  cfg.validate();
  return cfg;
}

SweepConfig parse_config_file(const std::string& path, const ConfigOverrides& overrides) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), overrides);
}

int ExperimentReport::failures() const {
  return static_cast<int>(std::count_if(rows.begin(), rows.end(), [](const ReportRow& r) { return !r.pass; }));
}

ReportRow make_row(std::string experiment, int d, double t, long long n, double eps, double measured,
                   double bound, std::uint64_t seed) {
  ReportRow r;
  r.experiment = std::move(experiment);
  r.d = d;
  r.t = t;
  r.n = n;
  r.eps = eps;
  r.measured = measured;
  r.bound = bound;
  r.margin = bound - measured;
  r.pass = r.margin >= -kMarginTol;
  r.seed = seed;
  if (!r.pass) r.reason = "measured exceeds bound";
  return r;
}

ReportRow failed_row(std::string experiment, int d, double t, long long n, double eps, std::uint64_t seed,
                     std::string reason) {
  ReportRow r = make_row(std::move(experiment), d, t, n, eps, kNaN, kNaN, seed);
  r.reason = std::move(reason);
  return r;
}

ExperimentReport run_sweep(const SweepConfig& cfg) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  ExperimentReport report;
  switch (cfg.experiment) {
    case Experiment::dme:
      run_dme(cfg, report.rows);
      break;
    case Experiment::wml:
      run_wml(cfg, report.rows);
      break;
    case Experiment::lb_ham:
      run_lb_ham(cfg, report.rows);
      break;
    case Experiment::lb_lind:
      run_lb_lind(cfg, report.rows);
      break;
    case Experiment::qpca:
      run_qpca_cells(cfg, report.rows);
      break;
    case Experiment::diamond:
      run_diamond(cfg, report.rows);
      break;
  }
  std::stable_sort(report.rows.begin(), report.rows.end(), [](const ReportRow& a, const ReportRow& b) {
    return std::tie(a.experiment, a.d, a.t, a.n, a.eps, a.seed) < std::tie(b.experiment, b.d, b.t, b.n, b.eps, b.seed);
  });
  report.metadata.version = library_version();
  report.metadata.seed = cfg.seed;
  report.metadata.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return report;
}

std::string to_csv(const ExperimentReport& report) {
  std::string out = "experiment,d,t,n,eps,measured,bound,margin,pass\n";
  for (const auto& r : report.rows) {
    out += r.experiment + "," + std::to_string(r.d) + "," + format_double(r.t) + "," + std::to_string(r.n) + "," +
           format_double(r.eps) + "," + format_double(r.measured) + "," + format_double(r.bound) + "," +
           format_double(r.margin) + "," + (r.pass ? "true" : "false") + "\n";
  }
  return out;
}

std::string to_json(const ExperimentReport& report) {
  nlohmann::ordered_json j;
  j["metadata"] = {{"version", report.metadata.version},
                   {"seed", report.metadata.seed},
                   {"wall_time_ms", report.metadata.wall_time_ms}};
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& r : report.rows) {
    nlohmann::ordered_json row;
    row["experiment"] = r.experiment;
    row["d"] = r.d;
    row["t"] = json_value(r.t);
    row["n"] = r.n;
    row["eps"] = json_value(r.eps);
    row["measured"] = json_value(r.measured);
    row["bound"] = json_value(r.bound);
    row["margin"] = json_value(r.margin);
    row["pass"] = r.pass;
    row["seed"] = r.seed;
    row["reason"] = r.reason;
    j["rows"].push_back(std::move(row));
  }
  return j.dump(2) + "\n";
}

ExperimentReport report_from_json(const std::string& text) {
  ExperimentReport report;
  try {
    const auto j = nlohmann::json::parse(text);
    const auto& meta = j.at("metadata");
    report.metadata.version = meta.at("version").get<std::string>();
    report.metadata.seed = meta.at("seed").get<std::uint64_t>();
    report.metadata.wall_time_ms = meta.at("wall_time_ms").get<double>();
    for (const auto& row : j.at("rows")) {
      ReportRow r;
      r.experiment = row.at("experiment").get<std::string>();
      r.d = row.at("d").get<int>();
      r.t = json_number(row.at("t"));
      r.n = row.at("n").get<long long>();
      r.eps = json_number(row.at("eps"));
      r.measured = json_number(row.at("measured"));
      r.bound = json_number(row.at("bound"));
      r.margin = json_number(row.at("margin"));
      r.pass = row.at("pass").get<bool>();
      r.seed = row.at("seed").get<std::uint64_t>();
      r.reason = row.at("reason").get<std::string>();
      report.rows.push_back(std::move(r));
    }
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("malformed report JSON: ") + e.what());
  }
  return report;
}

void emit_csv(const ExperimentReport& report, const std::string& path) { write_file(path, to_csv(report)); }

void emit_json(const ExperimentReport& report, const std::string& path) { write_file(path, to_json(report)); }

}  // namespace sbq
