// sbqsim: run a parameter sweep and write a CSV or JSON report.
//
//   sbqsim dme --config sweep.cfg --out report.csv
//   sbqsim wml --set dims=2 --set t_grid=1 --set n_grid=100 --set seeds=1
//
// Exit status: 0 when every row passes, 1 when some row fails, 2 on usage or
// I/O errors.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sbq/errors.hpp"
#include "sbq/sweep.hpp"

namespace {

struct Options {
  std::string config;
  std::string out;
  std::string format = "csv";
  std::uint64_t seed = 0;
  int restarts = 0;
  std::vector<std::string> sets;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw sbq::IoError("cannot read config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Experiment named in the config text, if any.
std::string config_experiment(const std::string& text) {
  static const std::regex re(R"(^\s*experiment\s*=\s*([A-Za-z_\-]+))");
  std::istringstream in(text);
  std::string line, found;
  while (std::getline(in, line)) {
    std::smatch m;
    if (std::regex_search(line, m, re)) found = m[1];
  }
  return found;
}

int run(const std::string& subcommand, const Options& opt, bool seed_given, bool restarts_given) {
  const sbq::Experiment experiment = sbq::parse_experiment(subcommand);

  sbq::ConfigOverrides overrides;
  overrides["experiment"] = sbq::to_string(experiment);
  for (const auto& kv : opt.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw sbq::UsageError("--set expects key=value, got '" + kv + "'");
    overrides[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  std::uint64_t seed = 0;
  if (const char* env = std::getenv("SBQSIM_SEED"); env && *env) {
    try {
      seed = std::stoull(env);
    } catch (const std::exception&) {
      throw sbq::UsageError(std::string("SBQSIM_SEED is not an unsigned integer: ") + env);
    }
  }
  if (seed_given) seed = opt.seed;
  overrides["seed"] = std::to_string(seed);
  if (restarts_given) overrides["restarts"] = std::to_string(opt.restarts);
  if (!opt.out.empty()) overrides["output_path"] = opt.out;

  std::string text;
  if (!opt.config.empty()) {
    text = read_file(opt.config);
    const std::string named = config_experiment(text);
    if (!named.empty() && sbq::parse_experiment(named) != experiment) {
      throw sbq::UsageError("config names experiment '" + named + "' but the subcommand is '" + subcommand + "'");
    }
  }
  const sbq::SweepConfig cfg = sbq::parse_config_text(text, overrides);
  const sbq::ExperimentReport report = sbq::run_sweep(cfg);

  const std::string body = opt.format == "json" ? sbq::to_json(report) : sbq::to_csv(report);
  if (cfg.output_path.empty()) {
    std::cout << body;
  } else if (opt.format == "json") {
    sbq::emit_json(report, cfg.output_path);
  } else {
    sbq::emit_csv(report, cfg.output_path);
  }

  const int failures = report.failures();
  if (failures > 0) {
    std::cerr << "sbqsim: " << failures << " of " << report.rows.size() << " rows failed\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sample-complexity sweeps for density matrix exponentiation and Lindbladization"};
  app.require_subcommand(1);
  app.set_version_flag("--version", sbq::library_version());

  Options opt;
  const char* names[] = {"dme", "wml", "lb-ham", "lb-lind", "qpca", "diamond"};
  const char* help[] = {"DME error against 4 t^2/n",
                        "wave matrix Lindbladization error against 3 t^2 d^2/n",
                        "Hamiltonian sample-complexity lower bound",
                        "Lindbladian sample-complexity lower bound",
                        "qPCA accumulated controlled-DME error",
                        "ascent diamond estimate against exact unitary-pair distance"};
  std::vector<CLI::App*> subs;
  std::vector<CLI::Option*> seed_opts, restart_opts;
  for (int k = 0; k < 6; ++k) {
    CLI::App* sub = app.add_subcommand(names[k], help[k]);
    sub->add_option("--config", opt.config, "config file of key = value lines")->check(CLI::ExistingFile);
    sub->add_option("--out", opt.out, "output path (stdout when omitted)");
    sub->add_option("--format", opt.format, "report format")->check(CLI::IsMember({"csv", "json"}));
    seed_opts.push_back(sub->add_option("--seed", opt.seed, "ascent and report seed (default $SBQSIM_SEED or 0)"));
    restart_opts.push_back(sub->add_option("--restarts", opt.restarts, "ascent restarts")->check(CLI::PositiveNumber));
    sub->add_option("--set", opt.sets, "override a config key, key=value");
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    for (int k = 0; k < 6; ++k) {
      if (subs[k]->parsed()) {
        return run(names[k], opt, seed_opts[k]->count() > 0, restart_opts[k]->count() > 0);
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "sbqsim: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
