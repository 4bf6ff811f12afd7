// latkc: lattice rules with optimal kernel cubature weights.
//
//   latkc oned    [--config F] [--seed N] [--out DIR] [--profile ci|full] [--jobs J]
//   latkc wce2d   ...
//   latkc pde-uq  ...
//   latkc weights --config F [--out DIR] [--precision double|extended] [--dump-gram]
//   latkc wce     --config F [--out DIR] [--precision double|extended]
//
// Failures print one JSON object {"error": ..., "kind": ...} on stderr.

#include <CLI11.hpp>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <string>

#include "latkc/cubature.hpp"
#include "latkc/error.hpp"
#include "latkc/gram_io.hpp"
#include "latkc/studies.hpp"

namespace {

using latkc::KeyValueConfig;

struct CommonArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out = "out";
  std::string profile = "ci";
  std::optional<unsigned> jobs;
  std::string precision = "double";
  bool dump_gram = false;
};

void add_common(CLI::App* cmd, CommonArgs& a, bool config_required) {
  auto* c = cmd->add_option("--config", a.config, "key = value configuration file");
  if (config_required) c->required();
  cmd->add_option("--seed", a.seed, "base random seed (overrides the config)");
  cmd->add_option("--out", a.out, "output directory")->capture_default_str();
  cmd->add_option("--profile", a.profile, "default sizes")
      ->check(CLI::IsMember({"ci", "full"}))
      ->capture_default_str();
  cmd->add_option("--jobs", a.jobs, "worker threads (overrides the config)")->check(CLI::Range(1u, 1024u));
}

KeyValueConfig load_config(const CommonArgs& a) {
  return a.config.empty() ? KeyValueConfig::parse("", "<defaults>") : KeyValueConfig::load(a.config);
}

/// The config with --jobs applied; jobs does not change any result.
KeyValueConfig with_jobs(const KeyValueConfig& cfg, const CommonArgs& a) {
  if (!a.jobs) return cfg;
  std::string text;
  for (const auto& [k, v] : cfg.entries()) {
    if (k != "jobs") text += k + " = " + v + '\n';
  }
  text += "jobs = " + std::to_string(*a.jobs) + '\n';
  return KeyValueConfig::parse(text, cfg.source());
}

/// Hash input without the thread count.
KeyValueConfig without_jobs(const KeyValueConfig& cfg) {
  std::string text;
  for (const auto& [k, v] : cfg.entries()) {
    if (k != "jobs") text += k + " = " + v + '\n';
  }
  return KeyValueConfig::parse(text, cfg.source());
}

std::uint64_t seed_of(const KeyValueConfig& cfg, const CommonArgs& a) {
  if (a.seed) return *a.seed;
  if (cfg.has("seed")) {
    const auto s = cfg.get_int("seed");
    if (s < 0) throw latkc::InvalidArgument(cfg.source() + ": seed must be nonnegative");
    return static_cast<std::uint64_t>(s);
  }
  return 0;
}

void check_study(const KeyValueConfig& cfg, const std::string& study) {
  if (cfg.has("study") && cfg.get_string("study") != study) {
    throw latkc::InvalidArgument(cfg.source() + ": config is for study '" + cfg.get_string("study") +
                                 "', not '" + study + "'");
  }
}

void report(const latkc::StudyOutput& out, const std::filesystem::path& dir) {
  for (const auto& r : out.rates) {
    std::cout << out.name << ' ' << r.series << " slope " << latkc::format_real(r.slope) << " (n "
              << r.n_lo << ".." << r.n_hi << ")\n";
  }
  std::cout << "wrote " << (dir / (out.name + ".csv")).string() << '\n';
}

int run_study(const std::string& study, const CommonArgs& a) {
  const auto profile = latkc::parse_profile(a.profile);
  const auto cfg = with_jobs(load_config(a), a);
  check_study(cfg, study);
  const auto seed = seed_of(cfg, a);
  const auto hash = latkc::config_hash(without_jobs(cfg), profile, study);
  const std::filesystem::path dir = a.out;

  std::vector<latkc::StudyOutput> outs;
  if (study == "oned") {
    outs.push_back(latkc::run_oned(latkc::oned_config(cfg, profile), seed, hash));
  } else if (study == "wce2d") {
    outs.push_back(latkc::run_wce2d(latkc::wce2d_config(cfg, profile), seed, hash));
  } else {
    outs = latkc::run_pde_uq(latkc::pde_uq_config(cfg, profile), seed, hash);
  }
  for (const auto& out : outs) {
    latkc::write_study(out, dir);
    report(out, dir);
  }
  latkc::write_series_index(outs, dir);
  return 0;
}

template <typename Real>
int run_weights(const latkc::ProblemSpec& problem, const CommonArgs& a, unsigned jobs) {
  const auto gram = latkc::assemble_gram<Real>(problem.kernel, problem.points, {jobs});
  const auto rule = latkc::solve_optimal_weights(gram);
  const std::filesystem::path dir = a.out;
  std::filesystem::create_directories(dir);
  std::vector<double> w(rule.weights().begin(), rule.weights().end());
  latkc::write_weights_text(dir / "weights.txt", w);
  latkc::write_binary(dir / "weights.bin", latkc::to_binary(rule.weights()));
  if (a.dump_gram) latkc::write_binary(dir / "gram.bin", latkc::to_binary(gram));
  nlohmann::ordered_json j;
  j["n"] = problem.points.n();
  j["s"] = problem.points.s();
  j["points"] = latkc::to_string(problem.points.provenance());
  j["weight_sum"] = static_cast<double>(rule.weight_sum());
  j["residual"] = static_cast<double>(rule.residual());
  j["wce"] = static_cast<double>(latkc::wce_optimal(rule));
  std::cout << j.dump() << '\n';
  return 0;
}

template <typename Real>
int run_wce(const latkc::ProblemSpec& problem, const KeyValueConfig& cfg, const CommonArgs& a,
            unsigned jobs) {
  const std::string mode = cfg.has("weights") ? cfg.get_string("weights") : "equal";
  Real e = 0;
  if (mode == "equal") {
    e = latkc::wce_equal<Real>(problem.kernel, problem.points);
  } else {
    const auto gram = latkc::assemble_gram<Real>(problem.kernel, problem.points, {jobs});
    if (mode == "optimal") {
      e = latkc::wce_optimal(latkc::solve_optimal_weights(gram));
    } else {
      std::filesystem::path p = mode;
      if (p.is_relative()) p = std::filesystem::path(cfg.source()).parent_path() / p;
      const auto w = latkc::read_weights_text(p);
      if (w.size() != problem.points.n()) {
        throw latkc::InvalidArgument("weights file has " + std::to_string(w.size()) + " entries, expected " +
                                     std::to_string(problem.points.n()));
      }
      const std::vector<Real> wr(w.begin(), w.end());
      e = latkc::wce_general(gram, std::span<const Real>(wr));
    }
  }
  nlohmann::ordered_json j;
  j["n"] = problem.points.n();
  j["s"] = problem.points.s();
  j["weights"] = mode;
  j["wce"] = static_cast<double>(e);
  std::cout << j.dump() << '\n';
  if (!a.out.empty() && a.out != "-") {
    std::filesystem::create_directories(a.out);
    std::ofstream f(std::filesystem::path(a.out) / "wce.txt", std::ios::trunc);
    if (!f) throw latkc::IoError("cannot write " + a.out + "/wce.txt");
    f << latkc::format_real(static_cast<double>(e)) << '\n';
  }
  return 0;
}

int run_problem(const std::string& cmd, const CommonArgs& a) {
  const auto cfg = KeyValueConfig::load(a.config);
  const auto seed = seed_of(cfg, a);
  const unsigned jobs = a.jobs ? *a.jobs : cfg.has("jobs") ? static_cast<unsigned>(cfg.get_int("jobs")) : 1;
  const auto problem = latkc::problem_spec(cfg, seed);
  const bool extended = a.precision == "extended";
  if (cmd == "weights") {
    return extended ? run_weights<long double>(problem, a, jobs) : run_weights<double>(problem, a, jobs);
  }
  return extended ? run_wce<long double>(problem, cfg, a, jobs) : run_wce<double>(problem, cfg, a, jobs);
}

int fail(const std::string& kind, const std::string& message, int code) {
  nlohmann::ordered_json j;
  j["error"] = message;
  j["kind"] = kind;
  std::cerr << j.dump() << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lattice rules with optimal kernel cubature weights"};
  app.require_subcommand(1);
  CommonArgs a;
  for (const char* name : {"oned", "wce2d", "pde-uq"}) {
    auto* cmd = app.add_subcommand(name, std::string("run the ") + name + " study");
    add_common(cmd, a, false);
  }
  for (const char* name : {"weights", "wce"}) {
    auto* cmd = app.add_subcommand(name, name == std::string("weights") ? "solve and dump optimal weights"
                                                                        : "evaluate a worst-case error");
    add_common(cmd, a, true);
    cmd->add_option("--precision", a.precision, "working precision")
        ->check(CLI::IsMember({"double", "extended"}))
        ->capture_default_str();
    if (name == std::string("weights")) cmd->add_flag("--dump-gram", a.dump_gram, "also write gram.bin");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("usage", e.what(), 2);
  }

  const std::string cmd = app.get_subcommands().front()->get_name();
  try {
    if (cmd == "weights" || cmd == "wce") return run_problem(cmd, a);
    return run_study(cmd, a);
  } catch (const latkc::InvalidArgument& e) {
    return fail(e.kind(), e.what(), 2);
  } catch (const latkc::IoError& e) {
    return fail(e.kind(), e.what(), 3);
  } catch (const latkc::Error& e) {
    return fail(e.kind(), e.what(), 4);
  } catch (const std::filesystem::filesystem_error& e) {
    return fail("io", e.what(), 3);
  } catch (const std::exception& e) {
    return fail("internal", e.what(), 1);
  }
}
