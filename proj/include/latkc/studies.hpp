#pragma once

// Experiment drivers behind the command-line tool. Each study produces a
// StudyOutput; write_study() turns it into files:
//
//   <dir>/<name>.csv           one row per n (or per method and n), with the
//                              seed, generating-vector hash and config hash
//   <dir>/<name>_rates.csv     fitted log2-log2 slopes with their n-window
//   <dir>/series/<name>_<series>.dat   "n value" pairs, one series per file
//   <dir>/index.txt            one line per series file: path, study, series
//
// All numbers are printed with 17 significant digits, so reruns with the same
// configuration are byte-identical.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "latkc/config.hpp"
#include "latkc/kernel.hpp"
#include "latkc/pde.hpp"
#include "latkc/points.hpp"

namespace latkc {

enum class Profile { Ci, Full };
Profile parse_profile(const std::string& name);
const char* to_string(Profile p) noexcept;

struct Series {
  std::string name;
  std::vector<double> ns;
  std::vector<double> values;
};

struct RateEntry {
  std::string series;
  double slope;
  std::uint64_t n_lo;
  std::uint64_t n_hi;
  std::size_t used;
  std::size_t skipped;
};

struct StudyOutput {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::vector<Series> series;
  std::vector<RateEntry> rates;

  const RateEntry& rate(const std::string& series_name) const;
};

void write_study(const StudyOutput& out, const std::filesystem::path& dir);
/// Writes index.txt for every series file under dir/series.
void write_series_index(const std::vector<StudyOutput>& outs, const std::filesystem::path& dir);

/// Slopes over series entries with n >= n_min (default: skip the two smallest n).
std::vector<RateEntry> fit_series(const std::vector<Series>& series, std::optional<double> n_min);

std::string gv_hash(const GeneratingVector& gv);

// --- oned: rate doubling on the left-Riemann lattice -----------------------

struct OnedConfig {
  std::vector<std::uint64_t> schedule;  // default 2^1 .. 2^10
  std::string integrand = "exp";        // "exp" or "quad" (x^2)
  std::optional<double> fit_n_min;
  unsigned jobs = 1;
};
OnedConfig oned_config(const KeyValueConfig& cfg, Profile profile);
StudyOutput run_oned(const OnedConfig& cfg, std::uint64_t seed, const std::string& config_hash);

// --- wce2d: shifted, tent-transformed lattice, H^2-optimal weights --------

struct Wce2dConfig {
  std::filesystem::path gv_file;        // default: bundled (1, 182667)
  std::vector<std::uint64_t> schedule;  // default 2^2 .. 2^10
  int alpha_weights = 2;
  int alpha_eval = 4;
  std::optional<double> fit_n_min;
  unsigned jobs = 1;
};
Wce2dConfig wce2d_config(const KeyValueConfig& cfg, Profile profile);
StudyOutput run_wce2d(const Wce2dConfig& cfg, std::uint64_t seed, const std::string& config_hash);

// --- pde-uq ----------------------------------------------------------------

struct PdeUqStudyConfig {
  std::vector<std::size_t> dimensions;  // ci: {1, 5}; full: {1, 5, 20, 100}
  pde::UqConfig base;                   // s is overwritten per dimension
  std::filesystem::path gv_file;        // default: bundled POD lattice sequence
  std::optional<double> fit_n_min;
};
PdeUqStudyConfig pde_uq_config(const KeyValueConfig& cfg, Profile profile);
std::vector<StudyOutput> run_pde_uq(const PdeUqStudyConfig& cfg, std::uint64_t seed,
                                    const std::string& config_hash);

// --- one-shot weights / WCE -------------------------------------------------

/// Kernel plus point set described by a key-value file (see README).
struct ProblemSpec {
  KernelSpec kernel;
  PointSet points;
};
ProblemSpec problem_spec(const KeyValueConfig& cfg, std::uint64_t seed);

/// Directory holding the bundled generating-vector files.
std::filesystem::path data_dir();

/// Canonical hash of the effective configuration (config text + profile).
std::string config_hash(const KeyValueConfig& cfg, Profile profile, const std::string& study);

}  // namespace latkc
