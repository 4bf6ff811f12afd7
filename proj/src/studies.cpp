#include "latkc/studies.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include "latkc/analytic1d.hpp"
#include "latkc/cubature.hpp"
#include "latkc/error.hpp"
#include "latkc/gram_io.hpp"
#include "latkc/rates.hpp"

#ifndef LATKC_DATA_DIR
#define LATKC_DATA_DIR "data"
#endif

namespace latkc {

Profile parse_profile(const std::string& name) {
  if (name == "ci") return Profile::Ci;
  if (name == "full") return Profile::Full;
  throw InvalidArgument("unknown profile '" + name + "' (expected ci or full)");
}

const char* to_string(Profile p) noexcept { return p == Profile::Ci ? "ci" : "full"; }

const RateEntry& StudyOutput::rate(const std::string& series_name) const {
  for (const auto& r : rates) {
    if (r.series == series_name) return r;
  }
  throw InvalidArgument(name + ": no fitted rate for series '" + series_name + "'");
}

namespace {

std::string u64(std::uint64_t v) { return std::to_string(v); }

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed: " + path.string());
}

std::string csv_line(const std::vector<std::string>& fields) {
  std::string line;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) line += ',';
    line += fields[i];
  }
  return line + '\n';
}

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw IoError("cannot create output directory " + dir.string());
  }
}

std::filesystem::path series_path(const std::string& study, const std::string& series) {
  return std::filesystem::path("series") / (study + "_" + series + ".dat");
}

/// n schedule from "n = ..." or "log2n = lo hi"; at most one may be given.
std::vector<std::uint64_t> schedule_from(const KeyValueConfig& cfg, int lo, int hi) {
  if (cfg.has("n") && cfg.has("log2n")) {
    throw InvalidArgument(cfg.source() + ": give either n or log2n, not both");
  }
  std::vector<std::uint64_t> out;
  if (cfg.has("n")) {
    for (auto v : cfg.get_int_list("n")) {
      if (v < 1) throw InvalidArgument(cfg.source() + ": n entries must be positive");
      out.push_back(static_cast<std::uint64_t>(v));
    }
  } else {
    if (cfg.has("log2n")) {
      const auto r = cfg.get_int_list("log2n");
      if (r.size() != 2) throw InvalidArgument(cfg.source() + ": log2n needs two integers 'lo hi'");
      lo = static_cast<int>(r[0]);
      hi = static_cast<int>(r[1]);
    }
    if (lo < 0 || hi > 32 || lo > hi) throw InvalidArgument(cfg.source() + ": log2n range out of bounds");
    for (int e = lo; e <= hi; ++e) out.push_back(std::uint64_t{1} << e);
  }
  if (out.empty()) throw InvalidArgument(cfg.source() + ": empty n schedule");
  if (!std::is_sorted(out.begin(), out.end()) ||
      std::adjacent_find(out.begin(), out.end()) != out.end()) {
    throw InvalidArgument(cfg.source() + ": n schedule must be strictly increasing");
  }
  return out;
}

std::optional<double> fit_min_from(const KeyValueConfig& cfg) {
  if (!cfg.has("fit_n_min")) return std::nullopt;
  return cfg.get_double("fit_n_min");
}

unsigned jobs_from(const KeyValueConfig& cfg) {
  if (!cfg.has("jobs")) return 1;
  const auto j = cfg.get_int("jobs");
  if (j < 1 || j > 1024) throw InvalidArgument(cfg.source() + ": jobs must be in 1..1024");
  return static_cast<unsigned>(j);
}

std::filesystem::path gv_file_from(const KeyValueConfig& cfg, const char* fallback) {
  if (!cfg.has("gv_file")) return data_dir() / fallback;
  std::filesystem::path p = cfg.get_string("gv_file");
  if (p.is_relative() && !cfg.source().empty() && cfg.source().front() != '<') {
    p = std::filesystem::path(cfg.source()).parent_path() / p;
  }
  return p;
}

void require_power_of_two(const std::vector<std::uint64_t>& schedule, const char* study) {
  for (auto n : schedule) {
    if (!std::has_single_bit(n)) {
      throw InvalidArgument(std::string(study) + ": schedule entries must be powers of two, got " + u64(n));
    }
  }
}

std::string real(long double v) { return format_real(static_cast<double>(v)); }

}  // namespace

void write_study(const StudyOutput& out, const std::filesystem::path& dir) {
  ensure_dir(dir);
  ensure_dir(dir / "series");

  std::string table = csv_line(out.columns);
  for (const auto& row : out.rows) {
    if (row.size() != out.columns.size()) throw InvalidArgument(out.name + ": ragged table row");
    table += csv_line(row);
  }
  write_file(dir / (out.name + ".csv"), table);

  std::string rates = csv_line({"series", "slope", "n_lo", "n_hi", "used", "skipped"});
  for (const auto& r : out.rates) {
    rates += csv_line({r.series, format_real(r.slope), u64(r.n_lo), u64(r.n_hi), std::to_string(r.used),
                       std::to_string(r.skipped)});
  }
  write_file(dir / (out.name + "_rates.csv"), rates);

  for (const auto& s : out.series) {
    std::string text;
    for (std::size_t i = 0; i < s.ns.size(); ++i) {
      text += format_real(s.ns[i]) + ' ' + format_real(s.values[i]) + '\n';
    }
    write_file(dir / series_path(out.name, s.name), text);
  }
}

void write_series_index(const std::vector<StudyOutput>& outs, const std::filesystem::path& dir) {
  ensure_dir(dir);
  std::string text = "# file study series\n";
  for (const auto& out : outs) {
    for (const auto& s : out.series) {
      text += series_path(out.name, s.name).generic_string() + ' ' + out.name + ' ' + s.name + '\n';
    }
  }
  write_file(dir / "index.txt", text);
}

std::vector<RateEntry> fit_series(const std::vector<Series>& series, std::optional<double> n_min) {
  std::vector<RateEntry> out;
  for (const auto& s : series) {
    double lo = 0.0;
    if (n_min) {
      lo = *n_min;
    } else {
      std::vector<double> sorted = s.ns;
      std::sort(sorted.begin(), sorted.end());
      lo = sorted.size() > 2 ? sorted[2] : sorted.empty() ? 0.0 : sorted.back() + 1.0;
    }
    std::vector<double> ns;
    std::vector<double> vs;
    for (std::size_t i = 0; i < s.ns.size(); ++i) {
      if (s.ns[i] >= lo) {
        ns.push_back(s.ns[i]);
        vs.push_back(s.values[i]);
      }
    }
    std::size_t usable = 0;
    for (double v : vs) usable += (v > 0.0 && std::isfinite(v)) ? 1 : 0;
    if (usable < 3) {
      std::cerr << "warning: series " << s.name << ": fewer than 3 positive values with n >= "
                << format_real(lo) << ", no rate fitted\n";
      continue;
    }
    const RateFit fit = fit_rate(ns, vs);
    if (fit.skipped > 0) {
      std::cerr << "warning: series " << s.name << ": " << fit.skipped
                << " non-positive value(s) excluded from the rate fit\n";
    }
    const auto [mn, mx] = std::minmax_element(ns.begin(), ns.end());
    out.push_back({s.name, fit.slope, static_cast<std::uint64_t>(*mn), static_cast<std::uint64_t>(*mx),
                   fit.used, fit.skipped});
  }
  return out;
}

std::string gv_hash(const GeneratingVector& gv) {
  std::string text = u64(gv.n()) + ':';
  for (std::size_t j = 0; j < gv.s(); ++j) {
    if (j) text += ',';
    text += u64(gv.z()[j]);
  }
  return hex64(fnv1a64(text));
}

std::filesystem::path data_dir() {
  if (const char* env = std::getenv("LATKC_DATA_DIR"); env && *env) return env;
  return LATKC_DATA_DIR;
}

std::string config_hash(const KeyValueConfig& cfg, Profile profile, const std::string& study) {
  std::string text = "study=" + study + "\nprofile=" + to_string(profile) + '\n';
  for (const auto& [k, v] : cfg.entries()) text += k + '=' + v + '\n';
  return hex64(fnv1a64(text));
}

// --- oned --------------------------------------------------------------------

OnedConfig oned_config(const KeyValueConfig& cfg, Profile /*profile*/) {
  cfg.require_known({"study", "seed", "n", "log2n", "integrand", "fit_n_min", "jobs"});
  OnedConfig out;
  out.schedule = schedule_from(cfg, 1, 10);
  if (cfg.has("integrand")) out.integrand = cfg.get_string("integrand");
  if (out.integrand != "exp" && out.integrand != "quad") {
    throw InvalidArgument(cfg.source() + ": integrand must be exp or quad");
  }
  out.fit_n_min = fit_min_from(cfg);
  out.jobs = jobs_from(cfg);
  return out;
}

StudyOutput run_oned(const OnedConfig& cfg, std::uint64_t seed, const std::string& config_hash) {
  require_power_of_two(cfg.schedule, "oned");
  for (auto n : cfg.schedule) {
    if (n < 2) throw InvalidArgument("oned: every n must be at least 2");
  }
  double exact = 0.0;
  double (*f)(double) = nullptr;
  if (cfg.integrand == "exp") {
    exact = std::numbers::e - 1.0;
    f = [](double x) { return std::exp(x); };
  } else if (cfg.integrand == "quad") {
    exact = 1.0 / 3.0;
    f = [](double x) { return x * x; };
  } else {
    throw InvalidArgument("oned: integrand must be exp or quad");
  }

  const KernelSpec spec = KernelSpec::unweighted(1, 1);
  const std::string gvh = gv_hash(GeneratingVector(cfg.schedule.back(), {1}));
  StudyOutput out;
  out.name = "oned";
  out.columns = {"n",           "integrand",      "err_equal",      "err_optimal", "wce_equal",
                 "wce_optimal", "delta_weights", "delta_wce2", "delta_gram_sum", "seed",
                 "gv_hash",     "config_hash"};
  Series err_eq{"err_equal", {}, {}};
  Series err_opt{"err_optimal", {}, {}};
  Series wce_eq{"wce_equal", {}, {}};
  Series wce_opt{"wce_optimal", {}, {}};

  for (auto n : cfg.schedule) {
    const PointSet ps = generate_lattice(GeneratingVector(n, {1}));
    const auto gram = assemble_gram<double>(spec, ps, AssemblyOptions{cfg.jobs});
    const auto rule = solve_optimal_weights(gram);
    std::vector<double> values(n);
    for (std::size_t k = 0; k < n; ++k) values[k] = f(ps(k, 0));
    const auto eq_rule = CubatureRule<double>::equal(ps);
    const double e_eq = std::abs(apply_rule(eq_rule, values) - exact);
    const double e_opt = std::abs(apply_rule(rule, values) - exact);
    const double w_eq = wce_equal(gram);
    const double w_opt = wce_optimal(rule);

    const auto w_closed = analytic1d::closed_form_weights(n);
    double dw = 0.0;
    for (std::size_t k = 0; k < n; ++k) dw = std::max(dw, std::abs(rule.weights()[k] - w_closed[k]));
    const double dwce = std::abs(w_opt * w_opt - analytic1d::optimal_wce_squared(n));
    const double nn = static_cast<double>(n);
    const double dsum = std::abs(gram.entry_sum() - analytic1d::gram_double_sum(n)) / (nn * nn);

    out.rows.push_back({u64(n), cfg.integrand, format_real(e_eq), format_real(e_opt), format_real(w_eq),
                        format_real(w_opt), format_real(dw), format_real(dwce), format_real(dsum),
                        u64(seed), gvh, config_hash});
    for (auto* s : {&err_eq, &err_opt, &wce_eq, &wce_opt}) s->ns.push_back(nn);
    err_eq.values.push_back(e_eq);
    err_opt.values.push_back(e_opt);
    wce_eq.values.push_back(w_eq);
    wce_opt.values.push_back(w_opt);
  }
  out.series = {err_eq, err_opt, wce_eq, wce_opt};
  out.rates = fit_series(out.series, cfg.fit_n_min);
  return out;
}

// --- wce2d -------------------------------------------------------------------

Wce2dConfig wce2d_config(const KeyValueConfig& cfg, Profile /*profile*/) {
  cfg.require_known({"study", "seed", "gv_file", "n", "log2n", "alpha_weights", "alpha_eval", "fit_n_min",
                     "jobs"});
  Wce2dConfig out;
  out.gv_file = gv_file_from(cfg, "lattice-kuo-s2.txt");
  out.schedule = schedule_from(cfg, 2, 10);
  if (cfg.has("alpha_weights")) out.alpha_weights = static_cast<int>(cfg.get_int("alpha_weights"));
  if (cfg.has("alpha_eval")) out.alpha_eval = static_cast<int>(cfg.get_int("alpha_eval"));
  out.fit_n_min = fit_min_from(cfg);
  out.jobs = jobs_from(cfg);
  return out;
}

StudyOutput run_wce2d(const Wce2dConfig& cfg, std::uint64_t seed, const std::string& config_hash) {
  require_power_of_two(cfg.schedule, "wce2d");
  const std::uint64_t n_max = cfg.schedule.back();
  const GeneratingVector gv = load_generating_vector(cfg.gv_file, 2, n_max);
  const KernelSpec spec_w = KernelSpec::unweighted(cfg.alpha_weights, 2);
  const KernelSpec spec_e = KernelSpec::unweighted(cfg.alpha_eval, 2);

  std::vector<PointSet> sets;
  std::uint64_t shift_seed = seed;
  for (int attempt = 0;; ++attempt) {
    if (attempt == 64) throw NumericalError("wce2d: no duplicate-free shift found in 64 attempts");
    const Shift shift = sample_shift(shift_seed, 2);
    sets.clear();
    std::optional<std::pair<std::size_t, std::size_t>> dup;
    std::uint64_t dup_n = 0;
    for (auto n : cfg.schedule) {
      sets.push_back(tent_transform(apply_shift(generate_lattice(gv.reduced(n)), shift)));
      dup = find_duplicate_rows(sets.back());
      if (dup) {
        dup_n = n;
        break;
      }
    }
    if (!dup) break;
    std::cerr << "wce2d: shift seed " << shift_seed << " gives coinciding tent nodes " << dup->first
              << " and " << dup->second << " at n = " << dup_n << ", resampling with seed "
              << shift_seed + 1 << '\n';
    ++shift_seed;
  }

  const std::string gvh = gv_hash(gv);
  StudyOutput out;
  out.name = "wce2d";
  out.columns = {"n", "wce_equal_h2", "wce_optimal_h2", "wce_equal_h4", "wce_optimal_h4",
                 "shift_seed", "seed", "gv_hash", "config_hash"};
  Series eq2{"wce_equal_h2", {}, {}};
  Series opt2{"wce_optimal_h2", {}, {}};
  Series eq4{"wce_equal_h4", {}, {}};
  Series opt4{"wce_optimal_h4", {}, {}};

  for (std::size_t i = 0; i < cfg.schedule.size(); ++i) {
    const auto& ps = sets[i];
    const auto gram_w = assemble_gram<long double>(spec_w, ps, AssemblyOptions{cfg.jobs});
    const auto rule = solve_optimal_weights(gram_w);
    const long double a = wce_equal(gram_w);
    const long double b = wce_optimal(rule);
    const auto gram_e = assemble_gram<long double>(spec_e, ps, AssemblyOptions{cfg.jobs});
    const long double c = wce_equal(gram_e);
    const long double d = wce_general(gram_e, rule.weights());

    const double nn = static_cast<double>(cfg.schedule[i]);
    out.rows.push_back({u64(cfg.schedule[i]), real(a), real(b), real(c), real(d), u64(shift_seed),
                        u64(seed), gvh, config_hash});
    for (auto* s : {&eq2, &opt2, &eq4, &opt4}) s->ns.push_back(nn);
    eq2.values.push_back(static_cast<double>(a));
    opt2.values.push_back(static_cast<double>(b));
    eq4.values.push_back(static_cast<double>(c));
    opt4.values.push_back(static_cast<double>(d));
  }
  out.series = {eq2, opt2, eq4, opt4};
  out.rates = fit_series(out.series, cfg.fit_n_min);
  return out;
}

// --- pde-uq ------------------------------------------------------------------

PdeUqStudyConfig pde_uq_config(const KeyValueConfig& cfg, Profile profile) {
  cfg.require_known({"study", "seed", "s", "L", "n", "log2n", "R", "delta", "n_ref", "methods", "gv_file",
                     "fit_n_min", "jobs"});
  PdeUqStudyConfig out;
  const bool full = profile == Profile::Full;
  if (cfg.has("s")) {
    for (auto v : cfg.get_int_list("s")) {
      if (v < 1) throw InvalidArgument(cfg.source() + ": s entries must be positive");
      out.dimensions.push_back(static_cast<std::size_t>(v));
    }
  } else if (full) {
    out.dimensions = {1, 5, 20, 100};
  } else {
    out.dimensions = {1, 5};
  }
  out.base.mesh_level = cfg.has("L") ? static_cast<int>(cfg.get_int("L")) : (full ? 5 : 4);
  out.base.schedule = schedule_from(cfg, 1, full ? 10 : 9);
  if (cfg.has("R")) {
    const auto r = cfg.get_int("R");
    if (r < 1) throw InvalidArgument(cfg.source() + ": R must be positive");
    out.base.shifts = static_cast<std::size_t>(r);
  }
  if (cfg.has("delta")) out.base.delta = cfg.get_double("delta");
  if (cfg.has("n_ref")) {
    const auto r = cfg.get_int("n_ref");
    if (r < 1) throw InvalidArgument(cfg.source() + ": n_ref must be positive");
    out.base.n_ref = static_cast<std::uint64_t>(r);
  }
  if (cfg.has("methods")) {
    out.base.methods.clear();
    for (const auto& m : cfg.get_word_list("methods")) out.base.methods.push_back(pde::parse_uq_method(m));
  }
  out.base.jobs = jobs_from(cfg);
  out.gv_file = gv_file_from(cfg, "lattice-pod-s100-m12.txt");
  out.fit_n_min = fit_min_from(cfg);
  return out;
}

std::vector<StudyOutput> run_pde_uq(const PdeUqStudyConfig& cfg, std::uint64_t seed,
                                    const std::string& config_hash) {
  if (cfg.dimensions.empty()) throw InvalidArgument("pde-uq: no dimensions selected");
  std::vector<StudyOutput> outs;
  for (std::size_t s : cfg.dimensions) {
    pde::UqConfig uq = cfg.base;
    uq.s = s;
    uq.seed = seed;
    const std::uint64_t n_max = std::max(uq.n_ref, *std::max_element(uq.schedule.begin(), uq.schedule.end()));
    const GeneratingVector gv = load_generating_vector(cfg.gv_file, s, n_max);
    const auto result = pde::run_uq_experiment(uq, gv);

    const std::string gvh = gv_hash(gv);
    StudyOutput out;
    out.name = "pde_uq_s" + std::to_string(s);
    out.columns = {"method", "n", "rms_error", "wce", "s", "L", "R", "n_ref", "seed", "gv_hash", "config_hash"};
    std::vector<Series> err(uq.methods.size());
    std::vector<Series> wce(uq.methods.size());
    for (std::size_t m = 0; m < uq.methods.size(); ++m) {
      err[m].name = std::string(pde::to_string(uq.methods[m])) + "_error";
      wce[m].name = std::string(pde::to_string(uq.methods[m])) + "_wce";
    }
    for (const auto& row : result.rows) {
      out.rows.push_back({pde::to_string(row.method), u64(row.n), format_real(row.rms_error),
                          format_real(row.wce), std::to_string(s), std::to_string(uq.mesh_level),
                          std::to_string(uq.shifts), u64(uq.n_ref), u64(seed), gvh, config_hash});
      const auto m = static_cast<std::size_t>(
          std::find(uq.methods.begin(), uq.methods.end(), row.method) - uq.methods.begin());
      err[m].ns.push_back(static_cast<double>(row.n));
      err[m].values.push_back(row.rms_error);
      wce[m].ns.push_back(static_cast<double>(row.n));
      wce[m].values.push_back(row.wce);
    }
    for (std::size_t m = 0; m < uq.methods.size(); ++m) {
      out.series.push_back(err[m]);
      out.series.push_back(wce[m]);
    }
    out.rates = fit_series(out.series, cfg.fit_n_min);
    outs.push_back(std::move(out));
  }
  return outs;
}

// --- one-shot problems ---------------------------------------------------------

namespace {

PointSet read_points_file(const std::filesystem::path& path, std::size_t s) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open points file " + path.string());
  std::vector<double> nodes;
  std::string line;
  std::size_t lineno = 0;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    for (char& c : line) {
      if (c == ',') c = ' ';
    }
    std::istringstream fields(line);
    std::vector<double> row;
    double v = 0.0;
    while (fields >> v) row.push_back(v);
    if (!fields.eof() || row.size() != s) {
      throw IoError(path.string() + ":" + std::to_string(lineno) + ": expected " + std::to_string(s) +
                    " reals");
    }
    for (double x : row) {
      if (!(x >= 0.0 && x <= 1.0)) {
        throw InvalidArgument(path.string() + ":" + std::to_string(lineno) + ": node outside [0,1]");
      }
    }
    nodes.insert(nodes.end(), row.begin(), row.end());
    ++n;
  }
  if (n == 0) throw IoError(path.string() + ": no points");
  return PointSet(n, s, std::move(nodes), Provenance::External);
}

std::filesystem::path relative_to(const KeyValueConfig& cfg, const std::string& value) {
  std::filesystem::path p = value;
  if (p.is_relative() && !cfg.source().empty() && cfg.source().front() != '<') {
    p = std::filesystem::path(cfg.source()).parent_path() / p;
  }
  return p;
}

}  // namespace

ProblemSpec problem_spec(const KeyValueConfig& cfg, std::uint64_t seed) {
  cfg.require_known({"scheme", "alpha", "s", "gamma_tilde", "Gamma", "points", "gv_file", "n", "shift",
                     "tent", "points_file", "weights", "seed", "jobs"});
  KernelSpec kernel = kernel_spec_from(cfg);
  const std::size_t s = kernel.s();
  const std::string source = cfg.has("points") ? cfg.get_string("points") : "lattice";
  if (source == "file") {
    return {std::move(kernel), read_points_file(relative_to(cfg, cfg.get_string("points_file")), s)};
  }
  if (source != "lattice") throw InvalidArgument(cfg.source() + ": points must be lattice or file");
  const auto n = cfg.get_int("n");
  if (n < 1) throw InvalidArgument(cfg.source() + ": n must be positive");
  const auto gv_path = cfg.has("gv_file") ? relative_to(cfg, cfg.get_string("gv_file"))
                                          : data_dir() / "lattice-pod-s100-m12.txt";
  const GeneratingVector gv = load_generating_vector(gv_path, s, static_cast<std::uint64_t>(n));
  PointSet ps = generate_lattice(gv);
  const std::string shift = cfg.has("shift") ? cfg.get_string("shift") : "none";
  if (shift == "random") {
    ps = apply_shift(ps, sample_shift(seed, s));
  } else if (shift != "none") {
    throw InvalidArgument(cfg.source() + ": shift must be none or random");
  }
  if (cfg.has("tent")) {
    const auto t = cfg.get_int("tent");
    if (t != 0 && t != 1) throw InvalidArgument(cfg.source() + ": tent must be 0 or 1");
    if (t == 1) ps = tent_transform(ps);
  }
  return {std::move(kernel), std::move(ps)};
}

}  // namespace latkc
