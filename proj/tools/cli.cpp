#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "dmspec/cocycle.hpp"
#include "dmspec/errors.hpp"
#include "dmspec/ids.hpp"
#include "dmspec/io/config.hpp"
#include "dmspec/io/svg.hpp"
#include "dmspec/io/table.hpp"
#include "dmspec/schwartzman.hpp"
#include "dmspec/spectrum.hpp"
#include "dmspec/verify/acceptance.hpp"
#include "dmspec/verify/oracles.hpp"

namespace dmspec::cli {

namespace {

using nlohmann::json;

constexpr std::uint64_t kDefaultSeed = 20240601;

struct Settings {
  io::RunConfig config;
  std::optional<SamplingFunction> function;
  std::uint64_t seed = kDefaultSeed;
  std::string format = "csv";
  std::string plot;
  int threads = 1;

  const SamplingFunction& f() const {
    if (!function) {
      throw InvalidParameter("no sampling function: pass --function or a --config with a 'type'");
    }
    return *function;
  }
  SpectrumOptions spectrum_options() const {
    SpectrumOptions o;
    o.tol = config.param("tol", o.tol);
    o.threads = threads;
    return o;
  }
};

struct Output {
  io::Report report;
  std::string svg;
  bool failed = false;
};

json band_json(const Band& b) { return json::array({b.lo, b.hi}); }

void write_plot(const Settings& s, const std::string& svg) {
  if (s.plot.empty() || svg.empty()) return;
  std::ofstream out(s.plot, std::ios::binary);
  if (!out) throw InvalidParameter("cannot write plot '" + s.plot + "'");
  out << svg;
}

// --- bands / spectrum / gaps ---------------------------------------------------------

Output cmd_bands(const Settings& s) {
  const int max_period = s.config.param("max_period", 6);
  const auto per_orbit = all_periodic_bands(s.f(), max_period, s.spectrum_options());
  std::vector<Band> all;
  Output o;
  o.report.table.columns = {"kind", "period", "orbit", "index", "lo", "hi"};
  for (const auto& ob : per_orbit) {
    for (std::size_t i = 0; i < ob.bands.size(); ++i) {
      o.report.table.rows.push_back({"orbit", ob.orbit.period, ob.orbit.label(), i,
                                     ob.bands[i].lo, ob.bands[i].hi});
    }
    all.insert(all.end(), ob.bands.begin(), ob.bands.end());
  }
  const auto merged = merge_bands(all, 10.0 * s.spectrum_options().tol, max_period);
  for (std::size_t i = 0; i < merged.bands.size(); ++i) {
    o.report.table.rows.push_back({"union", nullptr, nullptr, i, merged.bands[i].lo,
                                   merged.bands[i].hi});
  }
  o.report.summary = {{"function", s.f().to_json()},
                      {"max_period", max_period},
                      {"orbits", per_orbit.size()},
                      {"union_bands", merged.bands.size()},
                      {"hull", band_json(merged.hull)}};
  if (!s.plot.empty()) o.svg = io::band_diagram_svg(per_orbit, merged);
  return o;
}

Output cmd_spectrum(const Settings& s) {
  const int max_period = s.config.param("max_period", 10);
  const auto per_orbit = all_periodic_bands(s.f(), max_period, s.spectrum_options());
  std::vector<Band> all;
  for (const auto& ob : per_orbit) all.insert(all.end(), ob.bands.begin(), ob.bands.end());
  const auto merged = merge_bands(all, 10.0 * s.spectrum_options().tol, max_period);
  Output o;
  o.report.table.columns = {"index", "lo", "hi", "width"};
  for (std::size_t i = 0; i < merged.bands.size(); ++i) {
    const Band& b = merged.bands[i];
    o.report.table.rows.push_back({i, b.lo, b.hi, b.width()});
  }
  o.report.summary = {{"function", s.f().to_json()},
                      {"max_period", max_period},
                      {"bands", merged.bands.size()},
                      {"gaps", merged.gaps.size()},
                      {"hull", band_json(merged.hull)}};
  if (!s.plot.empty()) o.svg = io::band_diagram_svg(per_orbit, merged);
  return o;
}

Output cmd_gaps(const Settings& s) {
  const int max_period = s.config.param("max_period", 10);
  const auto options = s.spectrum_options();
  const auto per_orbit = all_periodic_bands(s.f(), max_period, options);
  std::vector<Band> all;
  for (const auto& ob : per_orbit) all.insert(all.end(), ob.bands.begin(), ob.bands.end());
  const auto merged = merge_bands(all, 10.0 * options.tol, max_period);
  const auto report = gap_report(merged, options.tol);
  Output o;
  o.report.table.columns = {"rank", "lo", "hi", "length", "status"};
  std::size_t rank = 0;
  for (const auto& g : report.gaps) {
    o.report.table.rows.push_back({rank++, g.gap.lo, g.gap.hi, g.length, "resolved"});
  }
  for (const auto& g : report.below_resolution) {
    o.report.table.rows.push_back({rank++, g.gap.lo, g.gap.hi, g.length, "below_resolution"});
  }
  o.report.summary = {{"function", s.f().to_json()},
                      {"max_period", max_period},
                      {"resolved_gaps", report.gaps.size()},
                      {"below_resolution", report.below_resolution.size()},
                      {"max_gap", report.max_gap()},
                      {"connected", report.gaps.empty()}};
  if (!s.plot.empty()) o.svg = io::band_diagram_svg(per_orbit, merged);
  return o;
}

// --- ids ---------------------------------------------------------------------------

std::vector<double> energy_grid(const Settings& s, const SpectrumApprox& spectrum) {
  const std::size_t count = s.config.param<std::size_t>("grid_count", 2001);
  const double lo = s.config.param("grid_lo", spectrum.hull.lo - 1.0);
  const double hi = s.config.param("grid_hi", spectrum.hull.hi + 1.0);
  return uniform_grid(lo, hi, count);
}

Output cmd_ids(const Settings& s) {
  const int max_period = s.config.param("max_period", 8);
  const std::size_t n = s.config.param<std::size_t>("N", 512);
  const std::size_t m = s.config.param<std::size_t>("M", 64);
  const auto spectrum = union_spectrum(s.f(), max_period, s.spectrum_options());
  const auto grid = energy_grid(s, spectrum);
  const auto table = ids_estimate(s.f(), grid, n, m, s.seed, s.threads);

  Output o;
  o.report.table.columns = {"energy", "k"};
  for (std::size_t j = 0; j < grid.size(); ++j) {
    o.report.table.rows.push_back({table.energies[j], table.k_values[j]});
  }
  json labels = json::array();
  for (const auto& entry : gap_report(spectrum, s.spectrum_options().tol).gaps) {
    try {
      const auto label = gap_label(table, entry.gap);
      labels.push_back({{"gap", json::array({entry.gap.lo, entry.gap.hi})},
                        {"label", label.value},
                        {"spread", label.spread},
                        {"flat", label.flat},
                        {"grid_points", label.grid_points}});
    } catch (const EmptyGapGrid&) {
      labels.push_back({{"gap", json::array({entry.gap.lo, entry.gap.hi})}, {"label", nullptr}});
    }
  }
  o.report.summary = {{"function", s.f().to_json()},
                      {"N", n},
                      {"M", m},
                      {"seed", s.seed},
                      {"tolerance", table.tolerance()},
                      {"max_period", max_period},
                      {"gap_labels", labels}};
  if (!s.plot.empty()) o.svg = io::ids_staircase_svg(table, &spectrum);
  return o;
}

// --- rotation ----------------------------------------------------------------------

RotationOptions rotation_options(const Settings& s) {
  RotationOptions r;
  r.omega_samples = s.config.param("omega_samples", r.omega_samples);
  r.steps = s.config.param("steps", r.steps);
  r.substeps = s.config.param("substeps", r.substeps);
  r.reanchor_interval = s.config.param("reanchor_interval", r.reanchor_interval);
  r.seed = s.seed;
  r.threads = s.threads;
  r.dichotomy.threads = s.threads;
  r.dichotomy.depth = s.config.param("depth", r.dichotomy.depth);
  r.dichotomy.sample_count = s.config.param("dichotomy_samples", r.dichotomy.sample_count);
  return r;
}

struct RotationRow {
  double energy = 0.0;
  std::optional<RotationEstimate> estimate;
  IntegralityVerdict verdict;
  double k = 0.0;
  std::string failure;
};

RotationRow rotation_row(const Settings& s, double energy) {
  RotationRow row;
  row.energy = energy;
  const std::vector<double> grid{energy};
  row.k = ids_estimate(s.f(), grid, s.config.param<std::size_t>("N", 512),
                       s.config.param<std::size_t>("M", 64), s.seed, s.threads)
              .k_values[0];
  try {
    row.estimate = rotation_number(s.f(), energy, rotation_options(s));
    row.verdict = integrality_check(*row.estimate, s.config.param("integer_tol", 0.01));
  } catch (const NotHyperbolic& e) {
    row.failure = e.what();
  }
  return row;
}

Output cmd_rotation(const Settings& s, const std::vector<double>& cli_energies) {
  std::vector<double> energies = cli_energies;
  if (energies.empty()) energies = s.config.param("energies", std::vector<double>{});
  if (energies.empty()) {
    const auto hull = union_spectrum(s.f(), s.config.param("max_period", 8), s.spectrum_options()).hull;
    energies = {hull.lo - 0.5, hull.hi + 0.5};
  }
  Output o;
  o.report.table.columns = {"energy", "hyperbolic", "value",  "std_error", "verdict",
                            "integer", "k",          "1-k",    "defect",    "reanchor_residual"};
  for (double e : energies) {
    const RotationRow r = rotation_row(s, e);
    if (!r.estimate) {
      o.report.table.rows.push_back(
          {e, false, nullptr, nullptr, "NotHyperbolic", nullptr, r.k, 1.0 - r.k, nullptr, nullptr});
      continue;
    }
    const auto& est = *r.estimate;
    o.report.table.rows.push_back({e, true, est.value, est.std_error, r.verdict.to_string(),
                                   r.verdict.integer, r.k, 1.0 - r.k,
                                   std::abs(est.value - (1.0 - r.k)), est.max_reanchor_residual});
  }
  const auto opts = rotation_options(s);
  o.report.summary = {{"function", s.f().to_json()},
                      {"omega_samples", opts.omega_samples},
                      {"steps", opts.steps},
                      {"substeps", opts.substeps},
                      {"seed", s.seed}};
  return o;
}

// --- verify ------------------------------------------------------------------------

struct Check {
  explicit Check(std::string n) : name(std::move(n)) {}
  std::string name;
  bool passed = true;
  std::string detail;
};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

std::vector<Check> function_checks(const Settings& s) {
  const SamplingFunction& f = s.f();
  const int max_period = s.config.param("max_period", 10);
  const double threshold = s.config.param("gap_threshold", 0.05);
  const auto options = s.spectrum_options();
  std::vector<Check> checks;

  {
    Check c("band edges match the Floquet eigenvalue oracle");
    double worst = 0.0;
    for (const auto& orbit : enumerate_orbits(std::min(max_period, 8))) {
      const auto v = orbit_potential(orbit, f);
      const auto ours = oracle::merged(periodic_bands(v, options), 1e-6);
      const auto ref = oracle::merged(oracle::floquet_bands(v), 1e-6);
      if (ours.size() != ref.size()) {
        c.passed = false;
        c.detail += "band count differs on orbit " + orbit.label() + "; ";
        continue;
      }
      for (std::size_t i = 0; i < ours.size(); ++i) {
        worst = std::max({worst, std::abs(ours[i].lo - ref[i].lo), std::abs(ours[i].hi - ref[i].hi)});
      }
    }
    c.passed = c.passed && worst < 1e-6;
    c.detail += "worst edge deviation " + fmt(worst);
    checks.push_back(c);
  }

  std::vector<SpectrumApprox> unions;
  for (int p = 1; p <= max_period; ++p) unions.push_back(union_spectrum(f, p, options));
  const SpectrumApprox& finest = unions.back();
  const auto gaps = gap_report(finest, options.tol);

  const std::size_t n = s.config.param<std::size_t>("N", 512);
  const std::size_t m = s.config.param<std::size_t>("M", 64);

  if (f.is_continuous()) {
    Check contain("fixed-point band contained in every union");
    const double f0 = f(0.0);
    for (std::size_t i = 0; i < unions.size(); ++i) {
      const bool ok = std::any_of(unions[i].bands.begin(), unions[i].bands.end(), [&](const Band& b) {
        return b.lo <= f0 - 2 + 1e-6 && b.hi >= f0 + 2 - 1e-6;
      });
      if (!ok) {
        contain.passed = false;
        contain.detail += "missing at max_period " + std::to_string(i + 1) + "; ";
      }
    }
    contain.detail += "[" + fmt(f0 - 2) + ", " + fmt(f0 + 2) + "]";
    checks.push_back(contain);

    Check gap("max interior gap < threshold");
    gap.passed = gaps.max_gap() < threshold;
    gap.detail = "max gap " + fmt(gaps.max_gap()) + " at max_period " + std::to_string(max_period) +
                 ", threshold " + fmt(threshold);
    checks.push_back(gap);
  } else {
    Check gap("disconnected as expected");
    if (gaps.gaps.empty()) {
      gap.passed = false;
      gap.detail = "no resolved gap at max_period " + std::to_string(max_period);
      checks.push_back(gap);
    } else {
      const Gap widest = gaps.gaps.front().gap;
      const auto grid = uniform_grid(widest.lo, widest.hi, 203);
      const auto table = ids_estimate(f, grid, n, m, s.seed, s.threads);
      const auto label = gap_label(table, widest);
      gap.passed = label.flat;
      gap.detail = std::to_string(gaps.gaps.size()) + " resolved gaps, widest (" + fmt(widest.lo) +
                   ", " + fmt(widest.hi) + "), gap label " + fmt(label.value);
      checks.push_back(gap);

      Check rot("rotation in the widest gap matches its label");
      const RotationRow r = rotation_row(s, 0.5 * (widest.lo + widest.hi));
      if (!r.estimate) {
        rot.passed = false;
        rot.detail = r.failure;
      } else {
        const double defect = std::abs(r.estimate->value - (1.0 - label.value));
        rot.passed = defect < 0.03;
        rot.detail = "rotation " + fmt(r.estimate->value) + ", 1 - label " + fmt(1.0 - label.value) +
                     ", " + r.verdict.to_string();
      }
      checks.push_back(rot);
    }
  }

  for (const auto& [energy, expected] :
       {std::pair{finest.hull.lo - 0.5, 1LL}, std::pair{finest.hull.hi + 0.5, 0LL}}) {
    Check c("gap labelling at E = " + fmt(energy));
    const RotationRow r = rotation_row(s, energy);
    if (!r.estimate) {
      c.passed = false;
      c.detail = r.failure;
    } else {
      const double defect = std::abs(r.estimate->value - (1.0 - r.k));
      c.passed = defect < 0.03 && r.verdict.is_integer(expected);
      c.detail = "rotation " + fmt(r.estimate->value) + ", 1 - k " + fmt(1.0 - r.k) + ", " +
                 r.verdict.to_string();
    }
    checks.push_back(c);
  }
  return checks;
}

Output cmd_verify(const Settings& s, const std::vector<int>& only, std::ostream& err) {
  Output o;
  o.report.table.columns = {"id", "name", "passed", "seconds", "detail"};
  bool all = true;
  if (!s.function) {
    acceptance::Options a;
    a.threads = s.threads;
    a.only = only;
    a.on_result = [&](const acceptance::CheckResult& r) {
      err << acceptance::format_line(r) << "\n";
    };
    for (const auto& r : acceptance::run(a)) {
      all = all && r.passed;
      o.report.table.rows.push_back({r.id, r.name, r.passed, r.seconds, r.detail});
    }
    o.report.summary = {{"suite", "acceptance"}, {"all_passed", all}};
  } else {
    int id = 1;
    for (const auto& c : function_checks(s)) {
      all = all && c.passed;
      err << (c.passed ? "PASS" : "FAIL") << " [" << id << "] " << c.name << ": " << c.detail << "\n";
      o.report.table.rows.push_back({id++, c.name, c.passed, nullptr, c.detail});
    }
    o.report.summary = {{"suite", "function"}, {"function", s.f().to_json()}, {"all_passed", all}};
  }
  o.failed = !all;
  return o;
}

std::string render(const Settings& s, const io::Report& report) {
  if (s.format == "json") return io::to_json(report).dump(2) + "\n";
  return io::to_csv(report.table);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spectra, density of states and rotation numbers of doubling-map Schrödinger operators",
               "dmspec"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_path;
  std::string format;
  std::string plot;
  std::optional<int> threads;
  std::string function_spec;
  std::vector<std::string> params;
  app.add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "64-bit seed");
  app.add_option("--out", out_path, "write the table here instead of stdout");
  app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--plot", plot, "write an SVG figure");
  app.add_option("--threads", threads, "worker threads, 0 = all cores")->check(CLI::NonNegativeNumber);
  app.add_option("--function", function_spec, "free | const:C | cos:LAMBDA | bernoulli:LAMBDA");
  app.add_option("--param", params, "command parameter KEY=JSON, overrides the config");

  int max_period = 0;
  std::vector<double> energies;
  std::vector<int> only;
  for (const char* name : {"bands", "spectrum", "gaps"}) {
    app.add_subcommand(name)->add_option("--max-period", max_period, "largest orbit period")
        ->check(CLI::PositiveNumber);
  }
  auto* ids = app.add_subcommand("ids", "integrated density of states table");
  auto* rotation = app.add_subcommand("rotation", "rotation numbers with integrality verdicts");
  rotation->add_option("--energy", energies, "energies to evaluate (repeatable)");
  auto* verify = app.add_subcommand("verify", "acceptance suite, or checks for the given function");
  verify->add_option("--only", only, "acceptance criteria to run")->check(CLI::Range(1, 8));
  app.get_subcommand("bands")->description("per-orbit periodic bands and their union");
  app.get_subcommand("spectrum")->description("merged union of periodic spectra");
  app.get_subcommand("gaps")->description("interior gaps, longest first");
  ids->add_option("--max-period", max_period)->check(CLI::PositiveNumber);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::ostringstream help_out;
    std::ostringstream error_out;
    const int code = app.exit(e, help_out, error_out);
    out << help_out.str();
    err << error_out.str();
    return code == 0 ? 0 : 2;
  }

  Settings s;
  std::string command;
  try {
    if (!config_path.empty()) s.config = io::load_config(config_path);
    s.function = s.config.function;
    if (!function_spec.empty()) s.function = io::parse_function_spec(function_spec);
    s.seed = seed.value_or(s.config.seed.value_or(kDefaultSeed));
    s.format = !format.empty() ? format : s.config.format.value_or("csv");
    if (s.format != "csv" && s.format != "json") throw InvalidParameter("format must be csv or json");
    s.plot = !plot.empty() ? plot : s.config.plot.value_or("");
    s.threads = threads.value_or(s.config.threads.value_or(1));
    if (s.threads < 0) throw InvalidParameter("threads must be >= 0");
    for (const auto& p : params) {
      const auto eq = p.find('=');
      if (eq == std::string::npos) throw InvalidParameter("--param expects KEY=VALUE, got '" + p + "'");
      try {
        s.config.command[p.substr(0, eq)] = json::parse(p.substr(eq + 1));
      } catch (const json::parse_error&) {
        s.config.command[p.substr(0, eq)] = p.substr(eq + 1);
      }
    }
    if (max_period > 0) s.config.command["max_period"] = max_period;
    command = app.get_subcommands().front()->get_name();
    if (command != "verify") (void)s.f();
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    Output o;
    if (command == "bands") o = cmd_bands(s);
    else if (command == "spectrum") o = cmd_spectrum(s);
    else if (command == "gaps") o = cmd_gaps(s);
    else if (command == "ids") o = cmd_ids(s);
    else if (command == "rotation") o = cmd_rotation(s, energies);
    else o = cmd_verify(s, only, err);
    o.report.command = command;

    const std::string text = render(s, o.report);
    if (out_path.empty()) {
      out << text;
    } else {
      std::ofstream file(out_path, std::ios::binary);
      if (!file) throw InvalidParameter("cannot write '" + out_path + "'");
      file << text;
    }
    write_plot(s, o.svg);
    return o.failed ? 1 : 0;
  } catch (const InvalidParameter& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace dmspec::cli
