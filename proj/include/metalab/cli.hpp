// Copyright 2026 The metalab Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef METALAB_CLI_HPP_
#define METALAB_CLI_HPP_

// Command-line front end. Each subcommand runs one experiment family, writes
// its reports as CSV plus a gnuplot script into --out, and returns 0 when all
// verdicts pass, 2 on any failure and 1 on usage, configuration or runtime
// errors. Settings come from a flat key=value file (--config) overridden by
// flags.

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "metalab/errors.hpp"
#include "metalab/experiments.hpp"

namespace metalab::cli {

struct KeySpec {
  const char* key;
  const char* flag;
  const char* help;
};

/// Every configuration key with its flag. tol.* and pin.* keys are listed
/// separately and set with --tol name=value and --pin name=value.
inline const std::vector<KeySpec>& known_keys() {
  static const std::vector<KeySpec> keys = {
      {"grid.n", "--n", "dimension"},
      {"grid.X", "--X", "grid half width"},
      {"grid.N", "--N", "points per axis (power of two >= 64)"},
      {"seed", "--seed", "base seed for random draws"},
      {"t_max", "--t-max", "largest KAK parameter t"},
      {"corpus", "--corpus", "function descriptors separated by '|'"},
      {"out", "--out", "output directory"},
      {"alpha", "--alpha", "weak-type exponent"},
      {"lambdas", "--lambdas", "comma-separated lambda values"},
      {"q", "--q", "time exponent q"},
      {"r", "--r", "modulation exponent r (inf allowed)"},
      {"rs", "--rs", "comma-separated modulation exponents"},
      {"theta_samples", "--theta-samples", "rotation samples per t"},
      {"t_step", "--t-step", "spacing of the t grid"},
      {"count", "--count", "number of random draws or pairs"},
      {"function", "--function", "function descriptor"},
      {"window", "--window", "window or second function descriptor"},
      {"x_stride", "--x-stride", "x subsampling of phase-space output"},
      {"xi_decimation", "--xi-decimation", "xi decimation of phase-space output"},
  };
  return keys;
}

inline const std::vector<std::string>& tolerance_names() {
  static const std::vector<std::string> names = {"moyal", "covariance", "spread", "slope", "closed_form",
                                                 "overlap", "stabilization", "identity", "symplectic"};
  return names;
}

inline const std::vector<std::string>& pin_names() {
  static const std::vector<std::string> names = {"dispersive_max", "wigner_l1", "wigner_sup_x", "wigner_sup_xi"};
  return names;
}

inline bool is_known_key(const std::string& key) {
  for (const auto& k : known_keys())
    if (key == k.key) return true;
  auto in = [&](const std::string& prefix, const std::vector<std::string>& names) {
    return key.starts_with(prefix) && std::find(names.begin(), names.end(), key.substr(prefix.size())) != names.end();
  };
  return in("tol.", tolerance_names()) || in("pin.", pin_names());
}

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

inline double parse_real(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  if (t == "inf" || t == "infinity") return kInfinity;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) throw ParseError(key + ": not a number: '" + text + "'");
  return v;
}

/// Flat key=value settings restricted to the known keys.
class RunConfig {
 public:
  static RunConfig parse(std::istream& is) {
    RunConfig c;
    std::string line;
    int number = 0;
    while (std::getline(is, line)) {
      ++number;
      line = trim(line);
      if (line.empty() || line[0] == '#') continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos) throw ParseError("config line " + std::to_string(number) + ": expected key=value");
      const std::string key = trim(line.substr(0, eq));
      if (c.has(key)) throw ParseError("config line " + std::to_string(number) + ": duplicate key '" + key + "'");
      c.set(key, trim(line.substr(eq + 1)));
    }
    return c;
  }

  std::string serialize() const {
    std::string s;
    for (const auto& [k, v] : values_) s += k + "=" + v + "\n";
    return s;
  }

  void set(const std::string& key, const std::string& value) {
    if (!is_known_key(key)) throw ParseError("unknown configuration key '" + key + "'");
    values_[key] = value;
  }
  bool has(const std::string& key) const { return values_.count(key) > 0; }
  const std::string& get(const std::string& key) const { return values_.at(key); }
  std::string text(const std::string& key, const std::string& fallback) const { return has(key) ? get(key) : fallback; }

  double real(const std::string& key, double fallback) const { return has(key) ? parse_real(key, get(key)) : fallback; }
  std::optional<double> optional_real(const std::string& key) const {
    if (!has(key)) return std::nullopt;
    return parse_real(key, get(key));
  }
  int integer(const std::string& key, int fallback) const {
    if (!has(key)) return fallback;
    const double v = parse_real(key, get(key));
    if (v != std::floor(v) || std::abs(v) > 1e9) throw ParseError(key + ": not an integer: '" + get(key) + "'");
    return static_cast<int>(v);
  }
  std::uint64_t seed() const {
    const int s = integer("seed", 1);
    if (s < 0) throw ParseError("seed: must be non-negative");
    return static_cast<std::uint64_t>(s);
  }
  std::vector<double> reals(const std::string& key, std::vector<double> fallback) const {
    if (!has(key)) return fallback;
    std::vector<double> out;
    std::stringstream ss(get(key));
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_real(key, item));
    if (out.empty()) throw ParseError(key + ": empty list");
    return out;
  }

  bool operator==(const RunConfig&) const = default;

 private:
  std::map<std::string, std::string> values_;
};

// ---------------------------------------------------------------------------
// Plot scripts.

struct PlotSpec {
  std::string quantity;  ///< rows plotted
  std::string x_key;     ///< parameter on the x axis; empty means row order
  bool log_x = false;
  bool log_y = false;
};

inline void write_plot_script(std::ostream& os, const ExperimentReport& rep, const PlotSpec& spec) {
  os << "# gnuplot script for " << rep.name << "; data copied from " << rep.name << ".csv\n"
     << "set datafile separator \",\"\n"
     << "set terminal pngcairo size 900,600\n"
     << "set output \"" << rep.name << ".png\"\n"
     << "set title \"" << rep.name << ": " << spec.quantity << "\"\n"
     << "set xlabel \"" << (spec.x_key.empty() ? "row" : spec.x_key) << "\"\n"
     << "set ylabel \"" << spec.quantity << "\"\n";
  if (spec.log_x) os << "set logscale x\n";
  if (spec.log_y) os << "set logscale y\n";
  os << "$data << EOD\n";
  std::ostringstream data;
  data << std::setprecision(17);
  int index = 0;
  bool reference = false;
  for (const auto& r : rep.rows) {
    if (r.params.value("quantity", "") != spec.quantity) continue;
    const double x = !spec.x_key.empty() && r.params.contains(spec.x_key) && r.params[spec.x_key].is_number()
                         ? r.params[spec.x_key].get<double>()
                         : static_cast<double>(index);
    data << x << ',' << r.measured << ',' << r.reference << '\n';
    reference = reference || r.comparison == Comparison::kRelative || r.comparison == Comparison::kAbsolute;
    ++index;
  }
  os << data.str() << "EOD\n"
     << "plot $data using 1:2 with linespoints title \"measured\"" << (reference ? ", $data using 1:3 with lines title \"reference\"" : "")
     << "\n";
}

inline PlotSpec plot_spec_for(const std::string& experiment) {
  static const std::map<std::string, PlotSpec> specs = {
      {"verify-moyal", {"relative_error", "", false, true}},
      {"verify-covariance", {"residual", "", false, true}},
      {"verify-dispersive", {"ratio", "t", false, false}},
      {"dispersive-slope", {"m_inf", "lambda", true, true}},
      {"verify-interp", {"ratio", "k", false, false}},
      {"tail-measure", {"measure", "lambda", true, true}},
      {"strichartz-scan", {"integrand", "t", false, true}},
      {"wigner-bounds", {"pair", "index", false, false}},
      {"coeff-decay", {"overlap", "lambda", true, true}},
      {"sample-symplectic", {"lambda_product", "k", false, true}},
      {"stft", {"l2_identity", "", false, false}},
      {"wigner", {"moyal", "", false, false}},
  };
  const auto it = specs.find(experiment);
  return it != specs.end() ? it->second : PlotSpec{"", "", false, false};
}

// ---------------------------------------------------------------------------
// Subcommands.

struct Context {
  const RunConfig& config;
  std::filesystem::path out_dir;
};

using Runner = std::function<std::vector<ExperimentReport>(const Context&)>;

struct Subcommand {
  std::string name;
  std::string help;
  std::vector<std::string> keys;  ///< flags beyond --out, --seed, --config, --tol, --pin
  Runner run;
};

inline GridSpec config_grid(const RunConfig& c, int n, double X, int N) {
  return GridSpec(n, c.real("grid.X", X), c.integer("grid.N", N));
}

inline int config_dim(const RunConfig& c, int fallback, int max_dim = kMaxGridDim) {
  const int n = c.integer("grid.n", fallback);
  if (n < 1 || n > max_dim) throw ParseError("grid.n: must be between 1 and " + std::to_string(max_dim));
  return n;
}

inline FunctionDescriptor config_function(const RunConfig& c, const std::string& key, int n, const std::string& fallback = "gauss") {
  return FunctionDescriptor::parse(c.text(key, fallback), n);
}

inline std::vector<FunctionDescriptor> config_corpus(const RunConfig& c, int n) {
  if (!c.has("corpus")) return builtin_corpus(n);
  std::vector<FunctionDescriptor> out;
  std::stringstream ss(c.get("corpus"));
  std::string item;
  while (std::getline(ss, item, '|'))
    if (!trim(item).empty()) out.push_back(FunctionDescriptor::parse(trim(item), n));
  if (out.empty()) throw ParseError("corpus: no descriptors");
  return out;
}

inline std::vector<double> powers_of_two(int lo, int hi) {
  std::vector<double> v;
  for (int k = lo; k <= hi; ++k) v.push_back(std::ldexp(1.0, k));
  return v;
}

inline void write_phase_space(const Context& ctx, const std::string& file, const PhaseSpaceArray& a) {
  std::ofstream os(ctx.out_dir / file);
  os << "# schema=" << kReportSchema << '\n';
  write_csv(os, a);
}

inline ExperimentReport phase_space_identity(const std::string& name, const std::string& quantity, const PhaseSpaceArray& a,
                                             double expected, double tol) {
  ExperimentReport rep;
  rep.name = name;
  rep.add({{"quantity", quantity}}, phase_space_inner(a, a).real(), expected, tol, Comparison::kRelative);
  return rep;
}

inline const std::vector<Subcommand>& subcommands() {
  static const std::vector<Subcommand> table = {
      {"verify-moyal", "Moyal identity on a function corpus", {"grid.n", "grid.X", "grid.N", "corpus"},
       [](const Context& ctx) {
         const auto& c = ctx.config;
         const int n = config_dim(c, 1);
         const GridSpec g = config_grid(c, n, n == 1 ? 16.0 : 10.0, n == 1 ? 512 : 128);
         std::vector<SampledFunction> fs;
         for (const auto& d : config_corpus(c, n)) fs.push_back(discretize(d, g));
         return std::vector{moyal_experiment(fs, c.real("tol.moyal", 1e-5))};
       }},
      {"verify-covariance", "Wigner covariance under symplectic maps (n = 1)", {"grid.X", "grid.N", "function"},
       [](const Context& ctx) {
         const auto& c = ctx.config;
         const int N = c.integer("grid.N", 1024);
         const GridSpec g = config_grid(c, 1, std::sqrt(std::numbers::pi * N / 2), N);
         return std::vector{covariance_experiment(covariance_cases(c.seed()), discretize(config_function(c, "function", 1), g),
                                                  c.real("tol.covariance", 5e-3))};
       }},
      {"verify-dispersive", "dispersive ratio over random symplectic matrices; dilation slope with --lambdas",
       {"count", "t_max", "lambdas"},
       [](const Context& ctx) {
         const auto& c = ctx.config;
         std::vector<ExperimentReport> out = {dispersive_uniformity_experiment(c.integer("count", 100), c.real("t_max", 4.0), c.seed(),
                                                                               c.optional_real("pin.dispersive_max"),
                                                                               c.real("tol.spread", 10.0))};
         if (c.has("lambdas")) out.push_back(dispersive_slope_experiment(c.reals("lambdas", {}), -0.5, c.real("tol.slope", 0.05)));
         return out;
       }},
      {"verify-interp", "interpolated estimate ratios for several r", {"rs", "count", "t_max"},
       [](const Context& ctx) {
         const auto& c = ctx.config;
         return std::vector{interp_experiment(c.reals("rs", {2.0, 4.0, kInfinity}), c.integer("count", 20), c.real("t_max", 3.0),
                                              c.seed(), c.real("tol.spread", 10.0))};
       }},
      {"tail-measure", "Haar measure of the weak-type tail set", {"grid.n", "alpha", "lambdas"},
       [](const Context& ctx) {
         const auto& c = ctx.config;
         const int n = config_dim(c, 1, kMaxMatrixDim);
         std::optional<double> slope_tol = c.optional_real("tol.slope");
         if (!slope_tol && n >= 2) slope_tol = 0.1;
         return std::vector{tail_experiment(n, c.real("alpha", 0.5), c.reals("lambdas", powers_of_two(-6, -1)),
                                            c.real("tol.closed_form", 1e-9), slope_tol)};
       }},
      {"strichartz-scan", "truncated Strichartz integral over KAK coordinates (n = 1)",
       {"grid.X", "grid.N", "function", "q", "r", "t_max", "t_step", "theta_samples"},
       [](const Context& ctx) {
         const auto& c = ctx.config;
         const GridSpec g = config_grid(c, 1, 12.0, 256);
         StrichartzOptions opt;
         opt.stabilization_tol = c.real("tol.stabilization", 0.01);
         return std::vector{strichartz_tail_scan(discretize(config_function(c, "function", 1), g), c.real("q", 8.0), c.real("r", kInfinity),
                                                 uniform_t_grid(c.real("t_max", 10.0), c.real("t_step", 0.25)),
                                                 c.integer("theta_samples", 16), opt)};
       }},
      {"wigner-bounds", "bounded Wigner mixed-norm ratios on seeded pairs (n = 1)", {"grid.X", "grid.N", "count"},
       [](const Context& ctx) {
         const auto& c = ctx.config;
         std::vector<double> pins;
         for (const auto& p : pin_names())
           if (p.starts_with("wigner_") && c.has("pin." + p)) pins.push_back(c.real("pin." + p, 0.0));
         if (!pins.empty() && pins.size() != 3) throw ParseError("pin.wigner_*: give all three constants or none");
         return std::vector{wigner_bounds_experiment(wigner_corpus(c.integer("count", 50), c.seed()), config_grid(c, 1, 14.0, 512), pins)};
       }},
      {"coeff-decay", "Gaussian matrix coefficients under dilations", {"lambdas"},
       [](const Context& ctx) {
         const auto& c = ctx.config;
         return std::vector{coefficient_experiment(c.reals("lambdas", powers_of_two(0, 6)), c.real("tol.overlap", 1e-4))};
       }},
      {"sample-symplectic", "seeded KAK samples of Sp(n, R)", {"grid.n", "count", "t_max"},
       [](const Context& ctx) {
         const auto& c = ctx.config;
         const int n = config_dim(c, 1, kMaxMatrixDim);
         ExperimentReport rep;
         rep.name = "sample-symplectic";
         rep.parameters = {{"n", n}, {"seed", c.seed()}};
         const int count = c.integer("count", 10);
         for (int k = 0; k < count; ++k) {
           const auto smp = sample_kak(n, c.real("t_max", 4.0), c.seed() + static_cast<std::uint64_t>(k));
           const auto s = smp.assemble();
           const Matrix& m = s.matrix();
           const std::vector<double> t(smp.t.data(), smp.t.data() + smp.t.size());
           nlohmann::json entries = nlohmann::json::array();
           for (Eigen::Index i = 0; i < m.rows(); ++i)
             for (Eigen::Index j = 0; j < m.cols(); ++j) entries.push_back(m(i, j));
           const Matrix jm = symplectic_form(n);
           rep.add({{"quantity", "symplectic_residual"}, {"k", k}}, max_abs(m.transpose() * jm * m - jm), 0.0, c.real("tol.symplectic", 1e-9),
                   Comparison::kAbsolute);
           rep.info({{"quantity", "lambda_product"}, {"k", k}, {"t", t}, {"haar_weight", smp.weight}}, symplectic_svd(s).lambda_product());
           rep.info({{"quantity", "matrix"}, {"k", k}, {"entries", entries}}, static_cast<double>(k));
         }
         return std::vector{rep};
       }},
      {"stft", "short-time Fourier transform of a function, written to stft_values.csv",
       {"grid.n", "grid.X", "grid.N", "function", "window", "x_stride", "xi_decimation"},
       [](const Context& ctx) {
         const auto& c = ctx.config;
         const int n = config_dim(c, 1);
         const GridSpec g = config_grid(c, n, 12.0, n == 1 ? 256 : 64);
         const auto psi = discretize(config_function(c, "function", n), g);
         const auto window = c.has("window") ? discretize(config_function(c, "window", n), g) : gaussian_window(g);
         const auto v = stft(psi, window, c.integer("x_stride", 1), c.integer("xi_decimation", 1));
         write_phase_space(ctx, "stft_values.csv", v);
         const double want = std::pow(2 * std::numbers::pi, -n) * std::pow(psi.norm() * window.norm(), 2);
         return std::vector{phase_space_identity("stft", "l2_identity", v, want, c.real("tol.identity", 1e-6))};
       }},
      {"wigner", "cross-Wigner distribution of function and window, written to wigner_values.csv",
       {"grid.n", "grid.X", "grid.N", "function", "window"},
       [](const Context& ctx) {
         const auto& c = ctx.config;
         const int n = config_dim(c, 1);
         const GridSpec g = config_grid(c, n, 12.0, n == 1 ? 256 : 64);
         const auto psi = discretize(config_function(c, "function", n), g);
         const auto phi = c.has("window") ? discretize(config_function(c, "window", n), g) : psi;
         const auto w = cross_wigner(psi, phi);
         write_phase_space(ctx, "wigner_values.csv", w);
         const double want = std::pow(2 * std::numbers::pi, -n) * std::pow(psi.norm() * phi.norm(), 2);
         return std::vector{phase_space_identity("wigner", "moyal", w, want, c.real("tol.identity", 1e-5))};
       }},
  };
  return table;
}

inline const KeySpec& key_spec(const std::string& key) {
  for (const auto& k : known_keys())
    if (key == k.key) return k;
  throw InternalError("key_spec: unknown key " + key);
}

inline void apply_assignments(RunConfig& c, const std::string& prefix, const std::vector<std::string>& items) {
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ParseError(prefix + ": expected name=value, got '" + item + "'");
    c.set(prefix + trim(item.substr(0, eq)), trim(item.substr(eq + 1)));
  }
}

/// Runs one subcommand. `args` excludes the program name.
inline int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Metaplectic operators, time-frequency transforms and numerical checks of their estimates.", "metalab"};
  app.require_subcommand(1, 1);
  std::map<std::string, std::map<std::string, std::string>> flag_values;
  std::map<std::string, std::vector<std::string>> tol_values, pin_values;
  std::map<std::string, std::string> config_paths;
  std::map<std::string, CLI::App*> apps;
  for (const auto& sc : subcommands()) {
    auto* sub = app.add_subcommand(sc.name, sc.help);
    apps[sc.name] = sub;
    auto& values = flag_values[sc.name];
    std::vector<std::string> keys = sc.keys;
    keys.insert(keys.begin(), {"out", "seed"});
    for (const auto& key : keys) {
      const auto& spec = key_spec(key);
      sub->add_option(spec.flag, values[key], spec.help);
    }
    sub->add_option("--config", config_paths[sc.name], "key=value settings file; flags take precedence");
    sub->add_option("--tol", tol_values[sc.name], "tolerance override name=value")->take_all();
    sub->add_option("--pin", pin_values[sc.name], "pinned constant name=value")->take_all();
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    err << app.help();
    return 1;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  const auto& sc = *std::find_if(subcommands().begin(), subcommands().end(), [&](const Subcommand& s) { return s.name == name; });
  try {
    RunConfig config;
    if (!config_paths[name].empty()) {
      std::ifstream in(config_paths[name]);
      if (!in) throw ParseError("cannot read config file " + config_paths[name]);
      config = RunConfig::parse(in);
    }
    for (const auto& [key, value] : flag_values[name])
      if (apps[name]->count(key_spec(key).flag) > 0) config.set(key, value);
    apply_assignments(config, "tol.", tol_values[name]);
    apply_assignments(config, "pin.", pin_values[name]);

    const std::filesystem::path dir = config.text("out", ".");
    std::filesystem::create_directories(dir);
    const auto reports = sc.run({config, dir});

    {
      std::ofstream csv(dir / (name + ".csv"));
      write_report_csv(csv, reports);
    }
    bool passed = true;
    for (const auto& rep : reports) {
      std::ofstream gp(dir / (rep.name + ".gp"));
      write_plot_script(gp, rep, plot_spec_for(rep.name));
      int failing = 0;
      for (const auto& r : rep.rows) failing += !r.passes();
      passed = passed && failing == 0;
      out << rep.name << ": " << (failing == 0 ? "PASS" : "FAIL") << " (" << rep.rows.size() << " rows, " << failing << " failing)\n";
    }
    out << "wrote " << (dir / (name + ".csv")).string() << '\n';
    return passed ? 0 : 2;
  } catch (const ParseError& e) {
    err << "configuration error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace metalab::cli

#endif  // METALAB_CLI_HPP_
