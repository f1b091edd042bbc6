// shentropy command-line front end.
//
// Exit codes: 0 ok, 2 invalid arguments or configuration, 3 file I/O or
// format error, 4 numerical failure, 5 order selection did not converge.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "shentropy/bench.hpp"
#include "shentropy/entropy.hpp"
#include "shentropy/errors.hpp"
#include "shentropy/io.hpp"
#include "shentropy/shapes.hpp"
#include "shentropy/transform.hpp"

namespace fs = std::filesystem;
using namespace shent;

namespace {

enum ExitCode { kOk = 0, kInvalid = 2, kIo = 3, kNumerical = 4, kNoConvergence = 5 };

// "gauss:L", "equiangular:NTxNP" or "equiangular:N" (N x N).
GridSpec parse_grid(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos)
    throw DomainError("--grid: expected gauss:L or equiangular:NTxNP, got '" + text + "'");
  GridKind kind;
  try {
    kind = grid_kind_from_string(text.substr(0, colon));
  } catch (const ParseError& e) {
    throw DomainError(std::string("--grid: ") + e.what());
  }
  const std::string size = text.substr(colon + 1);
  try {
    std::size_t used = 0;
    if (kind == GridKind::GaussLegendre) {
      const int L = std::stoi(size, &used);
      if (used != size.size() || L < 0) throw std::invalid_argument(size);
      return GridSpec::gauss(L);
    }
    if (kind == GridKind::Equiangular) {
      const auto x = size.find('x');
      const int nt = std::stoi(size.substr(0, x), &used);
      if (used != (x == std::string::npos ? size.size() : x)) throw std::invalid_argument(size);
      int np = nt;
      if (x != std::string::npos) {
        const std::string rest = size.substr(x + 1);
        np = std::stoi(rest, &used);
        if (used != rest.size()) throw std::invalid_argument(size);
      }
      return GridSpec::equiangular(nt, np);
    }
  } catch (const std::logic_error&) {
    throw DomainError("--grid: cannot parse size '" + size + "' in '" + text + "'");
  }
  throw DomainError("--grid: external grids cannot be generated");
}

// "l,m,amplitude"
HarmonicAmplitude parse_bump(const std::string& text) {
  std::istringstream in(text);
  HarmonicAmplitude h;
  char c1 = 0, c2 = 0;
  if (!(in >> h.l >> c1 >> h.m >> c2 >> h.amplitude) || c1 != ',' || c2 != ',' || !(in >> std::ws).eof())
    throw DomainError("--bump: expected l,m,amplitude, got '" + text + "'");
  return h;
}

bool is_pyramid_file(const fs::path& p) { return p.extension() == ".json"; }

CoefficientPyramid truncate(const CoefficientPyramid& pyr, int L) {
  if (L > pyr.band_limit())
    throw BandLimitError("coefficient file holds degrees up to " + std::to_string(pyr.band_limit()) +
                         " but L = " + std::to_string(L) + " was requested");
  if (L == pyr.band_limit()) return pyr;
  CoefficientPyramid out(L, pyr.channels());
  for (int c = 0; c < pyr.channels(); ++c)
    for (int l = 0; l <= L; ++l)
      for (int m = -l; m <= l; ++m) out(l, m, c) = pyr(l, m, c);
  return out;
}

int resolve_lmax(const SphereGrid& grid, int requested) {
  const int L = requested >= 0 ? requested : grid.max_safe_degree();
  if (L < 0) throw BandLimitError("grid too coarse to resolve any degree");
  if (aliasing_risk(grid, L) && grid.kind() != GridKind::GaussLegendre)
    std::cerr << "warning: L = " << L << " exceeds the alias-free degree " << grid.max_safe_degree()
              << " of this grid; coefficients may alias\n";
  return L;
}

// Field CSV -> analysis at lmax; coefficient JSON -> read (and truncated to lmax).
CoefficientPyramid load_pyramid(const fs::path& input, int lmax, BasisStrategy strategy) {
  if (is_pyramid_file(input)) {
    const auto pyr = read_pyramid(input);
    return lmax >= 0 ? truncate(pyr, lmax) : pyr;
  }
  const auto field = read_field(input);
  return analyze(field, resolve_lmax(field.grid, lmax), strategy);
}

std::string fixed(double v, int digits = 6) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(digits);
  os << v;
  return os.str();
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

struct Options {
  std::string input;
  std::string output;
  std::string coeffs;
  int lmax = -1;
  int order = -1;
  double epsilon = 1e-6;
  int window = 2;
  std::string log_base = "e";
  std::string grid = "gauss:16";
  std::string strategy = "recursive";
  std::string criterion = "stabilization";
  std::string level_norm = "unit";
  std::string normalization = "prefix";
  std::uint64_t seed = 42;
  std::string shape = "unit-sphere";
  std::vector<std::string> bumps;
  int channels = 1;
  double amplitude_scale = 0.3;
  bool real_coeffs = false;
  bool quick = false;
};

EntropyOptions entropy_options(const Options& o) {
  EntropyOptions e;
  e.log_base = log_base_from_string(o.log_base);
  if (o.level_norm == "unit")
    e.level_normalization = LevelNormalization::Unit;
  else if (o.level_norm == "per-level")
    e.level_normalization = LevelNormalization::PerLevel;
  else
    throw DomainError("--level-norm: expected unit|per-level, got '" + o.level_norm + "'");
  if (o.normalization == "prefix")
    e.normalization = SheNormalization::Prefix;
  else if (o.normalization == "full")
    e.normalization = SheNormalization::Full;
  else
    throw DomainError("--normalization: expected prefix|full, got '" + o.normalization + "'");
  return e;
}

int cmd_synth(const Options& o) {
  ShapeSpec spec;
  spec.kind = shape_kind_from_string(o.shape);
  spec.grid = parse_grid(o.grid);
  spec.seed = o.seed;
  spec.channels = o.channels;
  spec.amplitude_scale = o.amplitude_scale;
  if (spec.kind == ShapeKind::RandomBandlimited) {
    if (o.lmax < 0) throw DomainError("synth: random-bandlimited needs --lmax (top occupied degree)");
    spec.max_degree = o.lmax;
  }
  for (const auto& b : o.bumps) spec.amplitudes.push_back(parse_bump(b));
  const auto field = generate(spec);
  write_field(o.output, field);
  std::cout << "shape " << to_string(spec.kind) << ", grid " << to_string(field.grid.kind()) << " "
            << field.grid.n_theta() << "x" << field.grid.n_phi() << " (" << field.node_count() << " nodes), "
            << field.channels << " channel(s), construction degree " << construction_degree(spec) << "\n"
            << "wrote " << o.output << " and " << sidecar_path(o.output).string() << "\n";
  return kOk;
}

int cmd_analyze(const Options& o) {
  const auto strategy = basis_strategy_from_string(o.strategy);
  const auto field = read_field(o.input);
  const int L = resolve_lmax(field.grid, o.lmax);
  const auto pyr = analyze(field, L, strategy);

  const std::string prefix = o.output.empty() ? fs::path(o.input).replace_extension().string() : o.output;
  write_pyramid(prefix + ".coeffs.json", pyr);
  write_spectrum(prefix + ".spectrum.csv", pyr);
  if (o.real_coeffs) write_json(prefix + ".real.json", real_coefficients_to_json(pyr));

  double coeff_energy = 0.0;
  for (const auto& s : pyr.coeffs()) coeff_energy += std::norm(s);
  const double f2 = std::pow(field_norm(field), 2);
  const double rel = f2 > 0.0 ? std::abs(coeff_energy - f2) / f2 : std::abs(coeff_energy);
  std::cout << "analyzed " << field.node_count() << " nodes, " << field.channels << " channel(s) at L = " << L
            << " (" << pyr.per_channel() << " coefficients per channel)\n"
            << "S(0,0) = " << detail::fmt17(pyr(0, 0).real()) << " " << (pyr(0, 0).imag() < 0 ? "- " : "+ ")
            << detail::fmt17(std::abs(pyr(0, 0).imag())) << "i\n"
            << "parseval: sum |S|^2 = " << detail::fmt17(coeff_energy) << ", ||f||^2 = " << detail::fmt17(f2)
            << ", relative gap = " << sci(rel) << (rel < 1e-8 ? "" : " (field not band-limited to L)") << "\n"
            << "wrote " << prefix << ".coeffs.json and " << prefix << ".spectrum.csv"
            << (o.real_coeffs ? " and " + prefix + ".real.json" : std::string()) << "\n";
  return kOk;
}

int cmd_reconstruct(const Options& o) {
  const auto strategy = basis_strategy_from_string(o.strategy);
  const auto field = read_field(o.input);
  CoefficientPyramid pyr;
  if (!o.coeffs.empty()) {
    pyr = read_pyramid(o.coeffs);
  } else {
    const int J = o.order >= 0 ? o.order : resolve_lmax(field.grid, o.lmax);
    pyr = analyze(field, J, strategy);
  }
  const int J = o.order >= 0 ? o.order : pyr.band_limit();
  if (pyr.channels() != field.channels)
    throw ShapeMismatchError("reconstruct: coefficient file has " + std::to_string(pyr.channels()) +
                             " channel(s), field has " + std::to_string(field.channels));
  double max_imag = 0.0;
  const auto rec = synthesize(pyr, field.grid, J, &max_imag, strategy);
  const double res = residual_norm(field, rec);
  const double norm = field_norm(field);
  std::cout << "reconstructed at J = " << J << " (" << lm_count(J) << " coefficients per channel)\n"
            << "residual = " << sci(res) << " (relative " << sci(norm > 0 ? res / norm : res) << ")\n"
            << "max discarded imaginary part = " << sci(max_imag) << "\n";
  if (!o.output.empty()) {
    write_field(o.output, rec);
    std::cout << "wrote " << o.output << "\n";
  }
  return kOk;
}

int cmd_entropy(const Options& o) {
  const auto opts = entropy_options(o);
  const auto pyr = load_pyramid(o.input, o.lmax, basis_strategy_from_string(o.strategy));
  const auto curve = she_curve(pyr, opts);
  std::cout << "log base " << to_string(opts.log_base) << "\n" << "J\tSHE\tcumulative energy\n";
  for (int J = 0; J <= pyr.band_limit(); ++J) {
    const auto j = static_cast<std::size_t>(J);
    std::cout << J << "\t" << (curve.degenerate[j] ? std::string("-") : fixed(curve.values[j])) << "\t"
              << fixed(curve.cumulative_energy_fraction[j]) << "\n";
  }
  if (o.order >= 0) std::cout << "SHE(" << o.order << ") = " << detail::fmt17(she(pyr, o.order, opts)) << "\n";
  if (!o.output.empty()) {
    write_she_curve(o.output, curve);
    std::cout << "wrote " << o.output << "\n";
  }
  return kOk;
}

int cmd_select_order(const Options& o) {
  const auto opts = entropy_options(o);
  SelectionOptions sel;
  sel.epsilon = o.epsilon;
  sel.window = o.window;
  sel.criterion = selection_criterion_from_string(o.criterion);
  const auto pyr = load_pyramid(o.input, o.lmax, basis_strategy_from_string(o.strategy));
  const auto rep = select_order(pyr, sel, opts);
  std::cout << "criterion " << to_string(rep.criterion) << ", epsilon " << sci(rep.epsilon) << ", window "
            << rep.window << ", log base " << to_string(rep.log_base) << "\n"
            << "J\tSHE\tdelta\tdecision\n";
  for (const auto& row : rep.trace)
    std::cout << row.order << "\t" << (row.degenerate ? std::string("-") : fixed(row.she)) << "\t"
              << sci(row.delta) << "\t" << row.decision << "\n";
  std::cout << "selected order: " << rep.selected_order << "\n";
  if (!o.output.empty()) {
    write_report(o.output, rep);
    std::cout << "wrote " << o.output << "\n";
  }
  return kOk;
}

int cmd_spectrum(const Options& o) {
  const auto pyr = load_pyramid(o.input, o.lmax, basis_strategy_from_string(o.strategy));
  const auto e = level_energies(pyr, LevelNormalization::Unit);
  double total = 0.0;
  for (double v : e) total += v;
  std::cout << "l\tenergy\tfraction\n";
  for (int l = 0; l <= pyr.band_limit(); ++l) {
    const double v = e[static_cast<std::size_t>(l)];
    std::cout << l << "\t" << sci(v) << "\t" << fixed(total > 0 ? v / total : 0.0) << "\n";
  }
  if (!o.output.empty()) {
    write_spectrum(o.output, pyr);
    std::cout << "wrote " << o.output << "\n";
  }
  return kOk;
}

int cmd_bench(const Options& o) {
  BenchConfig cfg;
  if (o.quick) {
    cfg.speed_n_theta = cfg.speed_n_phi = 21;
    cfg.speed_band_limit = 16;
    cfg.fit_band_limits = {4, 8, 16};
    cfg.fit_n_theta = cfg.fit_n_phi = 8;
    cfg.n_scaling_band_limit = 8;
    cfg.n_scaling_n_theta = 12;
    cfg.repeats = 1;
  }
  std::cout << "benchmarking basis evaluation (1 worker)...\n" << std::flush;
  const auto rep = run_bench(cfg);
  std::cout << "experiment\tstrategy\tL\tpoints\tseconds\tper-point\tflops\n";
  for (const auto& s : rep.samples)
    std::cout << s.experiment << "\t" << to_string(s.strategy) << "\t" << s.band_limit << "\t" << s.points << "\t"
              << fixed(s.seconds, 4) << "\t" << sci(s.per_point_seconds) << "\t" << s.flops << "\n";
  std::cout << "speedup (direct / recursive) at L = " << cfg.speed_band_limit << ", N = "
            << cfg.speed_n_theta * cfg.speed_n_phi << ": " << fixed(rep.speedup, 1) << "x\n"
            << "per-point time exponent in L: recursive " << fixed(rep.exponent_recursive, 3) << ", direct "
            << fixed(rep.exponent_direct, 3) << "\n"
            << "per-point flop exponent in L: recursive " << fixed(rep.flop_exponent_recursive, 3) << ", direct "
            << fixed(rep.flop_exponent_direct, 3) << "\n"
            << "time ratio for doubled N: recursive " << fixed(rep.n_ratio_recursive, 2) << ", direct "
            << fixed(rep.n_ratio_direct, 2) << "\n"
            << "total " << fixed(rep.total_seconds, 1) << " s\n";
  if (!o.output.empty()) {
    std::ofstream out(o.output);
    if (!out) throw IoError("cannot open " + o.output + " for writing");
    out << "experiment,strategy,L,points,seconds,per_point_seconds,flops\n";
    for (const auto& s : rep.samples)
      out << s.experiment << "," << to_string(s.strategy) << "," << s.band_limit << "," << s.points << ","
          << detail::fmt17(s.seconds) << "," << detail::fmt17(s.per_point_seconds) << "," << s.flops << "\n";
    if (!out) throw IoError("write to " + o.output + " failed");
    std::cout << "wrote " << o.output << "\n";
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spherical-harmonic analysis and entropy-based order selection"};
  app.require_subcommand(1);
  Options o;

  auto add_input = [&](CLI::App* c, const std::string& what) {
    c->add_option("--input,-i", o.input, what)->required();
  };
  auto add_lmax = [&](CLI::App* c) {
    c->add_option("--lmax,-L", o.lmax, "Band limit L (default: alias-free degree of the grid)")
        ->check(CLI::NonNegativeNumber);
  };
  auto add_strategy = [&](CLI::App* c) {
    c->add_option("--strategy", o.strategy, "Basis evaluation: recursive|direct")->capture_default_str();
  };
  auto add_entropy = [&](CLI::App* c) {
    c->add_option("--log-base", o.log_base, "Entropy logarithm base: e|2|10")->capture_default_str();
    c->add_option("--level-norm", o.level_norm, "Level energy normalization: unit|per-level")
        ->capture_default_str();
    c->add_option("--normalization", o.normalization, "SHE(J) denominator: prefix|full")->capture_default_str();
  };

  auto* synth = app.add_subcommand("synth", "Sample a built-in test shape on a grid");
  synth->add_option("--shape", o.shape, "unit-sphere|radial-harmonic-bump|random-bandlimited")
      ->capture_default_str();
  synth->add_option("--grid", o.grid, "gauss:L or equiangular:NTxNP")->capture_default_str();
  synth->add_option("--lmax,-L", o.lmax, "Top occupied degree of random-bandlimited shapes")
      ->check(CLI::NonNegativeNumber);
  synth->add_option("--bump", o.bumps, "Harmonic l,m,amplitude (repeatable)");
  synth->add_option("--seed", o.seed, "Random seed")->capture_default_str();
  synth->add_option("--amplitude-scale", o.amplitude_scale, "Random amplitude scale")->capture_default_str();
  synth->add_option("--channels", o.channels, "1 (radius) or 3 (X, Y, Z)")->capture_default_str();
  synth->add_option("--output,-o", o.output, "Field CSV to write")->required();

  auto* analyze_cmd = app.add_subcommand("analyze", "Compute coefficients and spectrum of a field");
  add_input(analyze_cmd, "Field CSV");
  add_lmax(analyze_cmd);
  add_strategy(analyze_cmd);
  analyze_cmd->add_option("--output,-o", o.output, "Output prefix (default: input without extension)");
  analyze_cmd->add_flag("--real-coeffs", o.real_coeffs, "Also write real cosine/sine coefficients");

  auto* recon = app.add_subcommand("reconstruct", "Truncated reconstruction and residual of a field");
  add_input(recon, "Field CSV");
  recon->add_option("--coeffs", o.coeffs, "Coefficient JSON (default: analyze the input)");
  recon->add_option("--order,-J", o.order, "Truncation order J")->check(CLI::NonNegativeNumber);
  add_lmax(recon);
  add_strategy(recon);
  recon->add_option("--output,-o", o.output, "Reconstructed field CSV to write");

  auto* entropy = app.add_subcommand("entropy", "SHE curve of a field or coefficient file");
  add_input(entropy, "Field CSV or coefficient JSON");
  add_lmax(entropy);
  add_strategy(entropy);
  add_entropy(entropy);
  entropy->add_option("--order,-J", o.order, "Also print SHE(J)")->check(CLI::NonNegativeNumber);
  entropy->add_option("--output,-o", o.output, "SHE curve CSV to write");

  auto* select = app.add_subcommand("select-order", "Choose the reconstruction order from the SHE curve");
  add_input(select, "Field CSV or coefficient JSON");
  add_lmax(select);
  add_strategy(select);
  add_entropy(select);
  select->add_option("--epsilon", o.epsilon, "Stabilization tolerance")->capture_default_str();
  select->add_option("--window", o.window, "Levels that must stay flat")->capture_default_str();
  select->add_option("--criterion", o.criterion, "stabilization|flowchart")->capture_default_str();
  select->add_option("--output,-o", o.output, "Report JSON to write");

  auto* spectrum = app.add_subcommand("spectrum", "Level energies of a field or coefficient file");
  add_input(spectrum, "Field CSV or coefficient JSON");
  add_lmax(spectrum);
  add_strategy(spectrum);
  spectrum->add_option("--output,-o", o.output, "Spectrum CSV to write");

  auto* bench = app.add_subcommand("bench", "Time direct vs recursive basis evaluation");
  bench->add_flag("--quick", o.quick, "Small sizes (smoke test only)");
  bench->add_option("--output,-o", o.output, "Timing CSV to write");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kInvalid;
  }

  try {
    if (*synth) return cmd_synth(o);
    if (*analyze_cmd) return cmd_analyze(o);
    if (*recon) return cmd_reconstruct(o);
    if (*entropy) return cmd_entropy(o);
    if (*select) return cmd_select_order(o);
    if (*spectrum) return cmd_spectrum(o);
    if (*bench) return cmd_bench(o);
  } catch (const NoConvergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNoConvergence;
  } catch (const DegenerateInputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumerical;
  } catch (const ResourceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumerical;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  } catch (const std::invalid_argument& e) {  // band limit, order, shape mismatch
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumerical;
  }
  return kInvalid;
}
