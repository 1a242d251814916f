#include "apl/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <sstream>
#include <thread>

#include "apl/bohr.hpp"
#include "apl/convolution.hpp"
#include "apl/errors.hpp"
#include "apl/function_file.hpp"
#include "apl/reports.hpp"
#include "apl/scanner.hpp"
#include "apl/stepanov.hpp"

namespace apl::cli {

namespace {

TrigPolynomial require_trig(const FunctionFile& f, const std::string& what) {
  if (const auto* t = std::get_if<TrigPolynomial>(&f)) return *t;
  throw ValidationError(what + " requires a trig_poly function file");
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
  } else {
    write_file(path, text);
  }
}

std::vector<double> parse_list(const std::string& s, const std::string& flag) {
  std::vector<double> xs;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size() || !std::isfinite(x))
      throw ValidationError(flag + ": cannot parse \"" + item + "\" as a number");
    xs.push_back(x);
  }
  return xs;
}

void require_positive(double x, const char* name) {
  if (!(x > 0.0) || !std::isfinite(x)) throw ValidationError(std::string(name) + " must be > 0");
}

double convolution_step(const TrigPolynomial* g) {
  double step = 0.01;
  if (g) {
    double lambda_max = 0.0;
    for (const auto& t : g->terms()) lambda_max = std::max(lambda_max, std::abs(t.freq));
    if (lambda_max > 0.0) step = std::min(step, 2.0 * std::numbers::pi / lambda_max / 40.0);
  }
  return step;
}

}  // namespace

unsigned thread_budget() {
  const char* env = std::getenv("APL_THREADS");
  if (!env || !*env) return std::max(1u, std::thread::hardware_concurrency());
  char* end = nullptr;
  const long n = std::strtol(env, &end, 10);
  if (*end != '\0' || n < 1 || n > 4096) throw ValidationError("APL_THREADS must be a positive integer");
  return static_cast<unsigned>(n);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Almost anti-periodic function toolkit"};
  app.require_subcommand(1);

  std::string fn_path, out_path, csv_path, kernel_path, signal_path, mode = "anti", freqs;
  double eps = 0, tau_max = 0, tau_step = 0, numeric_T = 2000, freq = 0, t0 = 0, t1 = 0, step = 0,
         p = 1, tau = 0, omega = 1, q = std::numeric_limits<double>::infinity();
  bool finite = false;
  int terms = 1, dim = 1;
  std::uint64_t seed = 0;
  std::string gen_kind;

  auto* analyze = app.add_subcommand("analyze", "spectrum, ANP membership and numeric Bohr checks");
  analyze->add_option("fn", fn_path)->required();
  analyze->add_option("--freqs", freqs, "comma-separated frequencies for numeric checks");
  analyze->add_option("--numeric-T", numeric_T, "averaging horizon");

  auto* scan_cmd = app.add_subcommand("scan", "scan (0, tau_max] for certified (anti-)periods");
  scan_cmd->add_option("fn", fn_path)->required();
  scan_cmd->add_option("--eps", eps)->required();
  scan_cmd->add_option("--tau-max", tau_max)->required();
  scan_cmd->add_option("--tau-step", tau_step)->required();
  scan_cmd->add_option("--mode", mode)->check(CLI::IsMember({"anti", "plain"}));
  scan_cmd->add_option("--out", out_path);
  scan_cmd->add_option("--csv", csv_path);

  auto* density = app.add_subcommand("density", "relative-density summary of a scan report");
  density->add_option("report", fn_path)->required();

  auto* anp = app.add_subcommand("anp", "membership in the closed span of almost anti-periodic functions");
  anp->add_option("fn", fn_path)->required();

  auto* modulate_cmd = app.add_subcommand("modulate", "multiply by exp(-i r t)");
  modulate_cmd->add_option("fn", fn_path)->required();
  modulate_cmd->add_option("--freq", freq)->required();
  modulate_cmd->add_option("--out", out_path)->required();

  auto* convolve = app.add_subcommand("convolve", "convolution with an operator kernel");
  convolve->add_option("--kernel", kernel_path)->required();
  convolve->add_option("--signal", signal_path)->required();
  convolve->add_option("--t0", t0)->required();
  convolve->add_option("--t1", t1)->required();
  convolve->add_option("--step", step)->required();
  convolve->add_flag("--finite", finite, "H(t) = int_0^t instead of G(t) = int_{-inf}^t");
  convolve->add_option("--q", q, "exponent for the summability constant (default inf)");

  auto* stepanov = app.add_subcommand("stepanov", "S^p anti-periodicity defect");
  stepanov->add_option("fn", fn_path)->required();
  stepanov->add_option("--p", p)->required();
  stepanov->add_option("--tau", tau)->required();

  auto* gen = app.add_subcommand("gen", "generate a random function file");
  gen->add_option("kind", gen_kind)->required()->check(CLI::IsMember({"anti"}));
  gen->add_option("--omega", omega)->required();
  gen->add_option("--terms", terms)->required();
  gen->add_option("--dim", dim)->required();
  gen->add_option("--seed", seed)->required();
  gen->add_option("--out", out_path)->required();

  std::vector<std::string> argv_store{"apl"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }

  try {
    if (analyze->parsed()) {
      const TrigPolynomial f = require_trig(load_function(fn_path), "analyze");
      require_positive(numeric_T, "--numeric-T");
      const SpectrumReport s = spectrum(f);
      std::vector<double> rs;
      if (!freqs.empty()) {
        rs = parse_list(freqs, "--freqs");
      } else {
        for (const auto& e : s.entries) rs.push_back(e.freq);
      }
      std::vector<NumericCheck> checks;
      const Signal sig(f);
      for (double r : rs) {
        const BohrCoefficient num = bohr_numeric(sig, r, numeric_T, default_quad_step(f, r));
        const BohrCoefficient ex = bohr_exact(f, r);
        checks.push_back({r, numeric_T, (num.value - ex.value).norm(f.norm_kind())});
      }
      out << dump(analyze_report(s, anp_membership(f), checks));
    } else if (scan_cmd->parsed()) {
      const TrigPolynomial f = require_trig(load_function(fn_path), "scan");
      require_positive(eps, "--eps");
      require_positive(tau_max, "--tau-max");
      require_positive(tau_step, "--tau-step");
      ScanOptions opts;
      opts.mode = defect_mode_from_string(mode);
      opts.eps = eps;
      opts.tau_max = tau_max;
      opts.tau_step = tau_step;
      opts.threads = thread_budget();
      const ScanReport report = scan(f, opts);
      emit(dump(to_json(report)), out_path, out);
      if (!csv_path.empty()) write_file(csv_path, to_csv(report));
    } else if (density->parsed()) {
      const ScanReport report = scan_report_from_json(parse_json_text(read_file(fn_path)));
      out << dump(to_json(density_summary(report)));
    } else if (anp->parsed()) {
      const TrigPolynomial f = require_trig(load_function(fn_path), "anp");
      out << dump(to_json(anp_membership(f)));
    } else if (modulate_cmd->parsed()) {
      const TrigPolynomial f = require_trig(load_function(fn_path), "modulate");
      if (!std::isfinite(freq)) throw ValidationError("--freq must be finite");
      write_file(out_path, serialize(modulate(f, freq)));
    } else if (convolve->parsed()) {
      const Kernel kernel = load_kernel(kernel_path);
      const FunctionFile file = load_function(signal_path);
      require_positive(step, "--step");
      if (!(t1 >= t0)) throw ValidationError("--t1 must be >= --t0");
      if (!(q >= 1.0)) throw ValidationError("--q must be >= 1");
      std::vector<double> grid;
      const auto n = static_cast<std::size_t>(std::floor((t1 - t0) / step + 1e-9));
      for (std::size_t k = 0; k <= n; ++k) grid.push_back(t0 + step * static_cast<double>(k));
      const Signal sig = to_signal(file);
      const TrigPolynomial* trig = sig.trig();
      ConvolutionOptions opts;
      opts.quad_step = convolution_step(trig);
      opts.threads = thread_budget();
      const SummabilityReport sr = summability(kernel, q, 1e-12, sig.norm_kind());
      std::vector<TransferCheck> checks;
      ConvolutionResult result;
      if (finite) {
        result = convolve_finite(kernel, sig, grid, opts);
      } else {
        if (!trig) throw ValidationError("infinite convolution requires a trig_poly signal");
        result = convolve_infinite(kernel, *trig, grid, opts);
        // self-check at the natural anti-period of the slowest nonzero frequency
        double lambda_min = std::numeric_limits<double>::infinity();
        for (const auto& t : trig->terms())
          if (t.freq != 0.0) lambda_min = std::min(lambda_min, std::abs(t.freq));
        if (std::isfinite(lambda_min)) {
          const double tau_nat = std::numbers::pi / lambda_min;
          const double eps_nat = std::max(triangle_bound(*trig, DefectMode::Anti, tau_nat), 1e-12);
          const PeriodCertificate cert = classify(*trig, DefectMode::Anti, tau_nat, eps_nat);
          if (cert.status == CertStatus::Certified) {
            TransferOptions to;
            to.conv = opts;
            checks.push_back(transfer_check(kernel, *trig, cert, q, to));
          }
        }
      }
      out << dump(convolution_report(result, sr.upper(), checks));
    } else if (stepanov->parsed()) {
      const Signal sig = to_signal(load_function(fn_path));
      if (!std::isfinite(tau)) throw ValidationError("--tau must be finite");
      StepanovParams params;
      params.p = p;
      const GridParams grid{20.0, 0.05, 0.0};
      out << dump(stepanov_report(params, tau, sp_defect(sig, params, tau, grid)));
    } else if (gen->parsed()) {
      require_positive(omega, "--omega");
      if (terms < 1) throw ValidationError("--terms must be >= 1");
      if (dim < 1) throw ValidationError("--dim must be >= 1");
      const AntiPeriodicSpec spec =
          random_antiperiodic_spec(omega, terms, static_cast<std::size_t>(dim), seed);
      write_file(out_path, serialize(generate_antiperiodic(spec, NormKind::Euclidean)));
    }
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const NumericError& e) {
    err << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitOk;
}

}  // namespace apl::cli
