#include "dtnn/cli.hpp"

#include <algorithm>
#include <charconv>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "dtnn/datagen.hpp"
#include "dtnn/dtnn_solver.hpp"
#include "dtnn/errors.hpp"
#include "dtnn/io_formats.hpp"
#include "dtnn/metrics.hpp"
#include "dtnn/tnn_baseline.hpp"

namespace dtnn::cli {
namespace {

Dims parse_dims(const std::string& text) {
  Dims d;
  std::size_t* parts[3] = {&d.n1, &d.n2, &d.n3};
  std::size_t pos = 0;
  for (int p = 0; p < 3; ++p) {
    const std::size_t end = p < 2 ? text.find('x', pos) : text.size();
    if (end == std::string::npos) throw ArgumentError("--dims must look like N1xN2xN3, got '" + text + "'");
    const char* first = text.data() + pos;
    const char* last = text.data() + end;
    auto [ptr, ec] = std::from_chars(first, last, *parts[p]);
    if (ec != std::errc() || ptr != last || *parts[p] == 0) {
      throw ArgumentError("--dims must look like N1xN2xN3 with positive sizes, got '" + text + "'");
    }
    pos = end + 1;
  }
  return d;
}

struct SynthArgs {
  std::string dims;
  std::size_t atoms = 0;
  std::size_t rank = 0;
  std::uint64_t seed = 0;
  std::string out_tensor, out_dict, out_z;
};

struct MaskArgs {
  std::string dims;
  double sr = 0.0;
  std::size_t missing_slices = 0;
  std::uint64_t seed = 0;
  std::string out;
};

struct CompleteArgs {
  std::string method = "dtnn";
  std::string tensor, mask, out, report, out_dict;
  std::optional<std::size_t> atoms;
  std::optional<double> beta, rho_z, rho_d, rho_x, tol;
  std::optional<int> max_iters;
  std::uint64_t seed = 0;
  int threads = 1;
  bool no_timing = false;
};

struct EvaluateArgs {
  std::string gt, rec, dict_gt, dict_est, report;
  double peak = 1.0;
};

int do_synth(const SynthArgs& a, std::ostream& err) {
  SynthSpec spec{parse_dims(a.dims), a.atoms, a.rank, a.seed};
  const SynthProblem p = synth_low_rank_coded(spec);
  write_tensor(a.out_tensor, p.x);
  write_dictionary(a.out_dict, p.dict);
  write_tensor(a.out_z, p.z);
  err << "synth: wrote " << a.dims << " tensor, " << a.atoms << " atoms\n";
  return kOk;
}

int do_mask(const MaskArgs& a, std::ostream& err) {
  const Dims dims = parse_dims(a.dims);
  const ObservationMask m = slice_missing_mask(dims, a.sr, a.missing_slices, a.seed);
  write_mask(a.out, m);
  err << "mask: " << m.count_observed() << " of " << m.size() << " entries observed\n";
  return kOk;
}

int do_complete(const CompleteArgs& a, std::ostream& err) {
  const Tensor3 o = read_tensor(a.tensor);
  const ObservationMask mask = read_mask(a.mask);
  if (!(o.dims() == mask.dims())) throw ShapeError("tensor and mask dimensions differ");

  CompletionResult result;
  nlohmann::ordered_json config;
  config["method"] = a.method;
  config["threads"] = a.threads;
  if (a.method == "dtnn") {
    SolverConfig cfg;
    cfg.atoms = a.atoms.value_or(5 * o.n3());
    if (a.beta) cfg.beta = *a.beta;
    if (a.rho_z) cfg.rho_z = *a.rho_z;
    if (a.rho_d) cfg.rho_d = *a.rho_d;
    if (a.rho_x) cfg.rho_x = *a.rho_x;
    if (a.tol) cfg.stop_tol = *a.tol;
    if (a.max_iters) cfg.max_iters = *a.max_iters;
    cfg.seed = a.seed;
    cfg.threads = a.threads;
    config["d"] = *cfg.atoms;
    config["beta"] = cfg.beta;
    config["rho_z"] = cfg.rho_z;
    config["rho_d"] = cfg.rho_d;
    config["rho_x"] = cfg.rho_x;
    config["beta_boost_iters"] = cfg.beta_boost_iters;
    config["beta_boost_factor"] = cfg.beta_boost_factor;
    config["beta_growth_start"] = cfg.beta_growth_start;
    config["beta_growth_factor"] = cfg.beta_growth_factor;
    config["beta_cap"] = cfg.beta_cap;
    config["stop_tol"] = cfg.stop_tol;
    config["max_iters"] = cfg.max_iters;
    config["warmup_iters"] = cfg.warmup_iters;
    config["residual_refresh_iters"] = cfg.residual_refresh_iters;
    config["seed"] = cfg.seed;
    result = solve(o, mask, cfg, [&err](const IterationSnapshot& s) {
      const auto& r = s.record;
      if (r.iteration % 10 == 0) {
        err << "dtnn: iter " << r.iteration << " objective " << r.objective << " beta " << r.beta << " change "
            << std::max({r.rel_change_z, r.rel_change_d, r.rel_change_x}) << "\n";
      }
    });
  } else {
    BaselineConfig cfg;
    cfg.transform = a.method == "tnn" ? TransformKind::DFT : TransformKind::DCT;
    if (a.beta) cfg.beta0 = *a.beta;
    if (a.tol) cfg.stop_tol = *a.tol;
    if (a.max_iters) cfg.max_iters = *a.max_iters;
    cfg.threads = a.threads;
    config["transform"] = a.method == "tnn" ? "dft" : "dct";
    config["beta0"] = cfg.beta0;
    config["beta_factor"] = cfg.beta_factor;
    config["beta_cap"] = cfg.beta_cap;
    config["stop_tol"] = cfg.stop_tol;
    config["max_iters"] = cfg.max_iters;
    result = solve_tnn(o, mask, cfg);
  }

  write_tensor(a.out, result.x);
  if (!a.out_dict.empty()) {
    if (!result.dict) throw ArgumentError("--out-dict is only available for --method dtnn");
    write_dictionary(a.out_dict, *result.dict);
  }
  ReportContent report;
  report.trace = result.trace;
  report.wall_time_s = a.no_timing ? std::numeric_limits<double>::quiet_NaN() : result.wall_time_s;
  report.config_json = config.dump();
  write_report_file(a.report, report);
  err << "complete: " << a.method << " finished after " << result.iterations() << " iterations"
      << (result.converged ? " (converged)" : "") << "\n";
  return kOk;
}

int do_evaluate(const EvaluateArgs& a, std::ostream& err) {
  const Tensor3 gt = read_tensor(a.gt);
  const Tensor3 rec = read_tensor(a.rec);
  if (!(gt.dims() == rec.dims())) throw ShapeError("ground truth and reconstruction dimensions differ");
  if (a.dict_gt.empty() != a.dict_est.empty()) {
    throw ArgumentError("--dict-gt and --dict-est must be given together");
  }
  std::optional<Dictionary> dgt;
  std::optional<Dictionary> dest;
  if (!a.dict_gt.empty()) {
    dgt = read_dictionary(a.dict_gt);
    dest = read_dictionary(a.dict_est);
    if (dgt->atoms().rows() != dest->atoms().rows() || dgt->atoms().cols() != dest->atoms().cols()) {
      throw ShapeError("dictionary shapes differ");
    }
  }
  ReportContent report;
  report.metrics = evaluate(gt, rec, a.peak, dest ? &*dest : nullptr, dgt ? &*dgt : nullptr);
  nlohmann::ordered_json config;
  config["peak"] = a.peak;
  report.config_json = config.dump();
  write_report_file(a.report, report);
  err << "evaluate: psnr " << report.metrics->psnr_mean << " dB, rmse " << report.metrics->rmse << "\n";
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& err) {
  CLI::App app{"Third-order tensor completion with learned mode-3 dictionaries", "dtnn"};
  app.require_subcommand(1);

  SynthArgs sa;
  auto* synth = app.add_subcommand("synth", "Generate a low-rank-coded synthetic tensor");
  synth->add_option("--dims", sa.dims, "N1xN2xN3")->required();
  synth->add_option("--d", sa.atoms, "Dictionary atoms")->required()->check(CLI::PositiveNumber);
  synth->add_option("--rank", sa.rank, "Rank of every coefficient slice")->required()->check(CLI::PositiveNumber);
  synth->add_option("--seed", sa.seed, "RNG seed")->required();
  synth->add_option("--out-tensor", sa.out_tensor)->required();
  synth->add_option("--out-dict", sa.out_dict)->required();
  synth->add_option("--out-z", sa.out_z)->required();

  MaskArgs ma;
  auto* mask = app.add_subcommand("mask", "Generate a random observation mask");
  mask->add_option("--dims", ma.dims, "N1xN2xN3")->required();
  mask->add_option("--sr", ma.sr, "Sampling rate in (0, 1]")->required();
  mask->add_option("--missing-slices", ma.missing_slices, "Adjacent frontal slices to drop entirely");
  mask->add_option("--seed", ma.seed, "RNG seed")->required();
  mask->add_option("--out", ma.out)->required();

  CompleteArgs ca;
  auto* complete = app.add_subcommand("complete", "Complete a partially observed tensor");
  complete->add_option("--method", ca.method)->check(CLI::IsMember({"dtnn", "tnn", "dctnn"}))->capture_default_str();
  complete->add_option("--tensor", ca.tensor, "Observed tensor (TNS3)")->required();
  complete->add_option("--mask", ca.mask, "Observation mask (MSK3)")->required();
  complete->add_option("--d", ca.atoms, "Dictionary atoms (default 5*n3)")->check(CLI::PositiveNumber);
  complete->add_option("--beta", ca.beta, "Initial penalty (dtnn 10, tnn/dctnn 0.01)");
  complete->add_option("--rho-z", ca.rho_z, "Proximal weight on coefficients (20)");
  complete->add_option("--rho-d", ca.rho_d, "Proximal weight on atoms (1)");
  complete->add_option("--rho-x", ca.rho_x, "Proximal weight on the tensor (1)");
  complete->add_option("--tol", ca.tol, "Stopping tolerance (dtnn 1e-3, tnn/dctnn 1e-4)");
  complete->add_option("--max-iters", ca.max_iters, "Iteration cap (dtnn 200, tnn/dctnn 500)");
  complete->add_option("--seed", ca.seed, "RNG seed");
  complete->add_option("--threads", ca.threads, "Worker threads; 1 is the reproducible mode")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  complete->add_option("--out", ca.out, "Recovered tensor (TNS3)")->required();
  complete->add_option("--out-dict", ca.out_dict, "Learned dictionary (dtnn only)");
  complete->add_option("--report", ca.report, "JSON report")->required();
  complete->add_flag("--no-timing", ca.no_timing, "Write wall_time_s as null for byte-stable reports");

  EvaluateArgs ea;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Score a reconstruction against ground truth");
  evaluate_cmd->add_option("--gt", ea.gt)->required();
  evaluate_cmd->add_option("--rec", ea.rec)->required();
  evaluate_cmd->add_option("--dict-gt", ea.dict_gt);
  evaluate_cmd->add_option("--dict-est", ea.dict_est);
  evaluate_cmd->add_option("--peak", ea.peak, "PSNR peak value")->capture_default_str();
  evaluate_cmd->add_option("--report", ea.report)->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    err << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    err << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kUsage;
  }

  try {
    if (*synth) return do_synth(sa, err);
    if (*mask) return do_mask(ma, err);
    if (*complete) return do_complete(ca, err);
    return do_evaluate(ea, err);
  } catch (const FormatError& e) {
    err << "format error: " << e.what() << "\n";
    return kFormat;
  } catch (const ShapeError& e) {
    err << "format error: " << e.what() << "\n";
    return kFormat;
  } catch (const ArgumentError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const InvalidProblemError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const NumericError& e) {
    err << "numeric error: " << e.what() << "\n";
    return kNumeric;
  } catch (const UndefinedMetricError& e) {
    err << "numeric error: " << e.what() << "\n";
    return kNumeric;
  } catch (const std::exception& e) {
    err << "i/o error: " << e.what() << "\n";
    return kFormat;
  }
}

}  // namespace dtnn::cli
