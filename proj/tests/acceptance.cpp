// Acceptance suite. Prints one PASS/FAIL line per criterion; `--only N` runs a
// single criterion. Exit status is nonzero if any selected criterion fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "dtnn/datagen.hpp"
#include "dtnn/dtnn_solver.hpp"
#include "dtnn/io_formats.hpp"
#include "dtnn/metrics.hpp"
#include "dtnn/spectral.hpp"
#include "dtnn/tlinalg.hpp"
#include "dtnn/tnn_baseline.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

namespace {

using namespace dtnn;

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double limit_s;  // 0 = no limit
  std::function<Outcome()> body;
};

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

struct Problem {
  SynthProblem synth;
  ObservationMask mask;
  Tensor3 observed;
};

Problem coded_problem(Dims dims, std::size_t d, std::size_t r, double sr, std::uint64_t seed) {
  Problem p{synth_low_rank_coded(SynthSpec{dims, d, r, seed}), ObservationMask(dims), Tensor3(dims)};
  p.mask = random_mask(dims, sr, seed);
  p.observed = apply_mask(p.synth.x, p.mask);
  return p;
}

SolverConfig config_for(std::size_t d, std::uint64_t seed) {
  SolverConfig cfg;
  cfg.atoms = d;
  cfg.seed = seed;
  return cfg;
}

Outcome algebra() {
  std::mt19937_64 gen(101);
  std::uniform_int_distribution<std::size_t> side(1, 4), depth(1, 5);
  double worst_prod = 0.0, worst_tnn = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n1 = side(gen), n2 = side(gen), n4 = side(gen), n3 = depth(gen);
    const Tensor3 a = oracle::random_tensor(Dims{n1, n2, n3}, gen);
    const Tensor3 b = oracle::random_tensor(Dims{n2, n4, n3}, gen);
    const Tensor3 fast = tprod(a, b), slow = oracle::tprod_direct(a, b);
    for (std::size_t q = 0; q < fast.size(); ++q)
      worst_prod = std::max(worst_prod, std::abs(fast.data()[q] - slow.data()[q]));
    const double expect = oracle::nuclear_by_augmented(oracle::block_circulant_entries(a));
    const double got = tnn(a);
    worst_tnn = std::max(worst_tnn, std::abs(got - expect) / std::max(expect, 1e-300));
  }
  return {worst_prod <= 1e-9 && worst_tnn <= 1e-7,
          fmt("max |tprod delta| %.2e, max tnn rel delta %.2e", worst_prod, worst_tnn)};
}

Outcome svt_correctness() {
  std::mt19937_64 gen(202);
  std::uniform_int_distribution<Eigen::Index> side(1, 8);
  std::uniform_real_distribution<double> eps(-1e-3, 1e-3);
  double worst_sv = 0.0;
  long beaten = 0;
  const auto prox = [](const Matrix& x, const Matrix& m, double tau) {
    return 0.5 * (x - m).squaredNorm() + tau * oracle::nuclear_by_augmented(x);
  };
  for (int trial = 0; trial < 500; ++trial) {
    const Matrix m = oracle::random_matrix(side(gen), side(gen), gen);
    const Vector sigma = oracle::singular_values_by_augmented(m);
    for (double tau : {0.0, 0.1, 1.0, 10.0}) {
      const Matrix out = svt(m, tau);
      const Vector got = oracle::singular_values_by_augmented(out);
      for (Eigen::Index i = 0; i < sigma.size(); ++i)
        worst_sv = std::max(worst_sv, std::abs(got(i) - std::max(sigma(i) - tau, 0.0)));
      const double base = prox(out, m, tau);
      for (int k = 0; k < 1000; ++k) {
        Matrix pert = out;
        for (Eigen::Index q = 0; q < pert.size(); ++q) pert.data()[q] += eps(gen);
        if (prox(pert, m, tau) < base) ++beaten;
      }
    }
  }
  return {worst_sv <= 1e-9 && beaten == 0,
          fmt("max singular value delta %.2e, perturbations beating svt %.0f", worst_sv, double(beaten))};
}

Outcome descent() {
  double worst = -std::numeric_limits<double>::infinity();
  int runs = 0;
  for (double sr : {0.3, 0.5})
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      const Problem p = coded_problem(Dims{20, 20, 10}, 30, 2, sr, seed);
      const CompletionResult r = solve(p.observed, p.mask, config_for(30, seed));
      for (std::size_t k = 1; k < r.trace.size(); ++k)
        if (r.trace[k].beta == r.trace[k - 1].beta)
          worst = std::max(worst, r.trace[k].objective - r.trace[k - 1].objective);
      ++runs;
    }
  return {worst <= 1e-8, fmt("%.0f runs, largest objective increase within constant beta %.3e", runs, worst)};
}

Outcome dictionary_recovery() {
  Outcome out;
  std::ostringstream detail;
  for (double sr : {0.3, 0.5})
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      const Problem p = coded_problem(Dims{30, 30, 30}, 90, 3, sr, seed);
      SolverConfig cfg = config_for(90, seed);
      cfg.max_iters = 100;
      cfg.stop_tol = 1e-12;
      double first = NAN, at100 = NAN;
      solve(p.observed, p.mask, cfg, [&](const IterationSnapshot& s) {
        if (s.record.iteration == 0) first = dict_err(s.dict, p.synth.dict);
        if (s.record.iteration == 100) at100 = dict_err(s.dict, p.synth.dict);
      });
      const bool ok = at100 < first;
      out.pass = out.pass && ok;
      detail << "sr " << sr << " seed " << seed << ": " << first << " -> " << at100 << (ok ? "" : " (no decrease)")
             << "; ";
    }
  out.detail = detail.str();
  return out;
}

Outcome completion_regression() {
  const fixture::ReferenceRun ref = fixture::reference_run("coded_30");
  const Problem p = coded_problem(ref.spec.dims, ref.spec.atoms, ref.spec.slice_rank, ref.sampling_rate, ref.spec.seed);
  const CompletionResult r = solve(p.observed, p.mask, config_for(ref.spec.atoms, ref.spec.seed));
  const double err = fixture::missing_relative_error(r.x, p.synth.x, p.mask);
  return {err <= 1.1 * ref.missing_rel_error,
          fmt("missing-entry relative error %.6f, bound %.6f", err, 1.1 * ref.missing_rel_error)};
}

Outcome baseline_ordering() {
  Outcome out;
  std::ostringstream detail;
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const Problem p = coded_problem(Dims{30, 30, 30}, 90, 3, 0.5, seed);
    const double e_dtnn = fixture::missing_rmse(solve(p.observed, p.mask, config_for(90, seed)).x, p.synth.x, p.mask);
    BaselineConfig bc;
    const double e_tnn = fixture::missing_rmse(solve_tnn(p.observed, p.mask, bc).x, p.synth.x, p.mask);
    bc.transform = TransformKind::DCT;
    const double e_dct = fixture::missing_rmse(solve_tnn(p.observed, p.mask, bc).x, p.synth.x, p.mask);
    const bool ok = e_dtnn <= e_tnn && e_dtnn <= e_dct;
    out.pass = out.pass && ok;
    detail << "seed " << seed << ": dtnn " << e_dtnn << " tnn " << e_tnn << " dctnn " << e_dct << "; ";
  }
  out.detail = detail.str();
  return out;
}

Outcome exact_on_observed() {
  const Problem p = coded_problem(Dims{16, 14, 8}, 24, 2, 0.5, 5);
  Tensor3 o = p.observed;
  for (std::size_t q = 0; q < o.size(); ++q)
    if (!p.mask.at(q)) o.data()[q] = 1e6;
  std::vector<std::pair<std::string, Tensor3>> outputs;
  outputs.emplace_back("dtnn", solve(o, p.mask, config_for(24, 5)).x);
  BaselineConfig bc;
  outputs.emplace_back("tnn", solve_tnn(o, p.mask, bc).x);
  bc.transform = TransformKind::DCT;
  outputs.emplace_back("dctnn", solve_tnn(o, p.mask, bc).x);
  Outcome out{true, ""};
  for (const auto& [name, x] : outputs) {
    std::size_t bad = 0;
    for (std::size_t q = 0; q < x.size(); ++q)
      if (p.mask.at(q) && std::memcmp(&x.data()[q], &o.data()[q], sizeof(double)) != 0) ++bad;
    out.pass = out.pass && bad == 0;
    out.detail += name + " mismatches " + std::to_string(bad) + "; ";
  }
  return out;
}

Outcome metric_fixtures() {
  const Dims d{16, 16, 3};
  const double p = psnr(Tensor3(d, 1.0), Tensor3(d, 0.5));
  const double m = mape(Tensor3(d, 2.0), Tensor3(d, 1.0));
  Tensor3 a(Dims{1, 1, 2}), b(Dims{1, 1, 2});
  a(0, 0, 0) = 1.0;
  b(0, 0, 1) = 3.0;
  const double s = sam_mean(a, b);
  std::mt19937_64 gen(303);
  const Dictionary dict = Dictionary::from_columns(oracle::random_matrix(6, 9, gen));
  const double de = dict_err(dict, dict);
  Tensor3 img = oracle::random_tensor(d, gen);
  const double ss = ssim_mean(img, img), uq = uiqi_mean(img, img);
  const bool ok = std::abs(p - 6.0206) <= 1e-3 && m == 0.5 && std::abs(s - std::numbers::pi / 2) <= 1e-12 &&
                  de == 0.0 && std::abs(ss - 1.0) <= 1e-12 && std::abs(uq - 1.0) <= 1e-12;
  std::ostringstream detail;
  detail.precision(15);
  detail << "psnr " << p << ", mape " << m << ", sam " << s << ", dict_err " << de << ", ssim " << ss << ", uiqi "
         << uq;
  return {ok, detail.str()};
}

Outcome format_roundtrips() {
  std::mt19937_64 gen(404);
  std::uniform_int_distribution<std::size_t> side(1, 7);
  const auto dir = std::filesystem::temp_directory_path() / "dtnn_acceptance_io";
  std::filesystem::create_directories(dir);
  int failures = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const Dims d{side(gen), side(gen), side(gen)};
    Tensor3 t = oracle::random_tensor(d, gen);
    if (trial % 10 == 0) t.data()[0] = -0.0;
    ObservationMask m(d);
    for (std::size_t q = 0; q < m.size(); ++q) m.set(q, gen() & 1u);
    write_tensor(dir / "t.tns", t);
    write_mask(dir / "m.msk", m);
    const Tensor3 t2 = read_tensor(dir / "t.tns");
    const bool same_t = t2.dims() == d && std::memcmp(t2.data().data(), t.data().data(), t.size() * sizeof(double)) == 0;
    if (!same_t || !(read_mask(dir / "m.msk") == m)) ++failures;
  }
  std::filesystem::remove_all(dir);
  const Tensor3 ht = decode_tensor(fixture::hex_fixture("tensor_1x1x2.hex"));
  const ObservationMask hm = decode_mask(fixture::hex_fixture("mask_2x1x2.hex"));
  const bool hex_ok = ht.dims() == Dims{1, 1, 2} && ht(0, 0, 0) == 1.0 && ht(0, 0, 1) == -2.5 &&
                      hm.dims() == Dims{2, 1, 2} && hm(0, 0, 0) && !hm(1, 0, 0) && !hm(0, 0, 1) && hm(1, 0, 1);
  return {failures == 0 && hex_ok, fmt("roundtrip failures %.0f/100, hex fixtures ", failures) +
                                       (hex_ok ? "ok" : "wrong")};
}

std::string file_bytes(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

Outcome cli_determinism() {
  const auto root = std::filesystem::temp_directory_path() / "dtnn_acceptance_cli";
  std::filesystem::remove_all(root);
  const std::string tool = DTNN_CLI_PATH;
  const std::vector<std::string> files{"gt.tns", "gt.dict", "z.tns", "m.msk", "rec.tns", "est.dict", "run.json",
                                       "eval.json"};
  for (const std::string run : {"a", "b"}) {
    const auto dir = root / run;
    std::filesystem::create_directories(dir);
    const auto f = [&](const std::string& n) { return "'" + (dir / n).string() + "'"; };
    const std::vector<std::string> steps{
        "synth --dims 20x20x10 --d 4 --rank 2 --seed 11 --out-tensor " + f("gt.tns") + " --out-dict " + f("gt.dict") +
            " --out-z " + f("z.tns"),
        "mask --dims 20x20x10 --sr 0.5 --seed 11 --out " + f("m.msk"),
        "complete --method dtnn --d 4 --seed 11 --threads 1 --no-timing --tensor " + f("gt.tns") + " --mask " +
            f("m.msk") + " --out " + f("rec.tns") + " --out-dict " + f("est.dict") + " --report " + f("run.json"),
        "evaluate --gt " + f("gt.tns") + " --rec " + f("rec.tns") + " --dict-gt " + f("gt.dict") + " --dict-est " +
            f("est.dict") + " --report " + f("eval.json")};
    for (const auto& s : steps) {
      const std::string cmd = "'" + tool + "' " + s + " 2>/dev/null";
      if (std::system(cmd.c_str()) != 0) return {false, "command failed: " + s};
    }
  }
  std::size_t differing = 0;
  for (const auto& n : files)
    if (file_bytes(root / "a" / n) != file_bytes(root / "b" / n) || file_bytes(root / "a" / n).empty()) ++differing;
  std::filesystem::remove_all(root);
  return {differing == 0, fmt("%.0f of %.0f output files differ", double(differing), double(files.size()))};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all{
      {1, "algebra oracles", 30, algebra},
      {2, "svt correctness", 60, svt_correctness},
      {3, "descent within constant beta", 120, descent},
      {4, "dictionary error decreases", 300, dictionary_recovery},
      {5, "completion regression", 180, completion_regression},
      {6, "baseline ordering on coded data", 300, baseline_ordering},
      {7, "exact on observed entries", 0, exact_on_observed},
      {8, "metric fixtures", 0, metric_fixtures},
      {9, "format roundtrips", 0, format_roundtrips},
      {10, "cli determinism", 0, cli_determinism},
  };
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--only" && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::cerr << "usage: dtnn_acceptance [--only N]\n";
      return 2;
    }
  }
  bool all_pass = true;
  for (const Criterion& c : all) {
    if (only != 0 && c.id != only) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.body();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit_s > 0 && secs >= c.limit_s) {
      o.pass = false;
      o.detail += fmt(" over time limit %.0f s", c.limit_s);
    }
    all_pass = all_pass && o.pass;
    std::printf("%s criterion %d (%s) [%.1f s]: %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, secs, o.detail.c_str());
    std::fflush(stdout);
  }
  return all_pass ? 0 : 1;
}
