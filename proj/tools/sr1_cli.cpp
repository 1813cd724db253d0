// sr1: command-line front end for shifted rank-1 decompositions.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sr1/bench/experiments.hpp"
#include "sr1/decomposer.hpp"
#include "sr1/fast_ops.hpp"
#include "sr1/io/decomposition_io.hpp"
#include "sr1/io/matrix_io.hpp"

namespace {

using namespace sr1;

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::Parse: return 2;
    case ErrorCode::ZeroMatrix: return 3;
    case ErrorCode::DimensionMismatch: return 4;
    default: return 1;
  }
}

io::MatrixFormat pick_format(const std::string& flag, const std::string& path) {
  return flag.empty() ? io::format_from_path(path) : io::parse_matrix_format(flag);
}

EstimatorStages parse_stages(const std::string& mode) {
  if (mode == "all") return {};
  EstimatorStages s{false, false, false};
  std::stringstream ss(mode);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "start") s.start_guess = true;
    else if (item == "amplitude") s.amplitude_projected = true;
    else if (item == "plain") s.plain = true;
    else if (item == "none") continue;
    else throw Error(ErrorCode::InvalidSpec, "unknown stage '" + item + "' (use start, amplitude, plain)");
  }
  return s;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct DecomposeArgs {
  std::string input, format, output, mode = "all";
  std::size_t components = 10;
  double tol = 0.0;
  std::uint64_t seed = 0;
};

int run_decompose(const DecomposeArgs& a) {
  const ComplexMatrix m = io::read_matrix(a.input, pick_format(a.format, a.input));
  SolverConfig cfg;
  cfg.max_components = a.components;
  cfg.residual_threshold = a.tol;
  cfg.seed = a.seed;
  cfg.stages = parse_stages(a.mode);
  const Decomposition d = decompose(m, cfg);
  for (std::size_t l = 0; l < d.components.size(); ++l)
    std::cout << "component " << l << " sigma " << fmt(d.components[l].sigma) << '\n';
  if (d.real_input) std::cout << "max_imag_discarded " << fmt(d.max_imag_discarded) << '\n';
  std::cout << "relative_residual " << fmt(d.relative_residual()) << '\n';
  if (!a.output.empty()) io::save_decomposition(a.output, d);
  return 0;
}

struct OutputArgs {
  std::string input, vector, format, output;
  bool pad_pow2 = false, adjoint = false;
};

int run_reconstruct(const OutputArgs& a) {
  const Decomposition d = io::load_decomposition(a.input);
  io::write_matrix(a.output, reconstruct(d), pick_format(a.format, a.output));
  return 0;
}

int run_matvec(const OutputArgs& a) {
  Decomposition d = io::load_decomposition(a.input);
  if (a.pad_pow2) d = pad_rows_pow2(d);
  const ComplexVector x = io::read_vector(a.vector, pick_format(a.format, a.vector));
  const ShiftedLowRankOperator op(d);
  const ComplexVector y = a.adjoint ? op.apply_adjoint(x) : op.apply(x);
  io::write_vector(a.output, y, pick_format(a.format, a.output));
  return 0;
}

int run_tracks(const OutputArgs& a) {
  const Decomposition d = io::load_decomposition(a.input);
  if (a.output.empty() || a.output == "-") {
    io::write_tracks(std::cout, d);
  } else {
    std::ofstream os(a.output);
    if (!os) throw Error(ErrorCode::Parse, "cannot write '" + a.output + "'");
    io::write_tracks(os, d);
  }
  return 0;
}

struct SynthArgs {
  std::string kind = "shiftedRank1Sum", format, output, truth;
  std::size_t rows = 32, cols = 32, components = 1;
  std::optional<double> psnr;
  double ratio = 4.0;
  bool real = false;
  std::uint64_t seed = 0;
};

int run_synth(const SynthArgs& a) {
  bench::SynthSpec spec;
  spec.kind = bench::parse_synth_kind(a.kind);
  spec.rows = a.rows;
  spec.cols = a.cols;
  spec.components = a.components;
  spec.noise_psnr = a.psnr;
  spec.sigma_ratio = a.ratio;
  spec.real_valued = a.real;
  spec.seed = a.seed;
  const auto data = bench::generate(spec);
  io::write_matrix(a.output, data.a, pick_format(a.format, a.output));
  if (!a.truth.empty()) {
    if (!data.truth) throw Error(ErrorCode::InvalidSpec, "this generator has no ground truth");
    io::save_decomposition(a.truth, *data.truth);
  }
  return 0;
}

struct BenchArgs {
  std::string experiment, output;
  std::optional<std::size_t> rows, cols, components, trials;
  std::vector<std::size_t> sizes;
  std::uint64_t seed = 0;
};

int run_bench(const BenchArgs& a) {
  const auto e = bench::parse_experiment(a.experiment);
  auto p = bench::default_params(e);
  p.seed = a.seed;
  p.solver.seed = a.seed;
  if (a.rows) p.rows = *a.rows;
  if (a.cols) p.cols = *a.cols;
  if (a.components) p.terms = *a.components;
  if (a.trials) p.trials = *a.trials;
  if (!a.sizes.empty()) p.sizes = a.sizes;
  const auto rows = bench::run_experiment(e, p);
  if (a.output.empty() || a.output == "-") {
    bench::write_csv(std::cout, rows);
  } else {
    std::ofstream os(a.output);
    if (!os) throw Error(ErrorCode::Parse, "cannot write '" + a.output + "'");
    bench::write_csv(os, rows);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shifted rank-1 matrix decompositions"};
  app.require_subcommand(1);

  DecomposeArgs dec;
  auto* c_dec = app.add_subcommand("decompose", "Greedy decomposition of a matrix file");
  c_dec->add_option("input", dec.input, "Matrix file (csv, bin, pgm)")->required();
  c_dec->add_option("--components", dec.components, "Maximum number of components, 0 = until --tol");
  c_dec->add_option("--tol", dec.tol, "Stop once the relative residual is at most this");
  c_dec->add_option("--seed", dec.seed, "Seed for power-iteration starts");
  c_dec->add_option("--format", dec.format, "Input format: csv, bin, pgm (default: by extension)");
  c_dec->add_option("-o,--output", dec.output, "Decomposition JSON to write");
  c_dec->add_option("--mode", dec.mode, "Estimator stages: all, or a comma list of start,amplitude,plain");

  OutputArgs rec;
  auto* c_rec = app.add_subcommand("reconstruct", "Dense matrix from a decomposition");
  c_rec->add_option("input", rec.input, "Decomposition JSON")->required();
  c_rec->add_option("-o,--output", rec.output, "Matrix file to write")->required();
  c_rec->add_option("--format", rec.format, "Output format: csv, bin, pgm");

  OutputArgs mv;
  auto* c_mv = app.add_subcommand("matvec", "Apply a decomposition to a vector");
  c_mv->add_option("input", mv.input, "Decomposition JSON")->required();
  c_mv->add_option("vector", mv.vector, "Vector file (one column)")->required();
  c_mv->add_option("-o,--output", mv.output, "Vector file to write")->required();
  c_mv->add_option("--format", mv.format, "Vector format: csv, bin");
  c_mv->add_flag("--adjoint", mv.adjoint, "Apply the adjoint instead");
  c_mv->add_flag("--pad-pow2", mv.pad_pow2, "Zero-pad rows to a power of two (changes the operator)");

  SynthArgs syn;
  auto* c_syn = app.add_subcommand("synth", "Write a synthetic test matrix");
  c_syn->add_option("--kind", syn.kind, "shiftedRank1Sum, randomOrthogonal, seismicLike, cartoonLike");
  c_syn->add_option("--rows", syn.rows, "M");
  c_syn->add_option("--cols", syn.cols, "N");
  c_syn->add_option("--components", syn.components, "Number of terms or events");
  c_syn->add_option("--psnr", syn.psnr, "Add Gaussian noise at this PSNR (dB)");
  c_syn->add_option("--ratio", syn.ratio, "sigma_l / sigma_{l+1} for shiftedRank1Sum");
  c_syn->add_flag("--real", syn.real, "Real-valued factors");
  c_syn->add_option("--seed", syn.seed, "Generator seed");
  c_syn->add_option("--format", syn.format, "Output format: csv, bin, pgm");
  c_syn->add_option("-o,--output", syn.output, "Matrix file to write")->required();
  c_syn->add_option("--truth", syn.truth, "Ground-truth decomposition JSON to write");

  BenchArgs ben;
  auto* c_ben = app.add_subcommand("bench", "Run an experiment and write a CSV report");
  c_ben->add_option("experiment", ben.experiment,
                    "errorDecay, svRatio, storageCurve, runtimeScaling, matvecScaling, noiseRecovery")
      ->required();
  c_ben->add_option("-o,--output", ben.output, "CSV file (default: stdout)");
  c_ben->add_option("--seed", ben.seed, "First seed");
  c_ben->add_option("--rows", ben.rows, "M");
  c_ben->add_option("--cols", ben.cols, "N");
  c_ben->add_option("--components", ben.components, "Solver term count L");
  c_ben->add_option("--trials", ben.trials, "Seeds per measurement point");
  c_ben->add_option("--sizes", ben.sizes, "Values of M for the scaling experiments")->delimiter(',');

  OutputArgs trk;
  auto* c_trk = app.add_subcommand("tracks", "Export shift trajectories as CSV");
  c_trk->add_option("input", trk.input, "Decomposition JSON")->required();
  c_trk->add_option("-o,--output", trk.output, "CSV file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help();
    return 1;
  }

  try {
    if (*c_dec) return run_decompose(dec);
    if (*c_rec) return run_reconstruct(rec);
    if (*c_mv) return run_matvec(mv);
    if (*c_syn) return run_synth(syn);
    if (*c_ben) return run_bench(ben);
    if (*c_trk) return run_tracks(trk);
  } catch (const Error& e) {
    std::cerr << "sr1: " << e.what() << '\n';
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "sr1: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
