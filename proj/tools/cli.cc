// Copyright 2026 The splitkq Authors.
// SPDX-License-Identifier: Apache-2.0

#include "cli.h"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "splitkq/bench.h"
#include "splitkq/container.h"
#include "splitkq/csv.h"
#include "splitkq/error.h"
#include "splitkq/execmodel.h"
#include "splitkq/fixtures.h"
#include "splitkq/gemm.h"
#include "splitkq/parallel.h"
#include "splitkq/quant.h"

namespace splitkq::cli {

namespace {

struct GlobalFlags {
  std::uint64_t seed = 42;
  unsigned workers = default_workers();
  std::size_t block_m = 16;
  std::size_t block_n = 32;
  std::size_t block_k = 64;
  std::size_t split_k = 4;

  gemm::KernelConfig config() const {
    gemm::KernelConfig c;
    c.block_m = block_m;
    c.block_n = block_n;
    c.block_k = block_k;
    c.split_k = split_k;
    c.workers = workers;
    c.validate();
    return c;
  }
};

struct PackFlags {
  std::vector<std::size_t> random;  // k n
  std::string input;
  std::size_t group_size = quant::kDefaultGroupSize;
  std::string out;
};

struct VerifyFlags {
  std::string pack;
  std::vector<std::size_t> splits = {1, 2, 4, 8, 16};
  std::size_t m = 16;
};

struct GemmFlags {
  std::string pack;
  std::size_t m = 16;
  std::size_t n = 4096;
  std::size_t k = 4096;
  std::size_t group_size = quant::kDefaultGroupSize;
  std::string method = "split_k";
  std::string out;
};

struct BenchFlags {
  std::vector<std::size_t> m = {1, 16};
  std::vector<std::size_t> nk = {512, 1024, 2048, 4096};
  bool large = false;
  std::size_t reps = 5;
  std::size_t warmup = 2;
  std::string csv;
  std::string host_label = "host";
  std::vector<std::size_t> sweep;
  bool fixtures = false;
};

struct ModelFlags {
  std::string profile = "a100-80";
  std::size_t m = 16;
  std::size_t n = 4096;
  std::size_t k = 4096;
  bool published_case = false;
  std::size_t threads = 128;
  std::optional<std::size_t> regs_splitk;
  std::optional<std::size_t> regs_dp;
  std::size_t smem_splitk = 0;
  std::size_t smem_dp = 0;
};

// Carries a nonzero exit status out of a subcommand.
struct ExitRequest {
  int code;
};

std::string fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), format, v);
  return buf;
}

DenseMatrix read_text_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::vector<float> values;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::string line;
  while (std::getline(in, line)) {
    for (char& ch : line) {
      if (ch == ',') ch = ' ';
    }
    std::istringstream ss(line);
    std::size_t count = 0;
    float v = 0.0f;
    while (ss >> v) {
      values.push_back(v);
      ++count;
    }
    if (!ss.eof()) throw FormatError(path + ": non-numeric value on row " + std::to_string(rows + 1));
    if (count == 0) continue;
    if (cols == 0) cols = count;
    if (count != cols) {
      throw DimensionError(path + ": row " + std::to_string(rows + 1) + " has " +
                           std::to_string(count) + " values, expected " +
                           std::to_string(cols));
    }
    ++rows;
  }
  if (rows == 0) throw DimensionError(path + ": no values");
  return DenseMatrix(rows, cols, std::move(values));
}

void write_text_matrix(const DenseMatrix& c, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  char buf[32];
  for (std::size_t i = 0; i < c.rows(); ++i) {
    for (std::size_t j = 0; j < c.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.9g", c(i, j));
      out << (j == 0 ? "" : " ") << buf;
    }
    out << '\n';
  }
  if (!out) throw IoError("failed writing " + path);
}

void cmd_pack(const GlobalFlags& g, const PackFlags& f, std::ostream& out) {
  DenseMatrix w = [&] {
    if (!f.input.empty()) return read_text_matrix(f.input);
    return DenseMatrix::random(f.random.at(0), f.random.at(1), g.seed);
  }();
  const quant::PackedWeightMatrix packed = quant::quantize_reference(w, std::min(f.group_size, w.rows()));
  container::save(packed, f.out);
  const auto bytes = std::filesystem::file_size(f.out);
  out << "k=" << packed.k() << " n=" << packed.n()
      << " group_size=" << packed.group_size() << " bytes=" << bytes << '\n';
}

void cmd_verify(const GlobalFlags& g, const VerifyFlags& f, std::ostream& out) {
  const quant::PackedWeightMatrix b = container::load(f.pack);
  if (f.m == 0) throw ConfigError("verify: --m must be >= 1");
  const DenseMatrix a = DenseMatrix::random(f.m, b.k(), g.seed);
  const DenseMatrix expected = gemm::oracle_gemm(a, quant::dequantize(b));
  const gemm::KernelConfig base = g.config();
  const DenseMatrix dp = gemm::dp_gemm(a, b, base.data_parallel());

  out << "container k=" << b.k() << " n=" << b.n() << " group_size=" << b.group_size()
      << " m=" << f.m << '\n';
  bool ok = true;
  for (std::size_t split : f.splits) {
    gemm::KernelConfig config = base;
    config.split_k = split;
    config.validate();
    const DenseMatrix c = gemm::splitk_gemm(a, b, config);
    const float tol = bench::equivalence_tolerance(c);

    float worst = 0.0f;
    std::size_t wi = 0;
    std::size_t wj = 0;
    for (std::size_t i = 0; i < c.rows(); ++i) {
      for (std::size_t j = 0; j < c.cols(); ++j) {
        const float d = std::fabs(c(i, j) - expected(i, j));
        if (d > worst) {
          worst = d;
          wi = i;
          wj = j;
        }
      }
    }
    const bool pass = worst <= tol;
    ok = ok && pass;
    out << "split_k=" << split << " max_abs_err=" << fmt("%.3e", worst)
        << " tolerance=" << fmt("%.3e", tol)
        << " max_abs_diff_vs_dp=" << fmt("%.3g", max_abs_diff(c, dp))
        << (pass ? " ok" : " FAIL") << '\n';
    if (!pass) {
      out << "  worst element (" << wi << ", " << wj << "): got "
          << fmt("%.9g", c(wi, wj)) << ", expected " << fmt("%.9g", expected(wi, wj))
          << '\n';
    }
  }
  out << (ok ? "PASS" : "FAIL") << '\n';
  if (!ok) throw ExitRequest{kCorrectnessFailure};
}

void cmd_gemm(const GlobalFlags& g, const GemmFlags& f, std::ostream& out) {
  std::optional<quant::PackedWeightMatrix> packed;
  std::size_t m = f.m;
  if (!f.pack.empty()) {
    packed = container::load(f.pack);
  } else {
    const DenseMatrix w = DenseMatrix::random(f.k, f.n, g.seed + 1);
    packed = quant::quantize_reference(w, std::min(f.group_size, f.k));
  }
  if (m == 0) throw ConfigError("gemm: --m must be >= 1");
  const DenseMatrix a = DenseMatrix::random(m, packed->k(), g.seed);

  const auto method = bench::parse_method(f.method);
  if (!method) throw ConfigError("gemm: --method must be split_k or data_parallel");
  gemm::KernelConfig config = g.config();
  if (*method == bench::Method::kDataParallel) config = config.data_parallel();

  gemm::GemmStats stats;
  const auto start = std::chrono::steady_clock::now();
  const DenseMatrix c = *method == bench::Method::kDataParallel
                            ? gemm::dp_gemm(a, *packed, config, {.stats = &stats})
                            : gemm::splitk_gemm(a, *packed, config, {.stats = &stats});
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  double checksum = 0.0;
  for (float v : c.data()) checksum += v;
  out << "method=" << bench::to_string(*method) << " m=" << m << " n=" << packed->n()
      << " k=" << packed->k() << " split_k=" << config.split_k << '\n'
      << "grid=" << stats.tasks << " k_iterations_per_block="
      << gemm::k_iterations(packed->k(), config) << " dequant_buffer="
      << stats.max_dequant_buffer << '\n'
      << "checksum=" << fmt("%.6e", checksum) << " max_abs=" << fmt("%.6e", c.max_abs())
      << '\n'
      << "latency_us=" << fmt("%.1f", seconds * 1e6) << " tflops="
      << fmt("%.4g", bench::tflops(m, packed->n(), packed->k(), std::max(seconds, 1e-9)))
      << '\n';
  if (!f.out.empty()) write_text_matrix(c, f.out);
}

void print_speedup_table(const bench::SpeedupTable& table, std::ostream& out) {
  std::size_t current_m = 0;
  char buf[128];
  for (const bench::SpeedupRow& row : table.rows) {
    if (row.shape.m != current_m) {
      current_m = row.shape.m;
      out << "M=" << current_m << '\n';
      std::snprintf(buf, sizeof(buf), "%8s %8s %16s %16s %8s\n", "N", "K",
                    "SplitK [TFLOPS]", "DP [TFLOPS]", "speedup");
      out << buf;
    }
    std::snprintf(buf, sizeof(buf), "%8zu %8zu %16.4g %16.4g %8.3f\n", row.shape.n,
                  row.shape.k, row.splitk_tflops, row.dp_tflops, row.speedup);
    out << buf;
  }
  out << "average gain " << fmt("%+.1f%%", table.average_gain * 100.0)
      << " (mean of per-shape speedups minus 1)\n";
}

void print_fixtures(std::ostream& out) {
  const fixtures::FixtureReport report = fixtures::validate_fixtures();
  out << "published GPU results (" << report.rows.size() << " rows)\n";
  for (const fixtures::FixtureMean& mean : report.means) {
    out << "  " << mean.gpu << " m=" << mean.m << " mean speedup "
        << fmt("%.3f", mean.mean_speedup) << '\n';
  }
  const auto& peak = report.max_gain_row;
  out << "  max gain: " << peak.gpu << " m=" << peak.m << " n=k=" << peak.n << " "
      << fmt("%.2f", peak.speedup) << "x (" << fmt("%+.0f%%", peak.gain_pct) << ")\n";
  out << "  peak claim (>= +195%) " << (report.peak_claim_supported ? "supported" : "NOT supported")
      << '\n';
  for (const std::string& note : report.notes) out << "  note: " << note << '\n';
  out << "  reported best split_k: " << fixtures::kReportedClaims.best_split_a100
      << " (A100), " << fixtures::kReportedClaims.best_split_h100
      << " (H100); GPU-specific, not expected on this host\n";
}

void cmd_bench(const GlobalFlags& g, const BenchFlags& f, std::ostream& out) {
  if (f.m.empty() || f.nk.empty()) throw ConfigError("bench: --m and --nk must be nonempty");
  std::vector<bench::Shape> shapes;
  std::vector<std::size_t> sizes = f.nk;
  if (f.large) {
    sizes.push_back(8192);
    sizes.push_back(16384);
  }
  for (std::size_t m : f.m) {
    for (std::size_t nk : sizes) {
      if (m == 0 || nk == 0 || nk % quant::kValuesPerWord != 0) {
        throw ConfigError("bench: m must be >= 1 and n = k a positive multiple of 8");
      }
      shapes.push_back({m, nk, nk});
    }
  }
  bench::BenchOptions options;
  options.reps = f.reps;
  options.warmup = f.warmup;
  options.seed = g.seed;
  const gemm::KernelConfig config = g.config();

  const auto records = bench::run_grid(shapes, config, options);
  if (!f.csv.empty()) {
    std::ofstream csv_out(f.csv);
    if (!csv_out) throw IoError("cannot open " + f.csv + " for writing");
    csv::write_bench_csv(csv_out, records, f.host_label);
    csv_out.close();
    if (!csv_out) throw IoError("failed writing " + f.csv);
  }
  out << "host=" << f.host_label << " split_k=" << config.split_k << " blocks="
      << config.block_m << "x" << config.block_n << "x" << config.block_k
      << " workers=" << config.workers << " reps=" << options.reps << '\n';
  print_speedup_table(bench::speedup_table(records), out);

  if (!f.sweep.empty()) {
    const bench::SweepReport sweep = bench::sweep_splitk(shapes.front(), f.sweep, config, options);
    out << "split_k sweep m=" << shapes.front().m << " n=k=" << shapes.front().n << '\n';
    for (const bench::SweepPoint& p : sweep.points) {
      out << "  split_k=" << p.record.split_k << " tflops=" << fmt("%.4g", p.record.tflops)
          << " max_abs_err=" << fmt("%.3e", p.max_error) << (p.correct ? " ok" : " FAIL")
          << '\n';
    }
    out << "  best split_k on this host: " << sweep.best_split_k << '\n';
    if (!sweep.all_correct) throw ExitRequest{kCorrectnessFailure};
  }
  if (f.fixtures) print_fixtures(out);
}

void print_decomposition(const char* label, const execmodel::DecompositionReport& d,
                         std::ostream& out) {
  out << label << ": grid " << d.grid << " (blocks " << d.config.block_m << "x"
      << d.config.block_n << "x" << d.config.block_k << ", split_k " << d.config.split_k
      << ", k_iterations " << d.k_iterations << ")\n";
  if (d.occupancy) {
    const auto& o = *d.occupancy;
    auto opt = [](const std::optional<std::size_t>& v) {
      return v ? std::to_string(*v) : std::string("unlimited");
    };
    out << "  occupancy: " << o.blocks_per_sm << " blocks/SM, bound by "
        << execmodel::to_string(o.limited_by) << " (block limit registers "
        << opt(o.register_limit) << ", shared memory " << opt(o.shared_mem_limit)
        << ", hardware " << o.hardware_limit << ")\n";
  } else {
    out << "  occupancy: 1 block/SM assumed\n";
  }
  const auto& w = d.waves;
  out << "  waves: blocks_per_wave " << w.blocks_per_wave << ", full_waves " << w.full_waves
      << ", tail_blocks " << w.tail_blocks << ", tail_utilization "
      << fmt("%.3f", w.tail_utilization) << ", waves_total " << w.waves_total << '\n';
}

void cmd_model(const GlobalFlags& g, ModelFlags f, std::ostream& out) {
  const execmodel::HardwareProfile hw = execmodel::resolve_profile(f.profile);
  gemm::KernelConfig config = g.config();
  if (f.published_case) {
    f.m = 16;
    f.n = 4096;
    f.k = 4096;
    config.block_m = 16;
    config.block_n = 32;
    config.split_k = 4;
    const auto& pc = fixtures::profiler_case();
    f.regs_splitk = pc.split_k.registers_per_thread;
    f.regs_dp = pc.data_parallel.registers_per_thread;
    f.threads = 128;
  }
  std::optional<execmodel::BlockResources> res_dp;
  std::optional<execmodel::BlockResources> res_sk;
  if (f.regs_dp || f.smem_dp > 0) {
    res_dp = execmodel::BlockResources{f.regs_dp.value_or(0), f.threads, f.smem_dp};
  }
  if (f.regs_splitk || f.smem_splitk > 0) {
    res_sk = execmodel::BlockResources{f.regs_splitk.value_or(0), f.threads, f.smem_splitk};
  }

  const auto report = execmodel::compare_decompositions(
      f.m, f.n, f.k, config.data_parallel(), config, hw, res_dp, res_sk);
  out << "profile " << hw.name << ": sm_count " << hw.sm_count << ", registers/SM "
      << hw.registers_per_sm << ", shared_mem/SM " << hw.shared_mem_per_sm
      << ", max_blocks/SM " << hw.max_blocks_per_sm << ", bandwidth "
      << fmt("%g", hw.mem_bandwidth_gbs) << " GB/s\n";
  out << "problem m=" << f.m << " n=" << f.n << " k=" << f.k << '\n';
  print_decomposition("data_parallel", report.data_parallel, out);
  print_decomposition("split_k", report.split_k, out);
  out << "grid ratio " << fmt("%g", report.grid_ratio) << ", tail_utilization delta "
      << fmt("%+.3f", report.tail_utilization_delta) << ", splitk_reduces_tail_waste "
      << (report.splitk_reduces_tail_waste ? "yes" : "no") << '\n';

  if (f.published_case) {
    const auto& pc = fixtures::profiler_case();
    out << "published profile (m=16 n=k=4096): grid " << pc.split_k.grid_size << " / "
        << pc.data_parallel.grid_size << ", block limit (registers) "
        << pc.split_k.block_limit_registers << " / " << pc.data_parallel.block_limit_registers
        << ", block limit (smem) " << pc.split_k.block_limit_smem << " / "
        << pc.data_parallel.block_limit_smem << '\n';
    const bool grids = report.split_k.grid == pc.split_k.grid_size &&
                       report.data_parallel.grid == pc.data_parallel.grid_size;
    const bool limits =
        report.split_k.occupancy &&
        report.split_k.occupancy->register_limit == pc.split_k.block_limit_registers &&
        report.data_parallel.occupancy &&
        report.data_parallel.occupancy->register_limit ==
            pc.data_parallel.block_limit_registers;
    out << "reproduced grid sizes: " << (grids ? "yes" : "no")
        << ", register block limits: " << (limits ? "yes" : "no") << '\n';
    out << "note: shared memory figures (" << fmt("%.2f", pc.split_k.shared_memory_kb)
        << " KB / " << fmt("%.2f", pc.data_parallel.shared_memory_kb)
        << " KB) are not per-block sizes; pass --smem-splitk/--smem-dp to model them\n";
  }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fused int4 dequantize + split-k GEMM reference and GPU execution model",
               "splitkq"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalFlags g;
  app.add_option("--seed", g.seed, "RNG seed")->capture_default_str();
  app.add_option("--workers", g.workers, "Worker threads for GEMM tasks")
      ->check(CLI::PositiveNumber);
  app.add_option("--block-m", g.block_m, "Tile rows")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--block-n", g.block_n, "Tile columns")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--block-k", g.block_k, "Tile depth")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--split-k", g.split_k, "Split factor along k")->capture_default_str()->check(CLI::PositiveNumber);

  PackFlags pack;
  auto* pack_cmd = app.add_subcommand("pack", "Quantize weights and write a W4PK container");
  auto* random_opt = pack_cmd->add_option("--random", pack.random, "Random k x n weights")
                         ->expected(2);
  auto* input_opt = pack_cmd->add_option("--input", pack.input, "Text matrix of k rows, n columns");
  random_opt->excludes(input_opt);
  pack_cmd->add_option("--group-size", pack.group_size, "k indices per scale/zero")
      ->capture_default_str();
  pack_cmd->add_option("--out,-o", pack.out, "Output container path")->required();

  VerifyFlags verify;
  auto* verify_cmd = app.add_subcommand("verify", "Check split-k results against the oracle");
  verify_cmd->add_option("pack", verify.pack, "W4PK container")->required();
  verify_cmd->add_option("--splits", verify.splits, "split_k values")
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  verify_cmd->add_option("--m", verify.m, "Activation rows")->capture_default_str();

  GemmFlags gemm_flags;
  auto* gemm_cmd = app.add_subcommand("gemm", "Run one fused GEMM");
  gemm_cmd->add_option("--pack", gemm_flags.pack, "W4PK container (default: random weights)");
  gemm_cmd->add_option("--m", gemm_flags.m)->capture_default_str();
  gemm_cmd->add_option("--n", gemm_flags.n)->capture_default_str();
  gemm_cmd->add_option("--k", gemm_flags.k)->capture_default_str();
  gemm_cmd->add_option("--group-size", gemm_flags.group_size)->capture_default_str();
  gemm_cmd->add_option("--method", gemm_flags.method, "split_k or data_parallel")
      ->capture_default_str();
  gemm_cmd->add_option("--out", gemm_flags.out, "Write C as a text matrix");

  BenchFlags bench_flags;
  auto* bench_cmd = app.add_subcommand("bench", "Time data-parallel vs split-k");
  bench_cmd->add_option("--m", bench_flags.m, "Batch sizes")->delimiter(',');
  bench_cmd->add_option("--nk", bench_flags.nk, "Square n = k sizes")->delimiter(',');
  bench_cmd->add_flag("--large", bench_flags.large, "Add n = k = 8192, 16384");
  bench_cmd->add_option("--reps", bench_flags.reps, "Timed repetitions")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  bench_cmd->add_option("--warmup", bench_flags.warmup)->capture_default_str();
  bench_cmd->add_option("--csv", bench_flags.csv, "Write records as CSV");
  bench_cmd->add_option("--host-label", bench_flags.host_label)->capture_default_str();
  bench_cmd->add_option("--sweep", bench_flags.sweep, "split_k values to sweep on the first shape")
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  bench_cmd->add_flag("--fixtures", bench_flags.fixtures, "Print published GPU result checks");

  ModelFlags model;
  auto* model_cmd = app.add_subcommand("model", "Occupancy and wave model for both decompositions");
  model_cmd->add_option("--profile", model.profile, "a100-40, a100-80, h100, or a profile file")
      ->capture_default_str();
  model_cmd->add_option("--m", model.m)->capture_default_str();
  model_cmd->add_option("--n", model.n)->capture_default_str();
  model_cmd->add_option("--k", model.k)->capture_default_str();
  model_cmd->add_flag("--paper-case", model.published_case, "m=16, n=k=4096 with 92/150 registers");
  model_cmd->add_option("--threads", model.threads, "Threads per block")->capture_default_str();
  model_cmd->add_option("--regs-splitk", model.regs_splitk, "Registers per thread, split-k");
  model_cmd->add_option("--regs-dp", model.regs_dp, "Registers per thread, data parallel");
  model_cmd->add_option("--smem-splitk", model.smem_splitk, "Shared memory bytes per block");
  model_cmd->add_option("--smem-dp", model.smem_dp, "Shared memory bytes per block");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }

  try {
    if (pack_cmd->parsed()) {
      if (pack.random.empty() && pack.input.empty()) {
        throw ConfigError("pack: give --random K N or --input PATH");
      }
      cmd_pack(g, pack, out);
    } else if (verify_cmd->parsed()) {
      cmd_verify(g, verify, out);
    } else if (gemm_cmd->parsed()) {
      cmd_gemm(g, gemm_flags, out);
    } else if (bench_cmd->parsed()) {
      cmd_bench(g, bench_flags, out);
    } else if (model_cmd->parsed()) {
      cmd_model(g, model, out);
    }
  } catch (const ExitRequest& e) {
    return e.code;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }
  return kOk;
}

}  // namespace splitkq::cli
