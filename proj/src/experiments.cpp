/*
   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include "opuc/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "opuc/fft.hpp"
#include "opuc/kernels.hpp"
#include "opuc/parallel.hpp"
#include "opuc/prufer.hpp"
#include "opuc/sharpness.hpp"
#include "opuc/stats.hpp"
#include "opuc/supnorm.hpp"
#include "opuc/szego.hpp"
#include "opuc/version.hpp"

namespace opuc {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

constexpr double kPi = 3.14159265358979323846264338328;
constexpr double kTwoPi = 2.0 * kPi;

// Substream ids reserved for fixed structures (prefixes, probe points) so
// they never collide with per-trial streams 0..trials-1.
constexpr std::uint64_t kPrefixStream = 1ull << 40;
constexpr std::uint64_t kPointStream = (1ull << 40) + 1;

std::string num(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

std::string num(std::uint64_t v) { return std::to_string(v); }

class CsvFile {
 public:
  CsvFile(const fs::path& path, const std::string& header) : out_(path, std::ios::binary) {
    if (!out_) throw std::runtime_error("cannot open output file " + path.string());
    out_ << header << "\n";
  }
  void row(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out_ << ",";
      out_ << fields[i];
    }
    out_ << "\n";
  }

 private:
  std::ofstream out_;
};

double percentile(std::vector<double> values, double q) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] * (1.0 - frac) + values[hi] * frac;
}

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  char buf[32];
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct SuiteContext {
  const ExperimentConfig& cfg;
  fs::path out_dir;
  RunOutcome& outcome;
  json& suites_json;

  void note_failure(const std::string& message) {
    if (outcome.failure.empty()) {
      outcome.failure = message;
      outcome.exit_code = kExitFalsified;
    }
  }
  void note_budget(const std::string& message) {
    if (outcome.exit_code == kExitOk) {
      outcome.exit_code = kExitBudget;
      outcome.failure = message;
    }
  }
  void add_file(const fs::path& p) { outcome.files.push_back(p.string()); }
};

// ---------------------------------------------------------------- supnorm --

void run_supnorm_suite(SuiteContext& ctx) {
  const auto& cfg = ctx.cfg;
  const auto t0 = std::chrono::steady_clock::now();

  struct PerTrajectory {
    SupTrajectory result;
    double wall = 0.0;
  };
  std::vector<PerTrajectory> all(cfg.trajectories);

  parallel_blocks(cfg.trajectories, 1, [&](std::uint64_t, std::uint64_t t, std::uint64_t) {
    const auto w0 = std::chrono::steady_clock::now();
    const auto alphas = sample_parameters(cfg.envelope, cfg.randomizer, t, cfg.max_degree);
    all[t].result = sup_trajectory(alphas, cfg.checkpoints, cfg.oversample);
    all[t].wall = seconds_since(w0);
  });

  const fs::path csv_path = ctx.out_dir / "supnorm.csv";
  CsvFile csv(csv_path, "trajectory_id,degree,M,grid_max,upper_bound");
  std::uint64_t rows = 0;
  bool truncated = false;
  double wall_total = 0.0;
  for (std::uint64_t t = 0; t < cfg.trajectories; ++t) {
    wall_total += all[t].wall;
    truncated = truncated || all[t].result.truncated;
    for (const CertifiedSup& rec : all[t].result.records) {
      csv.row({num(t), num(rec.degree), num(static_cast<std::uint64_t>(rec.M)),
               num(rec.grid_max), num(rec.upper_bound)});
      ++rows;
      if (rec.grid_max > rec.upper_bound)
        ctx.note_failure("supnorm: certified upper_bound below grid_max at (seed=" +
                         std::to_string(cfg.randomizer.seed()) + ", trajectory=" +
                         std::to_string(t) + ", degree=" + std::to_string(rec.degree) + ")");
    }
  }
  ctx.add_file(csv_path);
  if (truncated)
    ctx.note_budget("supnorm: degree budget " + std::to_string(kCoeffDegreeBudget) +
                    " exceeded; partial results emitted");

  // Bounded-regime flatness: median certified sup at the final checkpoint
  // against the one at half the final degree.
  if (cfg.plateau_threshold > 0.0 && !cfg.checkpoints.empty() && !truncated) {
    const std::uint64_t last = cfg.checkpoints.back();
    const std::uint64_t half = last / 2;
    const bool has_half =
        std::find(cfg.checkpoints.begin(), cfg.checkpoints.end(), half) != cfg.checkpoints.end();
    if (!has_half)
      throw ConfigError("plateau_threshold requires a checkpoint at half the final degree");
    std::vector<double> at_last, at_half;
    for (const auto& per : all)
      for (const CertifiedSup& rec : per.result.records) {
        if (rec.degree == last) at_last.push_back(rec.upper_bound);
        if (rec.degree == half) at_half.push_back(rec.upper_bound);
      }
    const double ratio = percentile(at_last, 0.5) / percentile(at_half, 0.5);
    ctx.outcome.metrics["plateau_ratio"] = ratio;
    if (!(ratio <= cfg.plateau_threshold))
      ctx.note_failure("supnorm: plateau ratio " + num(ratio) + " exceeds threshold " +
                       num(cfg.plateau_threshold) + " (seed=" +
                       std::to_string(cfg.randomizer.seed()) + ")");
  }

  ctx.suites_json["supnorm"] = {{"rows", rows}, {"wall_seconds", wall_total},
                                {"elapsed_seconds", seconds_since(t0)}};
}

// ----------------------------------------------------------------- oracle --

void run_oracle_suite(SuiteContext& ctx) {
  const auto& cfg = ctx.cfg;
  const auto t0 = std::chrono::steady_clock::now();
  const fs::path csv_path = ctx.out_dir / "oracle.csv";
  CsvFile csv(csv_path, "n,M,max_deviation");
  double worst = 0.0;
  for (std::uint64_t n : cfg.oracle_degrees) {
    const auto alphas = sample_parameters(cfg.envelope, cfg.randomizer, n, n);
    const std::size_t M = 8 * next_power_of_two(static_cast<std::size_t>(n) + 1);
    const GramMatrix gram = orthogonality_oracle(alphas, M);
    const double dev = gram.max_deviation_from_identity();
    worst = std::max(worst, dev);
    csv.row({num(n), num(static_cast<std::uint64_t>(M)), num(dev)});
    if (!(dev <= 1e-8))
      ctx.note_failure("oracle: Gram deviation " + num(dev) + " above 1e-8 at (seed=" +
                       std::to_string(cfg.randomizer.seed()) + ", n=" + std::to_string(n) + ")");
  }
  ctx.add_file(csv_path);
  ctx.outcome.metrics["oracle_max_deviation"] = worst;
  ctx.suites_json["oracle"] = {{"rows", cfg.oracle_degrees.size()},
                               {"elapsed_seconds", seconds_since(t0)}};
}

// ------------------------------------------------------------- martingale --

void run_martingale_suite(SuiteContext& ctx) {
  const auto& cfg = ctx.cfg;
  const auto t0 = std::chrono::steady_clock::now();
  const fs::path csv_path = ctx.out_dir / "martingale.csv";
  CsvFile csv(csv_path, "n,j,z_re,z_im,residual,stderr,trials");

  PhiloxStream points(cfg.randomizer.seed(), kPointStream);
  std::uint64_t rows = 0;
  for (std::uint64_t n : cfg.martingale_prefixes) {
    const auto prefix = sample_parameters(cfg.envelope, cfg.randomizer, kPrefixStream, n);
    for (std::uint64_t j : cfg.martingale_tails) {
      if (j <= n) continue;
      for (unsigned p = 0; p < cfg.martingale_points; ++p) {
        const Complex z = std::polar(1.0, kTwoPi * points.uniform01(rows * 16 + p));
        const MartingaleResult r = martingale_residual(prefix, z, j, cfg.envelope,
                                                       cfg.randomizer, cfg.martingale_trials);
        csv.row({num(n), num(j), num(z.real()), num(z.imag()), num(r.residual),
                 num(r.stderr_value), num(r.trials)});
        if (!(r.residual <= 4.0 * r.stderr_value))
          ctx.note_failure("martingale: residual " + num(r.residual) + " above 4 stderr (seed=" +
                           std::to_string(cfg.randomizer.seed()) + ", n=" + std::to_string(n) +
                           ", j=" + std::to_string(j) + ")");
      }
      ++rows;
    }
  }
  ctx.add_file(csv_path);
  ctx.suites_json["martingale"] = {{"rows", rows * cfg.martingale_points},
                                   {"elapsed_seconds", seconds_since(t0)}};
}

// ---------------------------------------------------------------- moments --

void run_moments_suite(SuiteContext& ctx) {
  const auto& cfg = ctx.cfg;
  const auto t0 = std::chrono::steady_clock::now();
  const fs::path csv_path = ctx.out_dir / "moments.csv";
  CsvFile csv(csv_path, "k,p,a_moment,a_stderr,b_moment,b_stderr,trials");

  const BlockSpec block = g_lattice(cfg.moments_k);
  const bool symmetric = cfg.randomizer.rotationally_symmetric();
  const double r2 = cfg.randomizer.radius() * cfg.randomizer.radius();
  for (unsigned p : {2u, 4u}) {
    const MomentReport r = moment_compare(cfg.envelope, cfg.randomizer, block,
                                          cfg.moments_theta, p, cfg.moments_trials);
    csv.row({num(static_cast<std::uint64_t>(r.k)), num(static_cast<std::uint64_t>(p)),
             num(r.a_moment), num(r.a_stderr), num(r.b_moment), num(r.b_stderr),
             num(r.trials)});
    if (symmetric) {
      const double combined = std::sqrt(r.a_stderr * r.a_stderr + r.b_stderr * r.b_stderr);
      if (!(std::abs(r.a_moment - r.b_moment) <= 3.0 * combined))
        ctx.note_failure("moments: |E|A|^p - E|B|^p| above 3 stderr (seed=" +
                         std::to_string(cfg.randomizer.seed()) + ", k=" +
                         std::to_string(r.k) + ", p=" + std::to_string(p) + ")");
      if (p == 2 && !(std::abs(r.b_moment - r2 * r.block_energy) <= 3.0 * r.b_stderr) &&
          r.b_stderr > 0.0)
        ctx.note_failure("moments: E|B|^2 misses the closed form (seed=" +
                         std::to_string(cfg.randomizer.seed()) + ", k=" +
                         std::to_string(r.k) + ")");
    }
  }
  ctx.add_file(csv_path);
  ctx.suites_json["moments"] = {{"rows", 2}, {"elapsed_seconds", seconds_since(t0)}};
}

// ---------------------------------------------------------------- lattice --

void run_lattice_suite(SuiteContext& ctx) {
  const auto& cfg = ctx.cfg;
  const auto t0 = std::chrono::steady_clock::now();
  const fs::path csv_path = ctx.out_dir / "lattice.csv";
  CsvFile csv(csv_path, "k,lambda,exceed_fraction,bound,repeats");
  for (std::uint32_t k = 0; k <= cfg.lattice_k_max; ++k) {
    const std::uint64_t hi = 1ull << (1ull << (k + 1));
    const std::size_t theta_count =
        static_cast<std::size_t>(std::min<std::uint64_t>(cfg.lattice_theta_count, hi));
    const LatticeReport r =
        lattice_diagnostic(cfg.envelope, cfg.randomizer, k, theta_count, cfg.lattice_repeats);
    csv.row({num(static_cast<std::uint64_t>(k)), num(r.lambda), num(r.exceed_fraction),
             num(r.bound), num(static_cast<std::uint64_t>(r.repeats))});
    if (!(r.exceed_fraction <= r.bound + 3.0 * r.binomial_stderr))
      ctx.note_failure("lattice: exceedance " + num(r.exceed_fraction) + " above bound (seed=" +
                       std::to_string(cfg.randomizer.seed()) + ", k=" + std::to_string(k) + ")");
  }
  ctx.add_file(csv_path);
  ctx.suites_json["lattice"] = {{"rows", cfg.lattice_k_max + 1},
                                {"elapsed_seconds", seconds_since(t0)}};
}

// -------------------------------------------------------------- sharpness --

void run_sharpness_suite(SuiteContext& ctx) {
  const auto& cfg = ctx.cfg;
  const auto t0 = std::chrono::steady_clock::now();
  const std::uint32_t T = cfg.envelope.sparse_base();
  const std::uint32_t J = cfg.sharpness_levels;
  const std::uint64_t deepest = level_index(T, J);
  const auto alphas = sample_parameters(cfg.envelope, cfg.randomizer, 0, deepest + 1);
  std::uint64_t rows = 0;

  // Growth probe (always emitted; the only artifact in exploratory mode).
  {
    const fs::path growth_path = ctx.out_dir / "growth.csv";
    CsvFile csv(growth_path, "level,index,grid_max,half_modulus_sum");
    const auto growth = growth_trajectory(alphas, T, J, cfg.sharpness_grid);
    for (const GrowthPoint& g : growth) {
      csv.row({num(static_cast<std::uint64_t>(g.level)), num(g.index), num(g.grid_max),
               num(g.half_modulus_sum)});
      ++rows;
    }
    ctx.add_file(growth_path);
  }

  if (cfg.sharpness_exploratory) {
    ctx.suites_json["sharpness"] = {{"rows", rows}, {"exploratory", true},
                                    {"elapsed_seconds", seconds_since(t0)}};
    return;
  }

  // Phase-alignment hypothesis at every tracked level.
  {
    const fs::path dev_path = ctx.out_dir / "sharpness_deviation.csv";
    CsvFile csv(dev_path, "level,index,max_deviation,limit");
    for (std::uint32_t level = 0; level <= J; ++level) {
      const std::uint64_t index = level_index(T, level);
      const double dev = max_alignment_deviation(alphas, index, cfg.sharpness_grid);
      csv.row({num(static_cast<std::uint64_t>(level)), num(index), num(dev), num(kPi / 12.0)});
      if (!(dev <= kPi / 12.0))
        ctx.note_failure("sharpness: alignment deviation " + num(dev) +
                         " above pi/12 at level " + std::to_string(level) + " (seed=" +
                         std::to_string(cfg.randomizer.seed()) + ")");
    }
    ctx.add_file(dev_path);
  }

  // Intersection measures and the blow-up witness, level by level.
  {
    const fs::path sharp_path = ctx.out_dir / "sharpness.csv";
    CsvFile csv(sharp_path, "level,measure,bound,theta_star,achieved,lower");
    for (std::uint32_t level = 0; level <= J; ++level) {
      const BlowupWitness w = intersection_witness(alphas, T, level, cfg.sharpness_grid);
      csv.row({num(static_cast<std::uint64_t>(level)), num(w.intersection_measure),
               num(w.induction_bound), num(w.theta_star), num(w.achieved),
               num(w.aligned_sum_lower)});
      const std::string at = " at level " + std::to_string(level) + " (seed=" +
                             std::to_string(cfg.randomizer.seed()) + ")";
      if (w.empty)
        ctx.note_failure("sharpness: empty alignment intersection" + at);
      else if (!w.sound)
        ctx.note_failure("sharpness: witness fails the pointwise inequality" + at);
      else if (!(w.achieved + 1e-12 >= w.aligned_sum_lower))
        ctx.note_failure("sharpness: witness sum below half the modulus sum" + at);
      else if (!(w.intersection_measure >= w.induction_bound - 2.0 * w.resolution))
        ctx.note_failure("sharpness: intersection measure below the induction bound" + at);
    }
    ctx.add_file(sharp_path);
  }

  // Arithmetic gate of the induction.
  if (T >= 12)
    for (std::uint32_t N = 0; N <= 6; ++N)
      if (!t_condition_holds(T, N))
        ctx.note_failure("sharpness: T-condition fails at N=" + std::to_string(N));

  ctx.suites_json["sharpness"] = {{"rows", rows}, {"exploratory", false},
                                  {"elapsed_seconds", seconds_since(t0)}};
}

}  // namespace

RunOutcome run_experiment(const ExperimentConfig& cfg) {
  RunOutcome outcome;
  const std::string started = utc_now();
  const auto t0 = std::chrono::steady_clock::now();

  fs::path out_dir(cfg.outputs);
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + out_dir.string());

  json suites_json = json::object();
  SuiteContext ctx{cfg, out_dir, outcome, suites_json};

  for (const std::string& suite : cfg.suites) {
    if (suite == "supnorm") run_supnorm_suite(ctx);
    else if (suite == "oracle") run_oracle_suite(ctx);
    else if (suite == "martingale") run_martingale_suite(ctx);
    else if (suite == "moments") run_moments_suite(ctx);
    else if (suite == "lattice") run_lattice_suite(ctx);
    else if (suite == "sharpness") run_sharpness_suite(ctx);
  }

  json manifest;
  manifest["name"] = cfg.name;
  manifest["version"] = OPUC_VERSION;
  manifest["kernel"] = kernels::active_kernels().name;
  manifest["threads"] = worker_count();
  manifest["seed"] = cfg.randomizer.seed();
  manifest["config"] = to_key_values(cfg);
  manifest["suites"] = suites_json;
  manifest["files"] = outcome.files;
  manifest["exit_code"] = outcome.exit_code;
  manifest["failure"] = outcome.failure;
  manifest["started_utc"] = started;
  manifest["finished_utc"] = utc_now();
  manifest["total_seconds"] = seconds_since(t0);

  const fs::path manifest_path = out_dir / "manifest.json";
  std::ofstream mf(manifest_path, std::ios::binary);
  mf << manifest.dump(2) << "\n";
  outcome.files.push_back(manifest_path.string());
  return outcome;
}

CompareOutcome compare_regimes(const ExperimentConfig& a, const ExperimentConfig& b,
                               const std::string& out_dir) {
  CompareOutcome out;
  if (a.checkpoints != b.checkpoints) {
    out.exit_code = kExitInvalidConfig;
    out.failure = "compare: checkpoint mismatch between configs";
    return out;
  }

  bool truncated = false;
  const auto gather = [&truncated](const ExperimentConfig& cfg) {
    std::vector<std::vector<double>> by_checkpoint(cfg.checkpoints.size());
    std::vector<SupTrajectory> all(cfg.trajectories);
    parallel_blocks(cfg.trajectories, 1, [&](std::uint64_t, std::uint64_t t, std::uint64_t) {
      const auto alphas = sample_parameters(cfg.envelope, cfg.randomizer, t, cfg.max_degree);
      all[t] = sup_trajectory(alphas, cfg.checkpoints, cfg.oversample);
    });
    for (const auto& st : all) {
      truncated = truncated || st.truncated;
      for (std::size_t i = 0; i < st.records.size(); ++i)
        by_checkpoint[i].push_back(st.records[i].upper_bound);
    }
    return by_checkpoint;
  };

  const auto va = gather(a);
  const auto vb = gather(b);
  if (truncated) {
    out.exit_code = kExitBudget;
    out.failure = "compare: degree budget exceeded";
    return out;
  }
  for (std::size_t i = 0; i < a.checkpoints.size(); ++i) {
    RegimeSummaryRow row;
    row.degree = a.checkpoints[i];
    row.median_a = percentile(va[i], 0.5);
    row.p90_a = percentile(va[i], 0.9);
    row.median_b = percentile(vb[i], 0.5);
    row.p90_b = percentile(vb[i], 0.9);
    row.ratio = row.median_a == 0.0 ? 0.0 : row.median_b / row.median_a;
    out.rows.push_back(row);
  }

  fs::path dir(out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (!ec) {
    const fs::path csv_path = dir / "compare.csv";
    CsvFile csv(csv_path, "degree,median_a,p90_a,median_b,p90_b,ratio");
    for (const auto& row : out.rows)
      csv.row({num(row.degree), num(row.median_a), num(row.p90_a), num(row.median_b),
               num(row.p90_b), num(row.ratio)});
    out.files.push_back(csv_path.string());
  }
  return out;
}

std::vector<std::string> preset_names() {
  return {"zero", "theorem1", "theorem1-slow", "sharpness12", "explore-T2", "diagnostics"};
}

ExperimentConfig preset(const std::string& name) {
  ExperimentConfig cfg;
  cfg.name = name;
  if (name == "zero") {
    cfg.envelope = Envelope::zero();
    cfg.randomizer = Randomizer::uniform_phase(1);
    cfg.trajectories = 8;
    cfg.max_degree = 4096;
    cfg.suites = {"supnorm"};
  } else if (name == "theorem1") {
    cfg.envelope = Envelope::power_decay(1.0, 0.5);
    cfg.randomizer = Randomizer::uniform_phase(7101);
    cfg.trajectories = 64;
    cfg.max_degree = 8192;
    cfg.suites = {"supnorm"};
    cfg.plateau_threshold = 1.10;
  } else if (name == "theorem1-slow") {
    cfg.envelope = Envelope::power_decay(0.75, 0.5);
    cfg.randomizer = Randomizer::uniform_phase(7102);
    cfg.trajectories = 64;
    cfg.max_degree = 8192;
    cfg.suites = {"supnorm"};
    cfg.plateau_threshold = 1.10;
  } else if (name == "sharpness12") {
    cfg.envelope = Envelope::sparse_geometric(12, 0.01, SlowFunction::One);
    cfg.randomizer = Randomizer::uniform_phase(4242);
    cfg.trajectories = 1;
    cfg.max_degree = 1729;
    cfg.suites = {"sharpness"};
    cfg.sharpness_levels = 3;
    cfg.sharpness_grid = 1ull << 18;
  } else if (name == "explore-T2") {
    cfg.envelope = Envelope::sparse_geometric(2, 0.1, SlowFunction::One);
    cfg.randomizer = Randomizer::uniform_phase(777);
    cfg.trajectories = 16;
    cfg.max_degree = 8192;
    cfg.suites = {"supnorm", "sharpness"};
    cfg.sharpness_levels = 13;
    cfg.sharpness_grid = 1ull << 16;
    cfg.sharpness_exploratory = true;
  } else if (name == "diagnostics") {
    cfg.envelope = Envelope::power_decay(1.0, 0.5);
    cfg.randomizer = Randomizer::uniform_phase(99);
    cfg.trajectories = 1;
    cfg.max_degree = 64;
    cfg.suites = {"oracle", "martingale", "moments", "lattice"};
  } else {
    throw ConfigError("unknown preset '" + name + "'");
  }
  cfg.checkpoints = power_of_two_checkpoints(cfg.max_degree);
  cfg.outputs = "opuc-out/" + name;
  return cfg;
}

}  // namespace opuc
