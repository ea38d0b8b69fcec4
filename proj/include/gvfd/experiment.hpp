#pragma once

// Trial orchestration: train then greedy evaluation, batches of independent
// trials with mean and standard error, grid sweeps, and result files.

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "gvfd/agent.hpp"
#include "gvfd/run_config.hpp"

namespace gvfd {

struct StepSample {
  std::int64_t step = 0;
  int phase = 0;
  int reward = 0;
  double delta_control = 0.0;
};

struct TrialResult {
  std::int64_t trial = 0;
  std::uint64_t seed = 0;
  double eval_mean_reward = 0.0;
  bool failed = false;
  std::int64_t fail_step = -1;
  std::string fail_message;
  std::vector<StepSample> curve;     // every log_every steps, training and evaluation
  std::vector<MetaWeights> final_meta;
  std::vector<GvfWeights> final_gvfs;
  QWeights final_q;
};

struct BatchSummary {
  std::string label;
  std::int64_t n_trials = 0;    // successful trials
  std::int64_t n_failed = 0;
  double eval_mean = 0.0;
  double eval_se = 0.0;
  bool se_degenerate = false;   // fewer than two successful trials
  RunConfig config;
};

struct BatchResult {
  BatchSummary summary;
  std::vector<TrialResult> trials;  // ordered by trial index

  // False when every trial failed; the batch then has no usable summary.
  bool ok() const { return summary.n_trials > 0; }
};

std::uint64_t trial_seed(const RunConfig& cfg, std::int64_t trial_index);

// Trains for effective_train_steps(), then runs eval_steps greedily with all
// learning frozen. A NumericError marks the trial failed at that step.
TrialResult run_trial(const RunConfig& cfg, std::int64_t trial_index);

// Mean and sample-std / sqrt(n) standard error over the successful trials.
// Order-independent: trials are sorted by index first.
BatchSummary summarize(std::string label, const RunConfig& cfg, std::vector<TrialResult> trials);

// Runs n_trials trials on `workers` threads. Output is independent of the
// worker count. Failed trials are kept and counted; check ok().
BatchResult run_batch(const RunConfig& cfg, int workers = 1, std::string label = {});

using SweepGrid = std::vector<std::pair<std::string, std::vector<std::string>>>;

// One batch per point of the Cartesian product of the grid, sorted by mean
// evaluation reward, best first. Unknown keys fail before any trial runs.
std::vector<BatchResult> run_sweep(const SweepGrid& grid, const RunConfig& base, int workers = 1);

// Result files.
void write_steps_csv(std::ostream& out, const std::vector<BatchResult>& batches);
void write_trials_csv(std::ostream& out, const std::vector<BatchResult>& batches);
std::string summary_text(const BatchSummary& s);
// One line per key: config, n_trials, n_failed, eval_mean, eval_se, then every config key.
std::string summary_kv(const BatchSummary& s);

// Writes steps.csv, trials.csv, summary.txt, summary.kv under dir.
void write_batch_files(const std::string& dir, const std::vector<BatchResult>& batches);

}  // namespace gvfd
