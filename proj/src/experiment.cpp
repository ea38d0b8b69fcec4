#include "gvfd/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>

#include <fmt/format.h>

#include "gvfd/errors.hpp"

namespace gvfd {

namespace {

bool all_finite(std::span<const double> xs) {
  return std::all_of(xs.begin(), xs.end(), [](double x) { return std::isfinite(x); });
}

bool weights_finite(const AgentState& st) {
  for (const auto& row : st.q.w) {
    if (!all_finite(row)) return false;
  }
  for (const auto& g : st.gvfs) {
    if (!all_finite(g.w)) return false;
  }
  for (const auto& m : st.meta) {
    if (!all_finite(m.w_pi) || !all_finite(m.w_c)) return false;
  }
  return true;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << content;
}

}  // namespace

std::uint64_t trial_seed(const RunConfig& cfg, std::int64_t trial_index) {
  return cfg.base_seed + static_cast<std::uint64_t>(trial_index);
}

TrialResult run_trial(const RunConfig& cfg, std::int64_t trial_index) {
  validate(cfg);
  TrialResult r;
  r.trial = trial_index;
  r.seed = trial_seed(cfg, trial_index);
  const std::int64_t train = cfg.effective_train_steps();
  std::int64_t step = 0;
  try {
    AgentState st = init_agent(agent_config(cfg), r.seed);
    auto log = [&](const StepResult& res) {
      if (step % cfg.log_every == 0) {
        r.curve.push_back({step, res.diag.phase, res.reward, res.diag.delta_control});
      }
    };
    for (; step < train; ++step) log(agent_step(st));
    st = freeze_eval(std::move(st));
    std::int64_t total_reward = 0;
    for (std::int64_t i = 0; i < cfg.eval_steps; ++i, ++step) {
      const StepResult res = agent_step(st);
      total_reward += res.reward;
      log(res);
    }
    if (!weights_finite(st)) throw NumericError("non-finite weight after evaluation");
    r.eval_mean_reward = static_cast<double>(total_reward) / static_cast<double>(cfg.eval_steps);
    r.final_meta = st.meta;
    r.final_gvfs = st.gvfs;
    r.final_q = st.q;
  } catch (const NumericError& e) {
    r.failed = true;
    r.fail_step = step;
    r.fail_message = e.what();
    r.eval_mean_reward = 0.0;
  }
  return r;
}

BatchSummary summarize(std::string label, const RunConfig& cfg, std::vector<TrialResult> trials) {
  std::sort(trials.begin(), trials.end(),
            [](const TrialResult& a, const TrialResult& b) { return a.trial < b.trial; });
  BatchSummary s;
  s.label = std::move(label);
  s.config = cfg;
  std::vector<double> xs;
  for (const auto& t : trials) {
    if (t.failed) {
      ++s.n_failed;
    } else {
      xs.push_back(t.eval_mean_reward);
    }
  }
  s.n_trials = static_cast<std::int64_t>(xs.size());
  if (xs.empty()) return s;
  double sum = 0.0;
  for (double x : xs) sum += x;
  s.eval_mean = sum / static_cast<double>(xs.size());
  if (xs.size() < 2) {
    s.se_degenerate = true;
    s.eval_se = 0.0;
  } else {
    double ss = 0.0;
    for (double x : xs) ss += (x - s.eval_mean) * (x - s.eval_mean);
    const double n = static_cast<double>(xs.size());
    s.eval_se = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  }
  return s;
}

BatchResult run_batch(const RunConfig& cfg, int workers, std::string label) {
  validate(cfg);
  if (label.empty()) label = std::string(to_string(cfg.agent));
  const auto n = static_cast<std::size_t>(cfg.n_trials);
  std::vector<TrialResult> results(n);
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        results[i] = run_trial(cfg, static_cast<std::int64_t>(i));
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  const int n_workers = std::clamp(workers, 1, static_cast<int>(n));
  if (n_workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < n_workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);

  BatchResult out;
  out.summary = summarize(label, cfg, results);
  out.trials = std::move(results);
  return out;
}

std::vector<BatchResult> run_sweep(const SweepGrid& grid, const RunConfig& base, int workers) {
  // Expand and validate every point before running anything.
  std::vector<std::pair<std::string, RunConfig>> points{{"", base}};
  for (const auto& [key, values] : grid) {
    if (values.empty()) throw ConfigError(key, "sweep needs at least one value");
    std::vector<std::pair<std::string, RunConfig>> expanded;
    for (const auto& [label, cfg] : points) {
      for (const auto& v : values) {
        RunConfig c = cfg;
        set_key(c, key, v);
        expanded.emplace_back(label + (label.empty() ? "" : ";") + key + "=" + v, c);
      }
    }
    points = std::move(expanded);
  }
  for (const auto& [label, cfg] : points) validate(cfg);

  std::vector<BatchResult> results;
  for (const auto& [label, cfg] : points) {
    results.push_back(run_batch(cfg, workers, label.empty() ? std::string(to_string(cfg.agent))
                                                            : label));
  }
  std::stable_sort(results.begin(), results.end(), [](const BatchResult& a, const BatchResult& b) {
    return a.summary.eval_mean > b.summary.eval_mean;
  });
  return results;
}

void write_steps_csv(std::ostream& out, const std::vector<BatchResult>& batches) {
  out << "config,trial,seed,phase,step,reward,delta_control\n";
  for (const auto& b : batches) {
    for (const auto& t : b.trials) {
      for (const auto& s : t.curve) {
        out << fmt::format("{},{},{},{},{},{},{}\n", b.summary.label, t.trial, t.seed, s.phase,
                           s.step, s.reward, s.delta_control);
      }
    }
  }
}

void write_trials_csv(std::ostream& out, const std::vector<BatchResult>& batches) {
  out << "config,trial,seed,eval_mean_reward,failed\n";
  for (const auto& b : batches) {
    for (const auto& t : b.trials) {
      out << fmt::format("{},{},{},{},{}\n", b.summary.label, t.trial, t.seed, t.eval_mean_reward,
                         t.failed ? 1 : 0);
    }
  }
}

std::string summary_text(const BatchSummary& s) {
  std::string out = fmt::format("{}: mean eval reward {:.4f} +/- {:.4f} (standard error) over {} trials",
                                s.label, s.eval_mean, s.eval_se, s.n_trials);
  if (s.n_failed > 0) out += fmt::format(", {} failed", s.n_failed);
  if (s.se_degenerate) out += " [single trial: standard error undefined, reported as 0]";
  return out + "\n";
}

std::string summary_kv(const BatchSummary& s) {
  std::string out = fmt::format("config = {}\nn_trials = {}\nn_failed = {}\neval_mean = {}\neval_se = {}\n",
                                s.label, s.n_trials, s.n_failed, s.eval_mean, s.eval_se);
  for (const auto& k : config_keys()) out += fmt::format("{} = {}\n", k, get_key(s.config, k));
  return out;
}

void write_batch_files(const std::string& dir, const std::vector<BatchResult>& batches) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  {
    std::ofstream f(fs::path(dir) / "steps.csv", std::ios::binary);
    write_steps_csv(f, batches);
  }
  {
    std::ofstream f(fs::path(dir) / "trials.csv", std::ios::binary);
    write_trials_csv(f, batches);
  }
  std::string text, kv;
  for (const auto& b : batches) {
    text += summary_text(b.summary);
    for (const auto& t : b.trials) {
      if (t.failed) {
        text += fmt::format("  trial {} (seed {}) failed at step {}: {}\n", t.trial, t.seed,
                            t.fail_step, t.fail_message);
      }
    }
    if (!kv.empty()) kv += "\n";
    kv += summary_kv(b.summary);
  }
  write_file(fs::path(dir) / "summary.txt", text);
  write_file(fs::path(dir) / "summary.kv", kv);
}

}  // namespace gvfd
