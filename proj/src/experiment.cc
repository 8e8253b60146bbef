// Copyright 2026 The modarena Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "modarena/experiment.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <set>
#include <sstream>

#include "modarena/analysis.h"
#include "modarena/checkpoint.h"
#include "modarena/evaluation.h"
#include "modarena/results_io.h"
#include "modarena/trainer.h"

namespace modarena {
namespace {

namespace fs = std::filesystem;

constexpr const char* kConfigFile = "config.json";
constexpr const char* kSplitFile = "split.json";
constexpr const char* kCheckpointFile = "checkpoint.json";
constexpr const char* kCurvesFile = "curves.csv";

std::string Lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::string SeedLabel(std::uint64_t seed) { return "seed_" + std::to_string(seed); }

BenchmarkSplit LoadSplit(const fs::path& run_dir) {
  return SplitFromJson(ReadJsonFile(run_dir / kSplitFile));
}

std::string SplitLabel(const ExperimentConfig& c) {
  return c.benchmark + "/split" + std::to_string(c.split_seed);
}

// Mean and standard error (sample std / sqrt(n)) of `xs`.
std::pair<double, double> MeanStdErr(const std::vector<double>& xs) {
  const double n = static_cast<double>(xs.size());
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= n;
  if (xs.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / (n - 1.0)) / std::sqrt(n)};
}

std::string Fixed(double x, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, x);
  return buf;
}

TrainOptions MakeTrainOptions(const ExperimentConfig& c, const BenchmarkSplit& split,
                              std::uint64_t seed) {
  TrainOptions o;
  o.kind = c.agent;
  o.tasks = split.train;
  o.ppo = c.ppo;
  o.seed = seed;
  o.jobs = c.EffectiveJobs();
  o.eval_interval = c.eval_interval;
  o.eval_episodes = c.curve_eval_episodes;
  o.arena = c.arena;
  o.reward_mode = c.reward_mode;
  o.curve_label = SplitLabel(c);
  return o;
}

EvalOptions MakeEvalOptions(const ExperimentConfig& c, std::uint64_t seed,
                            std::uint64_t salt) {
  EvalOptions o;
  o.episodes = c.eval_episodes;
  o.seed = HashSeed({seed, salt});
  o.arena = c.arena;
  o.reward_mode = c.reward_mode;
  o.jobs = c.EffectiveJobs();
  return o;
}

void WriteCurves(const fs::path& run_dir, const ExperimentConfig& c) {
  std::vector<CurveRecord> all;
  for (std::uint64_t seed : c.seeds) {
    const fs::path ckpt = SeedDir(run_dir, seed) / kCheckpointFile;
    if (!fs::exists(ckpt)) continue;
    const nlohmann::json j = ReadJsonFile(ckpt);
    for (const auto& r : j.at("curve")) all.push_back(CurveRecordFromJson(r));
  }
  WriteTextFile(run_dir / kCurvesFile, CurvesToCsv(all));
}

// Writes <name>.json (summary) and <name>_trajectories.csv for one seed.
void WriteEval(const fs::path& seed_dir, const std::string& name,
               const EvalResult& r) {
  WriteJsonFile(seed_dir / (name + ".json"), EvalResultToJson(r, false));
  WriteTextFile(seed_dir / (name + "_trajectories.csv"),
                TrajectoriesToCsv(r.trajectories));
}

// Top-level <name>.json gathering the per-seed summaries.
void WriteEvalIndex(const fs::path& run_dir, const ExperimentConfig& c,
                    const std::string& name) {
  nlohmann::json seeds = nlohmann::json::array();
  for (std::uint64_t seed : c.seeds) {
    const fs::path p = SeedDir(run_dir, seed) / (name + ".json");
    if (fs::exists(p)) seeds.push_back(ReadJsonFile(p));
  }
  WriteJsonFile(run_dir / (name + ".json"),
                {{"agent", AgentKindName(c.agent)}, {"seeds", seeds}});
}

void EvaluateSeed(const fs::path& run_dir, const ExperimentConfig& c,
                  const BenchmarkSplit& split, std::uint64_t seed,
                  bool train_eval, bool zero_shot, std::ostream& log) {
  const fs::path dir = SeedDir(run_dir, seed);
  const TrainedModel model = LoadModel(dir / kCheckpointFile);
  if (train_eval) {
    const EvalResult r = Evaluate(model, split.train, MakeEvalOptions(c, seed, 1));
    WriteEval(dir, "eval", r);
    log << "seed " << seed << " train tasks: mean return " << Fixed(r.mean_return, 2)
        << ", success " << Fixed(r.success_rate, 3) << "\n";
  }
  if (zero_shot) {
    const EvalResult r = ZeroShot(model, split, MakeEvalOptions(c, seed, 2));
    WriteEval(dir, "zeroshot", r);
    log << "seed " << seed << " zero-shot: mean return " << Fixed(r.mean_return, 2)
        << ", success " << Fixed(r.success_rate, 3) << "\n";
  }
}

std::vector<EvalResult> LoadSeedResults(const fs::path& run_dir,
                                        const ExperimentConfig& c,
                                        const std::string& name) {
  std::vector<EvalResult> out;
  for (std::uint64_t seed : c.seeds) {
    const fs::path p = SeedDir(run_dir, seed) / (name + ".json");
    if (fs::exists(p)) out.push_back(EvalResultFromJson(ReadJsonFile(p)));
  }
  return out;
}

}  // namespace

void ParseBenchmark(const std::string& spec, SplitKind* kind,
                    std::optional<AxisElement>* element) {
  const std::string s = Lower(spec);
  const size_t colon = s.find(':');
  const std::string head = s.substr(0, colon);
  element->reset();
  if (head == "full" || head == "uniform") {
    if (colon != std::string::npos) {
      throw ConfigError("benchmark 'full' takes no element");
    }
    *kind = SplitKind::kUniform;
    return;
  }
  if (head == "smaller_scale" || head == "smallerscale") {
    *kind = SplitKind::kSmallerScale;
  } else if (head == "restricted") {
    *kind = SplitKind::kRestricted;
  } else {
    throw ConfigError("unknown benchmark '" + spec +
                      "'; expected full, smaller_scale:<element> or "
                      "restricted:<element>");
  }
  if (colon == std::string::npos) {
    throw ConfigError("benchmark '" + spec + "' needs an element, one of: " +
                      ValidElementNames());
  }
  try {
    *element = ParseElement(spec.substr(colon + 1));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

void ExperimentConfig::Validate() const {
  if (name.empty()) throw ConfigError("name must not be empty");
  SplitKind kind;
  std::optional<AxisElement> element;
  ParseBenchmark(benchmark, &kind, &element);
  if (seeds.empty()) throw ConfigError("at least one seed is required");
  if (std::set<std::uint64_t>(seeds.begin(), seeds.end()).size() != seeds.size()) {
    throw ConfigError("seeds must be distinct");
  }
  if (jobs < 1) throw ConfigError("jobs must be >= 1");
  if (eval_episodes < 1) throw ConfigError("eval_episodes must be >= 1");
  if (curve_eval_episodes < 1) throw ConfigError("curve_eval_episodes must be >= 1");
  if (eval_interval < 0) throw ConfigError("eval_interval must be >= 0");
  if (agent == AgentKind::kSingleTask && zero_shot.value_or(false)) {
    throw ConfigError(
        "single-task agents cannot be evaluated zero-shot (no descriptor input)");
  }
  try {
    ppo.Validate();
    MakeBenchmarkSplit();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

nlohmann::json ExperimentConfig::ToJson() const {
  nlohmann::json j = {{"name", name},
                      {"benchmark", benchmark},
                      {"agent", AgentKindName(agent)},
                      {"train_count", train_count ? nlohmann::json(*train_count)
                                                  : nlohmann::json(nullptr)},
                      {"split_seed", split_seed},
                      {"seeds", seeds},
                      {"ppo", ppo.ToJson()},
                      {"output_dir", output_dir},
                      {"deterministic", deterministic},
                      {"jobs", jobs},
                      {"eval_episodes", eval_episodes},
                      {"curve_eval_episodes", curve_eval_episodes},
                      {"eval_interval", eval_interval},
                      {"zero_shot", zero_shot ? nlohmann::json(*zero_shot)
                                              : nlohmann::json(nullptr)},
                      {"reward_mode",
                       reward_mode == RewardMode::kDense ? "dense" : "sparse"},
                      {"arena", arena.ToJson()}};
  return j;
}

ExperimentConfig ExperimentConfig::FromJson(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  ExperimentConfig c;
  static const std::set<std::string> kKeys = {
      "name",          "benchmark",     "agent",         "train_count",
      "split_seed",    "seeds",         "ppo",           "output_dir",
      "deterministic", "jobs",          "eval_episodes", "curve_eval_episodes",
      "eval_interval", "zero_shot",     "reward_mode",   "arena"};
  for (const auto& [key, value] : j.items()) {
    if (!kKeys.contains(key)) throw ConfigError("unknown config key: " + key);
  }
  try {
    auto get = [&](const char* key, auto& field) {
      if (j.contains(key) && !j.at(key).is_null()) j.at(key).get_to(field);
    };
    get("name", c.name);
    get("benchmark", c.benchmark);
    if (j.contains("agent")) c.agent = ParseAgentKind(j.at("agent").get<std::string>());
    if (j.contains("train_count") && !j.at("train_count").is_null()) {
      c.train_count = j.at("train_count").get<int>();
    }
    get("split_seed", c.split_seed);
    get("seeds", c.seeds);
    if (j.contains("ppo")) c.ppo = PpoConfig::FromJson(j.at("ppo"));
    get("output_dir", c.output_dir);
    get("deterministic", c.deterministic);
    get("jobs", c.jobs);
    get("eval_episodes", c.eval_episodes);
    get("curve_eval_episodes", c.curve_eval_episodes);
    get("eval_interval", c.eval_interval);
    if (j.contains("zero_shot") && !j.at("zero_shot").is_null()) {
      c.zero_shot = j.at("zero_shot").get<bool>();
    }
    if (j.contains("reward_mode")) {
      const std::string m = Lower(j.at("reward_mode").get<std::string>());
      if (m == "dense") {
        c.reward_mode = RewardMode::kDense;
      } else if (m == "sparse") {
        c.reward_mode = RewardMode::kSparse;
      } else {
        throw ConfigError("reward_mode must be dense or sparse");
      }
    }
    if (j.contains("arena")) c.arena = ArenaConfig::FromJson(j.at("arena"));
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("invalid config: ") + e.what());
  }
  return c;
}

BenchmarkSplit ExperimentConfig::MakeBenchmarkSplit() const {
  SplitKind kind;
  std::optional<AxisElement> element;
  ParseBenchmark(benchmark, &kind, &element);
  std::optional<int> count = train_count;
  if (kind == SplitKind::kUniform && !count) count = 224;
  try {
    return MakeSplit(kind, element, count, split_seed);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

std::filesystem::path ExperimentConfig::ResolvedOutputDir() const {
  if (!output_dir.empty()) return output_dir;
  const char* root = std::getenv(kOutputRootEnv);
  return fs::path(root && *root ? root : "runs") / name;
}

bool ExperimentConfig::ZeroShotEnabled(const BenchmarkSplit& split) const {
  if (agent == AgentKind::kSingleTask) return false;
  return zero_shot.value_or(!split.test.empty()) && !split.test.empty();
}

std::filesystem::path SeedDir(const std::filesystem::path& run_dir,
                              std::uint64_t seed) {
  return run_dir / SeedLabel(seed);
}

ExperimentConfig LoadRunConfig(const std::filesystem::path& run_dir) {
  return ExperimentConfig::FromJson(ReadJsonFile(run_dir / kConfigFile));
}

void RunExperiment(const ExperimentConfig& config, std::ostream& log, bool evaluate) {
  config.Validate();
  const fs::path run_dir = config.ResolvedOutputDir();
  const nlohmann::json config_json = config.ToJson();
  if (fs::exists(run_dir / kConfigFile)) {
    nlohmann::json previous = ReadJsonFile(run_dir / kConfigFile);
    // Parallelism does not affect results and may change between resumes.
    previous["jobs"] = config_json["jobs"];
    previous["output_dir"] = config_json["output_dir"];
    if (previous != config_json) {
      throw ConfigError("run directory " + run_dir.string() +
                        " holds a different configuration; choose another "
                        "output_dir");
    }
  }
  WriteJsonFile(run_dir / kConfigFile, config_json);
  const BenchmarkSplit split = config.MakeBenchmarkSplit();
  WriteJsonFile(run_dir / kSplitFile, SplitToJson(split));
  log << "run " << run_dir.string() << ": " << AgentKindName(config.agent) << " on "
      << split.train.size() << " training tasks, " << split.test.size()
      << " test tasks\n";

  for (std::uint64_t seed : config.seeds) {
    const fs::path ckpt = SeedDir(run_dir, seed) / kCheckpointFile;
    const TrainOptions options = MakeTrainOptions(config, split, seed);
    TrainState state = fs::exists(ckpt) ? LoadCheckpoint(ckpt, config.ppo)
                                        : InitTraining(options);
    if (state.updates_done > 0) {
      log << "seed " << seed << ": resuming at update " << state.updates_done << "\n";
    }
    const std::int64_t total = options.TotalUpdates();
    Train(state, options, [&](const TrainState& s) {
      SaveCheckpoint(ckpt, s);
      WriteCurves(run_dir, config);
      log << "seed " << seed << ": update " << s.updates_done << "/" << total;
      if (!s.curve.empty()) {
        const CurveRecord& r = s.curve.back();
        log << " (last eval at " << r.steps << " steps: return "
            << Fixed(r.mean_return, 2) << ", success " << Fixed(r.success_rate, 3)
            << ")";
      }
      log << "\n" << std::flush;
    });
    if (!fs::exists(ckpt)) SaveCheckpoint(ckpt, state);
  }
  WriteCurves(run_dir, config);
  if (!evaluate) return;
  for (std::uint64_t seed : config.seeds) {
    EvaluateSeed(run_dir, config, split, seed, true, config.ZeroShotEnabled(split),
                 log);
  }
  WriteEvalIndex(run_dir, config, "eval");
  if (config.ZeroShotEnabled(split)) WriteEvalIndex(run_dir, config, "zeroshot");
}

void RunEvaluation(const std::filesystem::path& run_dir, std::ostream& log) {
  const ExperimentConfig c = LoadRunConfig(run_dir);
  const BenchmarkSplit split = LoadSplit(run_dir);
  for (std::uint64_t seed : c.seeds) {
    EvaluateSeed(run_dir, c, split, seed, true, false, log);
  }
  WriteEvalIndex(run_dir, c, "eval");
}

void RunZeroShot(const std::filesystem::path& run_dir, std::ostream& log) {
  const ExperimentConfig c = LoadRunConfig(run_dir);
  if (c.agent == AgentKind::kSingleTask) {
    throw ConfigError(
        "single-task agents cannot be evaluated zero-shot (no descriptor input)");
  }
  const BenchmarkSplit split = LoadSplit(run_dir);
  if (split.test.empty()) throw ConfigError("split has no test tasks");
  for (std::uint64_t seed : c.seeds) {
    EvaluateSeed(run_dir, c, split, seed, false, true, log);
  }
  WriteEvalIndex(run_dir, c, "zeroshot");
}

std::string Report(const std::filesystem::path& run_dir) {
  if (!fs::exists(run_dir / kConfigFile)) {
    throw MissingArtifact("not a run directory (no config.json): " + run_dir.string());
  }
  const ExperimentConfig c = LoadRunConfig(run_dir);
  const BenchmarkSplit split = LoadSplit(run_dir);
  std::ostringstream out;
  out << "run: " << c.name << "\n"
      << "agent: " << AgentKindName(c.agent) << "\n"
      << "benchmark: " << c.benchmark << " (" << split.train.size() << " train / "
      << split.test.size() << " test tasks, split seed " << c.split_seed << ")\n"
      << "steps per task: " << c.ppo.total_steps_per_task << "\n\n";
  out << "setting     seeds  mean return (+- s.e.)   success rate (+- s.e.)\n";
  bool any = false;
  for (const char* name : {"eval", "zeroshot"}) {
    const std::vector<EvalResult> results = LoadSeedResults(run_dir, c, name);
    if (results.empty()) continue;
    any = true;
    std::vector<double> ret;
    std::vector<double> succ;
    for (const EvalResult& r : results) {
      ret.push_back(r.mean_return);
      succ.push_back(r.success_rate);
    }
    const auto [rm, rs] = MeanStdErr(ret);
    const auto [sm, ss] = MeanStdErr(succ);
    char line[160];
    std::snprintf(line, sizeof(line), "%-10s  %5zu  %9.2f +- %-9.2f   %7.3f +- %.3f\n",
                  std::string(name) == "eval" ? "train" : "zero-shot",
                  results.size(), rm, rs, sm, ss);
    out << line;
  }
  if (!any) {
    throw MissingArtifact("no evaluation results in " + run_dir.string() +
                          "; run `modarena eval` first");
  }
  const std::string text = out.str();
  WriteTextFile(run_dir / "report.txt", text);
  if (fs::exists(run_dir / kCurvesFile)) {
    WriteTextFile(run_dir / "curves.svg",
                  CurvesToSvg(CurvesFromCsv(ReadTextFile(run_dir / kCurvesFile))));
  }
  return text;
}

nlohmann::json AnalyzeBreakdown(const std::filesystem::path& run_dir) {
  const ExperimentConfig c = LoadRunConfig(run_dir);
  const BenchmarkSplit split = LoadSplit(run_dir);
  if (split.kind != SplitKind::kRestricted) {
    throw ConfigError("breakdown analysis needs a restricted benchmark run");
  }
  nlohmann::json seeds = nlohmann::json::array();
  for (const EvalResult& r : LoadSeedResults(run_dir, c, "zeroshot")) {
    seeds.push_back({{"seed", r.seed},
                     {"groups", BreakdownToJson(SharedElementBreakdown(r, split))}});
  }
  if (seeds.empty()) {
    throw MissingArtifact("no zero-shot results in " + run_dir.string());
  }
  const nlohmann::json out = {{"analysis", "shared_element_breakdown"},
                              {"seeds", seeds}};
  WriteJsonFile(run_dir / "breakdown.json", out);
  return out;
}

nlohmann::json AnalyzeSwap(const std::filesystem::path& run_dir, int max_tasks,
                           int episodes) {
  const ExperimentConfig c = LoadRunConfig(run_dir);
  if (c.agent == AgentKind::kSingleTask) {
    throw ConfigError("descriptor swap needs a descriptor-conditioned agent");
  }
  const BenchmarkSplit split = LoadSplit(run_dir);
  std::vector<TaskDescriptor> tasks = split.train;
  if (max_tasks > 0 && static_cast<int>(tasks.size()) > max_tasks) {
    tasks.resize(max_tasks);
  }
  nlohmann::json seeds = nlohmann::json::array();
  for (std::uint64_t seed : c.seeds) {
    const TrainedModel model = LoadModel(SeedDir(run_dir, seed) / kCheckpointFile);
    EvalOptions o = MakeEvalOptions(c, seed, 3);
    o.episodes = episodes;
    const auto table = DescriptorSwapTable(model, tasks, o);
    const auto curves = DescriptorSwapRanking(
        tasks, [&](const TaskDescriptor& t, const TaskDescriptor& d) {
          return table.at({t.id(), d.id()});
        });
    seeds.push_back({{"seed", seed}, {"curves", SwapToJson(curves)}});
  }
  const nlohmann::json out = {{"analysis", "descriptor_swap"},
                              {"tasks", tasks.size()},
                              {"episodes", episodes},
                              {"seeds", seeds}};
  WriteJsonFile(run_dir / "swap.json", out);
  return out;
}

nlohmann::json AnalyzeR2(const std::filesystem::path& run_dir,
                         const std::filesystem::path& single_task_dir, int episodes) {
  const ExperimentConfig c = LoadRunConfig(run_dir);
  const ExperimentConfig st = LoadRunConfig(single_task_dir);
  if (st.agent != AgentKind::kSingleTask) {
    throw ConfigError("R^2 analysis needs a single-task run as reference");
  }
  const std::uint64_t st_seed = st.seeds.front();
  const TrainedModel reference =
      LoadModel(SeedDir(single_task_dir, st_seed) / kCheckpointFile);
  EvalOptions o = MakeEvalOptions(st, st_seed, 4);
  o.episodes = episodes;
  std::map<std::pair<int, int>, double> cache;
  const PolicyEvaluator success = [&](const TaskDescriptor& policy_task,
                                      const TaskDescriptor& test_task) {
    const auto key = std::make_pair(policy_task.id(), test_task.id());
    if (!cache.contains(key)) {
      cache[key] = EvaluateVariant(reference, test_task, std::nullopt, policy_task, o)
                       .success_rate;
    }
    return cache[key];
  };
  nlohmann::json seeds = nlohmann::json::array();
  for (const EvalResult& r : LoadSeedResults(run_dir, c, "zeroshot")) {
    try {
      seeds.push_back(
          {{"seed", r.seed},
           {"result", BestMatchToJson(BestMatchingPolicyR2(r, reference.train_tasks(),
                                                           success))}});
    } catch (const std::invalid_argument& e) {
      seeds.push_back({{"seed", r.seed}, {"error", e.what()}});
    }
  }
  if (seeds.empty()) throw MissingArtifact("no zero-shot results in " + run_dir.string());
  const nlohmann::json out = {{"analysis", "best_matching_policy_r2"},
                              {"agent", AgentKindName(c.agent)},
                              {"reference", single_task_dir.string()},
                              {"seeds", seeds}};
  WriteJsonFile(run_dir / "r2.json", out);
  return out;
}

nlohmann::json AnalyzeMaxSuccess(const std::vector<std::filesystem::path>& run_dirs,
                                 const std::filesystem::path& output) {
  std::vector<EvalResult> results;
  for (const fs::path& dir : run_dirs) {
    const ExperimentConfig c = LoadRunConfig(dir);
    for (const char* name : {"eval", "zeroshot"}) {
      for (EvalResult& r : LoadSeedResults(dir, c, name)) results.push_back(std::move(r));
    }
  }
  if (results.empty()) throw MissingArtifact("no evaluation results found");
  const nlohmann::json out = MaxSuccessToJson(MaxSuccessPerTask(results, EnumerateTasks()));
  if (!output.empty()) WriteJsonFile(output, out);
  return out;
}

}  // namespace modarena
