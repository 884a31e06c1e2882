#include "cli.h"

#include <openssl/evp.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "qini/dgp.h"
#include "qini/error.h"
#include "qini/inference.h"
#include "qini/path.h"
#include "qini/scores.h"
#include "qini/version.h"

namespace qini::cli {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

struct RunConfig {
  std::string command;
  std::string input;
  std::vector<int> arms;
  std::vector<int> vs;
  int num_arms = 0;
  std::optional<double> b_max;
  int grid = 100;
  int replicates = 200;
  std::uint64_t seed = 0;
  double alpha = 0.05;
  bool baseline = false;
  int threads = 1;
  std::string out = ".";
  std::size_t n = 1000;
  std::vector<double> ipw;
  std::vector<std::string> aipw;
};

std::string Sha256(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CsvError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string data = buf.str();
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr);
  std::ostringstream hex;
  for (unsigned int i = 0; i < length; ++i) {
    hex << std::hex << std::setw(2) << std::setfill('0')
        << static_cast<int>(digest[i]);
  }
  return hex.str();
}

int DefaultThreads() {
  if (const char* env = std::getenv("QINI_PATH_THREADS")) {
    const int value = std::atoi(env);
    if (value > 0) return value;
  }
  return 1;
}

std::string JoinPath(const RunConfig& config, const std::string& name) {
  return (fs::path(config.out) / name).string();
}

// Writes manifest.json next to the outputs. Contains nothing that varies
// between reruns of the same command (no timestamps, no host names).
void WriteManifest(const RunConfig& config,
                   const std::vector<std::string>& inputs,
                   const std::vector<std::string>& outputs) {
  Json manifest;
  manifest["tool"] = "qini_path";
  manifest["version"] = kVersion;
  manifest["command"] = config.command;
  Json cfg;
  cfg["input"] = config.input;
  cfg["arms"] = config.arms;
  cfg["vs"] = config.vs;
  cfg["k"] = config.num_arms;
  if (config.b_max) {
    cfg["b_max"] = FormatDouble(*config.b_max);
  } else {
    cfg["b_max"] = nullptr;
  }
  cfg["grid"] = config.grid;
  cfg["replicates"] = config.replicates;
  cfg["alpha"] = FormatDouble(config.alpha);
  cfg["baseline"] = config.baseline;
  cfg["threads"] = config.threads;
  cfg["n"] = config.n;
  std::vector<std::string> probs;
  for (double p : config.ipw) probs.push_back(FormatDouble(p));
  cfg["ipw"] = probs;
  cfg["aipw"] = config.aipw;
  manifest["config"] = cfg;
  manifest["seed"] = config.seed;
  Json files = Json::array();
  for (const auto& path : inputs) {
    files.push_back(Json{{"path", path}, {"sha256", Sha256(path)}});
  }
  manifest["inputs"] = files;
  manifest["outputs"] = outputs;
  std::ofstream out(JoinPath(config, "manifest.json"),
                    std::ios::binary | std::ios::trunc);
  out << manifest.dump(2) << '\n';
}

EvalFrame LoadPolicyFrame(const RunConfig& config) {
  const CsvTable table = ReadCsv(config.input);
  return LoadFrame(table, config.num_arms);
}

double FinalSpend(const EvalFrame& frame, const PolicySpec& policy) {
  const double unbounded = std::numeric_limits<double>::infinity();
  if (policy.baseline) return BaselinePath(frame, unbounded).final_spend();
  const EvalFrame masked =
      policy.arms.empty() ? frame : frame.SelectArms(policy.arms);
  return ComputePath(masked, unbounded).final_spend();
}

double ResolveBudget(const RunConfig& config, double fallback) {
  if (config.b_max) return *config.b_max;
  if (!(fallback > 0.0)) {
    throw InvalidArgumentError(
        "no unit has a positive effect estimate; pass --b-max explicitly");
  }
  return fallback;
}

int CmdPath(const RunConfig& config, std::ostream& out) {
  EvalFrame frame = LoadPolicyFrame(config);
  if (!config.arms.empty()) frame = frame.SelectArms(config.arms);
  const double b_max =
      config.b_max.value_or(std::numeric_limits<double>::infinity());
  const SolutionPath path = ComputePath(frame, b_max);

  std::vector<std::vector<std::string>> events;
  events.reserve(path.events.size());
  for (std::size_t i = 0; i < path.events.size(); ++i) {
    const PathEvent& e = path.events[i];
    events.push_back({std::to_string(i), std::to_string(e.unit_id),
                      std::to_string(e.arm_id), FormatDouble(e.spend),
                      FormatDouble(e.gain), e.is_upgrade() ? "1" : "0"});
  }
  WriteCsv(JoinPath(config, "path_events.csv"),
           {"event_index", "unit_id", "arm", "spend", "gain", "is_upgrade"},
           events);

  std::vector<std::vector<std::string>> curve;
  const double end = std::isfinite(b_max) ? b_max : path.final_spend();
  if (end > 0.0) {
    const auto grid = SpendGrid(end, config.grid);
    const auto gains = GainOnGrid(path, grid);
    for (std::size_t g = 0; g < grid.size(); ++g) {
      curve.push_back({FormatDouble(grid[g]), FormatDouble(gains[g])});
    }
  }
  WriteCsv(JoinPath(config, "curve.csv"), {"spend", "gain"}, curve);
  WriteManifest(config, {config.input},
                {"path_events.csv", "curve.csv"});
  out << "path: " << path.events.size() << " events, final spend "
      << FormatDouble(path.final_spend()) << ", final gain "
      << FormatDouble(path.final_gain())
      << (path.complete ? " (complete)" : " (truncated at b_max)") << '\n';
  return kExitOk;
}

BootstrapOptions Options(const RunConfig& config, double b_max) {
  BootstrapOptions options;
  options.b_max = b_max;
  options.grid_size = config.grid;
  options.replicates = config.replicates;
  options.seed = config.seed;
  options.threads = config.threads;
  return options;
}

int CmdBootstrap(const RunConfig& config, std::ostream& out) {
  const EvalFrame frame = LoadPolicyFrame(config);
  const PolicySpec policy{config.arms, config.baseline};
  const double b_max = ResolveBudget(config, FinalSpend(frame, policy));
  const double z = NormalCriticalValue(config.alpha);
  const CurveEstimate est =
      BootstrapCurve(frame, policy, Options(config, b_max));

  std::vector<std::vector<std::string>> rows;
  for (std::size_t g = 0; g < est.spend_grid.size(); ++g) {
    rows.push_back({FormatDouble(est.spend_grid[g]), FormatDouble(est.gain[g]),
                    FormatDouble(est.std_err[g]),
                    FormatDouble(est.gain[g] - z * est.std_err[g]),
                    FormatDouble(est.gain[g] + z * est.std_err[g])});
  }
  WriteCsv(JoinPath(config, "curve_ci.csv"),
           {"spend", "gain", "std_err", "ci_lo", "ci_hi"}, rows);
  WriteManifest(config, {config.input}, {"curve_ci.csv"});
  out << "bootstrap: " << est.policy_label << ", " << est.num_replicates
      << " replicates, b_max " << FormatDouble(b_max) << '\n';
  return kExitOk;
}

std::vector<int> Resolved(const std::vector<int>& arms, const EvalFrame& frame) {
  std::vector<int> ids = arms.empty() ? frame.arm_ids() : arms;
  std::sort(ids.begin(), ids.end());
  return ids;
}

int CmdDiff(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const EvalFrame frame = LoadPolicyFrame(config);
  const PolicySpec a{config.arms, false};
  const PolicySpec b{config.vs.empty() ? config.arms : config.vs,
                     config.baseline};
  const bool degenerate =
      !b.baseline && Resolved(a.arms, frame) == Resolved(b.arms, frame);
  const double b_max = ResolveBudget(
      config, std::max(FinalSpend(frame, a), FinalSpend(frame, b)));
  const double z = NormalCriticalValue(config.alpha);
  const DifferenceEstimate est =
      DifferenceCurve(frame, a, b, Options(config, b_max));

  std::vector<std::vector<std::string>> rows;
  for (std::size_t g = 0; g < est.spend_grid.size(); ++g) {
    rows.push_back({FormatDouble(est.spend_grid[g]), FormatDouble(est.diff[g]),
                    FormatDouble(est.std_err[g]),
                    FormatDouble(est.diff[g] - z * est.std_err[g]),
                    FormatDouble(est.diff[g] + z * est.std_err[g])});
  }
  WriteCsv(JoinPath(config, "diff_ci.csv"),
           {"spend", "diff", "std_err", "ci_lo", "ci_hi"}, rows);
  WriteManifest(config, {config.input}, {"diff_ci.csv"});
  out << "diff: " << est.label_a << " - " << est.label_b << ", "
      << est.num_replicates << " replicates, b_max " << FormatDouble(b_max)
      << '\n';
  if (degenerate) {
    err << "warning: both policies use the same arms; the difference is "
           "identically zero\n";
    return kExitDegenerateComparison;
  }
  return kExitOk;
}

int CmdSimulate(const RunConfig& config, std::ostream& out) {
  if (config.n < 1) throw InvalidArgumentError("--n must be at least 1");
  const dgp::SimDraw draw = dgp::Simulate(config.n, config.seed);
  std::vector<std::string> header;
  for (int j = 1; j <= dgp::kNumCovariates; ++j) {
    header.push_back("x" + std::to_string(j));
  }
  for (const char* name : {"w", "y", "c1", "c2", "tau1_true", "tau2_true"}) {
    header.emplace_back(name);
  }
  std::vector<std::vector<std::string>> rows(draw.size());
  for (std::size_t i = 0; i < draw.size(); ++i) {
    auto& row = rows[i];
    for (double x : draw.x.row(i)) row.push_back(FormatDouble(x));
    row.push_back(std::to_string(draw.w[i]));
    row.push_back(FormatDouble(draw.y[i]));
    row.push_back(FormatDouble(draw.cost(i, 0)));
    row.push_back(FormatDouble(draw.cost(i, 1)));
    row.push_back(FormatDouble(draw.tau_true(i, 0)));
    row.push_back(FormatDouble(draw.tau_true(i, 1)));
  }
  WriteCsv(JoinPath(config, "data.csv"), header, rows);
  WriteManifest(config, {}, {"data.csv"});
  out << "simulate: " << draw.size() << " units\n";
  return kExitOk;
}

std::size_t Require(const CsvTable& table, const std::string& name,
                    const std::string& file) {
  if (auto col = table.Find(name)) return *col;
  throw CsvError(file + ": missing required column '" + name + "'", 1, name);
}

Matrix ReadArmMatrix(const std::string& path, const std::string& prefix,
                     std::size_t rows) {
  const CsvTable table = ReadCsv(path);
  std::size_t cols = 0;
  while (table.Find(prefix + std::to_string(cols))) ++cols;
  if (cols < 2) Require(table, prefix + std::to_string(cols), path);
  if (table.rows.size() != rows) {
    throw CsvError(path + ": has " + std::to_string(table.rows.size()) +
                   " rows, input has " + std::to_string(rows));
  }
  Matrix m(rows, cols);
  for (std::size_t k = 0; k < cols; ++k) {
    const auto values = table.Numbers(*table.Find(prefix + std::to_string(k)));
    for (std::size_t i = 0; i < rows; ++i) m(i, k) = values[i];
  }
  return m;
}

int CmdScores(const RunConfig& config, std::ostream& out, std::ostream& err) {
  if (config.ipw.empty() == config.aipw.empty()) {
    err << "scores: pass exactly one of --ipw or --aipw\n";
    return kExitUsage;
  }
  const CsvTable table = ReadCsv(config.input);
  ObservedData data;
  data.treatment = table.Integers(Require(table, "w", config.input));
  data.outcome = table.Numbers(Require(table, "y", config.input));
  std::vector<std::string> inputs{config.input};

  Matrix scores;
  if (!config.ipw.empty()) {
    data.num_arms = static_cast<int>(config.ipw.size()) - 1;
    scores = IpwScores(data, config.ipw);
  } else {
    const std::size_t n = data.size();
    NuisanceEstimates nuisance;
    nuisance.mu_hat = ReadArmMatrix(config.aipw[0], "mu_", n);
    nuisance.e_hat = ReadArmMatrix(config.aipw[1], "e_", n);
    const CsvTable folds = ReadCsv(config.aipw[2]);
    if (folds.rows.size() != n) {
      throw CsvError(config.aipw[2] + ": row count differs from input");
    }
    nuisance.fold_id = folds.Integers(Require(folds, "fold", config.aipw[2]));
    data.num_arms = static_cast<int>(nuisance.mu_hat.cols()) - 1;
    scores = AipwScores(data, nuisance);
    inputs.insert(inputs.end(), config.aipw.begin(), config.aipw.end());
  }
  for (int arm : UnobservedArms(data)) {
    err << "warning: arm " << arm << " has no observations\n";
  }

  std::vector<std::size_t> keep;
  std::vector<std::string> header;
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    if (table.header[c].rfind("score_", 0) == 0) continue;
    keep.push_back(c);
    header.push_back(table.header[c]);
  }
  for (std::size_t k = 1; k <= scores.cols(); ++k) {
    header.push_back("score_" + std::to_string(k));
  }
  std::vector<std::vector<std::string>> rows(table.rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t c : keep) rows[i].push_back(table.rows[i][c]);
    for (double s : scores.row(i)) rows[i].push_back(FormatDouble(s));
  }
  WriteCsv(JoinPath(config, "scores.csv"), header, rows);
  WriteManifest(config, inputs, {"scores.csv"});
  out << "scores: " << rows.size() << " units, K = " << scores.cols() << '\n';
  return kExitOk;
}

}  // namespace

EvalFrame LoadFrame(const CsvTable& table, int num_arms) {
  auto lookup = [&](const std::string& name,
                    const std::string& alias) -> std::optional<std::size_t> {
    if (auto col = table.Find(name)) return col;
    return table.Find(alias);
  };
  auto tau_col = [&](int k) {
    return lookup("tau_" + std::to_string(k),
                  "tau" + std::to_string(k) + "_true");
  };
  int k_arms = num_arms;
  if (k_arms <= 0) {
    k_arms = 0;
    while (tau_col(k_arms + 1)) ++k_arms;
  }
  if (k_arms == 0) {
    throw CsvError("missing required column 'tau_1' (is the header line "
                   "present?)",
                   1, "tau_1");
  }
  const std::size_t n = table.rows.size();
  if (n == 0) throw CsvError("input has a header but no rows", 1);
  Matrix tau(n, static_cast<std::size_t>(k_arms));
  Matrix cost(n, static_cast<std::size_t>(k_arms));
  Matrix score(n, static_cast<std::size_t>(k_arms));
  for (int k = 1; k <= k_arms; ++k) {
    const std::string ks = std::to_string(k);
    const auto t = tau_col(k);
    const auto c = lookup("cost_" + ks, "c" + ks);
    const auto s = table.Find("score_" + ks);
    for (const auto& [col, name] :
         {std::pair{t, "tau_" + ks}, std::pair{c, "cost_" + ks},
          std::pair{s, "score_" + ks}}) {
      if (!col) {
        throw CsvError("missing required column '" + name + "'", 1, name);
      }
    }
    const auto tv = table.Numbers(*t);
    const auto cv = table.Numbers(*c);
    const auto sv = table.Numbers(*s);
    const auto col = static_cast<std::size_t>(k - 1);
    for (std::size_t i = 0; i < n; ++i) {
      tau(i, col) = tv[i];
      cost(i, col) = cv[i];
      score(i, col) = sv[i];
    }
  }
  std::vector<int> unit_ids;
  if (auto col = table.Find("unit_id")) unit_ids = table.Integers(*col);
  return EvalFrame(std::move(tau), std::move(cost), std::move(score), {},
                   std::move(unit_ids));
}

int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Budget-constrained multi-armed Qini curves"};
  app.name("qini_path");
  app.require_subcommand(1);
  RunConfig config;
  config.threads = DefaultThreads();

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--out", config.out, "Output directory")
        ->capture_default_str();
    cmd->add_option("--seed", config.seed, "Random seed")
        ->capture_default_str();
  };
  auto add_frame = [&](CLI::App* cmd) {
    add_common(cmd);
    cmd->add_option("--input", config.input,
                    "CSV with tau_k, cost_k, score_k columns")
        ->required();
    cmd->add_option("--arms", config.arms, "Arm subset, e.g. 1,2")
        ->delimiter(',');
    cmd->add_option("--k", config.num_arms,
                    "Number of arms (default: inferred from header)");
    cmd->add_option("--b-max", config.b_max,
                    "Maximum average spend per unit");
    cmd->add_option("--grid", config.grid, "Spend grid size")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
  };
  auto add_bootstrap = [&](CLI::App* cmd) {
    add_frame(cmd);
    cmd->add_option("--replicates", config.replicates, "Bootstrap replicates")
        ->capture_default_str();
    cmd->add_option("--alpha", config.alpha, "Interval level 1 - alpha")
        ->capture_default_str()
        ->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--threads", config.threads,
                    "Worker threads (env QINI_PATH_THREADS)")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmd->add_flag("--baseline", config.baseline,
                  "Use the covariate-free baseline policy");
  };

  auto* path = app.add_subcommand("path", "Trace the solution path");
  add_frame(path);
  auto* bootstrap =
      app.add_subcommand("bootstrap", "Qini curve with bootstrap intervals");
  add_bootstrap(bootstrap);
  auto* diff =
      app.add_subcommand("diff", "Paired difference between two policies");
  add_bootstrap(diff);
  diff->add_option("--vs", config.vs,
                   "Arm subset of the comparison policy (default: --arms)")
      ->delimiter(',');
  auto* simulate =
      app.add_subcommand("simulate", "Draw from the three-armed design");
  add_common(simulate);
  simulate->add_option("--n", config.n, "Number of units")
      ->capture_default_str();
  auto* scores = app.add_subcommand("scores", "Form evaluation scores");
  add_common(scores);
  scores->add_option("--input", config.input, "CSV with w and y columns")
      ->required();
  scores->add_option("--ipw", config.ipw,
                     "Known randomization probabilities p_0 .. p_K");
  scores->add_option("--aipw", config.aipw, "mu.csv e.csv folds.csv")
      ->expected(3);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    fs::create_directories(config.out);
    if (*path) {
      config.command = "path";
      return CmdPath(config, out);
    }
    if (*bootstrap) {
      config.command = "bootstrap";
      return CmdBootstrap(config, out);
    }
    if (*diff) {
      config.command = "diff";
      return CmdDiff(config, out, err);
    }
    if (*simulate) {
      config.command = "simulate";
      return CmdSimulate(config, out);
    }
    config.command = "scores";
    return CmdScores(config, out, err);
  } catch (const CsvError& e) {
    err << "error: " << e.what() << '\n';
    return kExitMalformedCsv;
  } catch (const InvalidArgumentError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConstraint;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace qini::cli
