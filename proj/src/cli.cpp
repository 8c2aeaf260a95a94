#include "proofgauge/cli.hpp"

#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>

#include <CLI11.hpp>
#include <json.hpp>

#include "proofgauge/adaptive.hpp"
#include "proofgauge/analysis.hpp"
#include "proofgauge/annotate.hpp"
#include "proofgauge/config.hpp"
#include "proofgauge/corpus.hpp"
#include "proofgauge/csv.hpp"
#include "proofgauge/errors.hpp"
#include "proofgauge/examinee.hpp"

namespace proofgauge::cli {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitBackend = 3;
constexpr int kExitNoConvergence = 4;

struct GlobalOptions {
  std::string config_path;
  std::string out_dir;
  std::optional<long> seed;
  bool quiet = false;
};

struct CommandContext {
  RunConfig config;
  std::filesystem::path out;
  std::ostream* out_stream;
  bool quiet = false;

  // console chatter; scientific artifacts go to files under out
  template <typename T>
  void say(const T& message) const {
    if (!quiet) (*out_stream) << message << '\n';
  }
};

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t comma = text.find(',', start);
    if (comma == std::string::npos) comma = text.size();
    std::string item = text.substr(start, comma - start);
    std::size_t begin = item.find_first_not_of(" \t");
    if (begin != std::string::npos) {
      std::size_t end = item.find_last_not_of(" \t");
      items.push_back(item.substr(begin, end - begin + 1));
    }
    start = comma + 1;
  }
  return items;
}

// timestamps live only here so every scientific output stays byte-stable
// across reruns; args already carry the subcommand name
void write_run_log(const std::filesystem::path& out_dir,
                   const std::vector<std::string>& args) {
  std::ofstream log(out_dir / "run.log", std::ios::app);
  if (!log) return;
  char stamp[32];
  std::time_t now = std::time(nullptr);
  std::tm utc{};
  gmtime_r(&now, &utc);
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &utc);
  log << stamp << " proofgauge";
  for (const std::string& arg : args) log << ' ' << arg;
  log << '\n';
}

CommandContext make_context(const GlobalOptions& options, std::ostream& out) {
  CommandContext context{options.config_path.empty() ? RunConfig()
                                                     : RunConfig::load(options.config_path),
                         {}, &out, options.quiet};
  std::string out_dir = options.out_dir;
  if (out_dir.empty()) out_dir = context.config.get_string("paths.out", "out");
  if (const char* env = std::getenv("PROOFGAUGE_OUT"); env != nullptr && *env != '\0')
    out_dir = env;
  context.out = out_dir;
  std::filesystem::create_directories(context.out);
  if (options.seed) context.config.set("seed", std::to_string(*options.seed));
  return context;
}

// accept either on-disk matrix format by dispatching on the header line
ResponseMatrix load_matrix_any(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string());
  std::string header;
  std::getline(in, header);
  if (!header.empty() && header.back() == '\r') header.pop_back();
  in.close();
  if (header == "model_id,theorem_id,attempt_index,success") return load_attempts(path);
  if (header == "model_id,theorem_id,attempts,successes") return load_aggregates(path);
  throw ValidationError(path.string() + ": unrecognized matrix header '" + header + "'");
}

AnnotationConfig annotation_config(const RunConfig& config) {
  AnnotationConfig cfg;
  cfg.epsilon = config.get_double("annotate.epsilon", cfg.epsilon);
  cfg.pprime_floor = config.get_double("annotate.pprime_floor", cfg.pprime_floor);
  cfg.pprime_ceiling = config.get_double("annotate.pprime_ceiling", cfg.pprime_ceiling);
  cfg.level_count = static_cast<int>(config.get_long("annotate.level_count", cfg.level_count));
  return cfg;
}

EvalConfig eval_config(const RunConfig& config) {
  EvalConfig cfg;
  cfg.eta = config.get_double("eval.eta", cfg.eta);
  cfg.f = config.get_double("eval.f", cfg.f);
  cfg.theta_init = config.get_double("eval.theta_init", cfg.theta_init);
  cfg.theta_min = config.get_double("eval.theta_min", cfg.theta_min);
  cfg.theta_max = config.get_double("eval.theta_max", cfg.theta_max);
  cfg.conv_eps = config.get_double("eval.conv_eps", cfg.conv_eps);
  cfg.conv_rounds = static_cast<int>(config.get_long("eval.conv_rounds", cfg.conv_rounds));
  cfg.max_rounds = static_cast<int>(config.get_long("eval.max_rounds", cfg.max_rounds));
  cfg.attempts = config.get_long("eval.attempts", cfg.attempts);
  cfg.window = static_cast<int>(config.get_long("eval.window", cfg.window));
  cfg.batch = static_cast<int>(config.get_long("eval.batch", cfg.batch));
  return cfg;
}

void write_grading_json(const GradingReport& report, const std::filesystem::path& path) {
  nlohmann::ordered_json doc;
  doc["counts"] = report.counts;
  doc["boundaries"] = report.boundaries;
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

int cmd_ingest(CommandContext& context) {
  const bool have_attempts = context.config.has("paths.attempts");
  const bool have_aggregates = context.config.has("paths.aggregates");
  if (have_attempts == have_aggregates)
    throw ValidationError("ingest needs exactly one of paths.attempts or paths.aggregates");

  ResponseMatrix matrix = have_attempts
                              ? load_attempts(context.config.require_string("paths.attempts"))
                              : load_aggregates(context.config.require_string("paths.aggregates"));
  save_matrix(matrix, context.out / "matrix.csv");
  context.say("matrix.csv: " + std::to_string(matrix.models().size()) + " models, " +
              std::to_string(matrix.theorems().size()) + " theorems, " +
              std::to_string(matrix.cell_count()) + " cells");

  if (context.config.has("paths.corpus")) {
    Corpus corpus = load_corpus(context.config.require_string("paths.corpus"));
    save_corpus(corpus, context.out / "corpus.csv");
    context.say("corpus.csv: " + std::to_string(corpus.records.size()) + " theorems");
  }
  return kExitOk;
}

int cmd_annotate(CommandContext& context) {
  ResponseMatrix matrix = load_matrix_any(context.config.require_string("paths.matrix"));
  std::vector<std::string> models;
  if (context.config.has("annotate.models"))
    models = split_list(context.config.require_string("annotate.models"));
  else
    models = matrix.models();

  AnnotationConfig cfg = annotation_config(context.config);
  ItemBank bank = annotate(matrix, models, cfg);
  GradingReport report = grade(bank, cfg.level_count);
  save_bank(bank, context.out / "bank.csv");
  write_grading_json(report, context.out / "grading.json");

  std::string counts;
  for (int count : report.counts) counts += (counts.empty() ? "" : "/") + std::to_string(count);
  std::string boundaries;
  for (double boundary : report.boundaries)
    boundaries += (boundaries.empty() ? "" : "/") + format_fixed(boundary, 4);
  context.say("bank.csv: " + std::to_string(bank.items.size()) + " items, level counts " +
              counts + ", boundaries " + boundaries);
  return kExitOk;
}

int cmd_grade(CommandContext& context) {
  ItemBank bank = load_bank(context.config.require_string("paths.bank"));
  const int level_count =
      static_cast<int>(context.config.get_long("annotate.level_count", 4));
  GradingReport report = grade(bank, level_count);
  save_bank(bank, context.out / "bank.csv");
  write_grading_json(report, context.out / "grading.json");

  std::string counts;
  for (int count : report.counts) counts += (counts.empty() ? "" : "/") + std::to_string(count);
  context.say("bank.csv regraded: level counts " + counts);
  return kExitOk;
}

int cmd_evaluate(CommandContext& context) {
  ItemBank bank = load_bank(context.config.require_string("paths.bank"));
  EvalConfig cfg = eval_config(context.config);
  const std::string kind = context.config.get_string("backend.kind", "replay");

  // keep whichever pieces the backend needs alive for the whole run
  ResponseMatrix matrix;
  std::unique_ptr<ExamineeBackend> backend;
  if (kind == "replay") {
    matrix = load_matrix_any(context.config.require_string("paths.matrix"));
    backend = replay_backend(matrix, context.config.require_string("backend.model"));
  } else if (kind == "synthetic") {
    SyntheticExaminee examinee;
    examinee.true_theta = context.config.get_double("backend.theta", 0.5);
    examinee.seed = static_cast<std::uint64_t>(context.config.get_long("seed", 0));
    const double a_true = context.config.get_double("backend.a_true", 8.0);
    for (const ItemParams& item : bank.items)
      examinee.true_params[item.theorem_id] = {a_true, item.difficulty};
    backend = synthetic_backend(std::move(examinee));
  } else if (kind == "external") {
    backend = external_backend(
        context.config.require_string("backend.command"),
        std::chrono::milliseconds(context.config.get_long("backend.timeout_ms", 30000)));
  } else {
    throw ValidationError("unknown backend.kind '" + kind + "'");
  }

  EvalReport report = run_adaptive(*backend, bank, cfg);
  save_report_json(report, context.out / "report.json");
  save_trace_csv(report, context.out / "trace.csv");

  context.say("ability score " + format_fixed(report.final_theta, 4) + ", " +
              std::to_string(report.administrations) + " administrations, cost change " +
              format_fixed(report.cost_change, 2) + "%");
  if (!report.converged) {
    context.say("did not converge within " + std::to_string(cfg.max_rounds) + " rounds");
    return kExitNoConvergence;
  }
  return kExitOk;
}

int cmd_simulate(CommandContext& context) {
  const long examinee_count = context.config.get_long("simulate.examinees", 10);
  if (examinee_count < 1) throw ValidationError("simulate.examinees must be >= 1");
  const double theta_low = context.config.get_double("simulate.theta_min", 0.05);
  const double theta_high = context.config.get_double("simulate.theta_max", 0.95);
  if (theta_low > theta_high)
    throw ValidationError("simulate.theta_min must not exceed simulate.theta_max");
  const long bank_size = context.config.get_long("simulate.bank_size", 488);
  const double a_true = context.config.get_double("simulate.a_true", 8.0);
  const auto seed = static_cast<std::uint64_t>(context.config.get_long("seed", 0));
  EvalConfig cfg = eval_config(context.config);

  ItemBank bank = make_synthetic_bank(static_cast<int>(bank_size), seed);

  std::vector<double> true_thetas;
  for (long i = 0; i < examinee_count; ++i)
    true_thetas.push_back(examinee_count == 1
                              ? theta_low
                              : theta_low + (theta_high - theta_low) *
                                                static_cast<double>(i) /
                                                static_cast<double>(examinee_count - 1));

  std::vector<std::vector<std::string>> rows;
  std::vector<double> estimates;
  double administration_sum = 0.0;
  for (long i = 0; i < examinee_count; ++i) {
    SyntheticExaminee examinee;
    examinee.true_theta = true_thetas[static_cast<std::size_t>(i)];
    examinee.seed = seed + 0x9e3779b97f4a7c15ull * static_cast<std::uint64_t>(i + 1);
    for (const ItemParams& item : bank.items)
      examinee.true_params[item.theorem_id] = {a_true, item.difficulty};
    auto backend = synthetic_backend(std::move(examinee));

    EvalReport report = run_adaptive(*backend, bank, cfg);
    estimates.push_back(report.final_theta);
    administration_sum += report.administrations;
    rows.push_back({format_double(true_thetas[static_cast<std::size_t>(i)]),
                    format_double(report.final_theta),
                    std::to_string(report.administrations), std::to_string(report.rounds),
                    report.converged ? "1" : "0"});
  }
  write_csv(context.out / "recovery.csv",
            "theta_star,theta_hat,administrations,rounds,converged", rows);

  nlohmann::ordered_json doc;
  doc["examinees"] = examinee_count;
  doc["bank_size"] = bank_size;
  doc["mean_administrations"] =
      administration_sum / static_cast<double>(examinee_count);
  if (examinee_count >= 2) {
    bool ties = false;
    const double tau = kendall_tau(true_thetas, estimates, &ties);
    doc["kendall_tau"] = tau;
    doc["ties"] = ties;
    context.say("recovery.csv: " + std::to_string(examinee_count) +
                " examinees, kendall tau " + format_fixed(tau, 4));
  } else {
    doc["kendall_tau"] = nullptr;
    doc["note"] = "tau undefined for a single examinee";
    context.say("recovery.csv: 1 examinee, tau undefined");
  }
  std::ofstream out(context.out / "recovery.json");
  if (!out) throw ValidationError("cannot write recovery.json");
  out << doc.dump(2) << '\n';
  return kExitOk;
}

int cmd_analyze(CommandContext& context) {
  std::optional<ItemBank> bank;
  if (context.config.has("paths.bank"))
    bank = load_bank(context.config.require_string("paths.bank"));
  std::optional<Corpus> corpus;
  if (context.config.has("paths.corpus"))
    corpus = load_corpus(context.config.require_string("paths.corpus"));
  std::optional<ResponseMatrix> matrix;
  if (context.config.has("paths.matrix"))
    matrix = load_matrix_any(context.config.require_string("paths.matrix"));

  int produced = 0;

  if (bank && matrix) {
    std::vector<std::string> models;
    if (context.config.has("analyze.models"))
      models = split_list(context.config.require_string("analyze.models"));
    else
      models = matrix->models();
    const std::string subset_name = context.config.get_string("analyze.subset", "all");
    LevelSubset subset;
    if (subset_name == "all") subset = LevelSubset::all;
    else if (subset_name == "MATH") subset = LevelSubset::math;
    else throw ValidationError("analyze.subset must be 'all' or 'MATH'");
    const long pass_n = context.config.get_long("analyze.pass_n", 128);

    LevelPassTable table = level_pass_table(*matrix, *bank, models, subset,
                                            corpus ? &*corpus : nullptr, pass_n);
    std::string header = "model_id";
    for (std::size_t level = 1; level <= table.level_sizes.size(); ++level)
      header += ",level_" + std::to_string(level);
    std::vector<std::vector<std::string>> rows;
    for (std::size_t m = 0; m < table.models.size(); ++m) {
      std::vector<std::string> row{table.models[m]};
      for (double rate : table.rates[m]) row.push_back(format_double(rate));
      rows.push_back(std::move(row));
    }
    std::vector<std::string> average{"average"};
    for (double rate : table.averages) average.push_back(format_double(rate));
    rows.push_back(std::move(average));
    write_csv(context.out / "levels.csv", header, rows);
    context.say("levels.csv written");
    ++produced;
  } else {
    context.say("skipped levels.csv (needs paths.bank and paths.matrix)");
  }

  if (bank && corpus) {
    std::vector<std::vector<std::string>> rows;
    for (const CategoryRow& row : category_summary(*bank, *corpus))
      rows.push_back({row.categorization, row.key, std::to_string(row.count),
                      format_double(row.mean_difficulty),
                      format_double(row.mean_discrimination)});
    write_csv(context.out / "categories.csv",
              "categorization,key,count,mean_difficulty,mean_discrimination", rows);
    context.say("categories.csv written");
    ++produced;
  } else {
    context.say("skipped categories.csv (needs paths.bank and paths.corpus)");
  }

  if (bank) {
    scatter_export(*bank, corpus ? *corpus : Corpus{}, context.out / "scatter.csv");
    context.say("scatter.csv written");
    ++produced;
  } else {
    context.say("skipped scatter.csv (needs paths.bank)");
  }

  if (matrix && context.config.has("paths.abilities")) {
    CsvTable abilities_csv =
        read_csv(context.config.require_string("paths.abilities"), "model_id,ability");
    std::map<std::string, double> ability;
    for (const auto& row : abilities_csv.rows)
      ability[row[0]] = parse_double(row[1], "ability of " + row[0]);
    if (ability.size() < 2) {
      context.say("skipped concordance.json (needs >= 2 models with ability scores)");
    } else {
      std::vector<long> n_values;
      for (const std::string& item :
           split_list(context.config.get_string("analyze.n_values", "128")))
        n_values.push_back(parse_long(item, "analyze.n_values"));
      RankingComparison comparison = ranking_concordance(ability, *matrix, n_values);
      save_concordance_json(comparison, context.out / "concordance.json");
      context.say("concordance.json written");
      ++produced;
    }
  } else {
    context.say("skipped concordance.json (needs paths.matrix and paths.abilities)");
  }

  if (produced == 0) throw ValidationError("no analyze export was producible");
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"adaptive evaluation engine for theorem-prover benchmarks"};
  app.require_subcommand(1);

  GlobalOptions options;
  app.add_option("--config", options.config_path, "key = value configuration file");
  app.add_option("--out", options.out_dir, "output directory (default: paths.out or ./out)");
  app.add_option("--seed", options.seed, "override the configured seed");
  app.add_flag("--quiet", options.quiet, "suppress console summaries");

  CLI::App* ingest = app.add_subcommand("ingest", "validate and normalize attempt records");
  CLI::App* annotate_cmd =
      app.add_subcommand("annotate", "compute difficulty/discrimination and grade levels");
  CLI::App* grade_cmd = app.add_subcommand("grade", "regrade an existing bank");
  CLI::App* evaluate = app.add_subcommand("evaluate", "run the adaptive ability estimate");
  CLI::App* simulate = app.add_subcommand("simulate", "synthetic ability recovery study");
  CLI::App* analyze = app.add_subcommand("analyze", "tables and exports from bank/matrix");
  // let global flags appear after the subcommand too
  for (CLI::App* sub : {ingest, annotate_cmd, grade_cmd, evaluate, simulate, analyze})
    sub->fallthrough();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& error) {
    const int code = app.exit(error, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    CommandContext context = make_context(options, out);
    int (*command)(CommandContext&) = nullptr;
    if (ingest->parsed()) command = cmd_ingest;
    if (annotate_cmd->parsed()) command = cmd_annotate;
    if (grade_cmd->parsed()) command = cmd_grade;
    if (evaluate->parsed()) command = cmd_evaluate;
    if (simulate->parsed()) command = cmd_simulate;
    if (analyze->parsed()) command = cmd_analyze;
    write_run_log(context.out, args);
    return command(context);
  } catch (const BackendError& error) {
    err << "backend error: " << error.what() << '\n';
    return kExitBackend;
  } catch (const ValidationError& error) {
    err << "error: " << error.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& error) {
    err << "error: " << error.what() << '\n';
    return kExitValidation;
  }
}

}  // namespace proofgauge::cli
