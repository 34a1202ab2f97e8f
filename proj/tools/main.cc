/*
 * Copyright 2026 The covidgbm Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// covidgbm command-line tool: synthesize or ingest data, train, predict,
// explain, evaluate, simulate reporting bias and plot.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "cli_io.h"
#include "covidgbm/dataset.h"
#include "covidgbm/error.h"
#include "covidgbm/format.h"
#include "covidgbm/gbm.h"
#include "covidgbm/metrics.h"
#include "covidgbm/model_io.h"
#include "covidgbm/plots.h"
#include "covidgbm/random.h"
#include "covidgbm/shap.h"
#include "covidgbm/cohort_table.h"

namespace covidgbm::cli {
namespace {

namespace fs = std::filesystem;

constexpr int kExitParse = 2;
constexpr int kExitContract = 3;
constexpr int kExitIo = 4;

int default_threads() {
  const unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : static_cast<int>(n);
}

fs::path with_suffix(const fs::path& path, const std::string& suffix) {
  return fs::path(path.string() + suffix);
}

std::string dataset_csv(const Dataset& ds) {
  std::ostringstream out;
  write_csv(ds, out);
  return out.str();
}

std::string short_real(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%g", value);
  return buffer;
}

constexpr const char* kReportColumns =
    "threshold,tp,fp,tn,fn,accuracy,sensitivity,specificity,ppv,npv,fnr,fpr,"
    "fdr";

std::string report_cells(const ThresholdReport& r) {
  return format_real(r.threshold) + "," + std::to_string(r.tp) + "," +
         std::to_string(r.fp) + "," + std::to_string(r.tn) + "," +
         std::to_string(r.fn) + "," + format_real(r.accuracy) + "," +
         format_real(r.sensitivity) + "," + format_real(r.specificity) + "," +
         format_real(r.ppv) + "," + format_real(r.npv) + "," +
         format_real(r.fnr) + "," + format_real(r.fpr) + "," +
         format_real(r.fdr);
}

// ---------------------------------------------------------------------------

struct SynthArgs {
  fs::path out;
  std::uint64_t n_pos = 0;
  std::uint64_t n_neg = 0;
  std::uint64_t seed = 0;
  fs::path marginals;
};

void run_synth(const SynthArgs& a, const CLI::App& sub) {
  RunManifest manifest("synth", sub);
  manifest.set_seed(a.seed);
  MarginalTable m = bundled_cohort_table().marginals();
  if (!a.marginals.empty()) {
    m = load_marginals_file(a.marginals);
    manifest.add_input(a.marginals);
  }
  const Dataset ds = synthesize(m, a.n_pos, a.n_neg, a.seed);
  write_verified(a.out, dataset_csv(ds));
  manifest.add_output(a.out);
  manifest.write(with_suffix(a.out, ".manifest.json"));
}

struct SplitArgs {
  fs::path data;
  fs::path out_train;
  fs::path out_test;
  double test_fraction = 0.2;
  std::uint64_t seed = 0;
  bool stratified = false;
};

void run_split(const SplitArgs& a, const CLI::App& sub) {
  RunManifest manifest("split", sub);
  manifest.set_seed(a.seed);
  const Dataset ds = load_csv_file(a.data);
  manifest.add_input(a.data);
  const SplitResult parts = split(ds, a.test_fraction, a.seed, a.stratified);
  write_verified(a.out_train, dataset_csv(parts.train));
  write_verified(a.out_test, dataset_csv(parts.test));
  manifest.add_output(a.out_train);
  manifest.add_output(a.out_test);
  manifest.write(with_suffix(a.out_train, ".manifest.json"));
}

struct TrainArgs {
  fs::path data;
  fs::path out_model;
  fs::path loss_out;
  TrainConfig config;
};

void run_train(const TrainArgs& a, const CLI::App& sub) {
  RunManifest manifest("train", sub);
  manifest.set_seed(a.config.seed);
  const Dataset ds = load_csv_file(a.data);
  manifest.add_input(a.data);
  std::vector<double> losses;
  const Model model = fit(ds, a.config, a.loss_out.empty() ? nullptr : &losses);
  const std::string document = save_model(model);
  write_verified(a.out_model, document);
  // The written document must load back into the same predictor.
  const Model reloaded = load_model(document);
  for (int p = 0; p < kNumPatterns; ++p) {
    const auto x = FeatureVector::from_bits(static_cast<std::uint8_t>(p));
    if (predict_raw(reloaded, x) != predict_raw(model, x)) {
      throw IoError("model document does not reproduce the trained model");
    }
  }
  manifest.add_output(a.out_model);
  if (!a.loss_out.empty()) {
    std::string csv = "round,train_log_loss\n";
    for (std::size_t i = 0; i < losses.size(); ++i) {
      csv += std::to_string(i) + "," + format_real(losses[i]) + "\n";
    }
    write_verified(a.loss_out, csv);
    manifest.add_output(a.loss_out);
  }
  manifest.write(with_suffix(a.out_model, ".manifest.json"));
}

struct PredictArgs {
  fs::path model;
  fs::path data;
  fs::path out;
};

void run_predict(const PredictArgs& a, const CLI::App& sub) {
  RunManifest manifest("predict", sub);
  const Model model = load_model_file(a.model);
  const Dataset ds = load_csv_file(a.data, LabelColumn::kOptional);
  manifest.add_input(a.model);
  manifest.add_input(a.data);
  std::string csv = "record_index,score\n";
  for (std::size_t i = 0; i < ds.size(); ++i) {
    csv += std::to_string(i) + "," +
           format_real(predict_proba(model, ds[i].features)) + "\n";
  }
  write_verified(a.out, csv);
  manifest.add_output(a.out);
  manifest.write(with_suffix(a.out, ".manifest.json"));
}

struct ExplainArgs {
  fs::path model;
  fs::path data;
  fs::path out;
  std::size_t max_records = 0;
  int threads = 1;
};

void run_explain(const ExplainArgs& a, const CLI::App& sub) {
  RunManifest manifest("explain", sub);
  const Model model = load_model_file(a.model);
  Dataset ds = load_csv_file(a.data, LabelColumn::kOptional);
  manifest.add_input(a.model);
  manifest.add_input(a.data);
  if (a.max_records > 0 && a.max_records < ds.size()) {
    std::vector<Record> head(ds.records().begin(),
                             ds.records().begin() +
                                 static_cast<std::ptrdiff_t>(a.max_records));
    ds = Dataset(std::move(head), ds.provenance(), ds.labeled());
  }
  const auto explanations = explain_dataset(model, ds, a.threads);
  std::string csv = "record_index,feature,feature_value,shap_value,base_value\n";
  for (std::size_t i = 0; i < explanations.size(); ++i) {
    const ShapExplanation& e = explanations[i];
    const std::string index = std::to_string(i);
    const std::string base = format_real(e.base_value);
    for (int f = 0; f < kNumFeatures; ++f) {
      csv += index;
      csv += ',';
      csv += FeatureSchema::name(f);
      csv += e.record[f] ? ",1," : ",0,";
      csv += format_real(e.contributions[f]);
      csv += ',';
      csv += base;
      csv += '\n';
    }
  }
  write_verified(a.out, csv);
  manifest.add_output(a.out);
  manifest.write(with_suffix(a.out, ".manifest.json"));
}

struct EvaluateArgs {
  fs::path model;
  fs::path data;
  std::string out_prefix;
  int bootstrap = 1000;
  double alpha = 0.05;
  std::uint64_t seed = 0;
  int threads = 1;
  int band_points = 101;
  std::vector<double> sensitivity_targets = {0.873, 0.8576};
  std::vector<double> specificity_targets = {0.7918, 0.7198};
};

void run_evaluate(const EvaluateArgs& a, const CLI::App& sub) {
  RunManifest manifest("evaluate", sub);
  manifest.set_seed(a.seed);
  if (a.bootstrap != 0 && a.bootstrap < 100) {
    throw ContractError("--bootstrap must be 0 or >= 100");
  }
  const Model model = load_model_file(a.model);
  const Dataset ds = load_csv_file(a.data, LabelColumn::kRequired);
  manifest.add_input(a.model);
  manifest.add_input(a.data);

  std::vector<double> scores;
  std::vector<bool> labels;
  scores.reserve(ds.size());
  labels.reserve(ds.size());
  for (const Record& r : ds.records()) {
    scores.push_back(predict_proba(model, r.features));
    labels.push_back(r.label);
  }
  const ScoredLabels sl(std::move(scores), std::move(labels));
  if (sl.n_positive() == 0 || sl.n_negative() == 0) {
    throw ContractError("degenerate class balance: evaluation needs both classes");
  }
  auto out = [&](const std::string& suffix) {
    const fs::path path = a.out_prefix + suffix;
    manifest.add_output(path);
    return path;
  };

  std::string table = std::string(kReportColumns) + "\n";
  for (const ThresholdReport& r : threshold_table(sl)) {
    table += report_cells(r) + "\n";
  }
  write_verified(out("_thresholds.csv"), table);

  std::string roc = "threshold,fpr,tpr\n";
  for (const RocPoint& p : roc_curve(sl)) {
    roc += format_real(p.threshold) + "," + format_real(p.fpr) + "," +
           format_real(p.tpr) + "\n";
  }
  write_verified(out("_roc.csv"), roc);

  std::string pr = "threshold,recall,precision\n";
  for (const PrPoint& p : pr_curve(sl)) {
    pr += format_real(p.threshold) + "," + format_real(p.recall) + "," +
          format_real(p.precision) + "\n";
  }
  write_verified(out("_pr.csv"), pr);

  std::string summary = "metric,point,lo,hi\n";
  if (a.bootstrap > 0) {
    const BootstrapOptions options{a.bootstrap, a.alpha, a.seed, a.threads};
    for (const auto& [name, metric] :
         {std::pair{"auroc", Metric::kAuroc}, std::pair{"auprc", Metric::kAuprc}}) {
      const BootstrapCI ci = bootstrap_ci(metric, sl, options);
      summary += std::string(name) + "," + format_real(ci.point) + "," +
                 format_real(ci.lo) + "," + format_real(ci.hi) + "\n";
    }
    const RocBand band = bootstrap_roc_band(sl, options, a.band_points);
    std::string band_csv = "fpr,tpr,tpr_lo,tpr_hi\n";
    for (std::size_t k = 0; k < band.fpr.size(); ++k) {
      band_csv += format_real(band.fpr[k]) + "," + format_real(band.tpr[k]) +
                  "," + format_real(band.tpr_lo[k]) + "," +
                  format_real(band.tpr_hi[k]) + "\n";
    }
    write_verified(out("_roc_band.csv"), band_csv);
  } else {
    summary += "auroc," + format_real(auroc(sl)) + ",,\n";
    summary += "auprc," + format_real(average_precision(sl)) + ",,\n";
  }
  write_verified(out("_summary.csv"), summary);

  std::string points = std::string("target_kind,target,") + kReportColumns + "\n";
  auto add_point = [&](const char* kind, double target, auto lookup) {
    points += std::string(kind) + "," + format_real(target) + ",";
    try {
      points += report_cells(lookup(sl, target)) + "\n";
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kContract) throw;
      points += ",,,,,,,,,,,,\n";  // Unreachable target.
    }
  };
  for (const double t : a.sensitivity_targets) {
    add_point("sensitivity", t, threshold_for_sensitivity);
  }
  for (const double t : a.specificity_targets) {
    add_point("specificity", t, threshold_for_specificity);
  }
  write_verified(out("_operating_points.csv"), points);

  manifest.write(a.out_prefix + "_manifest.json");
}

struct SimulateBiasArgs {
  fs::path data;
  std::vector<double> fractions = {0.25, 0.5, 0.75};
  std::uint64_t seed = 0;
  fs::path out_dir;
};

void run_simulate_bias(const SimulateBiasArgs& a, const CLI::App& sub) {
  RunManifest manifest("simulate-bias", sub);
  manifest.set_seed(a.seed);
  const Dataset input = load_csv_file(a.data);
  manifest.add_input(a.data);
  std::set<double> unique(a.fractions.begin(), a.fractions.end());
  if (unique.size() != a.fractions.size()) {
    throw ContractError("--fractions contains duplicates");
  }

  std::string header = "dataset,drop_fraction,n_records,n_asymptomatic_negative";
  for (int f = 0; f < kNumFeatures; ++f) {
    header += ",";
    header += FeatureSchema::name(f);
  }
  std::string rates = header + "\n";
  auto add_row = [&](const std::string& name, const std::string& fraction,
                     const Dataset& ds) {
    rates += name + "," + fraction + "," + std::to_string(ds.size()) + "," +
             std::to_string(count_asymptomatic_negative(ds));
    for (int f = 0; f < kNumFeatures; ++f) {
      rates += ",";
      try {
        rates += format_real(reporter_positive_rate(ds, static_cast<Feature>(f)));
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::kContract) throw;  // Never reported.
      }
    }
    rates += "\n";
  };
  add_row("input", "", input);

  for (std::size_t i = 0; i < a.fractions.size(); ++i) {
    const double fraction = a.fractions[i];
    const Dataset simulated =
        simulate_bias(input, {fraction, derive_seed(a.seed, i)});
    const std::string name = "sim_drop_" + short_real(fraction) + ".csv";
    const fs::path path = a.out_dir / name;
    write_verified(path, dataset_csv(simulated));
    manifest.add_output(path);
    add_row(name, format_real(fraction), simulated);
  }
  const fs::path rates_path = a.out_dir / "reporter_rates.csv";
  write_verified(rates_path, rates);
  manifest.add_output(rates_path);
  manifest.write(a.out_dir / "manifest.json");
}

struct PlotArgs {
  std::string kind;
  fs::path in;
  fs::path band;
  fs::path out;
  std::uint64_t seed = 0;
  bool seed_given = false;
};

void run_plot(const PlotArgs& a, const CLI::App& sub) {
  RunManifest manifest("plot", sub);
  manifest.add_input(a.in);
  std::string svg;
  if (a.kind == "roc" || a.kind == "pr") {
    const bool roc = a.kind == "roc";
    const std::vector<XY> points = roc ? read_roc_csv(a.in) : read_pr_csv(a.in);
    std::optional<CurveBand> band;
    if (!a.band.empty()) {
      if (!roc) throw ParseError("--band applies to ROC plots only");
      band = read_band_csv(a.band);
      manifest.add_input(a.band);
    }
    double area = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      const double prev_x = i == 0 ? 0.0 : points[i - 1].x;
      const double prev_y = i == 0 ? points[i].y : points[i - 1].y;
      area += roc ? (points[i].x - prev_x) * (points[i].y + prev_y) * 0.5
                  : (points[i].x - prev_x) * points[i].y;
    }
    char title[96];
    std::snprintf(title, sizeof(title), roc ? "ROC curve (auROC = %.3f)"
                                            : "Precision-recall curve (auPRC = %.3f)",
                  area);
    svg = render_curve_svg(roc ? CurveKind::kRoc : CurveKind::kPr, points,
                           band, title);
  } else if (a.kind == "beeswarm") {
    if (!a.seed_given) throw ParseError("beeswarm plots require --seed");
    manifest.set_seed(a.seed);
    svg = render_beeswarm_svg(read_shap_csv(a.in), a.seed);
  } else {
    throw ParseError("unknown plot kind '" + a.kind + "'");
  }
  write_verified(a.out, svg);
  manifest.add_output(a.out);
  manifest.write(with_suffix(a.out, ".manifest.json"));
}

CLI::App* add_command(CLI::App& app, const std::string& name,
                      const std::string& description) {
  CLI::App* sub = app.add_subcommand(name, description);
  sub->add_option("--config",
                  "Read key=value option values from a file; flags win");
  return sub;
}

bool is_given(const std::vector<std::string>& args, std::size_t from,
              const std::string& flag) {
  for (std::size_t i = from; i < args.size(); ++i) {
    if (args[i] == flag || args[i].rfind(flag + "=", 0) == 0) return true;
  }
  return false;
}

// Splices the key=value lines of a subcommand's --config file into the
// argument list. Options present on the command line keep their values.
std::vector<std::string> expand_config(int argc, char** argv, CLI::App& app) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::size_t sub_at = 0;
  CLI::App* sub = nullptr;
  for (; sub_at < args.size() && sub == nullptr; ++sub_at) {
    sub = app.get_subcommand_no_throw(args[sub_at]);
  }
  if (sub == nullptr) return args;

  std::string config_path;
  for (std::size_t i = sub_at; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      config_path = args[i + 1];
    } else if (args[i].rfind("--config=", 0) == 0) {
      config_path = args[i].substr(9);
    }
  }
  if (config_path.empty()) return args;

  std::ifstream in(config_path);
  if (!in) throw IoError("cannot open config file '" + config_path + "'");
  std::vector<std::string> extra;
  for (const CLI::ConfigItem& item : CLI::ConfigINI().from_config(in)) {
    if (item.name == "++" || item.name == "--") continue;
    if (!item.parents.empty() &&
        !(item.parents.size() == 1 && item.parents[0] == sub->get_name())) {
      continue;
    }
    std::string name = item.name;
    std::replace(name.begin(), name.end(), '_', '-');
    const std::string flag = "--" + name;
    const CLI::Option* option = sub->get_option_no_throw(flag);
    if (option == nullptr || name == "config" || name == "help") {
      throw ParseError("config file '" + config_path + "': unknown key '" +
                       item.name + "'");
    }
    if (is_given(args, sub_at, flag)) continue;
    if (option->get_expected_min() == 0) {
      const std::string value = item.inputs.empty() ? "true" : item.inputs[0];
      if (value == "true" || value == "1" || value == "on" || value == "yes") {
        extra.push_back(flag);
      }
      continue;
    }
    extra.push_back(flag);
    extra.insert(extra.end(), item.inputs.begin(), item.inputs.end());
  }
  args.insert(args.end(), extra.begin(), extra.end());
  return args;
}

int report_error(const Error& e) {
  std::cerr << "error: " << e.what() << "\n";
  switch (e.kind()) {
    case ErrorKind::kParse:
      return kExitParse;
    case ErrorKind::kContract:
      return kExitContract;
    case ErrorKind::kIo:
      return kExitIo;
  }
  return 1;
}

}  // namespace

int main_impl(int argc, char** argv) {
  CLI::App app{"Gradient-boosted tree diagnostics for binary symptom data"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  SynthArgs synth;
  CLI::App* synth_cmd = add_command(app, "synth", "Synthesize a dataset from class-conditional marginals");
  synth_cmd->add_option("--out", synth.out, "Output dataset CSV")->required();
  synth_cmd->add_option("--n-pos", synth.n_pos, "Number of positive records")->required();
  synth_cmd->add_option("--n-neg", synth.n_neg, "Number of negative records")->required();
  synth_cmd->add_option("--seed", synth.seed, "Random seed")->required();
  synth_cmd->add_option("--marginals", synth.marginals,
                        "Cohort-table or rates CSV (default: bundled cohort table)");

  SplitArgs split_args;
  CLI::App* split_cmd = add_command(app, "split", "Split a dataset into train and test parts");
  split_cmd->add_option("--data", split_args.data, "Input dataset CSV")->required();
  split_cmd->add_option("--out-train", split_args.out_train, "Train part CSV")->required();
  split_cmd->add_option("--out-test", split_args.out_test, "Test part CSV")->required();
  split_cmd->add_option("--test-fraction", split_args.test_fraction, "Test share in (0,1)")
      ->capture_default_str();
  split_cmd->add_option("--seed", split_args.seed, "Random seed")->required();
  split_cmd->add_flag("--stratified", split_args.stratified, "Preserve class prevalence");

  TrainArgs train;
  CLI::App* train_cmd = add_command(app, "train", "Train a boosted tree model");
  train_cmd->add_option("--data", train.data, "Training dataset CSV")->required();
  train_cmd->add_option("--out-model", train.out_model, "Output model JSON")->required();
  train_cmd->add_option("--num-rounds", train.config.num_rounds)->capture_default_str();
  train_cmd->add_option("--learning-rate", train.config.learning_rate)->capture_default_str();
  train_cmd->add_option("--max-leaves", train.config.max_leaves)->capture_default_str();
  train_cmd->add_option("--min-samples-leaf", train.config.min_samples_leaf)->capture_default_str();
  train_cmd->add_option("--l2-lambda", train.config.l2_lambda)->capture_default_str();
  train_cmd->add_option("--min-split-gain", train.config.min_split_gain)->capture_default_str();
  train_cmd->add_option("--seed", train.config.seed, "Recorded in the model")->capture_default_str();
  train_cmd->add_option("--loss-out", train.loss_out, "Optional per-round training log-loss CSV");

  PredictArgs predict;
  CLI::App* predict_cmd = add_command(app, "predict", "Score records with a model");
  predict_cmd->add_option("--model", predict.model, "Model JSON")->required();
  predict_cmd->add_option("--data", predict.data, "Dataset CSV (label optional)")->required();
  predict_cmd->add_option("--out", predict.out, "Output scores CSV")->required();

  ExplainArgs explain_args;
  explain_args.threads = default_threads();
  CLI::App* explain_cmd = add_command(app, "explain", "Per-record SHAP attributions");
  explain_cmd->add_option("--model", explain_args.model, "Model JSON")->required();
  explain_cmd->add_option("--data", explain_args.data, "Dataset CSV (label optional)")->required();
  explain_cmd->add_option("--out", explain_args.out, "Output SHAP CSV")->required();
  explain_cmd->add_option("--max-records", explain_args.max_records,
                          "Explain only the first N records (0 = all)")
      ->capture_default_str();
  explain_cmd->add_option("--threads", explain_args.threads)->capture_default_str();

  EvaluateArgs evaluate;
  evaluate.threads = default_threads();
  CLI::App* evaluate_cmd = add_command(app, "evaluate", "ROC/PR evaluation with bootstrap CIs");
  evaluate_cmd->add_option("--model", evaluate.model, "Model JSON")->required();
  evaluate_cmd->add_option("--data", evaluate.data, "Labeled dataset CSV")->required();
  evaluate_cmd->add_option("--out-prefix", evaluate.out_prefix, "Prefix for report files")->required();
  evaluate_cmd->add_option("--bootstrap", evaluate.bootstrap, "Resamples (0 disables CIs)")
      ->capture_default_str();
  evaluate_cmd->add_option("--alpha", evaluate.alpha, "Two-sided CI level")->capture_default_str();
  evaluate_cmd->add_option("--seed", evaluate.seed, "Bootstrap seed")->required();
  evaluate_cmd->add_option("--threads", evaluate.threads)->capture_default_str();
  evaluate_cmd->add_option("--band-points", evaluate.band_points, "ROC band FPR grid size")
      ->capture_default_str();
  evaluate_cmd->add_option("--sensitivity-targets", evaluate.sensitivity_targets)
      ->delimiter(',')
      ->capture_default_str();
  evaluate_cmd->add_option("--specificity-targets", evaluate.specificity_targets)
      ->delimiter(',')
      ->capture_default_str();

  SimulateBiasArgs bias;
  CLI::App* bias_cmd = add_command(app, "simulate-bias",
                                   "Drop asymptomatic negative records at several rates");
  bias_cmd->add_option("--data", bias.data, "Input dataset CSV")->required();
  bias_cmd->add_option("--fractions", bias.fractions, "Drop fractions")
      ->delimiter(',')
      ->capture_default_str();
  bias_cmd->add_option("--seed", bias.seed, "Random seed")->required();
  bias_cmd->add_option("--out-dir", bias.out_dir, "Output directory")->required();

  PlotArgs plot;
  CLI::App* plot_cmd = add_command(app, "plot", "Render an SVG chart");
  plot_cmd->add_option("--kind", plot.kind, "roc, pr or beeswarm")->required();
  plot_cmd->add_option("--in", plot.in, "Curve CSV (roc/pr) or SHAP CSV (beeswarm)")->required();
  plot_cmd->add_option("--band", plot.band, "ROC band CSV from evaluate");
  plot_cmd->add_option("--out", plot.out, "Output SVG")->required();
  CLI::Option* plot_seed = plot_cmd->add_option("--seed", plot.seed, "Jitter seed (beeswarm)");

  std::vector<std::string> args;
  try {
    args = expand_config(argc, argv, app);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const Error& e) {
    return report_error(e);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitParse;
  }

  try {
    if (synth_cmd->parsed()) run_synth(synth, *synth_cmd);
    if (split_cmd->parsed()) run_split(split_args, *split_cmd);
    if (train_cmd->parsed()) run_train(train, *train_cmd);
    if (predict_cmd->parsed()) run_predict(predict, *predict_cmd);
    if (explain_cmd->parsed()) run_explain(explain_args, *explain_cmd);
    if (evaluate_cmd->parsed()) run_evaluate(evaluate, *evaluate_cmd);
    if (bias_cmd->parsed()) run_simulate_bias(bias, *bias_cmd);
    if (plot_cmd->parsed()) {
      plot.seed_given = plot_seed->count() > 0;
      run_plot(plot, *plot_cmd);
    }
  } catch (const Error& e) {
    return report_error(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace covidgbm::cli

int main(int argc, char** argv) { return covidgbm::cli::main_impl(argc, argv); }
