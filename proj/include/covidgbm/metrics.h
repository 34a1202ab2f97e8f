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

#ifndef COVIDGBM_METRICS_H_
#define COVIDGBM_METRICS_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace covidgbm {

// Parallel score/label columns. Scores must be finite.
class ScoredLabels {
 public:
  ScoredLabels(std::vector<double> scores, std::vector<bool> labels);

  std::span<const double> scores() const { return scores_; }
  const std::vector<bool>& labels() const { return labels_; }
  std::size_t size() const { return scores_.size(); }
  std::uint64_t n_positive() const { return n_positive_; }
  std::uint64_t n_negative() const { return size() - n_positive_; }

 private:
  std::vector<double> scores_;
  std::vector<bool> labels_;
  std::uint64_t n_positive_ = 0;
};

// Records grouped by distinct score, highest score first. Every curve and
// area below is a function of these counts alone.
struct TieGroups {
  std::vector<double> thresholds;  // Strictly descending.
  std::vector<std::uint64_t> positives;
  std::vector<std::uint64_t> negatives;

  static TieGroups from(const ScoredLabels& sl);
  std::uint64_t total_positive() const;
  std::uint64_t total_negative() const;
};

// Mann-Whitney statistic: over all (positive, negative) pairs, the mean of
// 1 (positive scored higher), 1/2 (tie) or 0. Needs both classes.
double auroc(const ScoredLabels& sl);
double auroc(const TieGroups& groups);

// Step-wise average precision: sum over distinct thresholds (descending) of
// recall increase times precision. Needs at least one positive.
double average_precision(const ScoredLabels& sl);
double average_precision(const TieGroups& groups);

// Confusion counts and derived rates for the rule score >= threshold.
// A rate whose denominator is zero is std::nullopt ("undefined").
struct ThresholdReport {
  double threshold = 0.0;
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t tn = 0;
  std::uint64_t fn = 0;
  std::optional<double> accuracy;
  std::optional<double> sensitivity;
  std::optional<double> specificity;
  std::optional<double> ppv;
  std::optional<double> npv;
  std::optional<double> fnr;
  std::optional<double> fpr;
  std::optional<double> fdr;

  static ThresholdReport from_counts(double threshold, std::uint64_t tp,
                                     std::uint64_t fp, std::uint64_t tn,
                                     std::uint64_t fn);
};

ThresholdReport threshold_report(const ScoredLabels& sl, double threshold);

// One report per distinct score, thresholds descending.
std::vector<ThresholdReport> threshold_table(const ScoredLabels& sl);

struct RocPoint {
  double fpr;
  double tpr;
  double threshold;  // +infinity for the (0, 0) origin.
};

struct PrPoint {
  double recall;
  double precision;
  double threshold;
};

// (0, 0) followed by one point per distinct score, descending; the last
// point is (1, 1). Needs both classes.
std::vector<RocPoint> roc_curve(const ScoredLabels& sl);
std::vector<RocPoint> roc_curve(const TieGroups& groups);

// One point per distinct score, descending; recall is nondecreasing along
// the curve. Needs at least one positive.
std::vector<PrPoint> pr_curve(const ScoredLabels& sl);

double trapezoid_area(std::span<const RocPoint> curve);

// TPR of the piecewise-linear ROC curve at `fpr`; on a vertical run the
// highest TPR is taken.
double tpr_at_fpr(std::span<const RocPoint> curve, double fpr);

enum class Metric { kAuroc, kAuprc };

struct BootstrapOptions {
  int n_resamples = 1000;
  double alpha = 0.05;
  std::uint64_t seed = 0;
  int num_threads = 1;
};

struct BootstrapCI {
  double point = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  int n_resamples = 0;
  int n_failed = 0;  // Resamples that stayed single-class after all retries.
  double alpha = 0.0;
  std::uint64_t seed = 0;
};

// Percentile bootstrap over paired (score, label) resamples. Resample r uses
// its own stream derive_seed(seed, r); single-class draws are redrawn up to
// 100 times and then dropped. lo/hi are the alpha/2 and 1 - alpha/2
// inverse-empirical-CDF quantiles, so both are values some resample
// attained.
BootstrapCI bootstrap_ci(Metric metric, const ScoredLabels& sl,
                         const BootstrapOptions& options);

struct RocBand {
  std::vector<double> fpr;     // Grid, 0 to 1 inclusive.
  std::vector<double> tpr;     // Original sample.
  std::vector<double> tpr_lo;
  std::vector<double> tpr_hi;
};

// Pointwise percentile band of TPR at a fixed FPR grid, from the same
// resampling scheme as bootstrap_ci().
RocBand bootstrap_roc_band(const ScoredLabels& sl,
                           const BootstrapOptions& options,
                           int grid_points = 101);

// Highest threshold whose sensitivity reaches `target`.
ThresholdReport threshold_for_sensitivity(const ScoredLabels& sl,
                                          double target);
// Lowest threshold whose specificity reaches `target`.
ThresholdReport threshold_for_specificity(const ScoredLabels& sl,
                                          double target);

}  // namespace covidgbm

#endif  // COVIDGBM_METRICS_H_
