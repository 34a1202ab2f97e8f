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

#include "covidgbm/metrics.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "covidgbm/error.h"
#include "covidgbm/parallel.h"
#include "covidgbm/random.h"

namespace covidgbm {
namespace {

constexpr int kMaxResampleAttempts = 100;

std::optional<double> ratio(std::uint64_t num, std::uint64_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

std::optional<double> complement(const std::optional<double>& x) {
  if (!x) return std::nullopt;
  return 1.0 - *x;
}

void require_both_classes(std::uint64_t pos, std::uint64_t neg,
                          const char* op) {
  if (pos == 0 || neg == 0) {
    throw ContractError(std::string(op) +
                        ": single-class input, both classes required");
  }
}

// Group index (into TieGroups order) of every record.
struct GroupedSample {
  TieGroups groups;
  std::vector<std::uint32_t> group_of;
};

GroupedSample group_sample(const ScoredLabels& sl) {
  std::vector<std::uint32_t> order(sl.size());
  std::iota(order.begin(), order.end(), 0u);
  const auto scores = sl.scores();
  std::stable_sort(order.begin(), order.end(),
                   [&](std::uint32_t a, std::uint32_t b) {
                     return scores[a] > scores[b];
                   });
  GroupedSample out;
  out.group_of.resize(sl.size());
  for (const std::uint32_t i : order) {
    if (out.groups.thresholds.empty() ||
        out.groups.thresholds.back() != scores[i]) {
      out.groups.thresholds.push_back(scores[i]);
      out.groups.positives.push_back(0);
      out.groups.negatives.push_back(0);
    }
    const auto g = out.groups.thresholds.size() - 1;
    out.group_of[i] = static_cast<std::uint32_t>(g);
    (sl.labels()[i] ? out.groups.positives : out.groups.negatives)[g] += 1;
  }
  return out;
}

// Draws one paired resample as per-group counts, redrawing single-class
// samples. Returns false when every attempt was single-class.
bool draw_resample(const GroupedSample& base, const ScoredLabels& sl, Rng& rng,
                   TieGroups& out) {
  const std::size_t n = sl.size();
  out.thresholds = base.groups.thresholds;
  for (int attempt = 0; attempt < kMaxResampleAttempts; ++attempt) {
    out.positives.assign(base.groups.thresholds.size(), 0);
    out.negatives.assign(base.groups.thresholds.size(), 0);
    std::uint64_t pos = 0;
    for (std::size_t k = 0; k < n; ++k) {
      const auto i = static_cast<std::size_t>(rng.below(n));
      if (sl.labels()[i]) {
        ++out.positives[base.group_of[i]];
        ++pos;
      } else {
        ++out.negatives[base.group_of[i]];
      }
    }
    if (pos > 0 && pos < n) return true;
  }
  return false;
}

// Inverse empirical CDF: smallest value v with ECDF(v) >= q.
double quantile(const std::vector<double>& sorted, double q) {
  const auto m = static_cast<double>(sorted.size());
  auto rank = static_cast<std::int64_t>(std::ceil(q * m)) - 1;
  rank = std::clamp<std::int64_t>(rank, 0,
                                  static_cast<std::int64_t>(sorted.size()) - 1);
  return sorted[static_cast<std::size_t>(rank)];
}

void validate_options(const BootstrapOptions& options) {
  if (options.n_resamples < 100) {
    throw ContractError("bootstrap: n_resamples must be >= 100");
  }
  if (!(options.alpha > 0.0 && options.alpha < 1.0)) {
    throw ContractError("bootstrap: alpha must be in (0,1)");
  }
}

void validate_target(double target) {
  if (!(target > 0.0 && target <= 1.0)) {
    throw ContractError("operating point target must be in (0,1]");
  }
}

}  // namespace

ScoredLabels::ScoredLabels(std::vector<double> scores, std::vector<bool> labels)
    : scores_(std::move(scores)), labels_(std::move(labels)) {
  if (scores_.size() != labels_.size()) {
    throw ContractError("scores and labels differ in length");
  }
  if (scores_.empty()) throw ContractError("no scored records");
  for (const double s : scores_) {
    if (!std::isfinite(s)) throw ContractError("score is not finite");
  }
  n_positive_ = static_cast<std::uint64_t>(
      std::count(labels_.begin(), labels_.end(), true));
}

TieGroups TieGroups::from(const ScoredLabels& sl) {
  return group_sample(sl).groups;
}

std::uint64_t TieGroups::total_positive() const {
  return std::accumulate(positives.begin(), positives.end(), std::uint64_t{0});
}

std::uint64_t TieGroups::total_negative() const {
  return std::accumulate(negatives.begin(), negatives.end(), std::uint64_t{0});
}

double auroc(const TieGroups& groups) {
  const std::uint64_t pos = groups.total_positive();
  const std::uint64_t neg = groups.total_negative();
  require_both_classes(pos, neg, "auroc");
  // Twice the Mann-Whitney U, accumulated exactly in integers from the
  // lowest score upward.
  std::uint64_t twice_u = 0;
  std::uint64_t negatives_below = 0;
  for (std::size_t g = groups.thresholds.size(); g-- > 0;) {
    twice_u += 2 * groups.positives[g] * negatives_below +
               groups.positives[g] * groups.negatives[g];
    negatives_below += groups.negatives[g];
  }
  return static_cast<double>(twice_u) /
         (2.0 * static_cast<double>(pos) * static_cast<double>(neg));
}

double auroc(const ScoredLabels& sl) { return auroc(TieGroups::from(sl)); }

double average_precision(const TieGroups& groups) {
  const std::uint64_t pos = groups.total_positive();
  if (pos == 0) throw ContractError("auprc: no positive records");
  double ap = 0.0;
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  for (std::size_t g = 0; g < groups.thresholds.size(); ++g) {
    if (groups.positives[g] == 0) {
      fp += groups.negatives[g];
      continue;
    }
    tp += groups.positives[g];
    fp += groups.negatives[g];
    const double recall_step =
        static_cast<double>(groups.positives[g]) / static_cast<double>(pos);
    ap += recall_step * static_cast<double>(tp) / static_cast<double>(tp + fp);
  }
  return ap;
}

double average_precision(const ScoredLabels& sl) {
  return average_precision(TieGroups::from(sl));
}

ThresholdReport ThresholdReport::from_counts(double threshold,
                                             std::uint64_t tp,
                                             std::uint64_t fp,
                                             std::uint64_t tn,
                                             std::uint64_t fn) {
  ThresholdReport r;
  r.threshold = threshold;
  r.tp = tp;
  r.fp = fp;
  r.tn = tn;
  r.fn = fn;
  r.accuracy = ratio(tp + tn, tp + fp + tn + fn);
  r.sensitivity = ratio(tp, tp + fn);
  r.specificity = ratio(tn, tn + fp);
  r.ppv = ratio(tp, tp + fp);
  r.npv = ratio(tn, tn + fn);
  r.fnr = complement(r.sensitivity);
  r.fpr = complement(r.specificity);
  r.fdr = complement(r.ppv);
  return r;
}

ThresholdReport threshold_report(const ScoredLabels& sl, double threshold) {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  const auto scores = sl.scores();
  for (std::size_t i = 0; i < sl.size(); ++i) {
    if (scores[i] >= threshold) (sl.labels()[i] ? tp : fp) += 1;
  }
  return ThresholdReport::from_counts(threshold, tp, fp, sl.n_negative() - fp,
                                      sl.n_positive() - tp);
}

std::vector<ThresholdReport> threshold_table(const ScoredLabels& sl) {
  const TieGroups groups = TieGroups::from(sl);
  const std::uint64_t pos = sl.n_positive();
  const std::uint64_t neg = sl.n_negative();
  std::vector<ThresholdReport> table;
  table.reserve(groups.thresholds.size());
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  for (std::size_t g = 0; g < groups.thresholds.size(); ++g) {
    tp += groups.positives[g];
    fp += groups.negatives[g];
    table.push_back(ThresholdReport::from_counts(groups.thresholds[g], tp, fp,
                                                 neg - fp, pos - tp));
  }
  return table;
}

std::vector<RocPoint> roc_curve(const TieGroups& groups) {
  const std::uint64_t pos = groups.total_positive();
  const std::uint64_t neg = groups.total_negative();
  require_both_classes(pos, neg, "roc_curve");
  std::vector<RocPoint> curve;
  curve.reserve(groups.thresholds.size() + 1);
  curve.push_back({0.0, 0.0, std::numeric_limits<double>::infinity()});
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  for (std::size_t g = 0; g < groups.thresholds.size(); ++g) {
    if (groups.positives[g] == 0 && groups.negatives[g] == 0) continue;
    tp += groups.positives[g];
    fp += groups.negatives[g];
    curve.push_back({static_cast<double>(fp) / static_cast<double>(neg),
                     static_cast<double>(tp) / static_cast<double>(pos),
                     groups.thresholds[g]});
  }
  return curve;
}

std::vector<RocPoint> roc_curve(const ScoredLabels& sl) {
  return roc_curve(TieGroups::from(sl));
}

std::vector<PrPoint> pr_curve(const ScoredLabels& sl) {
  const TieGroups groups = TieGroups::from(sl);
  const std::uint64_t pos = groups.total_positive();
  if (pos == 0) throw ContractError("pr_curve: no positive records");
  std::vector<PrPoint> curve;
  curve.reserve(groups.thresholds.size());
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  for (std::size_t g = 0; g < groups.thresholds.size(); ++g) {
    tp += groups.positives[g];
    fp += groups.negatives[g];
    curve.push_back({static_cast<double>(tp) / static_cast<double>(pos),
                     static_cast<double>(tp) / static_cast<double>(tp + fp),
                     groups.thresholds[g]});
  }
  return curve;
}

double trapezoid_area(std::span<const RocPoint> curve) {
  double area = 0.0;
  for (std::size_t i = 1; i < curve.size(); ++i) {
    area += (curve[i].fpr - curve[i - 1].fpr) *
            (curve[i].tpr + curve[i - 1].tpr) * 0.5;
  }
  return area;
}

double tpr_at_fpr(std::span<const RocPoint> curve, double fpr) {
  double best = 0.0;
  bool found = false;
  for (std::size_t i = 0; i < curve.size(); ++i) {
    if (curve[i].fpr == fpr) {
      best = found ? std::max(best, curve[i].tpr) : curve[i].tpr;
      found = true;
    }
  }
  if (found) return best;
  for (std::size_t i = 1; i < curve.size(); ++i) {
    const RocPoint& a = curve[i - 1];
    const RocPoint& b = curve[i];
    if (a.fpr < fpr && fpr < b.fpr) {
      const double t = (fpr - a.fpr) / (b.fpr - a.fpr);
      return a.tpr + t * (b.tpr - a.tpr);
    }
  }
  return curve.empty() ? 0.0 : curve.back().tpr;
}

BootstrapCI bootstrap_ci(Metric metric, const ScoredLabels& sl,
                         const BootstrapOptions& options) {
  validate_options(options);
  const GroupedSample base = group_sample(sl);
  auto evaluate = [metric](const TieGroups& g) {
    return metric == Metric::kAuroc ? auroc(g) : average_precision(g);
  };
  BootstrapCI ci;
  ci.point = evaluate(base.groups);
  ci.n_resamples = options.n_resamples;
  ci.alpha = options.alpha;
  ci.seed = options.seed;

  std::vector<double> values(static_cast<std::size_t>(options.n_resamples));
  std::vector<char> ok(values.size(), 0);
  parallel_for(values.size(), options.num_threads, [&](std::size_t r) {
    Rng rng(derive_seed(options.seed, r));
    TieGroups resample;
    if (draw_resample(base, sl, rng, resample)) {
      values[r] = evaluate(resample);
      ok[r] = 1;
    }
  });

  std::vector<double> sorted;
  sorted.reserve(values.size());
  for (std::size_t r = 0; r < values.size(); ++r) {
    if (ok[r]) sorted.push_back(values[r]);
  }
  ci.n_failed = static_cast<int>(values.size() - sorted.size());
  if (sorted.empty()) {
    throw ContractError("bootstrap: every resample was single-class");
  }
  std::sort(sorted.begin(), sorted.end());
  ci.lo = quantile(sorted, options.alpha / 2.0);
  ci.hi = quantile(sorted, 1.0 - options.alpha / 2.0);
  return ci;
}

RocBand bootstrap_roc_band(const ScoredLabels& sl,
                           const BootstrapOptions& options, int grid_points) {
  validate_options(options);
  if (grid_points < 2) throw ContractError("ROC band needs >= 2 grid points");
  const GroupedSample base = group_sample(sl);
  const auto base_curve = roc_curve(base.groups);

  RocBand band;
  const auto grid = static_cast<std::size_t>(grid_points);
  for (std::size_t k = 0; k < grid; ++k) {
    band.fpr.push_back(static_cast<double>(k) /
                       static_cast<double>(grid - 1));
    band.tpr.push_back(tpr_at_fpr(base_curve, band.fpr.back()));
  }

  const auto n = static_cast<std::size_t>(options.n_resamples);
  std::vector<std::vector<double>> samples(n);
  parallel_for(n, options.num_threads, [&](std::size_t r) {
    Rng rng(derive_seed(options.seed, r));
    TieGroups resample;
    if (!draw_resample(base, sl, rng, resample)) return;
    const auto curve = roc_curve(resample);
    samples[r].reserve(grid);
    for (const double x : band.fpr) samples[r].push_back(tpr_at_fpr(curve, x));
  });

  for (std::size_t k = 0; k < grid; ++k) {
    std::vector<double> column;
    column.reserve(n);
    for (const auto& s : samples) {
      if (!s.empty()) column.push_back(s[k]);
    }
    if (column.empty()) {
      throw ContractError("bootstrap: every resample was single-class");
    }
    std::sort(column.begin(), column.end());
    band.tpr_lo.push_back(quantile(column, options.alpha / 2.0));
    band.tpr_hi.push_back(quantile(column, 1.0 - options.alpha / 2.0));
  }
  return band;
}

ThresholdReport threshold_for_sensitivity(const ScoredLabels& sl,
                                          double target) {
  validate_target(target);
  if (sl.n_positive() == 0) {
    throw ContractError("sensitivity undefined: no positive records");
  }
  for (const ThresholdReport& r : threshold_table(sl)) {
    if (*r.sensitivity >= target) return r;
  }
  throw ContractError("target sensitivity unreachable");
}

ThresholdReport threshold_for_specificity(const ScoredLabels& sl,
                                          double target) {
  validate_target(target);
  if (sl.n_negative() == 0) {
    throw ContractError("specificity undefined: no negative records");
  }
  const auto table = threshold_table(sl);
  for (auto it = table.rbegin(); it != table.rend(); ++it) {
    if (*it->specificity >= target) return *it;
  }
  throw ContractError("target specificity unreachable");
}

}  // namespace covidgbm
