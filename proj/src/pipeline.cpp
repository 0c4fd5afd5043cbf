#include "discaug/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>

#include "discaug/error.hpp"
#include "discaug/rng.hpp"

namespace discaug {

namespace {

std::atomic<std::uint64_t> g_harvest_calls{0};
std::atomic<std::uint64_t> g_validator_predictions{0};

}  // namespace

Instrumentation instrumentation_snapshot() {
  return {g_harvest_calls.load(), g_validator_predictions.load()};
}

std::string_view to_string(Setting s) noexcept {
  switch (s) {
    case Setting::Os: return "os";
    case Setting::OurOs: return "our+os";
    case Setting::WoVal: return "wo-val";
  }
  return "?";
}

Setting parse_setting(std::string_view name) {
  if (name == "os") return Setting::Os;
  if (name == "our+os") return Setting::OurOs;
  if (name == "wo-val" || name == "wo/val" || name == "our-only") return Setting::WoVal;
  throw ConfigError("unknown setting '" + std::string(name) + "' (expected os, our+os or wo-val)");
}

std::vector<Candidate> validate_filter(const std::vector<Candidate>& candidates, const Classifier& validator,
                                       double min_confidence) {
  std::vector<Candidate> kept;
  for (const auto& c : candidates) {
    g_validator_predictions.fetch_add(1, std::memory_order_relaxed);
    const Prediction p = validator.predict(c.tokens);
    if (p.label == c.proposed_label && p.confidence >= min_confidence) kept.push_back(c);
  }
  return kept;
}

Dataset augment(const Dataset& train, const MarkerSet& markers, const Classifier* validator,
                const AugmentOptions& options, AugmentReport* report) {
  if (train.empty()) throw DataError("augment: empty training set");
  if (options.validate && validator == nullptr) throw ConfigError("augment: validation requested without a validator");
  g_harvest_calls.fetch_add(1, std::memory_order_relaxed);
  const auto candidates = harvest(train, markers, options.min_discourse_len);
  const auto kept = options.validate ? validate_filter(candidates, *validator, options.min_confidence) : candidates;
  Dataset out = train;
  for (const auto& c : kept) out.add_with_fresh_id(c.tokens, c.proposed_label);
  if (report) {
    report->harvested = candidates.size();
    report->kept = kept.size();
    report->kept_counts = ClassCounts{};
    for (const auto& c : kept) (c.proposed_label == Label::Positive ? report->kept_counts.positive
                                                                     : report->kept_counts.negative)++;
  }
  return out;
}

std::unique_ptr<Classifier> rebalance_and_train(const Dataset& data, const TrainConfig& cfg, std::uint64_t seed) {
  const Dataset balanced = oversample(data, seed);
  TrainConfig c = cfg;
  c.seed = splitmix64(seed ^ 0x7a11);
  return train(balanced, c);
}

std::unique_ptr<Classifier> run_setting(Setting setting, const Dataset& imbalanced, const MarkerSet& markers,
                                        const Classifier* validator, const TrainConfig& cfg, std::uint64_t seed,
                                        const AugmentOptions& options) {
  if (setting == Setting::Os) return rebalance_and_train(imbalanced, cfg, seed);
  AugmentOptions opts = options;
  opts.validate = setting == Setting::OurOs;
  return rebalance_and_train(augment(imbalanced, markers, validator, opts), cfg, seed);
}

std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::string_view> parts) {
  std::uint64_t h = fnv1a(std::to_string(base));
  for (auto p : parts) {
    h = fnv1a("|", h);
    h = fnv1a(p, h);
  }
  return splitmix64(h);
}

Dataset DatasetSource::load() const {
  if (is_pair()) return load_pair(pos, neg, name);
  return load_tsv(tsv, name);
}

void ExperimentConfig::validate() const {
  if (irs.empty() || methods.empty() || settings.empty()) {
    throw ConfigError("IR, method and setting lists must be non-empty");
  }
  if (seeds < 1) throw ConfigError("at least one seed replicate is required");
  for (auto ir : irs) {
    if (ir < 1) throw ConfigError("imbalanced ratio must be >= 1");
  }
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) throw ConfigError("train fraction must lie in (0, 1)");
  if (min_confidence < 0.0 || min_confidence > 1.0) throw ConfigError("min confidence must lie in [0, 1]");
  validator_config.validate();
  for (auto k : methods) config_for(k).validate();
}

TrainConfig ExperimentConfig::config_for(ClassifierKind kind) const {
  if (auto it = method_configs.find(kind); it != method_configs.end()) {
    TrainConfig c = it->second;
    c.kind = kind;
    return c;
  }
  return TrainConfig::defaults(kind);
}

namespace {

template <typename Fn>
void parallel_for(std::size_t count, unsigned jobs, Fn&& fn) {
  if (jobs <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> workers;
  const auto n = std::min<std::size_t>(jobs, count);
  for (std::size_t w = 0; w < n; ++w) {
    workers.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
    });
  }
  for (auto& t : workers) t.join();
}

std::string error_text(const std::exception_ptr& ep) {
  try {
    std::rethrow_exception(ep);
  } catch (const std::exception& e) {
    return e.what();
  } catch (...) {
    return "unknown error";
  }
}

// Split plus validator for one (dataset, replicate).
struct Replicate {
  std::size_t dataset = 0;
  std::uint64_t seed = 0;
  Dataset train, test;
  std::shared_ptr<const Classifier> validator;
  std::string error;
};

// Imbalanced training set and its augmentations for one (dataset, replicate, IR).
struct Prepared {
  std::size_t replicate = 0;
  unsigned ir = 0;
  Dataset imbalanced;
  std::optional<Dataset> with_validator;
  std::optional<Dataset> without_validator;
  std::string error;
};

std::string format_fraction(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

}  // namespace

ResultTable run_experiment(const ExperimentConfig& cfg, const std::vector<Dataset>& datasets) {
  cfg.validate();
  if (datasets.empty()) throw ConfigError("no datasets to run");
  auto log = [&](const std::string& msg) {
    if (cfg.log) cfg.log(msg);
  };
  const bool needs_validator =
      std::find(cfg.settings.begin(), cfg.settings.end(), Setting::OurOs) != cfg.settings.end();
  const bool needs_augment = std::any_of(cfg.settings.begin(), cfg.settings.end(),
                                         [](Setting s) { return s != Setting::Os; });

  std::shared_ptr<const Classifier> shared_validator = cfg.validator;
  if (!shared_validator && cfg.validator_path && needs_validator) {
    shared_validator = load_classifier(*cfg.validator_path);
  }

  // Phase 1: split and (if needed) train a validator per (dataset, replicate).
  std::vector<Replicate> reps;
  for (std::size_t d = 0; d < datasets.size(); ++d) {
    for (unsigned r = 0; r < cfg.seeds; ++r) reps.push_back(Replicate{d, cfg.base_seed + r, {}, {}, {}, {}});
  }
  parallel_for(reps.size(), cfg.jobs, [&](std::size_t i) {
    auto& rep = reps[i];
    const auto& ds = datasets[rep.dataset];
    try {
      std::tie(rep.train, rep.test) =
          split(ds, SplitSpec{cfg.train_fraction, derive_seed(rep.seed, {ds.name(), "split"})});
      if (needs_validator) {
        if (shared_validator) {
          rep.validator = shared_validator;
        } else {
          TrainConfig vc = cfg.validator_config;
          vc.seed = derive_seed(rep.seed, {ds.name(), "validator"});
          log("training validator for " + ds.name() + " seed " + std::to_string(rep.seed));
          rep.validator = train(rep.train, vc);
        }
      }
    } catch (...) {
      rep.error = error_text(std::current_exception());
    }
  });

  // Phase 2: imbalance and augment per (dataset, replicate, IR).
  std::vector<Prepared> prep;
  for (std::size_t r = 0; r < reps.size(); ++r) {
    for (auto ir : cfg.irs) prep.push_back(Prepared{r, ir, {}, {}, {}, {}});
  }
  parallel_for(prep.size(), cfg.jobs, [&](std::size_t i) {
    auto& p = prep[i];
    const auto& rep = reps[p.replicate];
    if (!rep.error.empty()) {
      p.error = rep.error;
      return;
    }
    const auto& name = datasets[rep.dataset].name();
    try {
      p.imbalanced = make_imbalanced(rep.train, p.ir, derive_seed(rep.seed, {name, "imbalance", std::to_string(p.ir)}));
      if (needs_augment) {
        AugmentOptions opts;
        opts.min_confidence = cfg.min_confidence;
        AugmentReport report;
        if (needs_validator) {
          p.with_validator = augment(p.imbalanced, cfg.markers, rep.validator.get(), opts, &report);
          log(name + " ir=" + std::to_string(p.ir) + " seed " + std::to_string(rep.seed) + ": kept " +
              std::to_string(report.kept) + "/" + std::to_string(report.harvested) + " candidates");
        }
        if (std::find(cfg.settings.begin(), cfg.settings.end(), Setting::WoVal) != cfg.settings.end()) {
          opts.validate = false;
          p.without_validator = augment(p.imbalanced, cfg.markers, nullptr, opts);
        }
      }
    } catch (...) {
      p.error = error_text(std::current_exception());
    }
  });

  // Phase 3: one cell per (prepared set, method, setting), emitted in
  // dataset, IR, method, setting, seed order.
  struct Cell {
    std::size_t prepared;
    ClassifierKind method;
    Setting setting;
  };
  std::vector<Cell> cells;
  std::vector<std::size_t> prep_order(prep.size());
  for (std::size_t i = 0; i < prep.size(); ++i) prep_order[i] = i;
  std::stable_sort(prep_order.begin(), prep_order.end(), [&](std::size_t a, std::size_t b) {
    const auto& ra = reps[prep[a].replicate];
    const auto& rb = reps[prep[b].replicate];
    if (ra.dataset != rb.dataset) return ra.dataset < rb.dataset;
    const auto ia = std::find(cfg.irs.begin(), cfg.irs.end(), prep[a].ir) - cfg.irs.begin();
    const auto ib = std::find(cfg.irs.begin(), cfg.irs.end(), prep[b].ir) - cfg.irs.begin();
    return ia < ib;
  });
  // Group seeds innermost: for each (dataset, IR) block, iterate methods and
  // settings, then replicates.
  for (std::size_t start = 0; start < prep_order.size();) {
    std::size_t stop = start;
    const auto& first = prep[prep_order[start]];
    while (stop < prep_order.size() && prep[prep_order[stop]].ir == first.ir &&
           reps[prep[prep_order[stop]].replicate].dataset == reps[first.replicate].dataset) {
      ++stop;
    }
    for (auto m : cfg.methods) {
      for (auto s : cfg.settings) {
        for (std::size_t k = start; k < stop; ++k) cells.push_back(Cell{prep_order[k], m, s});
      }
    }
    start = stop;
  }

  std::vector<ResultRow> rows(cells.size());
  parallel_for(cells.size(), cfg.jobs, [&](std::size_t i) {
    const auto& cell = cells[i];
    const auto& p = prep[cell.prepared];
    const auto& rep = reps[p.replicate];
    const auto& name = datasets[rep.dataset].name();
    ResultRow& row = rows[i];
    row.dataset = name;
    row.ir = p.ir;
    row.method = cell.method;
    row.setting = cell.setting;
    row.seed = rep.seed;
    if (!p.error.empty()) {
      row.error = p.error;
      return;
    }
    try {
      const Dataset& data = cell.setting == Setting::Os      ? p.imbalanced
                            : cell.setting == Setting::OurOs ? *p.with_validator
                                                             : *p.without_validator;
      const auto seed = derive_seed(rep.seed, {name, std::to_string(p.ir), to_string(cell.method),
                                               to_string(cell.setting)});
      const auto model = rebalance_and_train(data, cfg.config_for(cell.method), seed);
      row.accuracy = evaluate(*model, rep.test);
      log(name + " ir=" + std::to_string(p.ir) + " " + std::string(to_string(cell.method)) + " " +
          std::string(to_string(cell.setting)) + " seed " + std::to_string(rep.seed) + ": " +
          format_accuracy(*row.accuracy));
    } catch (...) {
      row.error = error_text(std::current_exception());
      log("cell failed: " + row.error);
    }
  });
  return ResultTable(std::move(rows));
}

ResultTable run_experiment(const ExperimentConfig& cfg) {
  if (cfg.sources.empty()) throw ConfigError("no dataset sources configured");
  std::vector<Dataset> datasets;
  for (const auto& src : cfg.sources) datasets.push_back(src.load());
  return run_experiment(cfg, datasets);
}

std::size_t ResultTable::error_count() const {
  return static_cast<std::size_t>(
      std::count_if(rows_.begin(), rows_.end(), [](const ResultRow& r) { return !r.accuracy.has_value(); }));
}

std::vector<AggregateRow> ResultTable::aggregates() const {
  std::vector<AggregateRow> out;
  auto same_group = [](const ResultRow& a, const AggregateRow& g) {
    return a.dataset == g.dataset && a.ir == g.ir && a.method == g.method && a.setting == g.setting;
  };
  for (const auto& r : rows_) {
    const bool seen = std::any_of(out.begin(), out.end(), [&](const AggregateRow& g) { return same_group(r, g); });
    if (!seen) out.push_back(AggregateRow{r.dataset, r.ir, r.method, r.setting, std::nullopt, std::nullopt});
  }
  for (auto& g : out) {
    double acc_sum = 0.0, imp_sum = 0.0;
    std::size_t acc_n = 0, imp_n = 0;
    for (const auto& r : rows_) {
      if (!same_group(r, g) || !r.accuracy) continue;
      acc_sum += *r.accuracy;
      ++acc_n;
      if (g.setting == Setting::Os) continue;
      for (const auto& b : rows_) {
        if (b.dataset == r.dataset && b.ir == r.ir && b.method == r.method && b.setting == Setting::Os &&
            b.seed == r.seed && b.accuracy) {
          imp_sum += *r.accuracy - *b.accuracy;
          ++imp_n;
        }
      }
    }
    if (acc_n) g.mean_accuracy = acc_sum / static_cast<double>(acc_n);
    if (imp_n) g.mean_improvement = imp_sum / static_cast<double>(imp_n);
  }
  return out;
}

void ResultTable::write_csv(std::ostream& out) const {
  out << "dataset,ir,method,setting,seed,accuracy\n";
  for (const auto& r : rows_) {
    out << csv_field(r.dataset) << ',' << r.ir << ',' << to_string(r.method) << ',' << to_string(r.setting) << ','
        << r.seed << ',' << (r.accuracy ? format_fraction(*r.accuracy) : "ERROR") << '\n';
  }
  out << '\n';
  out << "dataset,ir,method,setting,mean_accuracy,mean_improvement_vs_os\n";
  for (const auto& g : aggregates()) {
    out << csv_field(g.dataset) << ',' << g.ir << ',' << to_string(g.method) << ',' << to_string(g.setting) << ','
        << (g.mean_accuracy ? format_fraction(*g.mean_accuracy) : "ERROR") << ','
        << (g.setting == Setting::Os ? "-" : g.mean_improvement ? format_fraction(*g.mean_improvement) : "NA")
        << '\n';
  }
}

std::string ResultTable::to_csv() const {
  std::ostringstream s;
  write_csv(s);
  return s.str();
}

void ResultTable::write_summary(std::ostream& out) const {
  const auto aggs = aggregates();
  std::vector<std::string> names;
  std::vector<unsigned> irs;
  std::vector<std::pair<ClassifierKind, Setting>> arms;
  for (const auto& g : aggs) {
    if (std::find(names.begin(), names.end(), g.dataset) == names.end()) names.push_back(g.dataset);
    if (std::find(irs.begin(), irs.end(), g.ir) == irs.end()) irs.push_back(g.ir);
    const std::pair arm{g.method, g.setting};
    if (std::find(arms.begin(), arms.end(), arm) == arms.end()) arms.push_back(arm);
  }
  auto find = [&](const std::string& ds, unsigned ir, ClassifierKind m, Setting s) -> const AggregateRow* {
    for (const auto& g : aggs) {
      if (g.dataset == ds && g.ir == ir && g.method == m && g.setting == s) return &g;
    }
    return nullptr;
  };
  auto pct = [](std::optional<double> v) {
    if (!v) return std::string("-");
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", 100.0 * *v);
    return std::string(buf);
  };
  out << std::left << std::setw(6) << "IR" << std::setw(8) << "Method" << std::setw(10) << "Setting";
  for (const auto& n : names) out << std::setw(10) << n;
  out << "Avg improvement\n";
  for (auto ir : irs) {
    for (const auto& [m, s] : arms) {
      out << std::setw(6) << ir << std::setw(8) << to_string(m) << std::setw(10) << to_string(s);
      double imp = 0.0;
      std::size_t n_imp = 0;
      for (const auto& n : names) {
        const auto* g = find(n, ir, m, s);
        out << std::setw(10) << pct(g ? g->mean_accuracy : std::nullopt);
        if (g && g->mean_improvement) {
          imp += *g->mean_improvement;
          ++n_imp;
        }
      }
      out << (n_imp ? pct(imp / static_cast<double>(n_imp)) : std::string("-")) << '\n';
    }
  }
}

}  // namespace discaug
