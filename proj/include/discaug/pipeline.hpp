#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <initializer_list>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "discaug/corpus.hpp"
#include "discaug/models.hpp"
#include "discaug/segmenter.hpp"

namespace discaug {

/// Experimental arms: oversampling only, discourse augmentation + oversampling,
/// and augmentation without the validator filter + oversampling.
enum class Setting : std::uint8_t { Os, OurOs, WoVal };

std::string_view to_string(Setting s) noexcept;
/// Accepts os, our+os, wo-val (also wo/val and our-only).
Setting parse_setting(std::string_view name);

/// Keeps the candidates whose validator prediction equals their proposed
/// label (and whose confidence reaches min_confidence). Order is preserved.
std::vector<Candidate> validate_filter(const std::vector<Candidate>& candidates, const Classifier& validator,
                                       double min_confidence = 0.0);

struct AugmentOptions {
  bool validate = true;
  double min_confidence = 0.0;
  std::size_t min_discourse_len = kDefaultMinDiscourseLen;
};

struct AugmentReport {
  std::size_t harvested = 0;
  std::size_t kept = 0;
  ClassCounts kept_counts;
};

/// train plus the harvested candidates that survive validation, appended in
/// harvest order under fresh ids. validator may be null only when
/// options.validate is false.
Dataset augment(const Dataset& train, const MarkerSet& markers, const Classifier* validator,
                const AugmentOptions& options = {}, AugmentReport* report = nullptr);

/// Oversamples to equal class counts, then trains cfg.kind on the balanced set.
std::unique_ptr<Classifier> rebalance_and_train(const Dataset& data, const TrainConfig& cfg, std::uint64_t seed);

/// The full per-setting pipeline on an imbalanced training set. The os arm
/// never touches the segmenter or the validator.
std::unique_ptr<Classifier> run_setting(Setting setting, const Dataset& imbalanced, const MarkerSet& markers,
                                        const Classifier* validator, const TrainConfig& cfg, std::uint64_t seed,
                                        const AugmentOptions& options = {});

/// Process-wide call counters used to check which code paths an arm exercises.
struct Instrumentation {
  std::uint64_t harvest_calls = 0;
  std::uint64_t validator_predictions = 0;
};
Instrumentation instrumentation_snapshot();

/// Stable seed derived from a base seed and a sequence of labels.
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::string_view> parts);

struct DatasetSource {
  std::string name;
  std::filesystem::path tsv;
  std::filesystem::path pos;
  std::filesystem::path neg;

  bool is_pair() const { return tsv.empty(); }
  Dataset load() const;
};

struct ExperimentConfig {
  std::vector<DatasetSource> sources;
  MarkerSet markers;
  std::vector<unsigned> irs{5};
  std::vector<ClassifierKind> methods{ClassifierKind::NaiveBayes, ClassifierKind::LogisticRegression};
  std::vector<Setting> settings{Setting::Os, Setting::OurOs};
  unsigned seeds = 3;           // replicates; replicate r uses seed base_seed + r
  std::uint64_t base_seed = 1;
  double train_fraction = 0.8;
  double min_confidence = 0.0;

  /// Validator source, in priority order: a preloaded model, a checkpoint
  /// path, else one trained per (dataset, replicate) on the balanced
  /// training split with validator_config.
  std::shared_ptr<const Classifier> validator;
  std::optional<std::filesystem::path> validator_path;
  TrainConfig validator_config = TrainConfig::validator();

  /// Per-method overrides; missing methods use TrainConfig::defaults.
  std::map<ClassifierKind, TrainConfig> method_configs;

  unsigned jobs = 1;
  std::function<void(const std::string&)> log;

  void validate() const;
  TrainConfig config_for(ClassifierKind kind) const;
};

struct ResultRow {
  std::string dataset;
  unsigned ir = 0;
  ClassifierKind method = ClassifierKind::NaiveBayes;
  Setting setting = Setting::Os;
  std::uint64_t seed = 0;
  std::optional<double> accuracy;
  std::string error;
};

struct AggregateRow {
  std::string dataset;
  unsigned ir = 0;
  ClassifierKind method = ClassifierKind::NaiveBayes;
  Setting setting = Setting::Os;
  std::optional<double> mean_accuracy;
  /// Mean over seeds of (accuracy - os accuracy); unset for the os arm or
  /// when no paired baseline exists.
  std::optional<double> mean_improvement;
};

class ResultTable {
 public:
  ResultTable() = default;
  explicit ResultTable(std::vector<ResultRow> rows) : rows_(std::move(rows)) {}

  const std::vector<ResultRow>& rows() const noexcept { return rows_; }
  std::size_t error_count() const;
  std::vector<AggregateRow> aggregates() const;

  /// Per-cell rows, a blank line, then the aggregate section.
  void write_csv(std::ostream& out) const;
  std::string to_csv() const;

  /// Pivot table: per IR, one line per (method, setting)
  /// with a column per dataset (mean accuracy, %) and the average improvement.
  void write_summary(std::ostream& out) const;

 private:
  std::vector<ResultRow> rows_;
};

/// Runs the dataset x IR x method x setting x seed grid on in-memory datasets.
/// Cell failures become error rows; the rest of the grid still runs.
ResultTable run_experiment(const ExperimentConfig& cfg, const std::vector<Dataset>& datasets);
/// Loads cfg.sources and runs the grid.
ResultTable run_experiment(const ExperimentConfig& cfg);

}  // namespace discaug
