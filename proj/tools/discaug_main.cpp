// discaug command-line front end.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "discaug/corpus.hpp"
#include "discaug/error.hpp"
#include "discaug/models.hpp"
#include "discaug/pipeline.hpp"
#include "discaug/segmenter.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitData = 2;
constexpr int kExitCells = 3;

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  for (std::string item; std::getline(in, item, ',');) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void log_epoch(const discaug::EpochReport& r) {
  std::cerr << "epoch " << r.epoch << " loss " << r.mean_loss;
  if (r.dev_accuracy) std::cerr << " dev " << discaug::format_accuracy(*r.dev_accuracy);
  std::cerr << '\n';
}

struct TrainValidatorArgs {
  std::string input, out, dev, embeddings;
  int dim = 64, hidden = 32, attn = 16, epochs = 10, batch = 32;
  std::string attn_score = "ones-sum";
  std::uint64_t seed = 1;
};

int train_validator(const TrainValidatorArgs& a) {
  auto cfg = discaug::TrainConfig::validator();
  cfg.embed_dim = a.dim;
  cfg.hidden = a.hidden;
  cfg.attn_dim = a.attn;
  cfg.attention_score =
      a.attn_score == "context-dot" ? discaug::neural::AttentionScore::ContextDot : discaug::neural::AttentionScore::OnesSum;
  cfg.epochs = a.epochs;
  cfg.batch_size = a.batch;
  cfg.seed = a.seed;
  if (!a.embeddings.empty()) cfg.embeddings_path = a.embeddings;
  cfg.on_epoch = log_epoch;
  cfg.validate();
  const auto data = discaug::load_tsv(a.input);
  std::optional<discaug::Dataset> dev;
  if (!a.dev.empty()) dev = discaug::load_tsv(a.dev);
  const auto model = discaug::train(data, cfg, dev ? &*dev : nullptr);
  model->save(a.out);
  std::cerr << "wrote " << a.out << '\n';
  return kExitOk;
}

struct AugmentArgs {
  std::string input, output, validator, markers;
  bool no_validate = false;
  double min_confidence = 0.0;
};

int augment(const AugmentArgs& a) {
  const auto markers = a.markers.empty() ? discaug::MarkerSet() : discaug::MarkerSet::parse(a.markers);
  discaug::AugmentOptions opts;
  opts.validate = !a.no_validate;
  opts.min_confidence = a.min_confidence;
  std::unique_ptr<discaug::Classifier> validator;
  if (opts.validate) {
    if (a.validator.empty()) throw discaug::ConfigError("--validator is required unless --no-validate is given");
    validator = discaug::load_classifier(std::filesystem::path(a.validator));
  }
  const auto data = discaug::load_tsv(a.input);
  discaug::AugmentReport report;
  const auto out = discaug::augment(data, markers, validator.get(), opts, &report);
  discaug::write_tsv(out, std::filesystem::path(a.output));
  std::cerr << "harvested " << report.harvested << ", kept " << report.kept << " (" << report.kept_counts.positive
            << " positive, " << report.kept_counts.negative << " negative)\n";
  return kExitOk;
}

struct ExperimentArgs {
  std::string pos, neg, name, validator, out, summary, markers;
  std::vector<std::string> tsvs;
  std::string irs = "5", methods = "nb,lr", settings = "os,our+os";
  unsigned seeds = 3, jobs = 1;
  std::uint64_t seed = 1;
  double train_frac = 0.8, min_confidence = 0.0;
  int dim = 0, hidden = 0, validator_hidden = 0, attn = 0, epochs = 0, filters = 0;
  bool quiet = false;
};

int run_experiment(const ExperimentArgs& a) {
  discaug::ExperimentConfig cfg;
  if (!a.pos.empty() || !a.neg.empty()) {
    if (a.pos.empty() || a.neg.empty()) throw discaug::ConfigError("--pos and --neg must be given together");
    discaug::DatasetSource src;
    src.name = a.name.empty() ? std::filesystem::path(a.pos).stem().string() : a.name;
    src.pos = a.pos;
    src.neg = a.neg;
    cfg.sources.push_back(src);
  }
  for (const auto& t : a.tsvs) {
    discaug::DatasetSource src;
    src.name = std::filesystem::path(t).stem().string();
    src.tsv = t;
    cfg.sources.push_back(src);
  }
  if (cfg.sources.empty()) throw discaug::ConfigError("no dataset given (use --pos/--neg or --tsv)");
  if (!a.markers.empty()) cfg.markers = discaug::MarkerSet::parse(a.markers);
  cfg.irs.clear();
  for (const auto& s : split_csv(a.irs)) {
    try {
      const long v = std::stol(s);
      if (v < 1) throw std::out_of_range(s);
      cfg.irs.push_back(static_cast<unsigned>(v));
    } catch (const std::logic_error&) {
      throw discaug::ConfigError("invalid imbalanced ratio '" + s + "'");
    }
  }
  cfg.methods.clear();
  for (const auto& s : split_csv(a.methods)) cfg.methods.push_back(discaug::parse_classifier_kind(s));
  cfg.settings.clear();
  for (const auto& s : split_csv(a.settings)) cfg.settings.push_back(discaug::parse_setting(s));
  cfg.seeds = a.seeds;
  cfg.base_seed = a.seed;
  cfg.train_fraction = a.train_frac;
  cfg.min_confidence = a.min_confidence;
  cfg.jobs = a.jobs;
  if (!a.validator.empty()) cfg.validator_path = a.validator;

  auto shrink = [&](discaug::TrainConfig& c, int hidden) {
    if (a.dim > 0) c.embed_dim = a.dim;
    if (hidden > 0) c.hidden = hidden;
    if (a.attn > 0) c.attn_dim = a.attn;
    if (a.epochs > 0) c.epochs = a.epochs;
    if (a.filters > 0) c.cnn_filters = a.filters;
  };
  shrink(cfg.validator_config, a.validator_hidden);
  for (auto k : cfg.methods) {
    auto c = discaug::TrainConfig::defaults(k);
    shrink(c, a.hidden);
    cfg.method_configs[k] = c;
  }
  if (!a.quiet) cfg.log = [](const std::string& m) { std::cerr << m << '\n'; };

  const auto table = discaug::run_experiment(cfg);
  if (a.out.empty()) {
    table.write_csv(std::cout);
  } else {
    std::ofstream f(a.out);
    if (!f) throw discaug::ConfigError("cannot write " + a.out);
    table.write_csv(f);
  }
  if (!a.summary.empty()) {
    std::ofstream f(a.summary);
    if (!f) throw discaug::ConfigError("cannot write " + a.summary);
    table.write_summary(f);
  } else if (!a.out.empty()) {
    table.write_summary(std::cout);
  }
  if (const auto n = table.error_count()) {
    std::cerr << n << " cell(s) failed\n";
    for (const auto& r : table.rows()) {
      if (!r.accuracy) std::cerr << "  " << r.dataset << " ir=" << r.ir << ' ' << discaug::to_string(r.method) << ' '
                                 << discaug::to_string(r.setting) << " seed " << r.seed << ": " << r.error << '\n';
    }
    return kExitCells;
  }
  return kExitOk;
}

struct EvaluateArgs {
  std::string model, test;
};

int evaluate(const EvaluateArgs& a) {
  const auto model = discaug::load_classifier(std::filesystem::path(a.model));
  const auto test = discaug::load_tsv(a.test);
  std::cout << discaug::format_accuracy(discaug::evaluate(*model, test)) << '\n';
  return kExitOk;
}

struct TrainArgs {
  std::string input, out, method = "nb", dev;
  std::uint64_t seed = 1;
  int epochs = 0;
};

int train(const TrainArgs& a) {
  auto cfg = discaug::TrainConfig::defaults(discaug::parse_classifier_kind(a.method));
  cfg.seed = a.seed;
  if (a.epochs > 0) cfg.epochs = a.epochs;
  cfg.on_epoch = log_epoch;
  cfg.validate();
  const auto data = discaug::load_tsv(a.input);
  std::optional<discaug::Dataset> dev;
  if (!a.dev.empty()) dev = discaug::load_tsv(a.dev);
  discaug::train(data, cfg, dev ? &*dev : nullptr)->save(a.out);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discourse-marker augmentation for imbalanced sentiment classification"};
  app.require_subcommand(1);

  TrainValidatorArgs tv;
  auto* c_tv = app.add_subcommand("train-validator", "Train the attention-BiLSTM validator");
  c_tv->add_option("--input", tv.input, "Training TSV")->required()->check(CLI::ExistingFile);
  c_tv->add_option("--dev", tv.dev, "Dev TSV for best-epoch selection")->check(CLI::ExistingFile);
  c_tv->add_option("--out", tv.out, "Checkpoint path")->required();
  c_tv->add_option("--embeddings", tv.embeddings, "Pre-trained embeddings (text format)");
  c_tv->add_option("--dim", tv.dim)->capture_default_str();
  c_tv->add_option("--hidden", tv.hidden)->capture_default_str();
  c_tv->add_option("--attn", tv.attn)->capture_default_str();
  c_tv->add_option("--attn-score", tv.attn_score, "Attention score form")
      ->check(CLI::IsMember({"ones-sum", "context-dot"}))
      ->capture_default_str();
  c_tv->add_option("--epochs", tv.epochs)->capture_default_str();
  c_tv->add_option("--batch", tv.batch)->capture_default_str();
  c_tv->add_option("--seed", tv.seed)->capture_default_str();

  AugmentArgs au;
  auto* c_au = app.add_subcommand("augment", "Harvest, validate and append augmented samples");
  c_au->add_option("--input", au.input, "Training TSV")->required()->check(CLI::ExistingFile);
  c_au->add_option("--output", au.output, "Augmented TSV")->required();
  c_au->add_option("--validator", au.validator, "Validator checkpoint");
  c_au->add_option("--markers", au.markers, "Comma-separated marker list");
  c_au->add_flag("--no-validate", au.no_validate, "Keep every candidate");
  c_au->add_option("--min-confidence", au.min_confidence)->check(CLI::Range(0.0, 1.0));

  ExperimentArgs ex;
  auto* c_ex = app.add_subcommand("run-experiment", "Run the IR x method x setting x seed grid");
  c_ex->add_option("--pos", ex.pos, "Positive sentences, one per line")->check(CLI::ExistingFile);
  c_ex->add_option("--neg", ex.neg, "Negative sentences, one per line")->check(CLI::ExistingFile);
  c_ex->add_option("--name", ex.name, "Dataset name for --pos/--neg");
  c_ex->add_option("--tsv", ex.tsvs, "Labelled TSV dataset (repeatable)")->check(CLI::ExistingFile);
  c_ex->add_option("--ir", ex.irs, "Comma-separated imbalanced ratios")->capture_default_str();
  c_ex->add_option("--methods", ex.methods, "nb,lr,cnn,rnn")->capture_default_str();
  c_ex->add_option("--settings", ex.settings, "os,our+os,wo-val")->capture_default_str();
  c_ex->add_option("--seeds", ex.seeds, "Replicates")->capture_default_str()->check(CLI::PositiveNumber);
  c_ex->add_option("--seed", ex.seed, "Base seed")->capture_default_str();
  c_ex->add_option("--train-frac", ex.train_frac)->capture_default_str();
  c_ex->add_option("--min-confidence", ex.min_confidence)->check(CLI::Range(0.0, 1.0));
  c_ex->add_option("--markers", ex.markers, "Comma-separated marker list");
  c_ex->add_option("--validator", ex.validator, "Shared validator checkpoint")->check(CLI::ExistingFile);
  c_ex->add_option("--out", ex.out, "CSV path (stdout when omitted)");
  c_ex->add_option("--summary", ex.summary, "Pivot table path");
  c_ex->add_option("--jobs", ex.jobs)->capture_default_str()->check(CLI::PositiveNumber);
  c_ex->add_option("--dim", ex.dim, "Override embedding size");
  c_ex->add_option("--hidden", ex.hidden, "Override classifier hidden size");
  c_ex->add_option("--validator-hidden", ex.validator_hidden, "Override validator hidden size");
  c_ex->add_option("--attn", ex.attn, "Override attention size");
  c_ex->add_option("--epochs", ex.epochs, "Override neural epochs");
  c_ex->add_option("--filters", ex.filters, "Override CNN filters per width");
  c_ex->add_flag("--quiet", ex.quiet);

  EvaluateArgs ev;
  auto* c_ev = app.add_subcommand("evaluate", "Accuracy of a checkpoint on a labelled TSV");
  c_ev->add_option("--model", ev.model)->required()->check(CLI::ExistingFile);
  c_ev->add_option("--test", ev.test)->required()->check(CLI::ExistingFile);

  TrainArgs tr;
  auto* c_tr = app.add_subcommand("train", "Train a single classifier");
  c_tr->add_option("--input", tr.input)->required()->check(CLI::ExistingFile);
  c_tr->add_option("--out", tr.out)->required();
  c_tr->add_option("--method", tr.method)->capture_default_str();
  c_tr->add_option("--dev", tr.dev)->check(CLI::ExistingFile);
  c_tr->add_option("--seed", tr.seed)->capture_default_str();
  c_tr->add_option("--epochs", tr.epochs);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (c_tv->parsed()) return train_validator(tv);
    if (c_au->parsed()) return augment(au);
    if (c_ex->parsed()) return run_experiment(ex);
    if (c_ev->parsed()) return evaluate(ev);
    if (c_tr->parsed()) return train(tr);
  } catch (const discaug::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const discaug::DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitConfig;
}
