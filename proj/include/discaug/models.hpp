#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "discaug/corpus.hpp"
#include "discaug/neural/attention.hpp"
#include "discaug/neural/checkpoint.hpp"
#include "discaug/neural/network.hpp"
#include "discaug/text.hpp"

namespace discaug {

enum class ClassifierKind : std::uint8_t { NaiveBayes, LogisticRegression, Cnn, Rnn };

std::string_view to_string(ClassifierKind k) noexcept;
/// Accepts nb, lr, cnn, rnn (case-insensitive).
ClassifierKind parse_classifier_kind(std::string_view name);

struct EpochReport {
  int epoch = 0;
  double mean_loss = 0.0;
  std::optional<double> dev_accuracy;
};

struct TrainConfig {
  ClassifierKind kind = ClassifierKind::NaiveBayes;
  std::uint64_t seed = 1;
  int min_freq = 1;

  // CNN / RNN
  int embed_dim = 64;
  int hidden = 256;
  int attn_dim = 16;
  int epochs = 10;
  int batch_size = 32;
  double learning_rate = 1e-3;
  double dropout = 0.0;
  double max_grad_norm = 5.0;
  std::vector<int> cnn_widths{3, 4, 5};
  int cnn_filters = 100;
  neural::AttentionScore attention_score = neural::AttentionScore::OnesSum;
  std::optional<std::filesystem::path> embeddings_path;

  // Naive Bayes / logistic regression
  double nb_alpha = 1.0;
  double lr_lambda = 1.0;
  int lr_max_iter = 500;
  double lr_tolerance = 1e-6;

  std::function<void(const EpochReport&)> on_epoch;

  /// Per-kind defaults: CNN gets dropout 0.5; RNN a 256-unit BiLSTM.
  static TrainConfig defaults(ClassifierKind kind);
  /// The attention-BiLSTM validator: 32 hidden units.
  static TrainConfig validator();

  /// Throws ConfigError on out-of-range values.
  void validate() const;
};

struct Prediction {
  Label label = Label::Negative;
  double confidence = 0.5;
};

/// Picks the larger class probability; an exact tie goes to Negative.
Prediction decide(const std::array<double, 2>& posterior);

/// A trained, immutable binary sentiment classifier.
class Classifier {
 public:
  virtual ~Classifier() = default;

  virtual ClassifierKind kind() const noexcept = 0;
  /// {P(negative), P(positive)}.
  virtual std::array<double, 2> posterior(std::span<const std::string> tokens) const = 0;
  virtual neural::Checkpoint to_checkpoint() const = 0;

  const Vocabulary& vocab() const noexcept { return vocab_; }

  /// Throws DataError on an empty token sequence.
  Prediction predict(std::span<const std::string> tokens) const;
  Prediction predict(const Sample& s) const { return predict(s.tokens); }

  void save(const std::filesystem::path& path) const { to_checkpoint().save(path); }

 protected:
  explicit Classifier(Vocabulary vocab) : vocab_(std::move(vocab)) {}

  Vocabulary vocab_;
};

/// Multinomial naive Bayes over term counts (punctuation tokens excluded)
/// with Laplace smoothing.
class NaiveBayes final : public Classifier {
 public:
  static NaiveBayes fit(const Dataset& d, double alpha = 1.0, int min_freq = 1);
  static NaiveBayes from_checkpoint(const neural::Checkpoint& ck);

  ClassifierKind kind() const noexcept override { return ClassifierKind::NaiveBayes; }
  std::array<double, 2> posterior(std::span<const std::string> tokens) const override;
  neural::Checkpoint to_checkpoint() const override;

  /// P(token | label); 0 for tokens outside the vocabulary.
  double likelihood(std::string_view token, Label label) const;
  double prior(Label label) const;

 private:
  NaiveBayes(Vocabulary v, Eigen::MatrixXd log_likelihood, std::array<double, 2> log_prior, double alpha);

  Eigen::MatrixXd log_likelihood_;  // 2 x V, reserved columns unused
  std::array<double, 2> log_prior_;
  double alpha_;
};

/// L2-regularized logistic regression over term counts (punctuation excluded), fitted by
/// truncated Newton-CG on summed log-loss + lambda/2 |w|^2 (bias unregularized).
class LogisticRegression final : public Classifier {
 public:
  static LogisticRegression fit(const Dataset& d, double lambda = 1.0, int max_iter = 500, double tolerance = 1e-6,
                                int min_freq = 1);
  static LogisticRegression from_checkpoint(const neural::Checkpoint& ck);

  ClassifierKind kind() const noexcept override { return ClassifierKind::LogisticRegression; }
  std::array<double, 2> posterior(std::span<const std::string> tokens) const override;
  neural::Checkpoint to_checkpoint() const override;

  const Eigen::VectorXd& weights() const noexcept { return weights_; }
  double bias() const noexcept { return bias_; }
  int iterations() const noexcept { return iterations_; }
  double final_gradient_norm() const noexcept { return final_grad_norm_; }

 private:
  LogisticRegression(Vocabulary v, Eigen::VectorXd w, double b, double lambda);

  Eigen::VectorXd weights_;  // indexed by vocabulary id, reserved entries zero
  double bias_;
  double lambda_;
  int iterations_ = 0;
  double final_grad_norm_ = 0.0;
};

/// CNN or attention-BiLSTM classifier over token ids.
class NeuralClassifier final : public Classifier {
 public:
  NeuralClassifier(ClassifierKind kind, Vocabulary vocab, std::unique_ptr<neural::Network> net);
  static NeuralClassifier from_checkpoint(const neural::Checkpoint& ck);

  ClassifierKind kind() const noexcept override { return kind_; }
  std::array<double, 2> posterior(std::span<const std::string> tokens) const override;
  neural::Checkpoint to_checkpoint() const override;

  const neural::Network& network() const noexcept { return *net_; }

 private:
  ClassifierKind kind_;
  std::unique_ptr<neural::Network> net_;
};

/// Trains the configured classifier on d (vocabulary built from d). When a
/// dev set is given, neural models keep the parameters of the best dev epoch.
std::unique_ptr<Classifier> train(const Dataset& d, const TrainConfig& cfg, const Dataset* dev = nullptr);

std::unique_ptr<Classifier> load_classifier(const neural::Checkpoint& ck);
std::unique_ptr<Classifier> load_classifier(const std::filesystem::path& path);

/// Fraction of correctly predicted samples. Throws DataError on an empty set.
double evaluate(const Classifier& m, const Dataset& test);

/// Accuracy with four decimals, e.g. "0.7500".
std::string format_accuracy(double accuracy);

}  // namespace discaug
