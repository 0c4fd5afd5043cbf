#include "discaug/models.hpp"

#include <Eigen/Sparse>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "discaug/error.hpp"
#include "discaug/neural/adam.hpp"
#include "discaug/neural/attn_bilstm.hpp"
#include "discaug/neural/cnn.hpp"
#include "discaug/rng.hpp"

namespace discaug {

std::string_view to_string(ClassifierKind k) noexcept {
  switch (k) {
    case ClassifierKind::NaiveBayes: return "nb";
    case ClassifierKind::LogisticRegression: return "lr";
    case ClassifierKind::Cnn: return "cnn";
    case ClassifierKind::Rnn: return "rnn";
  }
  return "?";
}

ClassifierKind parse_classifier_kind(std::string_view name) {
  std::string s(name);
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (s == "nb") return ClassifierKind::NaiveBayes;
  if (s == "lr") return ClassifierKind::LogisticRegression;
  if (s == "cnn") return ClassifierKind::Cnn;
  if (s == "rnn") return ClassifierKind::Rnn;
  throw ConfigError("unknown classifier '" + std::string(name) + "' (expected nb, lr, cnn or rnn)");
}

TrainConfig TrainConfig::defaults(ClassifierKind kind) {
  TrainConfig cfg;
  cfg.kind = kind;
  if (kind == ClassifierKind::Cnn) cfg.dropout = 0.5;
  return cfg;
}

TrainConfig TrainConfig::validator() {
  TrainConfig cfg = defaults(ClassifierKind::Rnn);
  cfg.hidden = 32;
  return cfg;
}

void TrainConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw ConfigError(what);
  };
  require(min_freq >= 1, "min_freq must be >= 1");
  require(embed_dim >= 1 && hidden >= 1 && attn_dim >= 1, "embedding, hidden and attention dims must be >= 1");
  require(epochs >= 1 && batch_size >= 1, "epochs and batch size must be >= 1");
  require(learning_rate > 0.0, "learning rate must be positive");
  require(dropout >= 0.0 && dropout < 1.0, "dropout must lie in [0, 1)");
  require(max_grad_norm > 0.0, "max gradient norm must be positive");
  require(!cnn_widths.empty() && cnn_filters >= 1, "CNN needs at least one width and one filter");
  require(std::all_of(cnn_widths.begin(), cnn_widths.end(), [](int w) { return w >= 1; }), "CNN widths must be >= 1");
  require(nb_alpha > 0.0, "naive Bayes alpha must be positive");
  require(lr_lambda >= 0.0 && lr_max_iter >= 1 && lr_tolerance > 0.0, "invalid logistic regression settings");
}

Prediction decide(const std::array<double, 2>& p) {
  return p[1] > p[0] ? Prediction{Label::Positive, p[1]} : Prediction{Label::Negative, p[0]};
}

Prediction Classifier::predict(std::span<const std::string> tokens) const {
  if (tokens.empty()) throw DataError("cannot classify an empty token sequence");
  return decide(posterior(tokens));
}

namespace {

void require_both_classes(const Dataset& d) {
  const auto c = d.class_counts();
  if (c.positive == 0 || c.negative == 0) throw DataError("training data must contain both classes");
}

neural::Checkpoint checkpoint_header(std::string kind, const Vocabulary& v) {
  neural::Checkpoint ck;
  ck.kind = std::move(kind);
  ck.vocab = v.tokens();
  return ck;
}

double scalar_block(const neural::Checkpoint& ck, std::string_view name) {
  const auto& m = ck.block(name);
  if (m.size() != 1) throw DataError("checkpoint block '" + std::string(name) + "' must be 1x1");
  return m(0, 0);
}

double sigmoid(double z) { return z >= 0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z)); }

// Bag-of-words count vector as sorted (index, count) pairs; reserved ids dropped.
using SparseRow = std::vector<std::pair<std::int32_t, double>>;

// Bag-of-words models count terms only; punctuation tokens are not features.
Vocabulary term_vocab(const Dataset& d, int min_freq) {
  std::vector<Sample> terms;
  terms.reserve(d.size());
  for (const auto& s : d) {
    Sample t{{}, s.label, s.id};
    for (const auto& tok : s.tokens) {
      if (!is_punctuation(tok)) t.tokens.push_back(tok);
    }
    terms.push_back(std::move(t));
  }
  return build_vocab(Dataset(d.name(), std::move(terms)), min_freq);
}

SparseRow bag_of_words(std::span<const std::string> tokens, const Vocabulary& v) {
  std::vector<std::int32_t> ids;
  ids.reserve(tokens.size());
  for (const auto& t : tokens) {
    const auto id = v.index(t);
    if (id != Vocabulary::kPad && id != Vocabulary::kUnk) ids.push_back(id);
  }
  std::sort(ids.begin(), ids.end());
  SparseRow row;
  for (auto id : ids) {
    if (!row.empty() && row.back().first == id) {
      row.back().second += 1.0;
    } else {
      row.emplace_back(id, 1.0);
    }
  }
  return row;
}

}  // namespace

// ---------------------------------------------------------------- naive Bayes

NaiveBayes::NaiveBayes(Vocabulary v, Eigen::MatrixXd log_likelihood, std::array<double, 2> log_prior, double alpha)
    : Classifier(std::move(v)), log_likelihood_(std::move(log_likelihood)), log_prior_(log_prior), alpha_(alpha) {}

NaiveBayes NaiveBayes::fit(const Dataset& d, double alpha, int min_freq) {
  require_both_classes(d);
  if (!(alpha > 0.0)) throw ConfigError("naive Bayes alpha must be positive");
  Vocabulary vocab = term_vocab(d, min_freq);
  const auto V = static_cast<Eigen::Index>(vocab.size());
  Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(2, V);
  for (const auto& s : d) {
    const auto c = static_cast<Eigen::Index>(index_of(s.label));
    for (const auto& [id, n] : bag_of_words(s.tokens, vocab)) counts(c, id) += n;
  }
  const double content = static_cast<double>(vocab.content_size());
  Eigen::MatrixXd loglik = Eigen::MatrixXd::Zero(2, V);
  for (Eigen::Index c = 0; c < 2; ++c) {
    const double total = counts.row(c).sum();
    for (Eigen::Index w = 2; w < V; ++w) loglik(c, w) = std::log((counts(c, w) + alpha) / (total + alpha * content));
  }
  const auto cc = d.class_counts();
  const double n = static_cast<double>(cc.total());
  std::array<double, 2> prior{std::log(static_cast<double>(cc.negative) / n),
                              std::log(static_cast<double>(cc.positive) / n)};
  return NaiveBayes(std::move(vocab), std::move(loglik), prior, alpha);
}

std::array<double, 2> NaiveBayes::posterior(std::span<const std::string> tokens) const {
  std::array<double, 2> score = log_prior_;
  for (const auto& t : tokens) {
    const auto id = vocab_.index(t);
    if (id == Vocabulary::kPad || id == Vocabulary::kUnk) continue;
    score[0] += log_likelihood_(0, id);
    score[1] += log_likelihood_(1, id);
  }
  const double m = std::max(score[0], score[1]);
  const double e0 = std::exp(score[0] - m), e1 = std::exp(score[1] - m);
  return {e0 / (e0 + e1), e1 / (e0 + e1)};
}

double NaiveBayes::likelihood(std::string_view token, Label label) const {
  const auto id = vocab_.find(token);
  if (!id || *id < 2) return 0.0;
  return std::exp(log_likelihood_(static_cast<Eigen::Index>(index_of(label)), *id));
}

double NaiveBayes::prior(Label label) const { return std::exp(log_prior_[index_of(label)]); }

neural::Checkpoint NaiveBayes::to_checkpoint() const {
  auto ck = checkpoint_header("nb", vocab_);
  ck.add("nb.alpha", Eigen::MatrixXd::Constant(1, 1, alpha_));
  Eigen::MatrixXd prior(2, 1);
  prior << log_prior_[0], log_prior_[1];
  ck.add("nb.log_prior", prior);
  ck.add("nb.log_likelihood", log_likelihood_);
  return ck;
}

NaiveBayes NaiveBayes::from_checkpoint(const neural::Checkpoint& ck) {
  auto vocab = Vocabulary::from_tokens(ck.vocab);
  const auto& prior = ck.block("nb.log_prior");
  const auto& loglik = ck.block("nb.log_likelihood");
  if (prior.size() != 2 || loglik.rows() != 2 || loglik.cols() != static_cast<Eigen::Index>(vocab.size())) {
    throw DataError("naive Bayes checkpoint has inconsistent shapes");
  }
  return NaiveBayes(std::move(vocab), loglik, {prior(0), prior(1)}, scalar_block(ck, "nb.alpha"));
}

// -------------------------------------------------------- logistic regression

LogisticRegression::LogisticRegression(Vocabulary v, Eigen::VectorXd w, double b, double lambda)
    : Classifier(std::move(v)), weights_(std::move(w)), bias_(b), lambda_(lambda) {}

namespace {

// Summed log-loss + lambda/2 |w|^2 over a sparse design matrix; the bias is
// the last coordinate of theta and is not regularized.
class LogisticObjective {
 public:
  LogisticObjective(Eigen::SparseMatrix<double, Eigen::RowMajor> X, Eigen::VectorXd y, double lambda)
      : X_(std::move(X)), y_(std::move(y)), lambda_(lambda) {}

  Eigen::Index dim() const { return X_.cols() + 1; }

  double value(const Eigen::VectorXd& theta) const {
    const Eigen::VectorXd z = margins(theta);
    double f = 0.0;
    for (Eigen::Index i = 0; i < z.size(); ++i) {
      f += std::max(z(i), 0.0) + std::log1p(std::exp(-std::abs(z(i)))) - y_(i) * z(i);
    }
    return f + 0.5 * lambda_ * theta.head(X_.cols()).squaredNorm();
  }

  // Gradient at theta; caches the curvature weights sigma (1 - sigma).
  Eigen::VectorXd gradient(const Eigen::VectorXd& theta) {
    const Eigen::VectorXd z = margins(theta);
    Eigen::VectorXd r(z.size());
    curvature_.resize(z.size());
    for (Eigen::Index i = 0; i < z.size(); ++i) {
      const double p = sigmoid(z(i));
      r(i) = p - y_(i);
      curvature_(i) = p * (1.0 - p);
    }
    Eigen::VectorXd g(dim());
    g.head(X_.cols()) = X_.transpose() * r + lambda_ * theta.head(X_.cols());
    g(X_.cols()) = r.sum();
    return g;
  }

  // Hessian-vector product at the point of the last gradient() call.
  Eigen::VectorXd hessian_times(const Eigen::VectorXd& v) const {
    const Eigen::VectorXd u = curvature_.cwiseProduct(X_ * v.head(X_.cols()) + Eigen::VectorXd::Constant(X_.rows(), v(X_.cols())));
    Eigen::VectorXd out(dim());
    out.head(X_.cols()) = X_.transpose() * u + lambda_ * v.head(X_.cols());
    out(X_.cols()) = u.sum();
    return out;
  }

 private:
  Eigen::VectorXd margins(const Eigen::VectorXd& theta) const {
    return (X_ * theta.head(X_.cols())).array() + theta(X_.cols());
  }

  Eigen::SparseMatrix<double, Eigen::RowMajor> X_;
  Eigen::VectorXd y_;
  double lambda_;
  Eigen::VectorXd curvature_;
};

// Approximately solves H d = -g by conjugate gradients, stopping at a
// residual relative to |g| (truncated Newton).
Eigen::VectorXd newton_direction(const LogisticObjective& obj, const Eigen::VectorXd& g) {
  const double gnorm = g.norm();
  const double target = std::min(0.5, std::sqrt(gnorm)) * gnorm;
  Eigen::VectorXd d = Eigen::VectorXd::Zero(g.size());
  Eigen::VectorXd r = -g;
  Eigen::VectorXd p = r;
  double rr = r.squaredNorm();
  const int max_cg = static_cast<int>(std::min<Eigen::Index>(g.size(), 250));
  for (int k = 0; k < max_cg && std::sqrt(rr) > target; ++k) {
    const Eigen::VectorXd Hp = obj.hessian_times(p);
    const double curv = p.dot(Hp);
    if (!(curv > 0.0)) break;
    const double alpha = rr / curv;
    d += alpha * p;
    r -= alpha * Hp;
    const double rr_next = r.squaredNorm();
    p = r + (rr_next / rr) * p;
    rr = rr_next;
  }
  return d.isZero(0.0) ? Eigen::VectorXd(-g) : d;
}

}  // namespace

LogisticRegression LogisticRegression::fit(const Dataset& d, double lambda, int max_iter, double tolerance,
                                           int min_freq) {
  require_both_classes(d);
  if (!(lambda > 0.0) || max_iter < 1 || !(tolerance > 0.0)) {
    throw ConfigError("invalid logistic regression settings");
  }
  Vocabulary vocab = term_vocab(d, min_freq);
  const auto V = static_cast<Eigen::Index>(vocab.size());
  std::vector<Eigen::Triplet<double>> entries;
  Eigen::VectorXd y(static_cast<Eigen::Index>(d.size()));
  for (std::size_t i = 0; i < d.size(); ++i) {
    for (const auto& [id, n] : bag_of_words(d[i].tokens, vocab)) entries.emplace_back(static_cast<int>(i), id, n);
    y(static_cast<Eigen::Index>(i)) = d[i].label == Label::Positive ? 1.0 : 0.0;
  }
  Eigen::SparseMatrix<double, Eigen::RowMajor> X(static_cast<Eigen::Index>(d.size()), V);
  X.setFromTriplets(entries.begin(), entries.end());
  LogisticObjective obj(std::move(X), std::move(y), lambda);

  Eigen::VectorXd theta = Eigen::VectorXd::Zero(obj.dim());
  double f = obj.value(theta);
  int it = 0;
  double norm = 0.0;
  for (;; ++it) {
    const Eigen::VectorXd g = obj.gradient(theta);
    norm = g.norm();
    if (!std::isfinite(norm) || !std::isfinite(f)) throw TrainingError("logistic regression diverged", it);
    if (norm < tolerance || it == max_iter) break;
    const Eigen::VectorXd dir = newton_direction(obj, g);
    const double slope = g.dot(dir);
    // Armijo backtracking from the full Newton step, with round-off slack in f.
    const double slack = 1e-14 * std::abs(f);
    double step = 1.0;
    double f_next = obj.value(theta + dir);
    while (!(f_next <= f + 1e-4 * step * slope + slack) && step > 1e-10) {
      step *= 0.5;
      f_next = obj.value(theta + step * dir);
    }
    if (!(f_next <= f + 1e-4 * step * slope + slack)) break;
    theta += step * dir;
    f = f_next;
  }
  LogisticRegression model(std::move(vocab), theta.head(V), theta(V), lambda);
  model.iterations_ = it;
  model.final_grad_norm_ = norm;
  return model;
}

std::array<double, 2> LogisticRegression::posterior(std::span<const std::string> tokens) const {
  double z = bias_;
  for (const auto& [id, x] : bag_of_words(tokens, vocab_)) z += weights_(id) * x;
  const double p1 = sigmoid(z);
  return {1.0 - p1, p1};
}

neural::Checkpoint LogisticRegression::to_checkpoint() const {
  auto ck = checkpoint_header("lr", vocab_);
  ck.add("lr.lambda", Eigen::MatrixXd::Constant(1, 1, lambda_));
  ck.add("lr.bias", Eigen::MatrixXd::Constant(1, 1, bias_));
  ck.add("lr.weights", weights_.transpose());
  return ck;
}

LogisticRegression LogisticRegression::from_checkpoint(const neural::Checkpoint& ck) {
  auto vocab = Vocabulary::from_tokens(ck.vocab);
  const auto& w = ck.block("lr.weights");
  if (w.rows() != 1 || w.cols() != static_cast<Eigen::Index>(vocab.size())) {
    throw DataError("logistic regression checkpoint has inconsistent shapes");
  }
  return LogisticRegression(std::move(vocab), w.row(0).transpose(), scalar_block(ck, "lr.bias"),
                            scalar_block(ck, "lr.lambda"));
}

// ------------------------------------------------------------ neural models

NeuralClassifier::NeuralClassifier(ClassifierKind kind, Vocabulary vocab, std::unique_ptr<neural::Network> net)
    : Classifier(std::move(vocab)), kind_(kind), net_(std::move(net)) {
  if (kind != ClassifierKind::Cnn && kind != ClassifierKind::Rnn) {
    throw ConfigError("NeuralClassifier requires kind cnn or rnn");
  }
}

std::array<double, 2> NeuralClassifier::posterior(std::span<const std::string> tokens) const {
  const auto ids = encode(tokens, vocab_);
  const neural::Vector y = net_->probabilities(ids);
  return {y(0), y(1)};
}

neural::Checkpoint NeuralClassifier::to_checkpoint() const {
  auto ck = checkpoint_header(std::string(to_string(kind_)), vocab_);
  net_->save(ck);
  return ck;
}

NeuralClassifier NeuralClassifier::from_checkpoint(const neural::Checkpoint& ck) {
  auto vocab = Vocabulary::from_tokens(ck.vocab);
  const auto V = static_cast<Eigen::Index>(vocab.size());
  if (ck.kind == "rnn") {
    const auto& settings = ck.block("rnn.settings");
    if (settings.size() != 2) throw DataError("rnn.settings must hold 2 values");
    neural::AttnBiLstmConfig cfg;
    cfg.vocab_size = V;
    cfg.embed_dim = ck.embed_dim;
    cfg.hidden = ck.hidden;
    cfg.attn_dim = ck.attn_dim;
    cfg.score = settings(0) == 1.0 ? neural::AttentionScore::ContextDot : neural::AttentionScore::OnesSum;
    cfg.dropout = settings(1);
    auto net = std::make_unique<neural::AttnBiLstmNet>(cfg);
    net->restore(ck);
    return NeuralClassifier(ClassifierKind::Rnn, std::move(vocab), std::move(net));
  }
  if (ck.kind == "cnn") {
    neural::CnnConfig cfg;
    cfg.vocab_size = V;
    cfg.embed_dim = ck.embed_dim;
    cfg.filters = ck.hidden;
    const auto& widths = ck.block("cnn.widths");
    cfg.widths.clear();
    for (Eigen::Index k = 0; k < widths.size(); ++k) cfg.widths.push_back(static_cast<int>(widths(k)));
    cfg.dropout = scalar_block(ck, "cnn.dropout");
    auto net = std::make_unique<neural::CnnNet>(cfg);
    net->restore(ck);
    return NeuralClassifier(ClassifierKind::Cnn, std::move(vocab), std::move(net));
  }
  throw DataError("checkpoint kind '" + ck.kind + "' is not a neural model");
}

namespace {

struct Encoded {
  std::vector<std::vector<std::int32_t>> ids;
  std::vector<Label> labels;
};

Encoded encode_dataset(const Dataset& d, const Vocabulary& v) {
  Encoded e;
  e.ids.reserve(d.size());
  for (const auto& s : d) {
    if (s.tokens.empty()) throw DataError("training sample " + std::to_string(s.id) + " has no tokens");
    e.ids.push_back(encode(s.tokens, v));
    e.labels.push_back(s.label);
  }
  return e;
}

std::unique_ptr<neural::Network> make_network(const TrainConfig& cfg, Eigen::Index vocab_size) {
  if (cfg.kind == ClassifierKind::Rnn) {
    neural::AttnBiLstmConfig nc;
    nc.vocab_size = vocab_size;
    nc.embed_dim = cfg.embed_dim;
    nc.hidden = cfg.hidden;
    nc.attn_dim = cfg.attn_dim;
    nc.dropout = cfg.dropout;
    nc.score = cfg.attention_score;
    return std::make_unique<neural::AttnBiLstmNet>(nc);
  }
  neural::CnnConfig nc;
  nc.vocab_size = vocab_size;
  nc.embed_dim = cfg.embed_dim;
  nc.widths = cfg.cnn_widths;
  nc.filters = cfg.cnn_filters;
  nc.dropout = cfg.dropout;
  return std::make_unique<neural::CnnNet>(nc);
}

void init_network(neural::Network& net, ClassifierKind kind, Rng& rng) {
  if (kind == ClassifierKind::Rnn) {
    static_cast<neural::AttnBiLstmNet&>(net).init(rng);
  } else {
    static_cast<neural::CnnNet&>(net).init(rng);
  }
}

neural::Param& embedding_of(neural::Network& net, ClassifierKind kind) {
  if (kind == ClassifierKind::Rnn) return static_cast<neural::AttnBiLstmNet&>(net).embedding;
  return static_cast<neural::CnnNet&>(net).embedding;
}

std::unique_ptr<Classifier> train_neural(const Dataset& d, const TrainConfig& cfg, const Dataset* dev) {
  Vocabulary vocab = build_vocab(d, cfg.min_freq);
  const Encoded data = encode_dataset(d, vocab);
  auto net = make_network(cfg, static_cast<Eigen::Index>(vocab.size()));

  Rng init_rng(splitmix64(cfg.seed ^ 0x1111));
  Rng order_rng(splitmix64(cfg.seed ^ 0x2222));
  Rng dropout_rng(splitmix64(cfg.seed ^ 0x3333));
  init_network(*net, cfg.kind, init_rng);
  if (cfg.embeddings_path) {
    auto table = load_embeddings(*cfg.embeddings_path, vocab, cfg.embed_dim, splitmix64(cfg.seed ^ 0x4444));
    embedding_of(*net, cfg.kind).value = table.weights;
  }

  const std::vector<neural::Param*> params = net->params();
  neural::AdamState adam;
  neural::AdamConfig adam_cfg;
  adam_cfg.lr = cfg.learning_rate;

  std::vector<std::size_t> order(data.ids.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  std::optional<Encoded> dev_data;
  if (dev && !dev->empty()) dev_data = encode_dataset(*dev, vocab);
  auto dev_accuracy = [&] {
    std::size_t correct = 0;
    for (std::size_t i = 0; i < dev_data->ids.size(); ++i) {
      const neural::Vector y = net->probabilities(dev_data->ids[i]);
      correct += decide({y(0), y(1)}).label == dev_data->labels[i] ? 1 : 0;
    }
    return static_cast<double>(correct) / static_cast<double>(dev_data->ids.size());
  };

  std::optional<double> best_dev;
  std::vector<neural::Matrix> best_values;
  neural::Network& model = *net;

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    order_rng.shuffle(std::span(order));
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(cfg.batch_size)) {
      const std::size_t stop = std::min(order.size(), start + static_cast<std::size_t>(cfg.batch_size));
      model.zero_grad();
      for (std::size_t k = start; k < stop; ++k) {
        const auto i = order[k];
        double loss = 0.0;
        try {
          loss = model.forward_backward(data.ids[i], data.labels[i], &dropout_rng);
        } catch (const ShapeError& e) {
          // Shapes are fixed by construction, so this is a NaN/inf reaching a kernel.
          throw TrainingError(e.what(), epoch);
        }
        if (!std::isfinite(loss)) throw TrainingError("non-finite training loss", epoch);
        epoch_loss += loss;
      }
      const double inv = 1.0 / static_cast<double>(stop - start);
      for (auto* p : params) p->grad *= inv;
      neural::clip_grad_norm(params, cfg.max_grad_norm);
      try {
        neural::adam_step(params, adam, adam_cfg);
      } catch (const NonFiniteError& e) {
        throw TrainingError(e.what(), epoch);
      }
      for (auto* p : params) {
        if (!p->value.allFinite()) throw TrainingError("parameter " + p->name + " diverged", epoch);
      }
    }
    EpochReport report{epoch, epoch_loss / static_cast<double>(order.size()), std::nullopt};
    if (dev_data) {
      report.dev_accuracy = dev_accuracy();
      if (!best_dev || *report.dev_accuracy > *best_dev) {
        best_dev = report.dev_accuracy;
        best_values.clear();
        for (auto* p : params) best_values.push_back(p->value);
      }
    }
    if (cfg.on_epoch) cfg.on_epoch(report);
  }
  if (!best_values.empty()) {
    for (std::size_t k = 0; k < params.size(); ++k) params[k]->value = best_values[k];
  }
  for (auto* p : params) p->zero_grad();
  return std::make_unique<NeuralClassifier>(cfg.kind, std::move(vocab), std::move(net));
}

}  // namespace

std::unique_ptr<Classifier> train(const Dataset& d, const TrainConfig& cfg, const Dataset* dev) {
  cfg.validate();
  require_both_classes(d);
  switch (cfg.kind) {
    case ClassifierKind::NaiveBayes:
      return std::make_unique<NaiveBayes>(NaiveBayes::fit(d, cfg.nb_alpha, cfg.min_freq));
    case ClassifierKind::LogisticRegression:
      return std::make_unique<LogisticRegression>(
          LogisticRegression::fit(d, cfg.lr_lambda, cfg.lr_max_iter, cfg.lr_tolerance, cfg.min_freq));
    case ClassifierKind::Cnn:
    case ClassifierKind::Rnn:
      return train_neural(d, cfg, dev);
  }
  throw ConfigError("unknown classifier kind");
}

std::unique_ptr<Classifier> load_classifier(const neural::Checkpoint& ck) {
  if (ck.kind == "nb") return std::make_unique<NaiveBayes>(NaiveBayes::from_checkpoint(ck));
  if (ck.kind == "lr") return std::make_unique<LogisticRegression>(LogisticRegression::from_checkpoint(ck));
  return std::make_unique<NeuralClassifier>(NeuralClassifier::from_checkpoint(ck));
}

std::unique_ptr<Classifier> load_classifier(const std::filesystem::path& path) {
  return load_classifier(neural::Checkpoint::load(path));
}

double evaluate(const Classifier& m, const Dataset& test) {
  if (test.empty()) throw DataError("evaluate: empty test set");
  std::size_t correct = 0;
  for (const auto& s : test) correct += m.predict(s).label == s.label ? 1 : 0;
  return static_cast<double>(correct) / static_cast<double>(test.size());
}

std::string format_accuracy(double accuracy) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", accuracy);
  return buf;
}

}  // namespace discaug
