#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <sstream>

#include "discaug/error.hpp"
#include "discaug/models.hpp"
#include "discaug/text.hpp"
#include "oracles.hpp"
#include "synthetic_corpus.hpp"

using namespace discaug;
using Tokens = std::vector<std::string>;

namespace {

Dataset labelled(std::initializer_list<std::pair<const char*, Label>> items) {
  std::vector<Sample> s;
  std::uint64_t id = 0;
  for (const auto& [text, l] : items) s.push_back(Sample{tokenize(text), l, id++});
  return Dataset("toy", std::move(s));
}

std::string checkpoint_text(const Classifier& m) {
  std::ostringstream out;
  m.to_checkpoint().write(out);
  return out.str();
}

Dataset small_corpus(std::uint64_t seed, std::size_t per_class = 200, double transitions = 0.25) {
  testing::CorpusSpec spec;
  spec.transition_rate = transitions;
  spec.n_positive = per_class;
  spec.n_negative = per_class;
  spec.sentiment_vocab = 20;
  spec.neutral_vocab = 60;
  spec.seed = seed;
  return testing::make_corpus(spec);
}

// Regularized summed log-loss over term tokens, written independently of the model code.
double lr_objective(const Dataset& d, const LogisticRegression& m, double lambda) {
  double loss = 0.0;
  for (const auto& s : d) {
    double z = m.bias();
    for (const auto& t : s.tokens) {
      if (const auto id = m.vocab().find(t)) z += m.weights()(*id);
    }
    const double y = s.label == Label::Positive ? 1.0 : 0.0;
    loss += std::log1p(std::exp(-z)) + (1.0 - y) * z;
  }
  return loss + 0.5 * lambda * m.weights().squaredNorm();
}

}  // namespace

TEST_CASE("kind names") {
  for (auto k : {ClassifierKind::NaiveBayes, ClassifierKind::LogisticRegression, ClassifierKind::Cnn,
                 ClassifierKind::Rnn}) {
    CHECK(parse_classifier_kind(to_string(k)) == k);
  }
  CHECK(parse_classifier_kind("NB") == ClassifierKind::NaiveBayes);
  CHECK_THROWS_AS(parse_classifier_kind("svm"), ConfigError);
}

TEST_CASE("config defaults and validation") {
  const auto v = TrainConfig::validator();
  CHECK(v.kind == ClassifierKind::Rnn);
  CHECK(v.hidden == 32);
  CHECK(v.embed_dim == 64);
  CHECK(v.attn_dim == 16);
  CHECK(v.learning_rate == 1e-3);
  CHECK(TrainConfig::defaults(ClassifierKind::Rnn).hidden == 256);
  CHECK(TrainConfig::defaults(ClassifierKind::Cnn).dropout == 0.5);
  CHECK(TrainConfig::defaults(ClassifierKind::Cnn).cnn_widths == std::vector<int>{3, 4, 5});
  CHECK(TrainConfig::defaults(ClassifierKind::Cnn).cnn_filters == 100);
  auto bad = v;
  bad.dropout = 1.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = v;
  bad.hidden = 0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("decide breaks ties toward negative") {
  CHECK(decide({0.5, 0.5}).label == Label::Negative);
  CHECK(decide({0.5, 0.5}).confidence == 0.5);
  CHECK(decide({0.2, 0.8}).label == Label::Positive);
  CHECK(decide({0.2, 0.8}).confidence == 0.8);
}

TEST_CASE("naive Bayes hand-computed Laplace estimates") {
  const auto d = labelled({{"good", Label::Positive}, {"bad", Label::Negative}});
  const auto nb = NaiveBayes::fit(d);
  // p(good|pos) = (1 + 1) / (1 + 2); p(good|neg) = (0 + 1) / (1 + 2)
  CHECK(nb.likelihood("good", Label::Positive) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(nb.likelihood("good", Label::Negative) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(nb.likelihood("unseen", Label::Negative) == 0.0);
  CHECK(nb.prior(Label::Positive) == doctest::Approx(0.5));
  const auto p = nb.predict(Tokens{"good"});
  CHECK(p.label == Label::Positive);
  // posterior(pos | good) = (1/2 * 2/3) / (1/2 * 2/3 + 1/2 * 1/3) = 2/3
  CHECK(p.confidence == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(nb.predict(Tokens{"unknown"}).label == Label::Negative);
  CHECK_THROWS_AS(nb.predict(Tokens{}), DataError);
}

TEST_CASE("naive Bayes matches brute-force Bayes on small vocabularies") {
  const auto d = labelled({{"a b a", Label::Positive},
                           {"b c", Label::Positive},
                           {"a d e", Label::Positive},
                           {"c c d", Label::Negative},
                           {"e f", Label::Negative}});
  for (double alpha : {1.0, 0.5}) {
    const auto nb = NaiveBayes::fit(d, alpha);
    double total[2] = {0.0, 0.0};
    for (const auto& t : nb.vocab().tokens()) {
      total[0] += nb.likelihood(t, Label::Negative);
      total[1] += nb.likelihood(t, Label::Positive);
    }
    CHECK(total[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(total[1] == doctest::Approx(1.0).epsilon(1e-12));
    for (const Tokens& q : {Tokens{"a"}, Tokens{"c", "c"}, Tokens{"a", "f", "zzz"}, Tokens{"d", "e", "b", "a"}}) {
      const auto got = nb.posterior(q);
      const auto want = testing::oracle_nb_posterior(d, q, alpha);
      CHECK(std::abs(got[0] - want[0]) < 1e-12);
      CHECK(std::abs(got[1] - want[1]) < 1e-12);
      CHECK(std::abs(got[0] + got[1] - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("training needs both classes") {
  const auto one = labelled({{"good", Label::Positive}, {"fine", Label::Positive}});
  for (auto k : {ClassifierKind::NaiveBayes, ClassifierKind::LogisticRegression, ClassifierKind::Rnn}) {
    auto cfg = TrainConfig::defaults(k);
    CHECK_THROWS_AS(train(one, cfg), DataError);
  }
}

TEST_CASE("logistic regression reaches the regularized minimum") {
  const auto d = small_corpus(3, 60);
  const auto lr = LogisticRegression::fit(d, 1.0, 200, 1e-9);
  CHECK(lr.final_gradient_norm() < 1e-9);
  CHECK(lr.iterations() < 200);
  // Independent objective: every coordinate is a local minimum.
  const double base = lr_objective(d, lr, 1.0);
  CHECK(std::isfinite(base));
  const double h = 1e-4;
  auto probe = lr;
  for (Eigen::Index j = 2; j < lr.weights().size(); j += 7) {
    auto w = lr.weights();
    for (double step : {h, -h}) {
      w(j) = lr.weights()(j) + step;
      auto shifted = LogisticRegression::from_checkpoint([&] {
        auto ck = lr.to_checkpoint();
        for (auto& [name, m] : ck.blocks) {
          if (name == "lr.weights") m.row(0) = w.transpose();
        }
        return ck;
      }());
      CHECK(lr_objective(d, shifted, 1.0) >= base - 1e-12);
    }
  }
}

TEST_CASE("logistic regression is unchanged by duplicating the data together with lambda") {
  const auto d = small_corpus(5, 80);
  std::vector<Sample> twice(d.begin(), d.end());
  for (const auto& s : d) twice.push_back(Sample{s.tokens, s.label, s.id + d.size()});
  const Dataset dd("twice", twice);
  const auto a = LogisticRegression::fit(d, 1.0, 200, 1e-9);
  const auto b = LogisticRegression::fit(dd, 2.0, 200, 1e-9);
  CHECK((a.weights() - b.weights()).cwiseAbs().maxCoeff() < 1e-6);
  const auto held_out = small_corpus(6, 100);
  for (const auto& s : held_out) CHECK(a.predict(s).label == b.predict(s).label);
}

TEST_CASE("evaluate") {
  const auto d = labelled({{"good", Label::Positive}, {"bad", Label::Negative}});
  const auto nb = NaiveBayes::fit(d);
  CHECK(evaluate(nb, d) == 1.0);
  const auto test = labelled({{"good", Label::Positive},
                              {"bad", Label::Negative},
                              {"good good", Label::Positive},
                              {"good", Label::Negative}});
  CHECK(evaluate(nb, test) == 0.75);
  const auto constant = labelled({{"zzz", Label::Positive}, {"yyy", Label::Negative}});
  CHECK(evaluate(nb, constant) == 0.5);
  CHECK(format_accuracy(0.75) == "0.7500");
  CHECK(format_accuracy(2.0 / 3.0) == "0.6667");
  CHECK_THROWS_AS(evaluate(nb, Dataset("empty")), DataError);
}

TEST_CASE("classifiers learn the planted lexicon") {
  // Single-clause sentences: every sample carries only its own polarity.
  const auto train_set = small_corpus(11, 300, 0.0);
  const auto test_set = small_corpus(12, 150, 0.0);
  CHECK(evaluate(*train(train_set, TrainConfig::defaults(ClassifierKind::NaiveBayes)), test_set) > 0.95);
  // Strong L2 shrinks rare words, so check the learned signs rather than accuracy.
  const auto lr = LogisticRegression::fit(train_set);
  for (std::size_t i = 2; i < lr.vocab().size(); ++i) {
    const auto& t = lr.vocab().token(static_cast<std::int32_t>(i));
    if (t[0] == 'p') CHECK(lr.weights()(static_cast<Eigen::Index>(i)) > 0.0);
    if (t[0] == 'n') CHECK(lr.weights()(static_cast<Eigen::Index>(i)) < 0.0);
  }
  auto rnn = TrainConfig::validator();
  rnn.embed_dim = 16;
  rnn.hidden = 8;
  rnn.attn_dim = 4;
  CHECK(evaluate(*train(train_set, rnn), test_set) > 0.95);
  auto cnn = TrainConfig::defaults(ClassifierKind::Cnn);
  cnn.embed_dim = 16;
  cnn.cnn_filters = 8;
  CHECK(evaluate(*train(train_set, cnn), test_set) > 0.95);
}

TEST_CASE("training is a pure function of data and config") {
  const auto d = small_corpus(21, 60);
  std::vector<TrainConfig> cfgs{TrainConfig::defaults(ClassifierKind::NaiveBayes),
                                TrainConfig::defaults(ClassifierKind::LogisticRegression)};
  auto rnn = TrainConfig::validator();
  rnn.embed_dim = 8;
  rnn.hidden = 4;
  rnn.attn_dim = 3;
  rnn.epochs = 2;
  cfgs.push_back(rnn);
  auto cnn = TrainConfig::defaults(ClassifierKind::Cnn);
  cnn.embed_dim = 8;
  cnn.cnn_filters = 3;
  cnn.epochs = 2;
  cfgs.push_back(cnn);
  for (const auto& cfg : cfgs) {
    const auto a = train(d, cfg);
    const auto b = train(d, cfg);
    CHECK(checkpoint_text(*a) == checkpoint_text(*b));
    for (const auto& s : d) CHECK(a->predict(s).confidence == a->predict(s).confidence);
    if (cfg.kind == ClassifierKind::Rnn || cfg.kind == ClassifierKind::Cnn) {
      auto other = cfg;
      other.seed = cfg.seed + 1;
      CHECK(checkpoint_text(*train(d, other)) != checkpoint_text(*a));
    }
  }
}

TEST_CASE("checkpoints reload to identical predictions") {
  const auto d = small_corpus(31, 50);
  auto rnn = TrainConfig::validator();
  rnn.embed_dim = 8;
  rnn.hidden = 4;
  rnn.attn_dim = 3;
  rnn.epochs = 1;
  auto cnn = TrainConfig::defaults(ClassifierKind::Cnn);
  cnn.embed_dim = 8;
  cnn.cnn_filters = 3;
  cnn.epochs = 1;
  for (const auto& cfg : {TrainConfig::defaults(ClassifierKind::NaiveBayes),
                          TrainConfig::defaults(ClassifierKind::LogisticRegression), rnn, cnn}) {
    const auto m = train(d, cfg);
    const auto path = std::filesystem::temp_directory_path() / ("discaug_model_" + std::string(to_string(cfg.kind)));
    m->save(path);
    const auto back = load_classifier(path);
    CHECK(back->kind() == cfg.kind);
    CHECK(back->vocab() == m->vocab());
    CHECK(checkpoint_text(*back) == checkpoint_text(*m));
    for (const auto& s : d) CHECK(back->posterior(s.tokens) == m->posterior(s.tokens));
  }
  CHECK_THROWS_AS(load_classifier(std::filesystem::path("/nonexistent/model.ckpt")), DataError);
}

TEST_CASE("dev-set checkpointing reports every epoch") {
  const auto d = small_corpus(41, 80);
  const auto dev = small_corpus(42, 40);
  auto cfg = TrainConfig::validator();
  cfg.embed_dim = 8;
  cfg.hidden = 4;
  cfg.attn_dim = 3;
  cfg.epochs = 3;
  std::vector<EpochReport> reports;
  cfg.on_epoch = [&](const EpochReport& r) { reports.push_back(r); };
  const auto m = train(d, cfg, &dev);
  REQUIRE(reports.size() == 3);
  double best = 0.0;
  for (const auto& r : reports) {
    REQUIRE(r.dev_accuracy);
    best = std::max(best, *r.dev_accuracy);
    CHECK(std::isfinite(r.mean_loss));
  }
  CHECK(evaluate(*m, dev) == doctest::Approx(best).epsilon(1e-12));
}

TEST_CASE("divergence is reported with the epoch") {
  const auto d = small_corpus(51, 40);
  auto cfg = TrainConfig::validator();
  cfg.embed_dim = 4;
  cfg.hidden = 2;
  cfg.attn_dim = 2;
  cfg.epochs = 2;
  cfg.learning_rate = 1e308;
  cfg.max_grad_norm = 1e308;
  try {
    train(d, cfg);
    FAIL("expected divergence");
  } catch (const TrainingError& e) {
    CHECK(e.epoch() >= 1);
  }
}
