#include <doctest.h>

#include <cmath>
#include <sstream>

#include "discaug/error.hpp"
#include "discaug/neural/adam.hpp"
#include "discaug/neural/attention.hpp"
#include "discaug/neural/attn_bilstm.hpp"
#include "discaug/neural/checkpoint.hpp"
#include "discaug/neural/cnn.hpp"
#include "discaug/neural/conv.hpp"
#include "discaug/neural/grad_check.hpp"
#include "discaug/neural/layers.hpp"
#include "discaug/neural/lstm.hpp"
#include "discaug/rng.hpp"
#include "oracles.hpp"

using namespace discaug;
using namespace discaug::neural;
using discaug::testing::Vec;

namespace {

Matrix random_matrix(Eigen::Index r, Eigen::Index c, Rng& rng, double scale = 1.0) {
  Matrix m(r, c);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.uniform(-scale, scale);
  return m;
}

void randomize(const std::vector<Param*>& params, Rng& rng, double scale) {
  for (Param* p : params) init_uniform(*p, scale, rng);
}

Vec to_vec(const Vector& v) { return Vec(v.data(), v.data() + v.size()); }

double max_diff(const Vec& a, const Vec& b) {
  REQUIRE(a.size() == b.size());
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

PadMask random_mask(Eigen::Index T, Rng& rng) {
  PadMask m(static_cast<std::size_t>(T));
  for (auto&& b : m) b = rng.bernoulli(0.3);
  m[rng.below(static_cast<std::uint64_t>(T))] = false;
  return m;
}

GradCheckTarget target_for(Network& net, std::vector<std::int32_t> ids, Label label) {
  GradCheckTarget t;
  t.params = net.params();
  t.loss = [&net, ids, label] { return net.loss(ids, label); };
  t.compute_gradients = [&net, ids, label] {
    net.zero_grad();
    net.forward_backward(ids, label, nullptr);
  };
  return t;
}

}  // namespace

TEST_CASE("lstm_cell closed forms") {
  LstmParams p("l", 3, 2);
  const Vector x = Vector::Constant(3, 0.7);
  const Vector c = (Vector(2) << 0.4, -1.2).finished();
  const auto s = lstm_cell(p, x, Vector::Zero(2), c);
  for (int r = 0; r < 2; ++r) {
    CHECK(s.c(r) == doctest::Approx(0.5 * c(r)).epsilon(1e-15));
    CHECK(s.h(r) == doctest::Approx(0.5 * std::tanh(0.5 * c(r))).epsilon(1e-15));
  }
  const auto z = lstm_cell(p, x, Vector::Zero(2), Vector::Zero(2));
  CHECK(z.h.isZero(0.0));
}

TEST_CASE("lstm_cell rejects bad input") {
  LstmParams p("l", 3, 2);
  CHECK_THROWS_AS(lstm_cell(p, Vector::Zero(4), Vector::Zero(2), Vector::Zero(2)), ShapeError);
  CHECK_THROWS_AS(lstm_cell(p, Vector::Zero(3), Vector::Zero(3), Vector::Zero(2)), ShapeError);
  Vector bad = Vector::Zero(3);
  bad(1) = std::nan("");
  CHECK_THROWS_AS(lstm_cell(p, bad, Vector::Zero(2), Vector::Zero(2)), ShapeError);
}

TEST_CASE("lstm_cell matches the scalar oracle and respects gate ranges") {
  Rng rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    LstmParams p("l", 3, 2);
    randomize(p.params(), rng, 1.0);
    const Vector x = random_matrix(3, 1, rng, 2.0);
    const Vector h = random_matrix(2, 1, rng);
    const Vector c = random_matrix(2, 1, rng, 2.0);
    const auto s = lstm_cell(p, x, h, c);
    const auto o = testing::oracle_lstm_step(p, to_vec(x), to_vec(h), to_vec(c));
    CHECK(max_diff(to_vec(s.h), o.h) < 1e-10);
    CHECK(max_diff(to_vec(s.c), o.c) < 1e-10);
    for (const Vector* g : {&s.f, &s.i, &s.o}) {
      CHECK(g->minCoeff() > 0.0);
      CHECK(g->maxCoeff() < 1.0);
    }
    CHECK(s.h.cwiseAbs().maxCoeff() < 1.0);
  }
}

TEST_CASE("bilstm_encode") {
  Rng rng(5);
  SUBCASE("single step") {
    LstmParams f("f", 3, 2), b("b", 3, 2);
    randomize(f.params(), rng, 0.5);
    randomize(b.params(), rng, 0.5);
    const Matrix x = random_matrix(3, 1, rng);
    const auto out = bilstm_encode(x, f, b);
    REQUIRE(out.states.rows() == 4);
    const Vector x0 = x.col(0);
    CHECK((out.states.col(0).head(2) - lstm_cell(f, x0, Vector::Zero(2), Vector::Zero(2)).h).norm() == 0.0);
    CHECK((out.states.col(0).tail(2) - lstm_cell(b, x0, Vector::Zero(2), Vector::Zero(2)).h).norm() == 0.0);
  }
  SUBCASE("zero parameters give zero states") {
    LstmParams f("f", 3, 2), b("b", 3, 2);
    CHECK(bilstm_encode(random_matrix(3, 5, rng), f, b).states.isZero(0.0));
  }
  SUBCASE("empty sequence") {
    LstmParams f("f", 3, 2), b("b", 3, 2);
    CHECK_THROWS_AS(bilstm_encode(Matrix(3, 0), f, b), ShapeError);
  }
  SUBCASE("oracle equivalence with and without padding") {
    for (int trial = 0; trial < 100; ++trial) {
      const Eigen::Index T = 1 + static_cast<Eigen::Index>(rng.below(6));
      LstmParams f("f", 3, 2), b("b", 3, 2);
      randomize(f.params(), rng, 1.0);
      randomize(b.params(), rng, 1.0);
      const Matrix x = random_matrix(3, T, rng);
      const PadMask mask = trial % 2 ? random_mask(T, rng) : PadMask{};
      const auto out = bilstm_encode(x, f, b, mask);
      const auto ref = testing::oracle_bilstm(f, b, testing::to_seq(x), mask);
      for (Eigen::Index t = 0; t < T; ++t) {
        CHECK(max_diff(to_vec(out.states.col(t)), ref[static_cast<std::size_t>(t)]) < 1e-10);
      }
    }
  }
}

TEST_CASE("attention") {
  Rng rng(17);
  SUBCASE("singleton and identical states") {
    AttentionParams p("a", 4, 3);
    p.init(rng);
    const Matrix h1 = random_matrix(4, 1, rng);
    const auto one = attention(h1, p);
    CHECK(one.weights(0) == 1.0);
    CHECK((one.context - h1.col(0)).norm() < 1e-15);
    const Matrix same = h1.replicate(1, 5);
    const auto u = attention(same, p);
    for (Eigen::Index t = 0; t < 5; ++t) CHECK(u.weights(t) == doctest::Approx(0.2).epsilon(1e-12));
  }
  SUBCASE("all positions masked") {
    AttentionParams p("a", 4, 3);
    CHECK_THROWS_AS(attention(random_matrix(4, 2, rng), p, PadMask{true, true}), ShapeError);
  }
  SUBCASE("oracle equivalence for both score forms") {
    for (int trial = 0; trial < 100; ++trial) {
      const auto score = trial % 2 ? AttentionScore::ContextDot : AttentionScore::OnesSum;
      AttentionParams p("a", 4, 2, score);
      randomize(p.params(), rng, 1.0);
      const Eigen::Index T = 1 + static_cast<Eigen::Index>(rng.below(6));
      const Matrix h = random_matrix(4, T, rng);
      const PadMask mask = trial % 3 ? random_mask(T, rng) : PadMask{};
      const auto out = attention(h, p, mask);
      const auto ref = testing::oracle_attention(p, testing::to_seq(h), mask);
      CHECK(max_diff(to_vec(out.context), ref.context) < 1e-10);
      CHECK(max_diff(to_vec(out.weights), ref.weights) < 1e-10);
    }
  }
  SUBCASE("W_v is unused by the context-dot form") {
    AttentionParams p("a", 4, 3, AttentionScore::ContextDot);
    randomize(p.params(), rng, 1.0);
    const Matrix h = random_matrix(4, 3, rng);
    const auto before = attention(h, p);
    p.W_v.value = random_matrix(3, 3, rng);
    CHECK((attention(h, p).weights - before.weights).norm() == 0.0);
  }
}

TEST_CASE("softmax head and loss") {
  HeadParams p("h", 3);
  const Vector c = Vector::Constant(3, 2.0);
  const auto y = classify_head(c, p);
  CHECK(y(0) == 0.5);
  CHECK(y(1) == 0.5);
  const Vector l = (Vector(2) << std::log(3.0), 0.0).finished();
  CHECK(softmax(l)(0) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(softmax(l)(1) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK((softmax(l.array() + 123.0) - softmax(l)).cwiseAbs().maxCoeff() < 1e-15);
  // Large logits must not overflow.
  const Vector big = (Vector(2) << 1000.0, 0.0).finished();
  CHECK(softmax(big).allFinite());

  CHECK(cross_entropy(Vector::Constant(2, 0.5), Label::Positive) == doctest::Approx(std::log(2.0)));
  CHECK(cross_entropy((Vector(2) << 0.0, 1.0).finished(), Label::Positive) == 0.0);
  CHECK(cross_entropy((Vector(2) << 1.0, 0.0).finished(), Label::Positive) == doctest::Approx(-std::log(1e-12)));
  const Vector g = cross_entropy_logit_grad((Vector(2) << 0.3, 0.7).finished(), Label::Negative);
  CHECK(g(0) == doctest::Approx(-0.7));
  CHECK(g(1) == doctest::Approx(0.7));
}

TEST_CASE("dropout") {
  Rng rng(3);
  const Vector x = Vector::Constant(1000, 2.0);
  CHECK(dropout(x, 0.0, rng, true) == x);
  CHECK(dropout(x, 0.5, rng, false) == x);
  Rng a(9), b(9);
  CHECK(dropout(x, 0.5, a, true) == dropout(x, 0.5, b, true));
  const auto y = dropout(x, 0.5, rng, true);
  for (Eigen::Index i = 0; i < y.size(); ++i) CHECK((y(i) == 0.0 || y(i) == 4.0));

  Rng mc(21);
  const Vector ones = Vector::Ones(100);
  std::size_t kept = 0;
  for (int t = 0; t < 1000; ++t) {
    const auto z = dropout(ones, 0.5, mc, true);
    kept += static_cast<std::size_t>((z.array() != 0.0).count());
  }
  CHECK(static_cast<double>(kept) / 1e5 == doctest::Approx(0.5).epsilon(0.02));
  CHECK_THROWS(dropout(x, 1.0, rng, true));
}

TEST_CASE("adam") {
  SUBCASE("zero gradient leaves params unchanged") {
    Param p("p", 2, 2);
    p.value.setConstant(0.3);
    AdamState st;
    std::vector<Param*> ps{&p};
    adam_step(ps, st);
    CHECK(p.value == Matrix::Constant(2, 2, 0.3));
    CHECK(st.t == 1);
  }
  SUBCASE("first step magnitude and monotone steps at constant gradient") {
    Param p("p", 1, 1);
    AdamState st;
    std::vector<Param*> ps{&p};
    p.grad(0, 0) = 1.0;
    adam_step(ps, st);
    const double d1 = p.value(0, 0);
    CHECK(d1 == doctest::Approx(-1e-3 / (1.0 + 1e-8)).epsilon(1e-12));
    p.grad(0, 0) = 1.0;
    adam_step(ps, st);
    const double d2 = p.value(0, 0) - d1;
    CHECK(std::abs(d2) <= std::abs(d1) + 1e-9);
  }
  SUBCASE("non-finite gradient") {
    Param p("p", 1, 2);
    p.grad(0, 1) = INFINITY;
    AdamState st;
    std::vector<Param*> ps{&p};
    CHECK_THROWS_AS(adam_step(ps, st), NonFiniteError);
    CHECK(p.value.isZero(0.0));
    CHECK(st.t == 0);
  }
  SUBCASE("gradient clipping") {
    Param a("a", 1, 1), b("b", 1, 1);
    a.grad(0, 0) = 3.0;
    b.grad(0, 0) = 4.0;
    std::vector<Param*> ps{&a, &b};
    CHECK(clip_grad_norm(ps, 1.0) == doctest::Approx(5.0));
    CHECK(grad_norm(ps) == doctest::Approx(1.0));
    CHECK(clip_grad_norm(ps, 5.0) == doctest::Approx(1.0));
    CHECK(a.grad(0, 0) == doctest::Approx(0.6));
  }
}

TEST_CASE("conv_maxpool") {
  Rng rng(23);
  SUBCASE("single window is the identity for max-pooling") {
    std::vector<ConvBank> banks{ConvBank("c", 3, 2, 2)};
    randomize({&banks[0].W, &banks[0].b}, rng, 1.0);
    const Matrix x = random_matrix(2, 3, rng);
    const auto out = conv_maxpool(x, banks);
    for (Eigen::Index f = 0; f < 2; ++f) {
      Vector window(6);
      window << x.col(0), x.col(1), x.col(2);
      const double z = banks[0].W.value.row(f).dot(window) + banks[0].b.value(f, 0);
      CHECK(out.features(f) == doctest::Approx(std::max(0.0, z)).epsilon(1e-14));
    }
  }
  SUBCASE("zero weights") {
    std::vector<ConvBank> banks{ConvBank("c", 3, 4, 2), ConvBank("c", 4, 4, 2)};
    const auto out = conv_maxpool(random_matrix(4, 5, rng), banks);
    CHECK(out.features.size() == 4);
    CHECK(out.features.isZero(0.0));
  }
  SUBCASE("oracle equivalence, including short and padded inputs") {
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<ConvBank> banks{ConvBank("c", 3, 4, 2), ConvBank("c", 4, 4, 3), ConvBank("c", 5, 4, 2)};
      for (auto& b : banks) randomize({&b.W, &b.b}, rng, 1.0);
      const Eigen::Index T = 1 + static_cast<Eigen::Index>(rng.below(8));
      const Matrix x = random_matrix(4, T, rng);
      const PadMask mask = trial % 2 ? random_mask(T, rng) : PadMask{};
      const auto out = conv_maxpool(x, banks, mask);
      CHECK(max_diff(to_vec(out.features), testing::oracle_conv_maxpool(banks, testing::to_seq(x), mask)) < 1e-10);
    }
  }
}

TEST_CASE("gradient check: full validator graph") {
  AttnBiLstmConfig cfg;
  cfg.vocab_size = 6;
  cfg.embed_dim = 3;
  cfg.hidden = 2;
  cfg.attn_dim = 2;
  for (auto score : {AttentionScore::OnesSum, AttentionScore::ContextDot}) {
    cfg.score = score;
    AttnBiLstmNet net(cfg);
    Rng rng(31);
    randomize(net.params(), rng, 0.5);
    net.embedding.value.row(kPadId).setZero();
    for (auto label : {Label::Negative, Label::Positive}) {
      const auto report = grad_check(target_for(net, {2, 5, 3, 4}, label));
      CHECK(report.max_relative_error < 1e-4);
      CHECK(report.components == 6 * 3 + 2 * (8 * 3 + 8 * 2 + 8) + 2 * 4 + 2 * 2 + 2 + 2 + 2 * 4 + 2);
    }
    // Padding positions contribute nothing and get no gradient.
    const auto padded = grad_check(target_for(net, {2, 0, 3, 0}, Label::Positive));
    CHECK(padded.max_relative_error < 1e-4);
  }
}

TEST_CASE("gradient check detects a corrupted forget-gate gradient") {
  AttnBiLstmConfig cfg;
  cfg.vocab_size = 6;
  cfg.embed_dim = 3;
  cfg.hidden = 2;
  cfg.attn_dim = 2;
  AttnBiLstmNet net(cfg);
  Rng rng(31);
  randomize(net.params(), rng, 0.5);
  const auto report = grad_check(target_for(net, {2, 5, 3, 4}, Label::Positive), 1e-5, [&](std::vector<Param*>&) {
    net.fwd.W.grad.topRows(cfg.hidden) *= 2.0;
  });
  CHECK(report.max_relative_error > 1e-1);
  CHECK(report.worst_param == net.fwd.W.name);
}

TEST_CASE("gradient check on a zero-parameter model") {
  AttnBiLstmConfig cfg;
  cfg.vocab_size = 5;
  cfg.embed_dim = 3;
  cfg.hidden = 2;
  cfg.attn_dim = 2;
  AttnBiLstmNet net(cfg);
  const auto report = grad_check(target_for(net, {1, 2, 3, 4}, Label::Negative));
  CHECK(std::isfinite(report.analytic));
  CHECK(std::isfinite(report.numeric));
  CHECK(report.max_relative_error < 1e-4);
}

TEST_CASE("gradient check: CNN") {
  CnnConfig cfg;
  cfg.vocab_size = 7;
  cfg.embed_dim = 3;
  cfg.widths = {2, 3};
  cfg.filters = 2;
  CnnNet net(cfg);
  Rng rng(41);
  randomize(net.params(), rng, 0.5);
  net.embedding.value.row(kPadId).setZero();
  for (std::vector<std::int32_t> ids : {std::vector<std::int32_t>{2, 3, 4, 5, 6}, {3, 1}, {4, 0, 2, 0}}) {
    CHECK(grad_check(target_for(net, ids, Label::Positive)).max_relative_error < 1e-4);
  }
}

TEST_CASE("normalization under random inputs") {
  Rng rng(99);
  for (int trial = 0; trial < 1000; ++trial) {
    AttentionParams p("a", 4, 3, trial % 2 ? AttentionScore::ContextDot : AttentionScore::OnesSum);
    randomize(p.params(), rng, 2.0);
    const Eigen::Index T = 1 + static_cast<Eigen::Index>(rng.below(10));
    const PadMask mask = random_mask(T, rng);
    const auto out = attention(random_matrix(4, T, rng, 3.0), p, mask);
    CHECK(std::abs(out.weights.sum() - 1.0) < 1e-6);
    for (Eigen::Index t = 0; t < T; ++t) {
      if (mask[static_cast<std::size_t>(t)]) CHECK(out.weights(t) == 0.0);
      CHECK(out.weights(t) >= 0.0);
    }
  }
}

TEST_CASE("networks are deterministic and checkpoints round-trip") {
  AttnBiLstmConfig cfg;
  cfg.vocab_size = 9;
  cfg.embed_dim = 4;
  cfg.hidden = 3;
  cfg.attn_dim = 2;
  cfg.score = AttentionScore::ContextDot;
  AttnBiLstmNet a(cfg), b(cfg);
  Rng ra(5), rb(5);
  a.init(ra);
  b.init(rb);
  const std::vector<std::int32_t> ids{3, 4, 8, 2};
  CHECK(a.probabilities(ids) == b.probabilities(ids));
  CHECK(a.embedding.value.row(kPadId).isZero(0.0));

  Checkpoint ck;
  a.save(ck);
  std::stringstream s;
  ck.write(s);
  const auto back = Checkpoint::read(s);
  AttnBiLstmNet c(cfg);
  c.restore(back);
  CHECK(c.probabilities(ids) == a.probabilities(ids));
  CHECK(c.attn.score == AttentionScore::ContextDot);

  std::stringstream again;
  back.write(again);
  CHECK(again.str() == s.str());
}

TEST_CASE("checkpoint format errors") {
  std::istringstream bad_magic("not-a-checkpoint v1 1 1 1 2\n");
  CHECK_THROWS_AS(Checkpoint::read(bad_magic), DataError);
  std::istringstream truncated("discaug-ckpt v1 1 1 1 2\nkind nb\nvocab 2\n<pad>\n<unk>\nw 2 2\n1 2\n");
  CHECK_THROWS_AS(Checkpoint::read(truncated), DataError);
  Checkpoint ck;
  CHECK_THROWS_AS(ck.block("missing"), DataError);
  Param p("w", 2, 2);
  ck.add("w", Matrix::Zero(3, 2));
  CHECK_THROWS_AS(ck.restore(p), DataError);
}
