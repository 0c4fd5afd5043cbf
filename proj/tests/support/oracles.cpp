#include "oracles.hpp"

#include <cmath>
#include <map>
#include <set>

#include "discaug/text.hpp"

namespace discaug::testing {

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// Row r of gate block g of the stacked LSTM parameters.
double pre_activation(const neural::LstmParams& p, int gate, std::size_t r, const Vec& x, const Vec& h) {
  const auto H = static_cast<std::size_t>(p.hidden());
  const auto row = static_cast<Eigen::Index>(gate * H + r);
  double z = p.b.value(row, 0);
  for (std::size_t j = 0; j < x.size(); ++j) z += p.W.value(row, static_cast<Eigen::Index>(j)) * x[j];
  for (std::size_t j = 0; j < h.size(); ++j) z += p.U.value(row, static_cast<Eigen::Index>(j)) * h[j];
  return z;
}

}  // namespace

OracleStep oracle_lstm_step(const neural::LstmParams& p, const Vec& x, const Vec& h_prev, const Vec& c_prev) {
  const auto H = static_cast<std::size_t>(p.hidden());
  OracleStep s{Vec(H), Vec(H)};
  for (std::size_t r = 0; r < H; ++r) {
    const double f = sigmoid(pre_activation(p, 0, r, x, h_prev));
    const double i = sigmoid(pre_activation(p, 1, r, x, h_prev));
    const double o = sigmoid(pre_activation(p, 2, r, x, h_prev));
    const double g = std::tanh(pre_activation(p, 3, r, x, h_prev));
    s.c[r] = f * c_prev[r] + i * g;
    s.h[r] = o * std::tanh(s.c[r]);
  }
  return s;
}

Seq oracle_bilstm(const neural::LstmParams& fwd, const neural::LstmParams& bwd, const Seq& x,
                  const std::vector<bool>& mask) {
  const auto H = static_cast<std::size_t>(fwd.hidden());
  const std::size_t T = x.size();
  Seq out(T, Vec(2 * H, 0.0));
  auto masked = [&](std::size_t t) { return !mask.empty() && mask[t]; };
  Vec h(H, 0.0), c(H, 0.0);
  for (std::size_t t = 0; t < T; ++t) {
    if (masked(t)) continue;
    auto s = oracle_lstm_step(fwd, x[t], h, c);
    h = s.h;
    c = s.c;
    for (std::size_t r = 0; r < H; ++r) out[t][r] = h[r];
  }
  h.assign(H, 0.0);
  c.assign(H, 0.0);
  for (std::size_t k = T; k-- > 0;) {
    if (masked(k)) continue;
    auto s = oracle_lstm_step(bwd, x[k], h, c);
    h = s.h;
    c = s.c;
    for (std::size_t r = 0; r < H; ++r) out[k][H + r] = h[r];
  }
  return out;
}

OracleAttention oracle_attention(const neural::AttentionParams& p, const Seq& h, const std::vector<bool>& mask) {
  const auto da = static_cast<std::size_t>(p.attn_dim());
  const std::size_t T = h.size();
  const std::size_t in = h.empty() ? 0 : h[0].size();
  auto masked = [&](std::size_t t) { return !mask.empty() && mask[t]; };
  Vec e(T, 0.0);
  for (std::size_t t = 0; t < T; ++t) {
    if (masked(t)) continue;
    for (std::size_t k = 0; k < da; ++k) {
      const auto row = static_cast<Eigen::Index>(k);
      double z = p.b.value(row, 0);
      for (std::size_t j = 0; j < in; ++j) z += p.W_h.value(row, static_cast<Eigen::Index>(j)) * h[t][j];
      if (p.score == neural::AttentionScore::OnesSum) {
        for (std::size_t j = 0; j < da; ++j) {
          z += p.W_v.value(row, static_cast<Eigen::Index>(j)) * p.v.value(static_cast<Eigen::Index>(j), 0);
        }
        e[t] += std::tanh(z);
      } else {
        e[t] += p.v.value(row, 0) * std::tanh(z);
      }
    }
  }
  // Plain exp/sum without a max shift; inputs in tests are small.
  double total = 0.0;
  Vec w(T, 0.0);
  for (std::size_t t = 0; t < T; ++t) {
    if (!masked(t)) total += w[t] = std::exp(e[t]);
  }
  OracleAttention out{Vec(in, 0.0), w};
  for (std::size_t t = 0; t < T; ++t) {
    out.weights[t] /= total;
    for (std::size_t j = 0; j < in; ++j) out.context[j] += out.weights[t] * h[t][j];
  }
  return out;
}

Vec oracle_conv_maxpool(const std::vector<neural::ConvBank>& banks, const Seq& x, const std::vector<bool>& mask) {
  Seq kept;
  for (std::size_t t = 0; t < x.size(); ++t) {
    if (mask.empty() || !mask[t]) kept.push_back(x[t]);
  }
  const std::size_t d = x.empty() ? 0 : x[0].size();
  std::size_t widest = 0;
  for (const auto& b : banks) widest = std::max(widest, static_cast<std::size_t>(b.width));
  while (kept.size() < widest) kept.push_back(Vec(d, 0.0));
  Vec out;
  for (const auto& b : banks) {
    const auto w = static_cast<std::size_t>(b.width);
    for (Eigen::Index f = 0; f < b.filters(); ++f) {
      double best = -INFINITY;
      for (std::size_t t = 0; t + w <= kept.size(); ++t) {
        double z = b.b.value(f, 0);
        for (std::size_t k = 0; k < w; ++k) {
          for (std::size_t j = 0; j < d; ++j) {
            z += b.W.value(f, static_cast<Eigen::Index>(k * d + j)) * kept[t + k][j];
          }
        }
        best = std::max(best, std::max(0.0, z));
      }
      out.push_back(best);
    }
  }
  return out;
}

Vec oracle_softmax(const Vec& z) {
  Vec out(z.size());
  double total = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) total += out[i] = std::exp(z[i]);
  for (auto& v : out) v /= total;
  return out;
}

std::array<double, 2> oracle_nb_posterior(const Dataset& train, const std::vector<std::string>& query, double alpha) {
  std::set<std::string> vocab;
  std::map<std::string, double> count[2];
  double total[2] = {0.0, 0.0};
  double docs[2] = {0.0, 0.0};
  for (const auto& s : train) {
    const auto c = index_of(s.label);
    docs[c] += 1.0;
    for (const auto& t : s.tokens) {
      if (is_punctuation(t)) continue;
      vocab.insert(t);
      count[c][t] += 1.0;
      total[c] += 1.0;
    }
  }
  const double V = static_cast<double>(vocab.size());
  double joint[2];
  for (int c = 0; c < 2; ++c) {
    joint[c] = docs[c] / (docs[0] + docs[1]);
    for (const auto& t : query) {
      if (!vocab.count(t)) continue;
      joint[c] *= (count[c][t] + alpha) / (total[c] + alpha * V);
    }
  }
  return {joint[0] / (joint[0] + joint[1]), joint[1] / (joint[0] + joint[1])};
}

Seq to_seq(const Eigen::MatrixXd& columns) {
  Seq out(static_cast<std::size_t>(columns.cols()), Vec(static_cast<std::size_t>(columns.rows())));
  for (Eigen::Index t = 0; t < columns.cols(); ++t) {
    for (Eigen::Index j = 0; j < columns.rows(); ++j) out[static_cast<std::size_t>(t)][static_cast<std::size_t>(j)] = columns(j, t);
  }
  return out;
}

}  // namespace discaug::testing
