#include "discaug/neural/cnn.hpp"

namespace discaug::neural {

namespace {

Eigen::Index total_filters(const CnnConfig& cfg) {
  return static_cast<Eigen::Index>(cfg.widths.size()) * cfg.filters;
}

}  // namespace

CnnNet::CnnNet(const CnnConfig& cfg)
    : embedding("embedding", cfg.vocab_size, cfg.embed_dim), head("head", total_filters(cfg)), cfg_(cfg) {
  if (cfg.vocab_size < 2 || cfg.embed_dim < 1 || cfg.filters < 1 || cfg.widths.empty()) {
    throw ShapeError("CnnNet: all dimensions must be positive");
  }
  for (int w : cfg.widths) banks.emplace_back("conv", w, cfg.embed_dim, cfg.filters);
}

void CnnNet::init(Rng& rng) {
  init_uniform(embedding, 0.1, rng);
  embedding.value.row(kPadId).setZero();
  for (auto& bank : banks) {
    init_uniform(bank.W, 0.08, rng);
    bank.b.value.setZero();
  }
  head.init(rng);
}

std::vector<Param*> CnnNet::params() {
  std::vector<Param*> out{&embedding};
  for (auto& bank : banks) {
    out.push_back(&bank.W);
    out.push_back(&bank.b);
  }
  out.push_back(&head.W_s);
  out.push_back(&head.b_s);
  return out;
}

Vector CnnNet::probabilities(std::span<const std::int32_t> ids) const {
  const Matrix x = embed(embedding, ids);
  const ConvOutput conv = conv_maxpool(x, banks, pad_mask_of(ids));
  return classify_head(conv.features, head);
}

double CnnNet::forward_backward(std::span<const std::int32_t> ids, Label label, Rng* dropout_rng) {
  const Matrix x = embed(embedding, ids);
  const ConvOutput conv = conv_maxpool(x, banks, pad_mask_of(ids));
  Vector scale;
  Vector pooled = conv.features;
  if (dropout_rng) pooled = dropout(conv.features, cfg_.dropout, *dropout_rng, true, &scale);
  const Vector y = classify_head(pooled, head);
  Vector d_pooled = classify_head_backward(pooled, cross_entropy_logit_grad(y, label), head);
  if (scale.size() == d_pooled.size()) d_pooled = d_pooled.cwiseProduct(scale);
  const Matrix dx = conv_maxpool_backward(conv, d_pooled, x.cols(), banks);
  embed_backward(embedding, ids, dx);
  return cross_entropy(y, label);
}

void CnnNet::save(Checkpoint& ck) const {
  ck.embed_dim = static_cast<int>(cfg_.embed_dim);
  ck.hidden = static_cast<int>(cfg_.filters);
  ck.attn_dim = 0;
  Matrix widths(1, static_cast<Eigen::Index>(cfg_.widths.size()));
  for (std::size_t k = 0; k < cfg_.widths.size(); ++k) widths(0, static_cast<Eigen::Index>(k)) = cfg_.widths[k];
  ck.add("cnn.widths", widths);
  ck.add("cnn.dropout", Matrix::Constant(1, 1, cfg_.dropout));
  ck.add(embedding);
  for (const auto& bank : banks) {
    ck.add(bank.W);
    ck.add(bank.b);
  }
  ck.add(head.W_s);
  ck.add(head.b_s);
}

void CnnNet::restore(const Checkpoint& ck) {
  for (Param* p : params()) ck.restore(*p);
}

}  // namespace discaug::neural
