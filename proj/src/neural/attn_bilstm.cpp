#include "discaug/neural/attn_bilstm.hpp"

namespace discaug::neural {

AttnBiLstmNet::AttnBiLstmNet(const AttnBiLstmConfig& cfg)
    : embedding("embedding", cfg.vocab_size, cfg.embed_dim),
      fwd("fwd", cfg.embed_dim, cfg.hidden),
      bwd("bwd", cfg.embed_dim, cfg.hidden),
      attn("attn", 2 * cfg.hidden, cfg.attn_dim, cfg.score),
      head("head", 2 * cfg.hidden),
      cfg_(cfg) {
  if (cfg.vocab_size < 2 || cfg.embed_dim < 1 || cfg.hidden < 1 || cfg.attn_dim < 1) {
    throw ShapeError("AttnBiLstmNet: all dimensions must be positive");
  }
}

void AttnBiLstmNet::init(Rng& rng) {
  init_uniform(embedding, 0.1, rng);
  embedding.value.row(kPadId).setZero();
  fwd.init(rng);
  bwd.init(rng);
  attn.init(rng);
  head.init(rng);
}

std::vector<Param*> AttnBiLstmNet::params() {
  return {&embedding, &fwd.W, &fwd.U, &fwd.b, &bwd.W, &bwd.U, &bwd.b,
          &attn.W_h, &attn.W_v, &attn.b, &attn.v, &head.W_s, &head.b_s};
}

AttnBiLstmNet::Trace AttnBiLstmNet::forward(std::span<const std::int32_t> ids, Rng* dropout_rng) const {
  Trace tr;
  tr.mask = pad_mask_of(ids);
  tr.x = embed(embedding, ids);
  tr.enc = bilstm_encode(tr.x, fwd, bwd, tr.mask);
  tr.att = attention(tr.enc.states, attn, tr.mask);
  if (dropout_rng) {
    tr.pooled = dropout(tr.att.context, cfg_.dropout, *dropout_rng, true, &tr.drop_scale);
  } else {
    tr.pooled = tr.att.context;
  }
  tr.y = classify_head(tr.pooled, head);
  return tr;
}

void AttnBiLstmNet::backward(const Trace& tr, std::span<const std::int32_t> ids, Label label) {
  const Vector d_logits = cross_entropy_logit_grad(tr.y, label);
  Vector d_pooled = classify_head_backward(tr.pooled, d_logits, head);
  if (tr.drop_scale.size() == d_pooled.size()) d_pooled = d_pooled.cwiseProduct(tr.drop_scale);
  const Matrix d_states = attention_backward(tr.att, tr.enc.states, tr.mask, d_pooled, attn);
  const Matrix dx = bilstm_backward(tr.enc, d_states, fwd, bwd);
  embed_backward(embedding, ids, dx);
}

Vector AttnBiLstmNet::probabilities(std::span<const std::int32_t> ids) const { return forward(ids, nullptr).y; }

double AttnBiLstmNet::forward_backward(std::span<const std::int32_t> ids, Label label, Rng* dropout_rng) {
  const Trace tr = forward(ids, dropout_rng);
  backward(tr, ids, label);
  return cross_entropy(tr.y, label);
}

void AttnBiLstmNet::save(Checkpoint& ck) const {
  ck.embed_dim = static_cast<int>(cfg_.embed_dim);
  ck.hidden = static_cast<int>(cfg_.hidden);
  ck.attn_dim = static_cast<int>(cfg_.attn_dim);
  Matrix settings(1, 2);
  settings << static_cast<double>(cfg_.score), cfg_.dropout;
  ck.add("rnn.settings", settings);
  for (const Param* p : {&embedding, &fwd.W, &fwd.U, &fwd.b, &bwd.W, &bwd.U, &bwd.b, &attn.W_h, &attn.W_v, &attn.b,
                         &attn.v, &head.W_s, &head.b_s}) {
    ck.add(*p);
  }
}

void AttnBiLstmNet::restore(const Checkpoint& ck) {
  for (Param* p : params()) ck.restore(*p);
}

}  // namespace discaug::neural
