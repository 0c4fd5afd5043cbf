#pragma once

#include "discaug/neural/attention.hpp"
#include "discaug/neural/layers.hpp"
#include "discaug/neural/lstm.hpp"
#include "discaug/neural/network.hpp"

namespace discaug::neural {

struct AttnBiLstmConfig {
  Eigen::Index vocab_size = 2;
  Eigen::Index embed_dim = 64;
  Eigen::Index hidden = 32;
  Eigen::Index attn_dim = 16;
  double dropout = 0.0;  // applied to the attention context before the head
  AttentionScore score = AttentionScore::OnesSum;
};

/// Embedding -> BiLSTM -> additive attention pooling -> softmax head.
class AttnBiLstmNet final : public Network {
 public:
  explicit AttnBiLstmNet(const AttnBiLstmConfig& cfg);

  /// Weights uniform(-0.08, 0.08), biases zero, v and embeddings
  /// uniform(-0.1, 0.1), padding row zero.
  void init(Rng& rng);

  const AttnBiLstmConfig& config() const noexcept { return cfg_; }

  struct Trace {
    PadMask mask;
    Matrix x;
    BiLstmOutput enc;
    AttentionOutput att;
    Vector drop_scale;
    Vector pooled;
    Vector y;
  };
  Trace forward(std::span<const std::int32_t> ids, Rng* dropout_rng) const;
  /// Loss gradient for a finished forward trace.
  void backward(const Trace& trace, std::span<const std::int32_t> ids, Label label);

  std::vector<Param*> params() override;
  Vector probabilities(std::span<const std::int32_t> ids) const override;
  double forward_backward(std::span<const std::int32_t> ids, Label label, Rng* dropout_rng) override;
  void save(Checkpoint& ck) const override;
  void restore(const Checkpoint& ck) override;

  Param embedding;
  LstmParams fwd;
  LstmParams bwd;
  AttentionParams attn;
  HeadParams head;

 private:
  AttnBiLstmConfig cfg_;
};

}  // namespace discaug::neural
