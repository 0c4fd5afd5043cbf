#pragma once

#include <vector>

#include "discaug/neural/conv.hpp"
#include "discaug/neural/layers.hpp"
#include "discaug/neural/network.hpp"

namespace discaug::neural {

struct CnnConfig {
  Eigen::Index vocab_size = 2;
  Eigen::Index embed_dim = 64;
  std::vector<int> widths{3, 4, 5};
  Eigen::Index filters = 100;  // per width
  double dropout = 0.5;        // on the pooled features, before the head
};

/// Embedding -> multi-width convolution + ReLU + global max-pool -> dropout -> softmax head.
class CnnNet final : public Network {
 public:
  explicit CnnNet(const CnnConfig& cfg);
  void init(Rng& rng);

  const CnnConfig& config() const noexcept { return cfg_; }

  std::vector<Param*> params() override;
  Vector probabilities(std::span<const std::int32_t> ids) const override;
  double forward_backward(std::span<const std::int32_t> ids, Label label, Rng* dropout_rng) override;
  void save(Checkpoint& ck) const override;
  void restore(const Checkpoint& ck) override;

  Param embedding;
  std::vector<ConvBank> banks;
  HeadParams head;

 private:
  CnnConfig cfg_;
};

}  // namespace discaug::neural
