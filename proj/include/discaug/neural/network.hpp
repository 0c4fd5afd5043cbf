#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "discaug/corpus.hpp"
#include "discaug/neural/checkpoint.hpp"
#include "discaug/neural/param.hpp"

namespace discaug::neural {

/// Index of the padding token; its embedding row stays zero and its positions are masked.
inline constexpr std::int32_t kPadId = 0;

PadMask pad_mask_of(std::span<const std::int32_t> ids);

/// Embedding lookup: one column per token id.
Matrix embed(const Param& embedding, std::span<const std::int32_t> ids);

/// Scatters dL/dx columns into embedding gradient rows (padding skipped).
void embed_backward(Param& embedding, std::span<const std::int32_t> ids, const Matrix& dx);

/// A two-class sequence classifier over token ids.
class Network {
 public:
  virtual ~Network() = default;

  virtual std::vector<Param*> params() = 0;
  /// Class distribution with dropout disabled.
  virtual Vector probabilities(std::span<const std::int32_t> ids) const = 0;
  /// Forward + backward for one example; accumulates into Param::grad and
  /// returns the loss. Dropout is active when dropout_rng is non-null.
  virtual double forward_backward(std::span<const std::int32_t> ids, Label label, Rng* dropout_rng) = 0;

  virtual void save(Checkpoint& ck) const = 0;
  virtual void restore(const Checkpoint& ck) = 0;

  double loss(std::span<const std::int32_t> ids, Label label) const;
  void zero_grad();
};

}  // namespace discaug::neural
