#include "discaug/neural/network.hpp"

#include "discaug/neural/layers.hpp"

namespace discaug::neural {

PadMask pad_mask_of(std::span<const std::int32_t> ids) {
  PadMask mask(ids.size(), false);
  bool any = false;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    mask[i] = ids[i] == kPadId;
    any = any || mask[i];
  }
  if (!any) mask.clear();
  return mask;
}

Matrix embed(const Param& embedding, std::span<const std::int32_t> ids) {
  Matrix x(embedding.value.cols(), static_cast<Eigen::Index>(ids.size()));
  for (std::size_t t = 0; t < ids.size(); ++t) {
    if (ids[t] < 0 || ids[t] >= embedding.value.rows()) {
      throw ShapeError("token id " + std::to_string(ids[t]) + " outside embedding table");
    }
    x.col(static_cast<Eigen::Index>(t)) = embedding.value.row(ids[t]).transpose();
  }
  return x;
}

void embed_backward(Param& embedding, std::span<const std::int32_t> ids, const Matrix& dx) {
  for (std::size_t t = 0; t < ids.size(); ++t) {
    if (ids[t] == kPadId) continue;
    embedding.grad.row(ids[t]) += dx.col(static_cast<Eigen::Index>(t)).transpose();
  }
}

double Network::loss(std::span<const std::int32_t> ids, Label label) const {
  return cross_entropy(probabilities(ids), label);
}

void Network::zero_grad() {
  for (Param* p : params()) p->zero_grad();
}

}  // namespace discaug::neural
