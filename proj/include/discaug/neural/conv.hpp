#pragma once

#include <string>
#include <vector>

#include "discaug/neural/param.hpp"

namespace discaug::neural {

/// Filters of one window width. Row f of W is filter f applied to the
/// window [x_t; x_{t+1}; ...; x_{t+width-1}] (position-major).
struct ConvBank {
  int width = 0;
  Param W;  // F x (width * d)
  Param b;  // F x 1

  ConvBank() = default;
  ConvBank(const std::string& prefix, int width, Eigen::Index input_dim, Eigen::Index filters);
  Eigen::Index filters() const noexcept { return W.value.rows(); }
};

struct ConvOutput {
  Vector features;                                  // sum of filters over banks
  Matrix padded;                                    // d x L', compacted input, zero-padded to the widest bank
  std::vector<Eigen::Index> positions;              // unmasked positions of the original sequence
  std::vector<std::vector<Eigen::Index>> argmax;    // per bank, per filter: winning window start
  std::vector<Vector> best;                         // per bank: pre-activation max
};

int max_width(const std::vector<ConvBank>& banks);

/// Convolution + ReLU + global max-pool per filter, concatenated over banks.
/// Padding positions are dropped; a sequence shorter than the widest filter
/// is right-padded with zero vectors.
ConvOutput conv_maxpool(const Matrix& x, const std::vector<ConvBank>& banks, const PadMask& mask = {});

/// Returns dL/dx (d x T of the original input) and accumulates bank gradients.
Matrix conv_maxpool_backward(const ConvOutput& out, const Vector& d_features, Eigen::Index T,
                             std::vector<ConvBank>& banks);

}  // namespace discaug::neural
