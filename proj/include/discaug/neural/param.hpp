#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "discaug/error.hpp"
#include "discaug/rng.hpp"

namespace discaug::neural {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Positions flagged true are padding and are excluded from encoding,
/// attention and pooling. An empty mask means every position is real.
using PadMask = std::vector<bool>;

/// A trainable tensor with its accumulated gradient. Vectors are n x 1.
struct Param {
  std::string name;
  Matrix value;
  Matrix grad;

  Param() = default;
  Param(std::string n, Eigen::Index rows, Eigen::Index cols)
      : name(std::move(n)), value(Matrix::Zero(rows, cols)), grad(Matrix::Zero(rows, cols)) {}

  void zero_grad() { grad.setZero(); }
  Eigen::Index size() const noexcept { return value.size(); }
};

inline void init_uniform(Param& p, double scale, Rng& rng) {
  for (Eigen::Index i = 0; i < p.value.size(); ++i) p.value.data()[i] = rng.uniform(-scale, scale);
}

template <typename Derived>
void require_finite(const Eigen::DenseBase<Derived>& m, const char* what) {
  if (!m.allFinite()) throw ShapeError(std::string("non-finite value in ") + what);
}

inline void require_rows(Eigen::Index got, Eigen::Index want, const char* what) {
  if (got != want) {
    throw ShapeError(std::string("shape mismatch for ") + what + ": expected " + std::to_string(want) +
                     " rows, got " + std::to_string(got));
  }
}

/// Number of unmasked positions in a length-T sequence.
inline Eigen::Index count_unmasked(const PadMask& mask, Eigen::Index T) {
  if (mask.empty()) return T;
  Eigen::Index n = 0;
  for (Eigen::Index i = 0; i < T; ++i) n += mask[static_cast<std::size_t>(i)] ? 0 : 1;
  return n;
}

inline bool is_masked(const PadMask& mask, Eigen::Index i) {
  return !mask.empty() && mask[static_cast<std::size_t>(i)];
}

}  // namespace discaug::neural
