#include "discaug/neural/conv.hpp"

#include <algorithm>

namespace discaug::neural {

ConvBank::ConvBank(const std::string& prefix, int w, Eigen::Index input_dim, Eigen::Index filters)
    : width(w),
      W(prefix + ".w" + std::to_string(w) + ".W", filters, w * input_dim),
      b(prefix + ".w" + std::to_string(w) + ".b", filters, 1) {}

int max_width(const std::vector<ConvBank>& banks) {
  int w = 0;
  for (const auto& b : banks) w = std::max(w, b.width);
  return w;
}

ConvOutput conv_maxpool(const Matrix& x, const std::vector<ConvBank>& banks, const PadMask& mask) {
  const Eigen::Index T = x.cols(), d = x.rows();
  if (T < 1) throw ShapeError("conv_maxpool: empty sequence");
  if (banks.empty()) throw ShapeError("conv_maxpool: no filter banks");
  if (!mask.empty() && static_cast<Eigen::Index>(mask.size()) != T) throw ShapeError("conv_maxpool: mask length");
  for (const auto& bank : banks) {
    if (bank.width < 1) throw ShapeError("conv_maxpool: filter width must be >= 1");
    require_rows(bank.W.value.cols(), bank.width * d, "conv filter width*d");
  }

  ConvOutput out;
  for (Eigen::Index t = 0; t < T; ++t) {
    if (!is_masked(mask, t)) out.positions.push_back(t);
  }
  const auto n = static_cast<Eigen::Index>(out.positions.size());
  if (n == 0) throw ShapeError("conv_maxpool: every position is masked");
  const Eigen::Index len = std::max<Eigen::Index>(n, max_width(banks));
  out.padded = Matrix::Zero(d, len);
  for (Eigen::Index k = 0; k < n; ++k) out.padded.col(k) = x.col(out.positions[static_cast<std::size_t>(k)]);

  Eigen::Index total = 0;
  for (const auto& bank : banks) total += bank.filters();
  out.features.resize(total);

  Eigen::Index offset = 0;
  for (const auto& bank : banks) {
    const Eigen::Index windows = len - bank.width + 1;
    const Eigen::Index span = bank.width * d;
    Matrix cols(span, windows);
    for (Eigen::Index t = 0; t < windows; ++t) {
      cols.col(t) = Eigen::Map<const Vector>(out.padded.data() + t * d, span);
    }
    Matrix response = bank.W.value * cols;
    response.colwise() += bank.b.value.col(0);

    std::vector<Eigen::Index> arg(static_cast<std::size_t>(bank.filters()));
    Vector best(bank.filters());
    for (Eigen::Index f = 0; f < bank.filters(); ++f) {
      Eigen::Index t_best = 0;
      response.row(f).maxCoeff(&t_best);
      arg[static_cast<std::size_t>(f)] = t_best;
      best(f) = response(f, t_best);
      out.features(offset + f) = std::max(0.0, best(f));
    }
    out.argmax.push_back(std::move(arg));
    out.best.push_back(std::move(best));
    offset += bank.filters();
  }
  return out;
}

Matrix conv_maxpool_backward(const ConvOutput& out, const Vector& d_features, Eigen::Index T,
                             std::vector<ConvBank>& banks) {
  const Eigen::Index d = out.padded.rows();
  Matrix d_padded = Matrix::Zero(d, out.padded.cols());
  Eigen::Index offset = 0;
  for (std::size_t k = 0; k < banks.size(); ++k) {
    auto& bank = banks[k];
    const Eigen::Index span = bank.width * d;
    for (Eigen::Index f = 0; f < bank.filters(); ++f) {
      const double g = d_features(offset + f);
      if (g == 0.0 || out.best[k](f) <= 0.0) continue;
      const Eigen::Index t = out.argmax[k][static_cast<std::size_t>(f)];
      Eigen::Map<const Vector> window(out.padded.data() + t * d, span);
      bank.W.grad.row(f) += g * window.transpose();
      bank.b.grad(f, 0) += g;
      Eigen::Map<Vector>(d_padded.data() + t * d, span) += g * bank.W.value.row(f).transpose();
    }
    offset += bank.filters();
  }
  Matrix dx = Matrix::Zero(d, T);
  for (std::size_t k = 0; k < out.positions.size(); ++k) {
    dx.col(out.positions[k]) = d_padded.col(static_cast<Eigen::Index>(k));
  }
  return dx;
}

}  // namespace discaug::neural
