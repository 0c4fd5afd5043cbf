#include "discaug/neural/lstm.hpp"

namespace discaug::neural {

namespace {

Vector sigmoid(const Vector& z) { return (1.0 / (1.0 + (-z.array()).exp())).matrix(); }

LstmStep step_unchecked(const LstmParams& p, const Eigen::Ref<const Vector>& x, const Vector& h_prev,
                        const Vector& c_prev) {
  const Eigen::Index H = p.hidden();
  Vector z = p.W.value * x + p.U.value * h_prev + p.b.value;
  LstmStep s;
  s.f = sigmoid(z.segment(0, H));
  s.i = sigmoid(z.segment(H, H));
  s.o = sigmoid(z.segment(2 * H, H));
  s.g = z.segment(3 * H, H).array().tanh().matrix();
  s.c = s.f.cwiseProduct(c_prev) + s.i.cwiseProduct(s.g);
  s.tanh_c = s.c.array().tanh().matrix();
  s.h = s.o.cwiseProduct(s.tanh_c);
  return s;
}

void backward_unchecked(LstmParams& p, const LstmStep& s, const Eigen::Ref<const Vector>& x,
                        const Vector& h_prev, const Vector& c_prev, const Vector& dh, const Vector& dc,
                        LstmStepGrad& out) {
  const Eigen::Index H = p.hidden();
  const Vector dc_total =
      dc + dh.cwiseProduct(s.o).cwiseProduct((1.0 - s.tanh_c.array().square()).matrix());
  Vector dz(4 * H);
  dz.segment(0, H) = dc_total.cwiseProduct(c_prev).cwiseProduct(s.f.cwiseProduct((1.0 - s.f.array()).matrix()));
  dz.segment(H, H) = dc_total.cwiseProduct(s.g).cwiseProduct(s.i.cwiseProduct((1.0 - s.i.array()).matrix()));
  dz.segment(2 * H, H) = dh.cwiseProduct(s.tanh_c).cwiseProduct(s.o.cwiseProduct((1.0 - s.o.array()).matrix()));
  dz.segment(3 * H, H) = dc_total.cwiseProduct(s.i).cwiseProduct((1.0 - s.g.array().square()).matrix());
  p.W.grad.noalias() += dz * x.transpose();
  p.U.grad.noalias() += dz * h_prev.transpose();
  p.b.grad += dz;
  out.dx.noalias() = p.W.value.transpose() * dz;
  out.dh_prev.noalias() = p.U.value.transpose() * dz;
  out.dc_prev = dc_total.cwiseProduct(s.f);
}

void check_params(const LstmParams& p) {
  const auto H = p.hidden();
  require_rows(p.W.value.rows(), 4 * H, "LSTM W");
  require_rows(p.U.value.rows(), 4 * H, "LSTM U");
  require_rows(p.b.value.rows(), 4 * H, "LSTM b");
}

}  // namespace

LstmParams::LstmParams(const std::string& prefix, Eigen::Index input_dim, Eigen::Index hidden)
    : W(prefix + ".W", 4 * hidden, input_dim), U(prefix + ".U", 4 * hidden, hidden), b(prefix + ".b", 4 * hidden, 1) {}

void LstmParams::init(Rng& rng, double scale) {
  init_uniform(W, scale, rng);
  init_uniform(U, scale, rng);
  b.value.setZero();
}

void LstmParams::zero_grad() {
  W.zero_grad();
  U.zero_grad();
  b.zero_grad();
}

LstmStep lstm_cell(const LstmParams& p, const Vector& x, const Vector& h_prev, const Vector& c_prev) {
  check_params(p);
  require_rows(x.rows(), p.input_dim(), "LSTM input x");
  require_rows(h_prev.rows(), p.hidden(), "LSTM h_prev");
  require_rows(c_prev.rows(), p.hidden(), "LSTM c_prev");
  require_finite(x, "LSTM input x");
  require_finite(h_prev, "LSTM h_prev");
  require_finite(c_prev, "LSTM c_prev");
  return step_unchecked(p, x, h_prev, c_prev);
}

LstmStepGrad lstm_cell_backward(LstmParams& p, const LstmStep& step, const Vector& x, const Vector& h_prev,
                                const Vector& c_prev, const Vector& dh, const Vector& dc) {
  check_params(p);
  require_rows(dh.rows(), p.hidden(), "LSTM dh");
  require_rows(dc.rows(), p.hidden(), "LSTM dc");
  LstmStepGrad g;
  backward_unchecked(p, step, x, h_prev, c_prev, dh, dc, g);
  return g;
}

BiLstmOutput bilstm_encode(const Matrix& x, const LstmParams& fwd, const LstmParams& bwd, const PadMask& mask) {
  check_params(fwd);
  check_params(bwd);
  const Eigen::Index T = x.cols();
  if (T < 1) throw ShapeError("bilstm_encode: empty sequence");
  require_rows(x.rows(), fwd.input_dim(), "BiLSTM input");
  require_rows(x.rows(), bwd.input_dim(), "BiLSTM input");
  if (!mask.empty() && static_cast<Eigen::Index>(mask.size()) != T) throw ShapeError("bilstm_encode: mask length");
  require_finite(x, "BiLSTM input");

  BiLstmOutput out;
  for (Eigen::Index t = 0; t < T; ++t) {
    if (!is_masked(mask, t)) out.positions.push_back(t);
  }
  const auto n = static_cast<Eigen::Index>(out.positions.size());
  if (n == 0) throw ShapeError("bilstm_encode: every position is masked");
  out.inputs.resize(x.rows(), n);
  for (Eigen::Index k = 0; k < n; ++k) out.inputs.col(k) = x.col(out.positions[static_cast<std::size_t>(k)]);

  const Eigen::Index Hf = fwd.hidden(), Hb = bwd.hidden();
  out.states = Matrix::Zero(Hf + Hb, T);
  out.fwd.resize(static_cast<std::size_t>(n));
  out.bwd.resize(static_cast<std::size_t>(n));

  Vector h = Vector::Zero(Hf), c = Vector::Zero(Hf);
  for (Eigen::Index k = 0; k < n; ++k) {
    auto& s = out.fwd[static_cast<std::size_t>(k)];
    s = step_unchecked(fwd, out.inputs.col(k), h, c);
    h = s.h;
    c = s.c;
    out.states.col(out.positions[static_cast<std::size_t>(k)]).head(Hf) = s.h;
  }
  h = Vector::Zero(Hb);
  c = Vector::Zero(Hb);
  for (Eigen::Index k = n - 1; k >= 0; --k) {
    auto& s = out.bwd[static_cast<std::size_t>(k)];
    s = step_unchecked(bwd, out.inputs.col(k), h, c);
    h = s.h;
    c = s.c;
    out.states.col(out.positions[static_cast<std::size_t>(k)]).tail(Hb) = s.h;
  }
  return out;
}

Matrix bilstm_backward(const BiLstmOutput& out, const Matrix& d_states, LstmParams& fwd, LstmParams& bwd) {
  const Eigen::Index Hf = fwd.hidden(), Hb = bwd.hidden();
  require_rows(d_states.rows(), Hf + Hb, "BiLSTM state gradient");
  const auto n = static_cast<Eigen::Index>(out.positions.size());
  Matrix dx_compact = Matrix::Zero(out.inputs.rows(), n);
  LstmStepGrad g;

  Vector dh_next = Vector::Zero(Hf), dc_next = Vector::Zero(Hf);
  const Vector zf = Vector::Zero(Hf);
  for (Eigen::Index k = n - 1; k >= 0; --k) {
    const auto uk = static_cast<std::size_t>(k);
    const Vector dh = d_states.col(out.positions[uk]).head(Hf) + dh_next;
    const Vector& h_prev = k > 0 ? out.fwd[uk - 1].h : zf;
    const Vector& c_prev = k > 0 ? out.fwd[uk - 1].c : zf;
    backward_unchecked(fwd, out.fwd[uk], out.inputs.col(k), h_prev, c_prev, dh, dc_next, g);
    dx_compact.col(k) += g.dx;
    dh_next = g.dh_prev;
    dc_next = g.dc_prev;
  }

  dh_next = Vector::Zero(Hb);
  dc_next = Vector::Zero(Hb);
  const Vector zb = Vector::Zero(Hb);
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto uk = static_cast<std::size_t>(k);
    const Vector dh = d_states.col(out.positions[uk]).tail(Hb) + dh_next;
    const Vector& h_prev = k + 1 < n ? out.bwd[uk + 1].h : zb;
    const Vector& c_prev = k + 1 < n ? out.bwd[uk + 1].c : zb;
    backward_unchecked(bwd, out.bwd[uk], out.inputs.col(k), h_prev, c_prev, dh, dc_next, g);
    dx_compact.col(k) += g.dx;
    dh_next = g.dh_prev;
    dc_next = g.dc_prev;
  }

  Matrix dx = Matrix::Zero(out.inputs.rows(), d_states.cols());
  for (Eigen::Index k = 0; k < n; ++k) dx.col(out.positions[static_cast<std::size_t>(k)]) = dx_compact.col(k);
  return dx;
}

}  // namespace discaug::neural
