#include "discaug/neural/checkpoint.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

namespace discaug::neural {

namespace {

constexpr std::string_view kMagic = "discaug-ckpt";
constexpr std::string_view kVersion = "v1";

[[noreturn]] void malformed(std::size_t line_no, const std::string& what) {
  throw DataError("checkpoint line " + std::to_string(line_no) + ": " + what);
}

}  // namespace

bool Checkpoint::has(std::string_view name) const {
  for (const auto& [n, m] : blocks) {
    if (n == name) return true;
  }
  return false;
}

const Matrix& Checkpoint::block(std::string_view name) const {
  for (const auto& [n, m] : blocks) {
    if (n == name) return m;
  }
  throw DataError("checkpoint has no block named '" + std::string(name) + "'");
}

void Checkpoint::restore(Param& p) const {
  const Matrix& m = block(p.name);
  if (m.rows() != p.value.rows() || m.cols() != p.value.cols()) {
    throw DataError("checkpoint block '" + p.name + "' has shape " + std::to_string(m.rows()) + "x" +
                    std::to_string(m.cols()) + ", expected " + std::to_string(p.value.rows()) + "x" +
                    std::to_string(p.value.cols()));
  }
  p.value = m;
  p.grad = Matrix::Zero(m.rows(), m.cols());
}

void Checkpoint::write(std::ostream& out) const {
  out << kMagic << ' ' << kVersion << ' ' << embed_dim << ' ' << hidden << ' ' << attn_dim << ' ' << vocab.size()
      << '\n';
  out << "kind " << kind << '\n';
  out << "vocab " << vocab.size() << '\n';
  for (const auto& t : vocab) out << t << '\n';
  const auto old_precision = out.precision(17);
  for (const auto& [name, m] : blocks) {
    out << name << ' ' << m.rows() << ' ' << m.cols() << '\n';
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        if (c) out << ' ';
        out << m(r, c);
      }
      out << '\n';
    }
  }
  out.precision(old_precision);
}

Checkpoint Checkpoint::read(std::istream& in) {
  Checkpoint ck;
  std::string line;
  std::size_t line_no = 0;
  auto next_line = [&]() -> bool {
    if (!std::getline(in, line)) return false;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  };

  if (!next_line()) throw DataError("checkpoint is empty");
  {
    std::istringstream hs(line);
    std::string magic, version;
    long long vocab_size = -1;
    if (!(hs >> magic >> version >> ck.embed_dim >> ck.hidden >> ck.attn_dim >> vocab_size) || magic != kMagic) {
      malformed(line_no, "expected 'discaug-ckpt v1 <d> <H> <d_a> <V>'");
    }
    if (version != kVersion) malformed(line_no, "unsupported checkpoint version " + version);
    if (!next_line() || line.rfind("kind ", 0) != 0) malformed(line_no, "expected 'kind <name>'");
    ck.kind = line.substr(5);
    if (!next_line()) malformed(line_no, "expected 'vocab <V>'");
    std::istringstream vs(line);
    std::string tag;
    long long n = -1;
    if (!(vs >> tag >> n) || tag != "vocab" || n != vocab_size) malformed(line_no, "expected 'vocab <V>'");
    ck.vocab.reserve(static_cast<std::size_t>(n));
    for (long long k = 0; k < n; ++k) {
      if (!next_line() || line.empty()) malformed(line_no, "truncated vocabulary");
      ck.vocab.push_back(line);
    }
  }

  while (next_line()) {
    if (line.empty()) continue;
    std::istringstream bs(line);
    std::string name;
    long long rows = -1, cols = -1;
    if (!(bs >> name >> rows >> cols) || rows < 0 || cols < 0) malformed(line_no, "expected '<name> <rows> <cols>'");
    Matrix m(rows, cols);
    for (long long r = 0; r < rows; ++r) {
      if (!next_line()) malformed(line_no, "truncated block '" + name + "'");
      std::istringstream rs(line);
      for (long long c = 0; c < cols; ++c) {
        std::string field;
        if (!(rs >> field)) malformed(line_no, "short row in block '" + name + "'");
        char* end = nullptr;
        const double v = std::strtod(field.c_str(), &end);
        if (end != field.c_str() + field.size() || !std::isfinite(v)) {
          malformed(line_no, "bad real '" + field + "' in block '" + name + "'");
        }
        m(r, c) = v;
      }
    }
    if (ck.has(name)) malformed(line_no, "duplicate block '" + name + "'");
    ck.add(name, std::move(m));
  }
  return ck;
}

void Checkpoint::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write checkpoint: " + path.string());
  write(out);
  if (!out) throw DataError("write failed: " + path.string());
}

Checkpoint Checkpoint::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open checkpoint: " + path.string());
  return read(in);
}

}  // namespace discaug::neural
