#include "discaug/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "discaug/error.hpp"
#include "discaug/rng.hpp"
#include "discaug/text.hpp"

namespace discaug {

std::string_view to_string(Label l) noexcept {
  return l == Label::Positive ? "positive" : "negative";
}

Dataset::Dataset(std::string name, std::vector<Sample> samples) : name_(std::move(name)) {
  samples_.reserve(samples.size());
  for (auto& s : samples) add(std::move(s));
}

ClassCounts Dataset::class_counts() const {
  ClassCounts c;
  for (const auto& s : samples_) {
    (s.label == Label::Positive ? c.positive : c.negative)++;
  }
  return c;
}

std::uint64_t Dataset::next_id() const { return next_id_; }

void Dataset::add(Sample s) {
  if (!ids_.insert(s.id).second) {
    throw DataError("duplicate sample id " + std::to_string(s.id) + " in dataset '" + name_ + "'");
  }
  next_id_ = std::max(next_id_, s.id + 1);
  samples_.push_back(std::move(s));
}

std::uint64_t Dataset::add_with_fresh_id(std::vector<std::string> tokens, Label label) {
  const std::uint64_t id = next_id_;
  add(Sample{std::move(tokens), label, id});
  return id;
}

namespace {

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

bool is_blank(std::string_view line) {
  return std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); });
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file: " + path.string());
  return in;
}

std::string default_name(const std::filesystem::path& path) { return path.stem().string(); }

void append_lines(std::istream& in, Label label, Dataset& out) {
  std::string line;
  while (std::getline(in, line)) {
    strip_cr(line);
    if (is_blank(line)) continue;
    auto tokens = tokenize(line);
    if (tokens.empty()) continue;
    out.add_with_fresh_id(std::move(tokens), label);
  }
}

}  // namespace

Dataset parse_tsv(std::istream& in, std::string name, std::string_view source) {
  Dataset d(std::move(name));
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (is_blank(line)) continue;
    const auto tab = line.find('\t');
    if (tab != 1 || (line[0] != '0' && line[0] != '1')) {
      throw DataError(std::string(source) + ":" + std::to_string(line_no) +
                      ": malformed label (expected '0' or '1' followed by a tab)");
    }
    auto tokens = tokenize(std::string_view(line).substr(tab + 1));
    if (tokens.empty()) continue;
    d.add_with_fresh_id(std::move(tokens), line[0] == '1' ? Label::Positive : Label::Negative);
  }
  if (d.empty()) throw DataError(std::string(source) + ": zero usable lines");
  return d;
}

Dataset load_tsv(const std::filesystem::path& path, std::string name) {
  auto in = open_or_throw(path);
  return parse_tsv(in, name.empty() ? default_name(path) : std::move(name), path.string());
}

Dataset load_pair(const std::filesystem::path& pos_path, const std::filesystem::path& neg_path,
                  std::string name) {
  Dataset d(name.empty() ? default_name(pos_path) : std::move(name));
  {
    auto in = open_or_throw(pos_path);
    append_lines(in, Label::Positive, d);
  }
  const auto n_pos = d.size();
  if (n_pos == 0) throw DataError(pos_path.string() + ": zero usable lines");
  {
    auto in = open_or_throw(neg_path);
    append_lines(in, Label::Negative, d);
  }
  if (d.size() == n_pos) throw DataError(neg_path.string() + ": zero usable lines");
  return d;
}

void write_tsv(const Dataset& d, std::ostream& out) {
  for (const auto& s : d) {
    out << index_of(s.label) << '\t' << join_tokens(s.tokens) << '\n';
  }
}

void write_tsv(const Dataset& d, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write file: " + path.string());
  write_tsv(d, out);
  if (!out) throw DataError("write failed: " + path.string());
}

namespace {

std::vector<std::size_t> indices_of(const Dataset& d, Label label) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d[i].label == label) idx.push_back(i);
  }
  return idx;
}

// The tiny epsilon keeps products like 0.29 * 100 from flooring to 28.
std::size_t floor_fraction(double fraction, std::size_t n) {
  return static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n) + 1e-9));
}

}  // namespace

std::pair<Dataset, Dataset> split(const Dataset& d, const SplitSpec& spec) {
  if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0)) {
    throw ConfigError("train fraction must lie in (0, 1)");
  }
  Rng rng(spec.seed);
  std::vector<bool> to_train(d.size(), false);
  for (Label label : {Label::Negative, Label::Positive}) {
    auto idx = indices_of(d, label);
    if (idx.empty()) {
      throw DataError("split: class " + std::string(to_string(label)) + " is absent");
    }
    rng.shuffle(std::span(idx));
    const auto n_train = floor_fraction(spec.train_fraction, idx.size());
    if (n_train == 0 || n_train == idx.size()) {
      throw DataError("split: class " + std::string(to_string(label)) +
                      " would receive zero train or zero test samples");
    }
    for (std::size_t k = 0; k < n_train; ++k) to_train[idx[k]] = true;
  }
  Dataset train(d.name()), test(d.name());
  for (std::size_t i = 0; i < d.size(); ++i) (to_train[i] ? train : test).add(d[i]);
  return {std::move(train), std::move(test)};
}

Dataset make_imbalanced(const Dataset& train, unsigned ir, std::uint64_t seed) {
  if (ir < 1) throw ConfigError("imbalanced ratio must be >= 1");
  auto pos = indices_of(train, Label::Positive);
  auto neg = indices_of(train, Label::Negative);
  const std::size_t quota = pos.size() / ir;
  if (quota < 1) {
    throw DataError("make_imbalanced: floor(n_pos / ir) < 1 (n_pos=" + std::to_string(pos.size()) +
                    ", ir=" + std::to_string(ir) + ")");
  }
  if (quota > neg.size()) {
    throw DataError("make_imbalanced: need " + std::to_string(quota) + " negatives, have " +
                    std::to_string(neg.size()));
  }
  Rng rng(seed);
  // Partial Fisher-Yates: the first `quota` slots become a uniform draw.
  for (std::size_t k = 0; k < quota; ++k) {
    std::swap(neg[k], neg[k + rng.below(neg.size() - k)]);
  }
  std::vector<std::size_t> keep = pos;
  keep.insert(keep.end(), neg.begin(), neg.begin() + static_cast<std::ptrdiff_t>(quota));
  rng.shuffle(std::span(keep));
  Dataset out(train.name());
  for (auto i : keep) out.add(train[i]);
  return out;
}

Dataset oversample(const Dataset& d, std::uint64_t seed) {
  const auto counts = d.class_counts();
  if (counts.positive == 0 || counts.negative == 0) {
    throw DataError("oversample: both classes must be non-empty");
  }
  Dataset out = d;
  if (counts.positive == counts.negative) return out;
  const Label minority = counts.positive < counts.negative ? Label::Positive : Label::Negative;
  const auto pool = indices_of(d, minority);
  const std::size_t deficit = std::max(counts.positive, counts.negative) - pool.size();
  Rng rng(seed);
  for (std::size_t k = 0; k < deficit; ++k) {
    const auto& src = d[pool[rng.below(pool.size())]];
    out.add_with_fresh_id(src.tokens, src.label);
  }
  return out;
}

}  // namespace discaug
