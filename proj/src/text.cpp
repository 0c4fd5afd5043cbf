#include "discaug/text.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "discaug/error.hpp"
#include "discaug/rng.hpp"

namespace discaug {

namespace {

constexpr std::string_view kSplitPunct = ".,!?;:()\"";
constexpr std::string_view kLeftQuote = "\xE2\x80\x9C";
constexpr std::string_view kRightQuote = "\xE2\x80\x9D";

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) out.push_back(std::move(current));
    current.clear();
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const auto c = static_cast<unsigned char>(text[i]);
    if (std::isspace(c)) {
      flush();
    } else if (kSplitPunct.find(static_cast<char>(c)) != std::string_view::npos) {
      flush();
      out.emplace_back(1, static_cast<char>(c));
    } else if (text.substr(i, 3) == kLeftQuote || text.substr(i, 3) == kRightQuote) {
      flush();
      out.emplace_back(text.substr(i, 3));
      i += 2;
    } else {
      current.push_back(c < 0x80 ? static_cast<char>(std::tolower(c)) : static_cast<char>(c));
    }
  }
  flush();
  return out;
}

bool is_punctuation(std::string_view token) {
  if (token.empty()) return false;
  if (token == kLeftQuote || token == kRightQuote) return true;
  return std::all_of(token.begin(), token.end(), [](unsigned char c) { return c < 0x80 && std::ispunct(c); });
}

std::size_t count_content_tokens(std::span<const std::string> tokens) {
  return static_cast<std::size_t>(
      std::count_if(tokens.begin(), tokens.end(), [](const std::string& t) { return !is_punctuation(t); }));
}

std::string join_tokens(std::span<const std::string> tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

Vocabulary::Vocabulary() {
  push(std::string(kPadToken));
  push(std::string(kUnkToken));
}

Vocabulary Vocabulary::from_tokens(std::vector<std::string> tokens) {
  if (tokens.size() < 2 || tokens[0] != kPadToken || tokens[1] != kUnkToken) {
    throw DataError("vocabulary must start with the reserved <pad> and <unk> tokens");
  }
  Vocabulary v;
  for (std::size_t i = 2; i < tokens.size(); ++i) {
    if (v.find(tokens[i])) throw DataError("duplicate vocabulary token: " + tokens[i]);
    v.push(std::move(tokens[i]));
  }
  return v;
}

void Vocabulary::push(std::string token) {
  index_.emplace(token, static_cast<std::int32_t>(tokens_.size()));
  tokens_.push_back(std::move(token));
}

std::optional<std::int32_t> Vocabulary::find(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::int32_t Vocabulary::index(std::string_view token) const { return find(token).value_or(kUnk); }

Vocabulary build_vocab(const Dataset& d, int min_freq) {
  if (min_freq < 1) throw ConfigError("min_freq must be >= 1");
  if (d.empty()) throw DataError("build_vocab: empty dataset");
  std::unordered_map<std::string, std::size_t> freq;
  for (const auto& s : d) {
    for (const auto& t : s.tokens) ++freq[t];
  }
  std::vector<std::pair<std::string, std::size_t>> kept;
  for (auto& [tok, n] : freq) {
    if (n >= static_cast<std::size_t>(min_freq) && tok != Vocabulary::kPadToken && tok != Vocabulary::kUnkToken) {
      kept.emplace_back(tok, n);
    }
  }
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  std::vector<std::string> tokens{std::string(Vocabulary::kPadToken), std::string(Vocabulary::kUnkToken)};
  tokens.reserve(kept.size() + 2);
  for (auto& [tok, n] : kept) tokens.push_back(std::move(tok));
  return Vocabulary::from_tokens(std::move(tokens));
}

std::vector<std::int32_t> encode(std::span<const std::string> tokens, const Vocabulary& vocab) {
  std::vector<std::int32_t> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(vocab.index(t));
  return out;
}

std::vector<std::string> decode(std::span<const std::int32_t> indices, const Vocabulary& vocab) {
  std::vector<std::string> out;
  out.reserve(indices.size());
  for (auto i : indices) out.push_back(vocab.token(i));
  return out;
}

EmbeddingTable random_embeddings(std::size_t vocab_size, int dim, std::uint64_t seed) {
  if (dim < 1) throw ConfigError("embedding dim must be >= 1");
  EmbeddingTable table{Eigen::MatrixXd(static_cast<Eigen::Index>(vocab_size), dim)};
  Rng rng(seed);
  for (Eigen::Index r = 0; r < table.weights.rows(); ++r) {
    for (Eigen::Index c = 0; c < table.weights.cols(); ++c) table.weights(r, c) = rng.uniform(-0.1, 0.1);
  }
  if (vocab_size > 0) table.weights.row(Vocabulary::kPad).setZero();
  return table;
}

EmbeddingTable load_embeddings(const std::filesystem::path& path, const Vocabulary& vocab, int dim,
                               std::uint64_t seed, bool allow_missing) {
  auto table = random_embeddings(vocab.size(), dim, seed);
  std::ifstream in(path);
  if (!in) {
    if (allow_missing && !std::filesystem::exists(path)) return table;
    throw DataError("cannot read embedding file: " + path.string());
  }
  std::string line;
  long long count = 0, file_dim = 0;
  if (!std::getline(in, line) || !(std::istringstream(line) >> count >> file_dim) || count < 0 || file_dim < 1) {
    throw DataError(path.string() + ":1: malformed header, expected '<count> <dim>'");
  }
  if (file_dim != dim) {
    throw DataError("dim mismatch: file has " + std::to_string(file_dim) + ", requested " + std::to_string(dim));
  }
  std::size_t line_no = 1;
  std::string word;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream fields(line);
    fields >> word;
    Eigen::RowVectorXd row(dim);
    for (int c = 0; c < dim; ++c) {
      if (!(fields >> row(c)) || !std::isfinite(row(c))) {
        throw DataError(path.string() + ":" + std::to_string(line_no) + ": malformed embedding line");
      }
    }
    if (std::string extra; fields >> extra) {
      throw DataError(path.string() + ":" + std::to_string(line_no) + ": malformed embedding line");
    }
    if (auto idx = vocab.find(word); idx && *idx != Vocabulary::kPad) table.weights.row(*idx) = row;
  }
  table.weights.row(Vocabulary::kPad).setZero();
  return table;
}

}  // namespace discaug
