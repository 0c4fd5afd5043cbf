#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

#include "discaug/corpus.hpp"

namespace discaug {

/// Lowercases ASCII, splits on whitespace and splits off the punctuation
/// characters . , ! ? ; : ( ) " and curly double quotes as their own tokens.
/// Apostrophes stay inside tokens ("don't").
std::vector<std::string> tokenize(std::string_view text);

/// True when the token consists only of punctuation (ASCII punct or curly quotes).
bool is_punctuation(std::string_view token);

std::size_t count_content_tokens(std::span<const std::string> tokens);

std::string join_tokens(std::span<const std::string> tokens);

class Vocabulary {
 public:
  static constexpr std::int32_t kPad = 0;
  static constexpr std::int32_t kUnk = 1;
  static constexpr std::string_view kPadToken = "<pad>";
  static constexpr std::string_view kUnkToken = "<unk>";

  Vocabulary();
  /// Rebuilds from an index-ordered token list; the first two entries must be
  /// the reserved PAD and UNK tokens.
  static Vocabulary from_tokens(std::vector<std::string> tokens);

  std::size_t size() const noexcept { return tokens_.size(); }
  /// Number of real (non-reserved) tokens.
  std::size_t content_size() const noexcept { return tokens_.size() - 2; }
  std::int32_t index(std::string_view token) const;
  std::optional<std::int32_t> find(std::string_view token) const;
  const std::string& token(std::int32_t index) const { return tokens_.at(static_cast<std::size_t>(index)); }
  const std::vector<std::string>& tokens() const noexcept { return tokens_; }

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) { return a.tokens_ == b.tokens_; }

 private:
  void push(std::string token);

  std::vector<std::string> tokens_;
  std::unordered_map<std::string, std::int32_t> index_;
};

/// PAD, UNK, then tokens with frequency >= min_freq ordered by descending
/// frequency with lexicographic tie-break.
Vocabulary build_vocab(const Dataset& d, int min_freq = 1);

std::vector<std::int32_t> encode(std::span<const std::string> tokens, const Vocabulary& vocab);
std::vector<std::string> decode(std::span<const std::int32_t> indices, const Vocabulary& vocab);

struct EmbeddingTable {
  Eigen::MatrixXd weights;  // vocab size x dim, row i embeds token i

  Eigen::Index rows() const noexcept { return weights.rows(); }
  Eigen::Index dim() const noexcept { return weights.cols(); }
};

/// Uniform(-0.1, 0.1) rows with the PAD row zeroed.
EmbeddingTable random_embeddings(std::size_t vocab_size, int dim, std::uint64_t seed);

/// Loads the `<count> <dim>` header + `<word> <reals...>` text format. Vocabulary
/// words found in the file are copied; the rest keep their random init. When
/// the file is missing and allow_missing is set, the random table is returned.
EmbeddingTable load_embeddings(const std::filesystem::path& path, const Vocabulary& vocab, int dim,
                               std::uint64_t seed, bool allow_missing = false);

}  // namespace discaug
