#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "discaug/corpus.hpp"

namespace discaug::testing {

// Sentiment-lexicon toy language. Positive words are "p<k>", negative words
// "n<k>", neutral filler "w<k>"; ranks are drawn from a Zipf law so a few
// words dominate, like real text.
struct CorpusSpec {
  std::size_t n_positive = 1000;
  std::size_t n_negative = 1000;
  std::size_t sentiment_vocab = 150;   // per polarity
  std::size_t neutral_vocab = 1500;
  double zipf = 1.05;
  std::size_t min_clause = 3;          // tokens per clause, inclusive range
  std::size_t max_clause = 8;
  std::size_t sentiment_words = 1;     // polar words per polar clause (upper bound, at least 1)
  double transition_rate = 0.25;       // share of sentences of the form "head , marker tail"
  double neutral_head_rate = 0.0;      // share of transition heads with no polar words
  double noise_rate = 0.0;             // chance a polar clause also gets one opposite word
  double comma_rate = 0.7;             // comma before the marker
  std::vector<std::string> markers{"but", "although", "though", "however", "yet"};
  std::uint64_t seed = 1;
  std::string name = "synthetic";
};

// Positive samples first, then negative; ids in order.
Dataset make_corpus(const CorpusSpec& spec);

// Polarity of a token sequence under the planted lexicon: +1, -1, or 0 when
// balanced or no polar words. When a marker from `markers` sits strictly
// inside the sequence the part after the first such marker decides.
int lexicon_polarity(const std::vector<std::string>& tokens, const std::vector<std::string>& markers);

// Writes one sentence per line (pair format).
void write_lines(const Dataset& d, Label label, const std::string& path);

}  // namespace discaug::testing
