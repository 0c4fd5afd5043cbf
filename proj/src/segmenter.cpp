#include "discaug/segmenter.hpp"

#include <algorithm>
#include <sstream>

#include "discaug/error.hpp"
#include "discaug/text.hpp"

namespace discaug {

MarkerSet::MarkerSet() : MarkerSet({"but", "although", "though", "however", "yet"}) {}

MarkerSet::MarkerSet(std::vector<std::string> markers) : markers_(std::move(markers)) {
  if (markers_.empty()) throw ConfigError("marker set must not be empty");
  for (std::size_t i = 0; i < markers_.size(); ++i) {
    const auto& m = markers_[i];
    if (tokenize(m) != std::vector<std::string>{m}) {
      throw ConfigError("marker '" + m + "' must be a single lowercase token");
    }
    if (std::find(markers_.begin(), markers_.begin() + static_cast<std::ptrdiff_t>(i), m) !=
        markers_.begin() + static_cast<std::ptrdiff_t>(i)) {
      throw ConfigError("duplicate marker '" + m + "'");
    }
  }
}

MarkerSet MarkerSet::parse(std::string_view csv) {
  std::vector<std::string> markers;
  std::string item;
  std::istringstream in{std::string(csv)};
  while (std::getline(in, item, ',')) {
    auto tokens = tokenize(item);
    if (tokens.size() != 1) throw ConfigError("invalid marker '" + item + "' (expected a single token)");
    markers.push_back(std::move(tokens[0]));
  }
  return MarkerSet(std::move(markers));
}

bool MarkerSet::contains(std::string_view token) const {
  return std::find(markers_.begin(), markers_.end(), token) != markers_.end();
}

std::string_view to_string(GenerationOp op) noexcept {
  switch (op) {
    case GenerationOp::Swap: return "swap";
    case GenerationOp::CropHead: return "crop_head";
    case GenerationOp::CropTail: return "crop_tail";
  }
  return "?";
}

std::vector<std::string> DiscourseSplit::reassemble() const {
  std::vector<std::string> out(head);
  if (comma_before_marker) out.emplace_back(",");
  out.push_back(marker);
  out.insert(out.end(), tail.begin(), tail.end());
  return out;
}

std::optional<std::size_t> find_marker(std::span<const std::string> tokens, const MarkerSet& markers) {
  auto it = std::find_if(tokens.begin(), tokens.end(), [&](const std::string& t) { return markers.contains(t); });
  if (it == tokens.end()) return std::nullopt;
  const auto idx = static_cast<std::size_t>(it - tokens.begin());
  if (idx < 1 || idx + 2 > tokens.size()) return std::nullopt;
  return idx;
}

std::optional<DiscourseSplit> split_discourse(const Sample& s, const MarkerSet& markers,
                                              std::size_t min_discourse_len) {
  const auto idx = find_marker(s.tokens, markers);
  if (!idx) return std::nullopt;
  DiscourseSplit out;
  out.head.assign(s.tokens.begin(), s.tokens.begin() + static_cast<std::ptrdiff_t>(*idx));
  if (!out.head.empty() && out.head.back() == ",") {
    out.head.pop_back();
    out.comma_before_marker = true;
  }
  out.marker = s.tokens[*idx];
  out.tail.assign(s.tokens.begin() + static_cast<std::ptrdiff_t>(*idx) + 1, s.tokens.end());
  if (count_content_tokens(out.head) < min_discourse_len || count_content_tokens(out.tail) < min_discourse_len) {
    return std::nullopt;
  }
  out.source_id = s.id;
  out.source_label = s.label;
  return out;
}

DiscourseSplit swap_discourses(const DiscourseSplit& split) {
  DiscourseSplit out = split;
  std::swap(out.head, out.tail);
  return out;
}

std::array<Candidate, 3> generate_candidates(const DiscourseSplit& split) {
  std::vector<std::string> swapped(split.tail);
  swapped.emplace_back(",");
  swapped.push_back(split.marker);
  swapped.insert(swapped.end(), split.head.begin(), split.head.end());
  const Label l = split.source_label;
  return {
      Candidate{std::move(swapped), flip(l), GenerationOp::Swap, split.source_id},
      Candidate{split.head, flip(l), GenerationOp::CropHead, split.source_id},
      Candidate{split.tail, l, GenerationOp::CropTail, split.source_id},
  };
}

std::vector<Candidate> harvest(const Dataset& d, const MarkerSet& markers, std::size_t min_discourse_len) {
  std::vector<Candidate> out;
  for (const auto& s : d) {
    if (auto sp = split_discourse(s, markers, min_discourse_len)) {
      for (auto& c : generate_candidates(*sp)) out.push_back(std::move(c));
    }
  }
  return out;
}

}  // namespace discaug
