#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "discaug/corpus.hpp"

namespace discaug {

/// Ordered set of single-token, lowercase transitional markers.
class MarkerSet {
 public:
  /// but, although, though, however, yet
  MarkerSet();
  explicit MarkerSet(std::vector<std::string> markers);
  /// Parses a comma-separated list such as "but,although,yet".
  static MarkerSet parse(std::string_view csv);

  bool contains(std::string_view token) const;
  const std::vector<std::string>& markers() const noexcept { return markers_; }

 private:
  std::vector<std::string> markers_;
};

inline constexpr std::size_t kDefaultMinDiscourseLen = 2;

struct DiscourseSplit {
  std::vector<std::string> head;
  std::string marker;
  std::vector<std::string> tail;
  bool comma_before_marker = false;
  std::uint64_t source_id = 0;
  Label source_label = Label::Negative;

  /// head + [","]? + marker + tail
  std::vector<std::string> reassemble() const;
  friend bool operator==(const DiscourseSplit&, const DiscourseSplit&) = default;
};

enum class GenerationOp : std::uint8_t { Swap, CropHead, CropTail };
std::string_view to_string(GenerationOp op) noexcept;

struct Candidate {
  std::vector<std::string> tokens;
  Label proposed_label = Label::Negative;
  GenerationOp op = GenerationOp::Swap;
  std::uint64_t source_id = 0;

  friend bool operator==(const Candidate&, const Candidate&) = default;
};

/// Index of the first marker token when it sits strictly inside the sentence
/// (1 <= index <= size - 2); nullopt when there is no marker or the first one
/// is at either edge.
std::optional<std::size_t> find_marker(std::span<const std::string> tokens, const MarkerSet& markers);

std::optional<DiscourseSplit> split_discourse(const Sample& s, const MarkerSet& markers,
                                              std::size_t min_discourse_len = kDefaultMinDiscourseLen);

/// Exchanges head and tail. Applying it twice is the identity.
DiscourseSplit swap_discourses(const DiscourseSplit& split);

/// swap: tail , marker head (flipped label); crop_head: head (flipped);
/// crop_tail: tail (label kept).
std::array<Candidate, 3> generate_candidates(const DiscourseSplit& split);

std::vector<Candidate> harvest(const Dataset& d, const MarkerSet& markers,
                               std::size_t min_discourse_len = kDefaultMinDiscourseLen);

}  // namespace discaug
