#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

namespace discaug {

enum class Label : std::uint8_t { Negative = 0, Positive = 1 };

constexpr Label flip(Label l) noexcept {
  return l == Label::Negative ? Label::Positive : Label::Negative;
}
constexpr std::size_t index_of(Label l) noexcept { return static_cast<std::size_t>(l); }
std::string_view to_string(Label l) noexcept;

struct Sample {
  std::vector<std::string> tokens;
  Label label = Label::Negative;
  std::uint64_t id = 0;

  friend bool operator==(const Sample&, const Sample&) = default;
};

/// Per-class sample counts, indexed by index_of(Label).
struct ClassCounts {
  std::size_t negative = 0;
  std::size_t positive = 0;

  std::size_t operator[](Label l) const { return l == Label::Positive ? positive : negative; }
  std::size_t total() const { return negative + positive; }
  friend bool operator==(const ClassCounts&, const ClassCounts&) = default;
};

class Dataset {
 public:
  Dataset() = default;
  explicit Dataset(std::string name, std::vector<Sample> samples = {});

  const std::string& name() const noexcept { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }

  const std::vector<Sample>& samples() const noexcept { return samples_; }
  std::size_t size() const noexcept { return samples_.size(); }
  bool empty() const noexcept { return samples_.empty(); }
  const Sample& operator[](std::size_t i) const { return samples_[i]; }
  auto begin() const noexcept { return samples_.begin(); }
  auto end() const noexcept { return samples_.end(); }

  ClassCounts class_counts() const;

  /// One past the largest id in use; fresh ids for derived samples start here.
  std::uint64_t next_id() const;

  /// Appends a sample; throws DataError if its id is already taken.
  void add(Sample s);
  /// Appends a sample under a freshly assigned id and returns that id.
  std::uint64_t add_with_fresh_id(std::vector<std::string> tokens, Label label);

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  std::string name_;
  std::vector<Sample> samples_;
  std::unordered_set<std::uint64_t> ids_;
  std::uint64_t next_id_ = 0;
};

struct SplitSpec {
  double train_fraction = 0.8;
  std::uint64_t seed = 0;
};

/// Reads `<label>\t<text>` lines. Blank lines and lines whose text has no
/// tokens are skipped; ids follow file order.
Dataset load_tsv(const std::filesystem::path& path, std::string name = {});

/// One file per class, one example per line. Positive samples come first.
Dataset load_pair(const std::filesystem::path& pos_path, const std::filesystem::path& neg_path,
                  std::string name = {});

Dataset parse_tsv(std::istream& in, std::string name, std::string_view source = "<stream>");

/// Writes `<label>\t<tokens joined by spaces>` lines.
void write_tsv(const Dataset& d, std::ostream& out);
void write_tsv(const Dataset& d, const std::filesystem::path& path);

/// Stratified split: per class, floor(fraction * n) samples go to train.
/// Both halves keep the input order.
std::pair<Dataset, Dataset> split(const Dataset& d, const SplitSpec& spec);

/// Keeps every positive sample and draws floor(n_pos / ir) negatives without
/// replacement; the result is shuffled.
Dataset make_imbalanced(const Dataset& train, unsigned ir, std::uint64_t seed);

/// Random oversampling: appends uniformly drawn copies of minority samples
/// (with fresh ids) until both classes have the same count.
Dataset oversample(const Dataset& d, std::uint64_t seed);

}  // namespace discaug
