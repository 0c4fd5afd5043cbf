#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "discaug/neural/param.hpp"

namespace discaug::neural {

/// Plain-text model checkpoint:
///
///   discaug-ckpt v1 <d> <H> <d_a> <V>
///   kind <model kind>
///   vocab <V>
///   <token>                      (V lines, index order)
///   <name> <rows> <cols>         (repeated block header)
///   <cols space-separated reals> (rows lines, row-major)
///
/// Reals are written with 17 significant digits so values round-trip exactly.
struct Checkpoint {
  int embed_dim = 0;
  int hidden = 0;
  int attn_dim = 0;
  std::string kind;
  std::vector<std::string> vocab;
  std::vector<std::pair<std::string, Matrix>> blocks;

  void add(std::string name, Matrix m) { blocks.emplace_back(std::move(name), std::move(m)); }
  void add(const Param& p) { add(p.name, p.value); }
  bool has(std::string_view name) const;
  /// Throws DataError when the block is absent.
  const Matrix& block(std::string_view name) const;
  /// Copies a block into p.value after checking the shape.
  void restore(Param& p) const;

  void write(std::ostream& out) const;
  static Checkpoint read(std::istream& in);
  void save(const std::filesystem::path& path) const;
  static Checkpoint load(const std::filesystem::path& path);
};

}  // namespace discaug::neural
