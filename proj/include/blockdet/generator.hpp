#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "blockdet/blocks.hpp"
#include "blockdet/matrix.hpp"
#include "blockdet/scalar.hpp"

namespace blockdet {

/// Glue point for a new block: local vertex `vertex` of the earlier block `block` (both 0-based).
struct AttachPoint {
  std::size_t block = 0;
  std::size_t vertex = 0;
  friend bool operator==(const AttachPoint&, const AttachPoint&) = default;
};

/// Plan for a random matrix whose digraph has exactly the planned blocks.
///
/// `attachment` is "chain" (each block glued to the last vertex of the
/// previous one), "random_tree" (uniform earlier block and vertex), or "explicit"
/// with one `attach_points` entry per block after the first.
/// `edge_density` is the probability that a block vertex pair off the spanning
/// cycle is also adjacent. `loop_policy` is the probability that a cut-vertex
/// gets a nonzero diagonal entry.
struct GenSpec {
  std::vector<std::size_t> block_sizes;
  std::string attachment = "chain";
  std::vector<AttachPoint> attach_points;
  double loop_policy = 0.5;
  std::int64_t weight_min = -9;
  std::int64_t weight_max = 9;
  double edge_density = 0.5;
  std::uint64_t seed = 1;
  bool shuffle_labels = false;

  /// Throws SpecError.
  void validate() const;
};

struct GeneratedMatrix {
  Matrix<Integer> matrix;
  BlockDecomposition expected;
};

/// Deterministic per spec (seed included).
GeneratedMatrix generate(const GenSpec& spec);

/// JSON keys mirror the GenSpec field names; "weight_range" is [min, max].
GenSpec gen_spec_from_json(const nlohmann::json& j);
nlohmann::ordered_json to_json(const GenSpec& spec);

}  // namespace blockdet
