#include "blockdet/generator.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <utility>

#include "blockdet/error.hpp"

namespace blockdet {

void GenSpec::validate() const {
  if (block_sizes.empty()) throw SpecError("block_sizes is empty");
  for (auto s : block_sizes)
    if (s < 2) throw SpecError("every block needs at least 2 vertices");
  if (attachment != "chain" && attachment != "random_tree" && attachment != "explicit")
    throw SpecError("attachment must be chain, random_tree or explicit");
  if (attachment == "explicit") {
    if (attach_points.size() + 1 != block_sizes.size())
      throw SpecError("explicit attachment needs one attach point per block after the first");
    for (std::size_t j = 0; j < attach_points.size(); ++j) {
      const auto& a = attach_points[j];
      if (a.block > j) throw SpecError("attach point of block " + std::to_string(j + 1) + " names a later block");
      if (a.vertex >= block_sizes[a.block]) throw SpecError("attach point vertex out of range");
    }
  }
  if (!(loop_policy >= 0 && loop_policy <= 1)) throw SpecError("loop_policy must lie in [0, 1]");
  if (!(edge_density >= 0 && edge_density <= 1)) throw SpecError("edge_density must lie in [0, 1]");
  if (weight_min > weight_max) throw SpecError("weight_range is empty");
  if (weight_min == 0 && weight_max == 0) throw SpecError("weight_range has no nonzero value");
}

namespace {

class Draw {
 public:
  explicit Draw(std::uint64_t seed) : rng_(seed) {}

  std::int64_t weight(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng_);
  }
  std::int64_t nonzero_weight(std::int64_t lo, std::int64_t hi) {
    for (;;)
      if (auto w = weight(lo, hi); w != 0) return w;
  }
  bool chance(double p) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng_) < p; }
  std::size_t below(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
  template <class It>
  void shuffle(It first, It last) {
    std::shuffle(first, last, rng_);
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace

GeneratedMatrix generate(const GenSpec& spec) {
  spec.validate();
  Draw draw(spec.seed);

  // Local vertex lists, 0-based global ids.
  std::vector<std::vector<std::size_t>> blocks;
  std::size_t next_id = 0;
  for (std::size_t j = 0; j < spec.block_sizes.size(); ++j) {
    std::vector<std::size_t> members;
    if (j > 0) {
      AttachPoint at;
      if (spec.attachment == "chain")
        at = {j - 1, blocks[j - 1].size() - 1};
      else if (spec.attachment == "random_tree") {
        at.block = draw.below(j);
        at.vertex = draw.below(blocks[at.block].size());
      } else
        at = spec.attach_points[j - 1];
      members.push_back(blocks[at.block][at.vertex]);
    }
    while (members.size() < spec.block_sizes[j]) members.push_back(next_id++);
    blocks.push_back(std::move(members));
  }
  const std::size_t n = next_id;

  std::vector<std::size_t> label(n);
  std::iota(label.begin(), label.end(), std::size_t{0});
  if (spec.shuffle_labels) draw.shuffle(label.begin(), label.end());

  Matrix<Integer> m(n);
  auto connect = [&](std::size_t u, std::size_t v) {
    const std::size_t a = label[u], b = label[v];
    switch (draw.below(3)) {
      case 0:
        m(a, b) = draw.nonzero_weight(spec.weight_min, spec.weight_max);
        break;
      case 1:
        m(b, a) = draw.nonzero_weight(spec.weight_min, spec.weight_max);
        break;
      default:
        m(a, b) = draw.nonzero_weight(spec.weight_min, spec.weight_max);
        m(b, a) = draw.nonzero_weight(spec.weight_min, spec.weight_max);
    }
  };

  for (const auto& members : blocks) {
    const std::size_t s = members.size();
    if (s == 2) {
      connect(members[0], members[1]);
      continue;
    }
    // A spanning cycle keeps the block biconnected; extra chords follow the density.
    std::vector<std::size_t> cycle = members;
    draw.shuffle(cycle.begin(), cycle.end());
    std::vector<std::vector<bool>> adjacent(s, std::vector<bool>(s, false));
    auto local = [&](std::size_t v) {
      return static_cast<std::size_t>(std::find(members.begin(), members.end(), v) - members.begin());
    };
    for (std::size_t i = 0; i < s; ++i) {
      const std::size_t u = cycle[i], v = cycle[(i + 1) % s];
      connect(u, v);
      adjacent[local(u)][local(v)] = adjacent[local(v)][local(u)] = true;
    }
    for (std::size_t a = 0; a < s; ++a)
      for (std::size_t b = a + 1; b < s; ++b)
        if (!adjacent[a][b] && draw.chance(spec.edge_density)) connect(members[a], members[b]);
  }

  std::vector<std::size_t> holders(n, 0);
  for (const auto& members : blocks)
    for (auto v : members) ++holders[v];
  for (std::size_t v = 0; v < n; ++v) {
    const std::size_t a = label[v];
    if (holders[v] >= 2)
      m(a, a) = draw.chance(spec.loop_policy) ? draw.nonzero_weight(spec.weight_min, spec.weight_max) : 0;
    else
      m(a, a) = draw.weight(spec.weight_min, spec.weight_max);
  }

  std::vector<VertexSet> planned;
  for (const auto& members : blocks) {
    std::vector<int> ids;
    for (auto v : members) ids.push_back(static_cast<int>(label[v] + 1));
    planned.emplace_back(std::move(ids));
  }
  GeneratedMatrix out{std::move(m), {}};
  out.expected = assemble_decomposition(VertexSet::range(1, static_cast<int>(n)), std::move(planned));
  return out;
}

GenSpec gen_spec_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw SpecError("generator spec must be a JSON object");
  static const char* known[] = {"block_sizes", "attachment",   "attach_points", "loop_policy", "weight_range",
                                "edge_density", "seed", "shuffle_labels"};
  for (const auto& [key, value] : j.items())
    if (std::find(std::begin(known), std::end(known), key) == std::end(known))
      throw SpecError("unknown generator spec field '" + key + "'");
  GenSpec s;
  try {
    if (!j.contains("block_sizes")) throw SpecError("block_sizes is required");
    s.block_sizes = j.at("block_sizes").get<std::vector<std::size_t>>();
    if (j.contains("attachment")) {
      const auto& a = j.at("attachment");
      if (a.is_string()) {
        s.attachment = a.get<std::string>();
      } else if (a.is_array()) {
        s.attachment = "explicit";
        for (const auto& p : a) s.attach_points.push_back({p.at(0).get<std::size_t>(), p.at(1).get<std::size_t>()});
      } else {
        throw SpecError("attachment must be a string or a list of [block, vertex] pairs");
      }
    }
    if (j.contains("attach_points")) {
      s.attach_points.clear();
      for (const auto& p : j.at("attach_points"))
        s.attach_points.push_back({p.at(0).get<std::size_t>(), p.at(1).get<std::size_t>()});
    }
    if (j.contains("loop_policy")) s.loop_policy = j.at("loop_policy").get<double>();
    if (j.contains("weight_range")) {
      const auto& w = j.at("weight_range");
      if (!w.is_array() || w.size() != 2) throw SpecError("weight_range must be [min, max]");
      s.weight_min = w.at(0).get<std::int64_t>();
      s.weight_max = w.at(1).get<std::int64_t>();
    }
    if (j.contains("edge_density")) s.edge_density = j.at("edge_density").get<double>();
    if (j.contains("seed")) s.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("shuffle_labels")) s.shuffle_labels = j.at("shuffle_labels").get<bool>();
  } catch (const nlohmann::json::exception& e) {
    throw SpecError(std::string("generator spec: ") + e.what());
  }
  s.validate();
  return s;
}

nlohmann::ordered_json to_json(const GenSpec& s) {
  nlohmann::ordered_json j;
  j["block_sizes"] = s.block_sizes;
  j["attachment"] = s.attachment;
  if (s.attachment == "explicit") {
    auto points = nlohmann::json::array();
    for (const auto& p : s.attach_points) points.push_back({p.block, p.vertex});
    j["attach_points"] = points;
  }
  j["loop_policy"] = s.loop_policy;
  j["weight_range"] = {s.weight_min, s.weight_max};
  j["edge_density"] = s.edge_density;
  j["seed"] = s.seed;
  j["shuffle_labels"] = s.shuffle_labels;
  return j;
}

}  // namespace blockdet
