#include "blockdet/graph.hpp"

namespace blockdet {

std::string to_string(const VertexSet& s) {
  std::string out = "{";
  for (int v : s) {
    if (out.size() > 1) out += ',';
    out += std::to_string(v);
  }
  return out + "}";
}

}  // namespace blockdet
