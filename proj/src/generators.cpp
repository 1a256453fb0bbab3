#include "bipsize/generators.hpp"

#include <vector>

#include "bipsize/errors.hpp"
#include "bipsize/rng.hpp"

namespace bipsize {

GraphModel parse_model(const std::string& name) {
  if (name == "uniform" || name == "bipartite-uniform") return GraphModel::Uniform;
  if (name == "complete") return GraphModel::Complete;
  if (name == "edgeless") return GraphModel::Edgeless;
  if (name == "complement-of") return GraphModel::ComplementOf;
  if (name == "file") return GraphModel::File;
  throw ConfigError("unknown graph model '" + name + "'");
}

std::string model_name(GraphModel model) {
  switch (model) {
    case GraphModel::Uniform:
      return "bipartite-uniform";
    case GraphModel::Complete:
      return "complete";
    case GraphModel::Edgeless:
      return "edgeless";
    case GraphModel::ComplementOf:
      return "complement-of";
    case GraphModel::File:
      return "file";
  }
  return "unknown";
}

BipartiteGraph random_bipartite(std::size_t n1, std::size_t n2, double p, std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("edge probability must lie in [0, 1]");
  Rng rng(seed);
  std::vector<VertexSet> rows(n1, VertexSet(n2));
  for (std::size_t i = 0; i < n1; ++i) {
    for (std::size_t j = 0; j < n2; ++j) {
      if (rng.bernoulli(p)) rows[i].set(j);
    }
  }
  return BipartiteGraph(n1, n2, rows, GenerationInfo{"bipartite-uniform", seed, p});
}

BipartiteGraph complete_bipartite(std::size_t n1, std::size_t n2) {
  std::vector<VertexSet> rows(n1, VertexSet::full(n2));
  return BipartiteGraph(n1, n2, rows, GenerationInfo{"complete", 0, 1.0});
}

BipartiteGraph generate(const GeneratorSpec& spec) {
  switch (spec.model) {
    case GraphModel::Uniform:
      return random_bipartite(spec.n1, spec.n2, spec.p, spec.seed);
    case GraphModel::Complete:
      return complete_bipartite(spec.n1, spec.n2);
    case GraphModel::Edgeless: {
      std::vector<VertexSet> rows(spec.n1, VertexSet(spec.n2));
      return BipartiteGraph(spec.n1, spec.n2, rows, GenerationInfo{"edgeless", 0, 0.0});
    }
    case GraphModel::File:
      if (spec.path.empty()) throw ConfigError("file model needs a path");
      return load_edge_list(spec.path);
    case GraphModel::ComplementOf: {
      GeneratorSpec base = spec;
      base.model = parse_model(spec.base);
      if (base.model == GraphModel::ComplementOf) throw ConfigError("complement-of cannot nest");
      return generate(base).complement();
    }
  }
  throw ConfigError("unhandled graph model");
}

}  // namespace bipsize
