#pragma once

#include <cstdint>
#include <string>

#include "bipsize/graph.hpp"

namespace bipsize {

enum class GraphModel { Uniform, Complete, Edgeless, ComplementOf, File };

/// What to build. `base` names the model complemented by ComplementOf
/// ("uniform", "complete", "edgeless" or "file"); `path` is used by File.
struct GeneratorSpec {
  GraphModel model = GraphModel::Uniform;
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  double p = 0.5;
  std::uint64_t seed = 0;
  std::string base = "uniform";
  std::string path;
};

/// Parses "uniform", "bipartite-uniform", "complete", "edgeless",
/// "complement-of", "file". Throws ConfigError.
GraphModel parse_model(const std::string& name);
std::string model_name(GraphModel model);

/// Seeded, deterministic. Throws ConfigError on an invalid spec.
BipartiteGraph generate(const GeneratorSpec& spec);

/// G(n1, n2, p): each of the n1*n2 edges independently with probability p.
BipartiteGraph random_bipartite(std::size_t n1, std::size_t n2, double p, std::uint64_t seed);
BipartiteGraph complete_bipartite(std::size_t n1, std::size_t n2);

}  // namespace bipsize
