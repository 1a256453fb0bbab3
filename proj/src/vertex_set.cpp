#include "bipsize/vertex_set.hpp"

#include <algorithm>
#include <string>

#include "bipsize/errors.hpp"
#include "bipsize/kernels.hpp"

namespace bipsize {

VertexSet VertexSet::full(std::size_t universe) {
  VertexSet s(universe);
  for (auto& w : s.words_) w = ~std::uint64_t{0};
  s.clear_tail();
  return s;
}

VertexSet VertexSet::from_indices(std::size_t universe, std::span<const Vertex> indices) {
  VertexSet s(universe);
  for (Vertex v : indices) s.insert(v);
  return s;
}

VertexSet VertexSet::from_words(std::size_t universe, std::span<const std::uint64_t> words) {
  VertexSet s(universe);
  const std::size_t n = std::min(words.size(), s.words_.size());
  for (std::size_t i = 0; i < n; ++i) s.words_[i] = words[i];
  s.clear_tail();
  return s;
}

std::size_t VertexSet::count() const {
  return static_cast<std::size_t>(kernels::active().popcount(words_.data(), words_.size()));
}

bool VertexSet::any() const {
  for (auto w : words_) {
    if (w != 0) return true;
  }
  return false;
}

bool VertexSet::contains(Vertex v) const {
  if (v >= universe_) {
    throw MalformedInput("vertex " + std::to_string(v) + " outside universe of size " +
                         std::to_string(universe_));
  }
  return test(v);
}

void VertexSet::insert(Vertex v) {
  if (v >= universe_) {
    throw MalformedInput("vertex " + std::to_string(v) + " outside universe of size " +
                         std::to_string(universe_));
  }
  set(v);
}

std::vector<Vertex> VertexSet::indices() const {
  std::vector<Vertex> out;
  out.reserve(count());
  for_each([&](Vertex v) { out.push_back(v); });
  return out;
}

void VertexSet::require_same_universe(const VertexSet& other) const {
  if (other.universe_ != universe_) {
    throw MalformedInput("vertex sets over different universes (" + std::to_string(universe_) +
                         " vs " + std::to_string(other.universe_) + ")");
  }
}

void VertexSet::clear_tail() {
  const std::size_t rem = universe_ % 64;
  if (rem != 0 && !words_.empty()) words_.back() &= (std::uint64_t{1} << rem) - 1;
}

VertexSet& VertexSet::operator&=(const VertexSet& other) {
  require_same_universe(other);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= other.words_[i];
  return *this;
}

VertexSet& VertexSet::operator|=(const VertexSet& other) {
  require_same_universe(other);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
  return *this;
}

VertexSet& VertexSet::operator^=(const VertexSet& other) {
  require_same_universe(other);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= other.words_[i];
  return *this;
}

VertexSet& VertexSet::operator-=(const VertexSet& other) {
  require_same_universe(other);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~other.words_[i];
  return *this;
}

VertexSet VertexSet::complement() const {
  VertexSet out(*this);
  for (auto& w : out.words_) w = ~w;
  out.clear_tail();
  return out;
}

bool VertexSet::is_subset_of(const VertexSet& other) const {
  require_same_universe(other);
  return kernels::active().popcount_andnot(words_.data(), other.words_.data(), words_.size()) == 0;
}

}  // namespace bipsize
