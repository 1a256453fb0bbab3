#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace bipsize {

using Vertex = std::size_t;

inline constexpr std::size_t words_for(std::size_t bits) { return (bits + 63) / 64; }

/// Fixed-universe bitset over the vertices of one class. Bits at or beyond
/// universe() are always zero.
class VertexSet {
 public:
  VertexSet() = default;
  explicit VertexSet(std::size_t universe) : universe_(universe), words_(words_for(universe), 0) {}

  static VertexSet full(std::size_t universe);
  /// Throws MalformedInput on an index >= universe.
  static VertexSet from_indices(std::size_t universe, std::span<const Vertex> indices);
  /// Copies `words` and clears bits past `universe`.
  static VertexSet from_words(std::size_t universe, std::span<const std::uint64_t> words);

  std::size_t universe() const { return universe_; }
  std::size_t count() const;
  bool any() const;
  bool none() const { return !any(); }

  bool test(Vertex v) const { return (words_[v / 64] >> (v % 64)) & 1U; }
  void set(Vertex v) { words_[v / 64] |= std::uint64_t{1} << (v % 64); }
  void reset(Vertex v) { words_[v / 64] &= ~(std::uint64_t{1} << (v % 64)); }
  /// Range-checked variants; throw MalformedInput.
  bool contains(Vertex v) const;
  void insert(Vertex v);

  std::vector<Vertex> indices() const;

  template <class F>
  void for_each(F&& fn) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t bits = words_[w];
      while (bits != 0) {
        fn(static_cast<Vertex>(w * 64 + static_cast<std::size_t>(__builtin_ctzll(bits))));
        bits &= bits - 1;
      }
    }
  }

  std::span<const std::uint64_t> words() const { return words_; }
  std::span<std::uint64_t> words() { return words_; }

  VertexSet& operator&=(const VertexSet& other);
  VertexSet& operator|=(const VertexSet& other);
  VertexSet& operator^=(const VertexSet& other);
  /// Set difference.
  VertexSet& operator-=(const VertexSet& other);
  VertexSet complement() const;

  friend VertexSet operator&(VertexSet a, const VertexSet& b) { return a &= b; }
  friend VertexSet operator|(VertexSet a, const VertexSet& b) { return a |= b; }
  friend VertexSet operator^(VertexSet a, const VertexSet& b) { return a ^= b; }
  friend VertexSet operator-(VertexSet a, const VertexSet& b) { return a -= b; }
  friend bool operator==(const VertexSet&, const VertexSet&) = default;

  bool is_subset_of(const VertexSet& other) const;

 private:
  void require_same_universe(const VertexSet& other) const;
  void clear_tail();

  std::size_t universe_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace bipsize
