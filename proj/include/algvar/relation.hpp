#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace algvar {

using Elem = std::uint32_t;
using SortId = std::size_t;

// Square boolean matrix on 0..n-1.
class Relation {
 public:
  Relation() = default;
  explicit Relation(std::size_t n, bool value = false)
      : n_(n), bits_(n * n, value ? 1 : 0) {}

  static Relation identity(std::size_t n);

  std::size_t size() const { return n_; }
  bool operator()(Elem a, Elem b) const { return bits_[a * n_ + b] != 0; }
  void set(Elem a, Elem b, bool v = true) { bits_[a * n_ + b] = v ? 1 : 0; }

  bool reflexive() const;
  bool symmetric() const;
  bool antisymmetric() const;
  bool transitive() const;
  bool is_partial_order() const { return reflexive() && antisymmetric() && transitive(); }
  bool is_preorder() const { return reflexive() && transitive(); }

  // Warshall closure in place.
  void close_transitively();
  bool contains(const Relation& other) const;
  Relation intersect(const Relation& other) const;

  friend bool operator==(const Relation&, const Relation&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<char> bits_;
};

using SortedRelation = std::vector<Relation>;

// Per-sort equivalence given by normalized block ids: blocks are numbered in
// order of their first element.
class Partition {
 public:
  Partition() = default;
  explicit Partition(std::vector<std::vector<std::uint32_t>> raw);

  static Partition discrete(const std::vector<std::size_t>& sizes);
  static Partition full(const std::vector<std::size_t>& sizes);
  static Partition from_relation(const SortedRelation& equivalence);

  std::size_t num_sorts() const { return block_.size(); }
  std::size_t size(SortId s) const { return block_[s].size(); }
  std::uint32_t block(SortId s, Elem a) const { return block_[s][a]; }
  std::size_t num_blocks(SortId s) const { return count_[s]; }
  bool same(SortId s, Elem a, Elem b) const { return block_[s][a] == block_[s][b]; }
  const std::vector<std::uint32_t>& blocks(SortId s) const { return block_[s]; }
  bool is_discrete() const;

  // true iff every block of *this lies inside a block of other.
  bool refines(const Partition& other) const;
  Partition meet(const Partition& other) const;
  Partition join(const Partition& other) const;
  SortedRelation as_relation() const;

  friend bool operator==(const Partition&, const Partition&) = default;
  friend bool operator<(const Partition& a, const Partition& b) { return a.block_ < b.block_; }

 private:
  std::vector<std::vector<std::uint32_t>> block_;
  std::vector<std::size_t> count_;
};

}  // namespace algvar
