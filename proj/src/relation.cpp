#include "algvar/relation.hpp"

#include <numeric>
#include <stdexcept>

namespace algvar {

Relation Relation::identity(std::size_t n) {
  Relation r(n);
  for (Elem a = 0; a < n; ++a) r.set(a, a);
  return r;
}

bool Relation::reflexive() const {
  for (Elem a = 0; a < n_; ++a)
    if (!(*this)(a, a)) return false;
  return true;
}

bool Relation::symmetric() const {
  for (Elem a = 0; a < n_; ++a)
    for (Elem b = 0; b < n_; ++b)
      if ((*this)(a, b) != (*this)(b, a)) return false;
  return true;
}

bool Relation::antisymmetric() const {
  for (Elem a = 0; a < n_; ++a)
    for (Elem b = a + 1; b < n_; ++b)
      if ((*this)(a, b) && (*this)(b, a)) return false;
  return true;
}

bool Relation::transitive() const {
  for (Elem a = 0; a < n_; ++a)
    for (Elem b = 0; b < n_; ++b) {
      if (!(*this)(a, b)) continue;
      for (Elem c = 0; c < n_; ++c)
        if ((*this)(b, c) && !(*this)(a, c)) return false;
    }
  return true;
}

void Relation::close_transitively() {
  for (Elem k = 0; k < n_; ++k)
    for (Elem a = 0; a < n_; ++a) {
      if (!(*this)(a, k)) continue;
      for (Elem b = 0; b < n_; ++b)
        if ((*this)(k, b)) set(a, b);
    }
}

bool Relation::contains(const Relation& other) const {
  if (other.n_ != n_) throw std::invalid_argument("relation size mismatch");
  for (std::size_t i = 0; i < bits_.size(); ++i)
    if (other.bits_[i] && !bits_[i]) return false;
  return true;
}

Relation Relation::intersect(const Relation& other) const {
  if (other.n_ != n_) throw std::invalid_argument("relation size mismatch");
  Relation r(n_);
  for (std::size_t i = 0; i < bits_.size(); ++i) r.bits_[i] = bits_[i] && other.bits_[i];
  return r;
}

Partition::Partition(std::vector<std::vector<std::uint32_t>> raw) : block_(std::move(raw)) {
  count_.resize(block_.size());
  for (std::size_t s = 0; s < block_.size(); ++s) {
    std::vector<std::uint32_t> rename;
    std::vector<char> seen;
    std::uint32_t next = 0;
    for (auto& b : block_[s]) {
      if (b >= seen.size()) {
        seen.resize(b + 1, 0);
        rename.resize(b + 1, 0);
      }
      if (!seen[b]) {
        seen[b] = 1;
        rename[b] = next++;
      }
      b = rename[b];
    }
    count_[s] = next;
  }
}

Partition Partition::discrete(const std::vector<std::size_t>& sizes) {
  std::vector<std::vector<std::uint32_t>> raw(sizes.size());
  for (std::size_t s = 0; s < sizes.size(); ++s) {
    raw[s].resize(sizes[s]);
    std::iota(raw[s].begin(), raw[s].end(), 0u);
  }
  return Partition(std::move(raw));
}

Partition Partition::full(const std::vector<std::size_t>& sizes) {
  std::vector<std::vector<std::uint32_t>> raw(sizes.size());
  for (std::size_t s = 0; s < sizes.size(); ++s) raw[s].assign(sizes[s], 0);
  return Partition(std::move(raw));
}

Partition Partition::from_relation(const SortedRelation& eq) {
  std::vector<std::vector<std::uint32_t>> raw(eq.size());
  for (std::size_t s = 0; s < eq.size(); ++s) {
    const std::size_t n = eq[s].size();
    raw[s].assign(n, 0);
    for (Elem a = 0; a < n; ++a) {
      raw[s][a] = a;
      for (Elem b = 0; b < a; ++b)
        if (eq[s](a, b) && eq[s](b, a)) {
          raw[s][a] = raw[s][b];
          break;
        }
    }
  }
  return Partition(std::move(raw));
}

bool Partition::is_discrete() const {
  for (std::size_t s = 0; s < block_.size(); ++s)
    if (count_[s] != block_[s].size()) return false;
  return true;
}

bool Partition::refines(const Partition& other) const {
  if (other.block_.size() != block_.size()) throw std::invalid_argument("partition shape mismatch");
  for (std::size_t s = 0; s < block_.size(); ++s) {
    std::vector<std::int64_t> image(count_[s], -1);
    for (std::size_t a = 0; a < block_[s].size(); ++a) {
      auto& slot = image[block_[s][a]];
      if (slot < 0)
        slot = other.block_[s][a];
      else if (slot != static_cast<std::int64_t>(other.block_[s][a]))
        return false;
    }
  }
  return true;
}

Partition Partition::meet(const Partition& other) const {
  std::vector<std::vector<std::uint32_t>> raw(block_.size());
  for (std::size_t s = 0; s < block_.size(); ++s) {
    const std::size_t n = block_[s].size();
    raw[s].resize(n);
    const std::uint32_t width = static_cast<std::uint32_t>(other.count_[s] + 1);
    for (std::size_t a = 0; a < n; ++a) raw[s][a] = block_[s][a] * width + other.block_[s][a];
  }
  return Partition(std::move(raw));
}

Partition Partition::join(const Partition& other) const {
  std::vector<std::vector<std::uint32_t>> raw(block_.size());
  for (std::size_t s = 0; s < block_.size(); ++s) {
    const std::size_t n = block_[s].size();
    std::vector<std::uint32_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0u);
    auto find = [&](std::uint32_t x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    std::vector<std::int64_t> first_a(count_[s], -1), first_b(other.count_[s], -1);
    for (std::uint32_t a = 0; a < n; ++a) {
      for (auto [first, id] : {std::pair{&first_a, block_[s][a]}, std::pair{&first_b, other.block_[s][a]}}) {
        auto& f = (*first)[id];
        if (f < 0) {
          f = a;
        } else {
          auto x = find(static_cast<std::uint32_t>(f)), y = find(a);
          if (x != y) parent[std::max(x, y)] = std::min(x, y);
        }
      }
    }
    raw[s].resize(n);
    for (std::uint32_t a = 0; a < n; ++a) raw[s][a] = find(a);
  }
  return Partition(std::move(raw));
}

SortedRelation Partition::as_relation() const {
  SortedRelation out;
  for (std::size_t s = 0; s < block_.size(); ++s) {
    const std::size_t n = block_[s].size();
    Relation r(n);
    for (Elem a = 0; a < n; ++a)
      for (Elem b = 0; b < n; ++b)
        if (block_[s][a] == block_[s][b]) r.set(a, b);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace algvar
