#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "polardyn/types.hpp"

namespace polardyn {

// Undirected simple graph whose nodes carry an immutable party label and a
// mutable binary stance. Adjacency is stored in compressed-row form.
class PartyGraph {
 public:
  using Index = std::uint32_t;

  class Builder {
   public:
    // Returns the index of the new node; throws Error(Input) on duplicate ids.
    Index add_node(std::string id, Party party);
    // Returns false (and counts a duplicate) when the edge already exists.
    // Throws Error(Input) on self-loops or out-of-range indices.
    bool add_edge(Index u, Index v);
    bool add_edge(std::string_view u, std::string_view v);
    void reserve_edges(std::size_t count) { edge_keys_.reserve(count); }

    std::size_t node_count() const noexcept { return ids_.size(); }
    std::size_t duplicate_edges() const noexcept { return duplicates_; }
    bool has_node(std::string_view id) const;
    Index index_of(std::string_view id) const;

    PartyGraph build() &&;

   private:
    std::vector<std::string> ids_;
    std::vector<Party> parties_;
    std::unordered_map<std::string, Index> index_;
    std::vector<std::vector<Index>> adjacency_;
    std::unordered_set<std::uint64_t> edge_keys_;
    std::size_t duplicates_ = 0;
  };

  PartyGraph() = default;

  std::size_t size() const noexcept { return parties_.size(); }
  std::size_t edge_count() const noexcept { return neighbors_.size() / 2; }

  const std::string& id(Index v) const { return ids_.at(v); }
  Index index_of(std::string_view id) const;  // throws Error(Input) if absent
  bool contains(std::string_view id) const;

  Party party(Index v) const { return parties_[v]; }
  Stance stance(Index v) const { return stances_[v]; }
  void set_stance(Index v, Stance s) { stances_.at(v) = s; }
  void flip_stance(Index v) { stances_[v] = flipped(stances_[v]); }

  std::span<const Index> neighbors(Index v) const {
    return {neighbors_.data() + offsets_[v], neighbors_.data() + offsets_[v + 1]};
  }
  std::size_t degree(Index v) const { return offsets_[v + 1] - offsets_[v]; }

  std::size_t group_size(Party p) const noexcept { return group_size_[as_int(p)]; }
  // Number of nodes of party p currently holding stance s.
  std::size_t count(Party p, Stance s) const;
  // Fraction of party-p nodes holding stance-1 (0 for an empty group).
  double prevalence(Party p) const;

  bool is_complete() const noexcept {
    const std::size_t n = size();
    return n > 1 && edge_count() == n * (n - 1) / 2;
  }

  // Each undirected edge once, as (u, v) with u < v, sorted.
  std::vector<std::pair<Index, Index>> edges() const;

  const std::vector<Stance>& stances() const noexcept { return stances_; }

  // Same structure, nodes and stances.
  friend bool operator==(const PartyGraph& a, const PartyGraph& b);

 private:
  std::vector<std::string> ids_;
  std::vector<Party> parties_;
  std::vector<Stance> stances_;
  std::unordered_map<std::string, Index> index_;
  std::vector<std::size_t> offsets_{0};
  std::vector<Index> neighbors_;
  std::size_t group_size_[2] = {0, 0};
};

}  // namespace polardyn
