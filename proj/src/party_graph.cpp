#include "polardyn/party_graph.hpp"

#include <algorithm>
#include <limits>

#include "polardyn/error.hpp"

namespace polardyn {

PartyGraph::Index PartyGraph::Builder::add_node(std::string id, Party party) {
  if (index_.count(id) != 0) {
    throw Error(ErrorCategory::Input, "duplicate node id '" + id + "'");
  }
  if (ids_.size() >= std::numeric_limits<Index>::max()) {
    throw Error(ErrorCategory::Input, "too many nodes");
  }
  const auto idx = static_cast<Index>(ids_.size());
  index_.emplace(id, idx);
  ids_.push_back(std::move(id));
  parties_.push_back(party);
  adjacency_.emplace_back();
  return idx;
}

bool PartyGraph::Builder::add_edge(Index u, Index v) {
  if (u >= ids_.size() || v >= ids_.size()) {
    throw Error(ErrorCategory::Input, "edge endpoint out of range");
  }
  if (u == v) {
    throw Error(ErrorCategory::Input, "self-loop on node '" + ids_[u] + "'");
  }
  const std::uint64_t key = (static_cast<std::uint64_t>(std::min(u, v)) << 32) | std::max(u, v);
  if (!edge_keys_.insert(key).second) {
    ++duplicates_;
    return false;
  }
  adjacency_[u].push_back(v);
  adjacency_[v].push_back(u);
  return true;
}

bool PartyGraph::Builder::add_edge(std::string_view u, std::string_view v) {
  return add_edge(index_of(u), index_of(v));
}

bool PartyGraph::Builder::has_node(std::string_view id) const {
  return index_.count(std::string(id)) != 0;
}

PartyGraph::Index PartyGraph::Builder::index_of(std::string_view id) const {
  const auto it = index_.find(std::string(id));
  if (it == index_.end()) {
    throw Error(ErrorCategory::Input, "unknown node '" + std::string(id) + "'");
  }
  return it->second;
}

PartyGraph PartyGraph::Builder::build() && {
  PartyGraph g;
  g.ids_ = std::move(ids_);
  g.parties_ = std::move(parties_);
  g.index_ = std::move(index_);
  g.stances_.assign(g.parties_.size(), Stance::Zero);
  g.offsets_.assign(g.parties_.size() + 1, 0);
  std::size_t total = 0;
  for (std::size_t v = 0; v < adjacency_.size(); ++v) {
    total += adjacency_[v].size();
    g.offsets_[v + 1] = total;
  }
  g.neighbors_.reserve(total);
  for (auto& adj : adjacency_) {
    std::sort(adj.begin(), adj.end());
    g.neighbors_.insert(g.neighbors_.end(), adj.begin(), adj.end());
    adj.clear();
    adj.shrink_to_fit();
  }
  for (const auto p : g.parties_) ++g.group_size_[as_int(p)];
  return g;
}

PartyGraph::Index PartyGraph::index_of(std::string_view id) const {
  const auto it = index_.find(std::string(id));
  if (it == index_.end()) {
    throw Error(ErrorCategory::Input, "unknown node '" + std::string(id) + "'");
  }
  return it->second;
}

bool PartyGraph::contains(std::string_view id) const {
  return index_.count(std::string(id)) != 0;
}

std::size_t PartyGraph::count(Party p, Stance s) const {
  std::size_t n = 0;
  for (std::size_t v = 0; v < size(); ++v) {
    if (parties_[v] == p && stances_[v] == s) ++n;
  }
  return n;
}

double PartyGraph::prevalence(Party p) const {
  const auto size = group_size(p);
  if (size == 0) return 0.0;
  return static_cast<double>(count(p, Stance::One)) / static_cast<double>(size);
}

std::vector<std::pair<PartyGraph::Index, PartyGraph::Index>> PartyGraph::edges() const {
  std::vector<std::pair<Index, Index>> out;
  out.reserve(edge_count());
  for (Index u = 0; u < size(); ++u) {
    for (const auto v : neighbors(u)) {
      if (u < v) out.emplace_back(u, v);
    }
  }
  return out;
}

bool operator==(const PartyGraph& a, const PartyGraph& b) {
  return a.ids_ == b.ids_ && a.parties_ == b.parties_ && a.stances_ == b.stances_ &&
         a.offsets_ == b.offsets_ && a.neighbors_ == b.neighbors_;
}

}  // namespace polardyn
