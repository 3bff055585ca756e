#pragma once

#include <cstdint>
#include <vector>

#include "polardyn/estimation.hpp"
#include "polardyn/party_graph.hpp"

namespace polardyn {

// Complete graph on n nodes named v0..v{n-1}; the first n - round(r n) are
// blue, the rest red.
PartyGraph complete_graph(std::size_t n, double red_fraction);

// Two-block stochastic block model: same-party pairs linked with p_in,
// cross-party pairs with p_out. Party layout as in complete_graph.
PartyGraph two_block_graph(std::size_t n, double red_fraction, double p_in, double p_out,
                           std::uint64_t seed);

// Transitions drawn exactly from the logistic switching law: the current
// stance is a fair coin, the pulls toward switching (x_in, x_out) are uniform
// on [-1, 1] and the node switches with logistic(alpha x_in - beta x_out - delta).
// Node ids are s0..s{count-1} and time is the row index.
std::vector<TransitionRecord> sample_transitions(const ModelParams& params, std::size_t count,
                                                 std::uint64_t seed);

}  // namespace polardyn
