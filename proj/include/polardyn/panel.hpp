#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "polardyn/types.hpp"

namespace polardyn {

struct PanelRow {
  std::string node_id;
  std::int64_t interval = 0;
  Party party = Party::Blue;
  Stance stance = Stance::Zero;
};

// Longitudinal (node, interval, party, stance) observations. A node may be
// absent from any interval; it appears at most once per interval and always
// with the same party.
struct StancePanel {
  std::vector<PanelRow> rows;
  // Annotation only (e.g. 15 days); never used in estimation.
  double interval_days = 0.0;

  // Throws Error(Input) on duplicate (node, interval) or a party change.
  void validate() const;
};

}  // namespace polardyn
