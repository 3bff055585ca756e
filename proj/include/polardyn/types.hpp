#pragma once

#include <cstdint>
#include <string_view>

namespace polardyn {

// Static group label: 0 = blue, 1 = red.
enum class Party : std::uint8_t { Blue = 0, Red = 1 };

// Dynamic binary choice held by a node.
enum class Stance : std::uint8_t { Zero = 0, One = 1 };

constexpr Stance flipped(Stance s) noexcept {
  return s == Stance::Zero ? Stance::One : Stance::Zero;
}
constexpr Party other(Party p) noexcept {
  return p == Party::Blue ? Party::Red : Party::Blue;
}
constexpr int as_int(Stance s) noexcept { return static_cast<int>(s); }
constexpr int as_int(Party p) noexcept { return static_cast<int>(p); }

Party party_from_int(long value);    // throws Error(Input) outside {0,1}
Stance stance_from_int(long value);  // throws Error(Input) outside {0,1}

enum class InfluenceMeasureKind {
  DegreeNormalizedCount,  // net same-stance count over node degree
  GroupFraction,          // net fraction within each group separately
  MessageCount,           // net message count over all messages seen
};

std::string_view to_string(InfluenceMeasureKind kind);
// Accepts the canonical names plus the short aliases def1, def2, messages.
InfluenceMeasureKind parse_measure(std::string_view text);

// In-group love (alpha), out-group hate (beta) and inertia (delta).
//
// beta < 0 (out-group love) is only accepted when allow_outgroup_love is set;
// it exists for counterfactual sweeps that take beta toward -alpha.
struct ModelParams {
  double alpha = 0.0;
  double beta = 0.0;
  double delta = 0.0;
  bool allow_outgroup_love = false;

  void validate() const;
};

// Peer-influence prevalences seen by one node at one time.
// The stance-0 components are always the negation of the stance-1 ones.
struct InfluenceVector {
  double d_in_1 = 0.0;
  double d_in_0 = 0.0;
  double d_out_1 = 0.0;
  double d_out_0 = 0.0;

  static constexpr InfluenceVector from_stance_one(double in_1, double out_1) noexcept {
    return {in_1, -in_1, out_1, -out_1};
  }

  // Prevalences of the stance opposite to `current`, i.e. the pull toward switching.
  constexpr double toward_switch_in(Stance current) const noexcept {
    return current == Stance::Zero ? d_in_1 : d_in_0;
  }
  constexpr double toward_switch_out(Stance current) const noexcept {
    return current == Stance::Zero ? d_out_1 : d_out_0;
  }
};

}  // namespace polardyn
