#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "gpm/contours.hpp"

namespace gpm {

// Direction of the seed line. Augmentation lines run the other way.
enum class SeedLine { row, column };

// A delta-bridge system (B, S) of a configuration.
struct BridgeSystem {
  VertexSet bridges;                      // B
  ContourSet contours;                    // S, in extraction order
  std::vector<std::size_t> contour_ids;   // indices of S into extract_contours(sigma)
  double delta = 0.0;
  ComponentLabeling labeling;             // components of V \ S-bar
  SeedLine seed = SeedLine::row;
  std::size_t iterations = 0;             // augmentation rounds

  VertexSet support() const { return contours.support(bridges.universe()); }
};

// Builds (B, S) from the bottom row (or the left column when some contour
// wraps only horizontally, which the bottom row can miss). S starts as the
// contours within distance 1 of the seed and is closed under contractibility.
// While a component V_k has more than delta |V_k| vertices off its label, the
// lowest perpendicular line C whose intersection with V_k is more than delta
// impure joins B together with the unbridged contours of V_k within distance
// 1 of C. Throws std::logic_error if the result fails verification.
BridgeSystem build_bridge_system(const Configuration& sigma, double delta);

enum class BridgeProperty {
  connected = 1,    // B together with the bridged supports is connected
  bridge_bound = 2, // |B| <= |S-bar| / (2 delta) + L
  closed = 3,       // no component holds a contour non-contractible in it; labels consistent
  pure = 4,         // every component has at most delta |V_k| off-label vertices
};

std::string to_string(BridgeProperty p);

// Rechecks the four properties from sigma and (B, S) alone; empty when valid.
std::vector<BridgeProperty> verify_bridge_system(const Configuration& sigma, const BridgeSystem& bs);

// True iff the contour (a subset of component k) winds or encloses vertices
// outside component k.
bool noncontractible_in_component(const TorusLattice& lat, const Contour& contour, const ComponentLabeling& labeling,
                                  int k);

// Vertices of component k whose color differs from its label.
std::size_t off_label_count(const Configuration& sigma, const ComponentLabeling& labeling, std::size_t k);

}  // namespace gpm
