#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gpm/lattice.hpp"
#include "gpm/model.hpp"

namespace gpm {

// A connected support together with the colors it carries.
struct Contour {
  VertexSet support;
  std::vector<VertexId> vertices;  // members of support, ascending
  std::vector<Color> colors;       // colors[i] is the assignment at vertices[i]
  bool contractible = true;

  std::size_t size() const { return vertices.size(); }
};

struct ContourSet {
  std::vector<Contour> contours;
  std::optional<std::uint64_t> source_hash;

  std::size_t size() const { return contours.size(); }
  bool empty() const { return contours.empty(); }
  // Union of the supports.
  VertexSet support(std::size_t universe) const;
  std::size_t support_size() const;
};

// Vertices incident to at least one bichromatic edge.
VertexSet boundary_vertices(const Configuration& sigma);
std::size_t boundary_size(const Configuration& sigma);

// Connected components of boundary_vertices(sigma), ordered by smallest
// vertex, with assignments copied from sigma and contractibility flags.
ContourSet extract_contours(const Configuration& sigma);

// Sum over contours of A over edges with both endpoints in that support.
double contour_cost(const TorusLattice& lat, const ContourSet& contours, const CostMatrix& a);
double contour_cost(const TorusLattice& lat, const Contour& contour, const CostMatrix& a);

// Pairwise lattice distance >= 2 between supports.
bool check_compatibility(const TorusLattice& lat, const ContourSet& contours);

enum class LabelStatus : std::uint8_t {
  consistent,    // every adjacent boundary vertex has the label color
  inconsistent,  // adjacent boundary vertices disagree
  unanchored,    // no adjacent boundary vertex; label from the component itself
};

// Components of V \ boundary with one color label each.
struct ComponentLabeling {
  std::vector<VertexSet> components;
  std::vector<Color> labels;
  std::vector<LabelStatus> status;
  // Ill-labeled: inconsistent, or unanchored with more than one color inside.
  std::vector<bool> flagged;
  std::vector<int> component_of;  // per vertex; -1 on the boundary set

  std::size_t size() const { return components.size(); }
  bool consistent() const;
};

// Labels every component of V \ boundary. Anchored components take the color
// shared by their adjacent boundary vertices; unanchored ones take their most
// common color (lowest index on ties) and are flagged unless monochromatic.
ComponentLabeling component_labels(const TorusLattice& lat, const VertexSet& boundary, const Configuration& sigma);

// Paints each component with its label and each contour vertex with its
// assignment. Inverse of extraction when the labeling is consistent.
Configuration reconstruct(std::shared_ptr<const TorusLattice> lattice, int q, const ContourSet& contours,
                          const ComponentLabeling& labeling);

// Label of the exterior of a contractible contour; nullopt when the contour
// winds or its exterior-facing vertices disagree.
std::optional<Color> contour_type(const TorusLattice& lat, const Contour& contour);

}  // namespace gpm
