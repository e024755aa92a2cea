#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace gpm {

using VertexId = std::uint32_t;

// Axial coordinates on the rhombic L x L torus. index = x + L * y.
struct Coord {
  int x = 0;
  int y = 0;
  friend bool operator==(const Coord&, const Coord&) = default;
};

// Membership bitset over the vertices [0, universe) of a lattice.
class VertexSet {
 public:
  VertexSet() = default;
  explicit VertexSet(std::size_t universe) : bits_(universe, false) {}

  static VertexSet from_members(std::size_t universe, std::span<const VertexId> members);

  void insert(VertexId v) {
    if (!bits_[v]) {
      bits_[v] = true;
      ++count_;
    }
  }
  void erase(VertexId v) {
    if (bits_[v]) {
      bits_[v] = false;
      --count_;
    }
  }
  bool contains(VertexId v) const { return bits_[v]; }

  std::size_t size() const { return count_; }
  bool empty() const { return count_ == 0; }
  std::size_t universe() const { return bits_.size(); }

  // Members in increasing index order.
  std::vector<VertexId> members() const;

  VertexSet& operator|=(const VertexSet& other);
  VertexSet& operator&=(const VertexSet& other);
  bool intersects(const VertexSet& other) const;
  bool is_subset_of(const VertexSet& other) const;

  friend bool operator==(const VertexSet& a, const VertexSet& b) { return a.bits_ == b.bits_; }

 private:
  std::vector<bool> bits_;
  std::size_t count_ = 0;
};

// L x L patch of the triangular lattice with periodic boundary conditions.
//
// Vertices carry axial coordinates (x, y); the six neighbours of (x, y) are
// at offsets (+1,0), (-1,0), (0,+1), (0,-1), (+1,-1), (-1,+1), always
// returned in that order. Edge e in [0, 3L^2) joins vertex e / 3 to its
// neighbour along forward offset (+1,0), (0,+1) or (-1,+1) for e % 3 = 0, 1, 2.
class TorusLattice {
 public:
  static constexpr int kDegree = 6;
  static constexpr std::array<Coord, kDegree> kOffsets{
      {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, -1}, {-1, 1}}};
  // Indices into kOffsets of the three forward directions used for edges.
  static constexpr std::array<int, 3> kForward{0, 2, 5};

  explicit TorusLattice(int side_length);

  int side_length() const { return side_; }
  std::size_t vertex_count() const { return static_cast<std::size_t>(side_) * side_; }
  std::size_t edge_count() const { return 3 * vertex_count(); }

  VertexId vertex(int x, int y) const;
  Coord coord(VertexId v) const { return {static_cast<int>(v % side_), static_cast<int>(v / side_)}; }

  const std::array<VertexId, kDegree>& neighbors(VertexId v) const { return neighbors_[v]; }
  bool adjacent(VertexId u, VertexId v) const;

  std::pair<VertexId, VertexId> edge(std::size_t e) const {
    const VertexId u = static_cast<VertexId>(e / 3);
    return {u, neighbors_[u][kForward[e % 3]]};
  }

  VertexSet row(int y) const;
  VertexSet column(int x) const;
  VertexSet all() const;
  VertexSet empty_set() const { return VertexSet(vertex_count()); }

  friend bool operator==(const TorusLattice& a, const TorusLattice& b) { return a.side_ == b.side_; }

 private:
  int side_;
  std::vector<std::array<VertexId, kDegree>> neighbors_;
};

// Maximal connected subsets of s, ordered by their smallest vertex index.
std::vector<VertexSet> connected_components(const TorusLattice& lat, const VertexSet& s);

// Component id per vertex (-1 outside s); ids follow connected_components order.
std::vector<int> component_ids(const TorusLattice& lat, const VertexSet& s, int* count = nullptr);

bool is_connected(const TorusLattice& lat, const VertexSet& s);

// Torus winding of a connected set, read off the lift to the universal cover.
struct Winding {
  bool winds = false;        // some closed path in the set is non-contractible
  bool crosses_rows = false;  // some lift discrepancy has a nonzero y component
  bool crosses_columns = false;
};

// Throws std::invalid_argument if s is not connected.
Winding winding(const TorusLattice& lat, const VertexSet& s);

// True iff the connected set s contains a closed path winding around the torus.
bool is_noncontractible(const TorusLattice& lat, const VertexSet& s);

// Holes of a contractible connected set: vertices enclosed by the lifted set
// on the universal cover, projected back to the torus. rim holds the members
// of s that touch the unbounded exterior. Both are empty when s winds.
struct Enclosure {
  bool winds = false;
  std::vector<VertexId> interior;
  std::vector<VertexId> rim;
};

Enclosure enclosure(const TorusLattice& lat, const VertexSet& s);

// min_{a in A, b in B} dist(a, b) <= d, for d in {0, 1, 2}.
bool graph_distance_le(const TorusLattice& lat, const VertexSet& a, const VertexSet& b, int d);

// s together with every vertex adjacent to it.
VertexSet closed_neighborhood(const TorusLattice& lat, const VertexSet& s);

}  // namespace gpm
