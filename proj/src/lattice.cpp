#include "gpm/lattice.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <stdexcept>
#include <string>

namespace gpm {

namespace {

int wrap(int a, int n) {
  const int r = a % n;
  return r < 0 ? r + n : r;
}

}  // namespace

VertexSet VertexSet::from_members(std::size_t universe, std::span<const VertexId> members) {
  VertexSet s(universe);
  for (VertexId v : members) {
    if (v >= universe) throw std::out_of_range("vertex index " + std::to_string(v) + " outside lattice");
    s.insert(v);
  }
  return s;
}

std::vector<VertexId> VertexSet::members() const {
  std::vector<VertexId> out;
  out.reserve(count_);
  for (std::size_t i = 0; i < bits_.size(); ++i)
    if (bits_[i]) out.push_back(static_cast<VertexId>(i));
  return out;
}

VertexSet& VertexSet::operator|=(const VertexSet& other) {
  for (std::size_t i = 0; i < other.bits_.size(); ++i)
    if (other.bits_[i]) insert(static_cast<VertexId>(i));
  return *this;
}

VertexSet& VertexSet::operator&=(const VertexSet& other) {
  for (std::size_t i = 0; i < bits_.size(); ++i)
    if (bits_[i] && !other.bits_[i]) erase(static_cast<VertexId>(i));
  return *this;
}

bool VertexSet::intersects(const VertexSet& other) const {
  const std::size_t n = std::min(bits_.size(), other.bits_.size());
  for (std::size_t i = 0; i < n; ++i)
    if (bits_[i] && other.bits_[i]) return true;
  return false;
}

bool VertexSet::is_subset_of(const VertexSet& other) const {
  for (std::size_t i = 0; i < bits_.size(); ++i)
    if (bits_[i] && (i >= other.bits_.size() || !other.bits_[i])) return false;
  return true;
}

TorusLattice::TorusLattice(int side_length) : side_(side_length) {
  // Below L = 3 the six offsets collide and the neighbour list has repeats.
  if (side_length < 3)
    throw std::invalid_argument("lattice side length must be at least 3, got " + std::to_string(side_length));
  if (side_length > (1 << 15)) throw std::invalid_argument("lattice side length too large");
  neighbors_.resize(vertex_count());
  for (int y = 0; y < side_; ++y) {
    for (int x = 0; x < side_; ++x) {
      auto& nb = neighbors_[vertex(x, y)];
      for (int k = 0; k < kDegree; ++k) nb[k] = vertex(x + kOffsets[k].x, y + kOffsets[k].y);
    }
  }
}

VertexId TorusLattice::vertex(int x, int y) const {
  return static_cast<VertexId>(wrap(x, side_) + side_ * wrap(y, side_));
}

bool TorusLattice::adjacent(VertexId u, VertexId v) const {
  const auto& nb = neighbors_[u];
  return std::find(nb.begin(), nb.end(), v) != nb.end();
}

VertexSet TorusLattice::row(int y) const {
  VertexSet s(vertex_count());
  for (int x = 0; x < side_; ++x) s.insert(vertex(x, y));
  return s;
}

VertexSet TorusLattice::column(int x) const {
  VertexSet s(vertex_count());
  for (int y = 0; y < side_; ++y) s.insert(vertex(x, y));
  return s;
}

VertexSet TorusLattice::all() const {
  VertexSet s(vertex_count());
  for (VertexId v = 0; v < vertex_count(); ++v) s.insert(v);
  return s;
}

std::vector<int> component_ids(const TorusLattice& lat, const VertexSet& s, int* count) {
  std::vector<int> id(lat.vertex_count(), -1);
  std::vector<VertexId> stack;
  int next = 0;
  for (VertexId start = 0; start < lat.vertex_count(); ++start) {
    if (!s.contains(start) || id[start] >= 0) continue;
    id[start] = next;
    stack.push_back(start);
    while (!stack.empty()) {
      const VertexId u = stack.back();
      stack.pop_back();
      for (VertexId v : lat.neighbors(u)) {
        if (s.contains(v) && id[v] < 0) {
          id[v] = next;
          stack.push_back(v);
        }
      }
    }
    ++next;
  }
  if (count) *count = next;
  return id;
}

std::vector<VertexSet> connected_components(const TorusLattice& lat, const VertexSet& s) {
  int count = 0;
  const auto id = component_ids(lat, s, &count);
  std::vector<VertexSet> out(static_cast<std::size_t>(count), VertexSet(lat.vertex_count()));
  for (VertexId v = 0; v < lat.vertex_count(); ++v)
    if (id[v] >= 0) out[id[v]].insert(v);
  return out;
}

bool is_connected(const TorusLattice& lat, const VertexSet& s) {
  if (s.empty()) return true;
  int count = 0;
  component_ids(lat, s, &count);
  return count == 1;
}

namespace {

// Breadth-first lift of a connected set to Z^2. Returns the lift per member
// (indexed by vertex) and the winding discovered along non-tree edges.
struct Lift {
  std::vector<Coord> at;
  std::vector<bool> seen;
  Winding winding;
};

Lift lift_set(const TorusLattice& lat, const VertexSet& s) {
  Lift lift;
  lift.at.assign(lat.vertex_count(), Coord{});
  lift.seen.assign(lat.vertex_count(), false);
  const auto members = s.members();
  if (members.empty()) return lift;

  const int side = lat.side_length();
  std::deque<VertexId> queue;
  lift.seen[members.front()] = true;
  lift.at[members.front()] = lat.coord(members.front());
  queue.push_back(members.front());
  std::size_t reached = 1;
  while (!queue.empty()) {
    const VertexId u = queue.front();
    queue.pop_front();
    const auto& nb = lat.neighbors(u);
    for (int k = 0; k < TorusLattice::kDegree; ++k) {
      const VertexId v = nb[k];
      if (!s.contains(v)) continue;
      const Coord want{lift.at[u].x + TorusLattice::kOffsets[k].x, lift.at[u].y + TorusLattice::kOffsets[k].y};
      if (!lift.seen[v]) {
        lift.seen[v] = true;
        lift.at[v] = want;
        queue.push_back(v);
        ++reached;
      } else if (!(lift.at[v] == want)) {
        const int dx = (want.x - lift.at[v].x) / side;
        const int dy = (want.y - lift.at[v].y) / side;
        lift.winding.winds = true;
        if (dx != 0) lift.winding.crosses_columns = true;
        if (dy != 0) lift.winding.crosses_rows = true;
      }
    }
  }
  if (reached != members.size()) throw std::invalid_argument("vertex set is not connected");
  return lift;
}

}  // namespace

Winding winding(const TorusLattice& lat, const VertexSet& s) { return lift_set(lat, s).winding; }

bool is_noncontractible(const TorusLattice& lat, const VertexSet& s) { return winding(lat, s).winds; }

Enclosure enclosure(const TorusLattice& lat, const VertexSet& s) {
  Enclosure out;
  const Lift lift = lift_set(lat, s);
  if (lift.winding.winds) {
    out.winds = true;
    return out;
  }
  const auto members = s.members();
  if (members.empty()) return out;

  int xmin = std::numeric_limits<int>::max(), xmax = std::numeric_limits<int>::min();
  int ymin = xmin, ymax = xmax;
  for (VertexId v : members) {
    xmin = std::min(xmin, lift.at[v].x);
    xmax = std::max(xmax, lift.at[v].x);
    ymin = std::min(ymin, lift.at[v].y);
    ymax = std::max(ymax, lift.at[v].y);
  }
  // One-cell margin so the frame of the box is exterior.
  const int x0 = xmin - 1, y0 = ymin - 1;
  const int w = xmax - xmin + 3, h = ymax - ymin + 3;
  enum : std::uint8_t { kFree = 0, kSet = 1, kOutside = 2 };
  std::vector<std::uint8_t> cell(static_cast<std::size_t>(w) * h, kFree);
  auto at = [&](int x, int y) -> std::uint8_t& { return cell[static_cast<std::size_t>(y - y0) * w + (x - x0)]; };
  for (VertexId v : members) at(lift.at[v].x, lift.at[v].y) = kSet;

  std::vector<Coord> stack;
  auto push_outside = [&](int x, int y) {
    if (at(x, y) == kFree) {
      at(x, y) = kOutside;
      stack.push_back({x, y});
    }
  };
  for (int x = x0; x < x0 + w; ++x) {
    push_outside(x, y0);
    push_outside(x, y0 + h - 1);
  }
  for (int y = y0; y < y0 + h; ++y) {
    push_outside(x0, y);
    push_outside(x0 + w - 1, y);
  }
  while (!stack.empty()) {
    const Coord c = stack.back();
    stack.pop_back();
    for (const Coord& d : TorusLattice::kOffsets) {
      const int nx = c.x + d.x, ny = c.y + d.y;
      if (nx < x0 || ny < y0 || nx >= x0 + w || ny >= y0 + h) continue;
      push_outside(nx, ny);
    }
  }

  VertexSet interior(lat.vertex_count());
  for (int y = y0; y < y0 + h; ++y)
    for (int x = x0; x < x0 + w; ++x)
      if (at(x, y) == kFree) interior.insert(lat.vertex(x, y));
  out.interior = interior.members();

  for (VertexId v : members) {
    for (const Coord& d : TorusLattice::kOffsets) {
      if (at(lift.at[v].x + d.x, lift.at[v].y + d.y) == kOutside) {
        out.rim.push_back(v);
        break;
      }
    }
  }
  return out;
}

VertexSet closed_neighborhood(const TorusLattice& lat, const VertexSet& s) {
  VertexSet out = s;
  for (VertexId v : s.members())
    for (VertexId u : lat.neighbors(v)) out.insert(u);
  return out;
}

bool graph_distance_le(const TorusLattice& lat, const VertexSet& a, const VertexSet& b, int d) {
  if (d < 0 || d > 2) throw std::invalid_argument("graph_distance_le supports d in {0, 1, 2}");
  if (a.empty() || b.empty()) return false;
  VertexSet grown = a;
  for (int r = 0; r < d; ++r) grown = closed_neighborhood(lat, grown);
  return grown.intersects(b);
}

}  // namespace gpm
