#include "gpm/contours.hpp"

#include <algorithm>
#include <stdexcept>

namespace gpm {

VertexSet ContourSet::support(std::size_t universe) const {
  VertexSet out(universe);
  for (const auto& c : contours) out |= c.support;
  return out;
}

std::size_t ContourSet::support_size() const {
  std::size_t n = 0;
  for (const auto& c : contours) n += c.size();
  return n;
}

VertexSet boundary_vertices(const Configuration& sigma) {
  const auto& lat = sigma.lattice();
  VertexSet out(lat.vertex_count());
  for (std::size_t e = 0; e < lat.edge_count(); ++e) {
    const auto [u, v] = lat.edge(e);
    if (sigma[u] != sigma[v]) {
      out.insert(u);
      out.insert(v);
    }
  }
  return out;
}

std::size_t boundary_size(const Configuration& sigma) { return boundary_vertices(sigma).size(); }

ContourSet extract_contours(const Configuration& sigma) {
  const auto& lat = sigma.lattice();
  ContourSet out;
  for (auto& support : connected_components(lat, boundary_vertices(sigma))) {
    Contour c;
    c.vertices = support.members();
    c.colors.reserve(c.vertices.size());
    for (VertexId v : c.vertices) c.colors.push_back(sigma[v]);
    c.contractible = !is_noncontractible(lat, support);
    c.support = std::move(support);
    out.contours.push_back(std::move(c));
  }
  return out;
}

double contour_cost(const TorusLattice& lat, const Contour& contour, const CostMatrix& a) {
  std::vector<Color> color_at(lat.vertex_count(), 0);
  for (std::size_t i = 0; i < contour.vertices.size(); ++i) color_at[contour.vertices[i]] = contour.colors[i];
  double h = 0.0;
  for (VertexId u : contour.vertices) {
    for (int k : TorusLattice::kForward) {
      const VertexId v = lat.neighbors(u)[k];
      if (contour.support.contains(v)) h += a(color_at[u], color_at[v]);
    }
  }
  return h;
}

double contour_cost(const TorusLattice& lat, const ContourSet& contours, const CostMatrix& a) {
  double h = 0.0;
  for (const auto& c : contours.contours) h += contour_cost(lat, c, a);
  return h;
}

bool check_compatibility(const TorusLattice& lat, const ContourSet& contours) {
  std::vector<int> owner(lat.vertex_count(), -1);
  for (std::size_t i = 0; i < contours.size(); ++i) {
    for (VertexId v : contours.contours[i].vertices) {
      if (owner[v] >= 0) return false;  // overlapping supports: distance 0
      owner[v] = static_cast<int>(i);
    }
  }
  for (std::size_t i = 0; i < contours.size(); ++i)
    for (VertexId v : contours.contours[i].vertices)
      for (VertexId u : lat.neighbors(v))
        if (owner[u] >= 0 && owner[u] != static_cast<int>(i)) return false;
  return true;
}

bool ComponentLabeling::consistent() const {
  return std::none_of(flagged.begin(), flagged.end(), [](bool f) { return f; });
}

ComponentLabeling component_labels(const TorusLattice& lat, const VertexSet& boundary, const Configuration& sigma) {
  if (sigma.lattice().vertex_count() != lat.vertex_count()) throw std::invalid_argument("lattice mismatch");
  VertexSet rest(lat.vertex_count());
  for (VertexId v = 0; v < lat.vertex_count(); ++v)
    if (!boundary.contains(v)) rest.insert(v);

  ComponentLabeling out;
  int count = 0;
  out.component_of = component_ids(lat, rest, &count);
  const auto q = static_cast<std::size_t>(sigma.q());
  std::vector<std::vector<std::size_t>> adjacent_colors(count, std::vector<std::size_t>(q + 1, 0));
  std::vector<std::vector<std::size_t>> inside_colors(count, std::vector<std::size_t>(q + 1, 0));
  out.components.assign(static_cast<std::size_t>(count), VertexSet(lat.vertex_count()));

  for (VertexId v = 0; v < lat.vertex_count(); ++v) {
    const int k = out.component_of[v];
    if (k >= 0) {
      out.components[k].insert(v);
      ++inside_colors[k][sigma[v]];
      continue;
    }
    // Boundary vertex: count its color once per distinct adjacent component.
    std::array<int, TorusLattice::kDegree> seen{};
    int n_seen = 0;
    for (VertexId u : lat.neighbors(v)) {
      const int c = out.component_of[u];
      if (c < 0 || std::find(seen.begin(), seen.begin() + n_seen, c) != seen.begin() + n_seen) continue;
      seen[n_seen++] = c;
      ++adjacent_colors[c][sigma[v]];
    }
  }

  auto most_common = [](const std::vector<std::size_t>& hist) {
    Color best = 1;
    for (std::size_t c = 1; c < hist.size(); ++c)
      if (hist[c] > hist[best]) best = static_cast<Color>(c);
    return best;
  };
  auto distinct = [](const std::vector<std::size_t>& hist) {
    return std::count_if(hist.begin() + 1, hist.end(), [](std::size_t n) { return n > 0; });
  };

  for (int k = 0; k < count; ++k) {
    const auto n_adjacent = distinct(adjacent_colors[k]);
    if (n_adjacent == 0) {
      out.labels.push_back(most_common(inside_colors[k]));
      out.status.push_back(LabelStatus::unanchored);
      out.flagged.push_back(distinct(inside_colors[k]) > 1);
    } else {
      out.labels.push_back(most_common(adjacent_colors[k]));
      out.status.push_back(n_adjacent == 1 ? LabelStatus::consistent : LabelStatus::inconsistent);
      out.flagged.push_back(n_adjacent != 1);
    }
  }
  return out;
}

Configuration reconstruct(std::shared_ptr<const TorusLattice> lattice, int q, const ContourSet& contours,
                          const ComponentLabeling& labeling) {
  std::vector<Color> colors(lattice->vertex_count(), 0);
  for (std::size_t k = 0; k < labeling.size(); ++k)
    for (VertexId v : labeling.components[k].members()) colors[v] = labeling.labels[k];
  for (const auto& c : contours.contours)
    for (std::size_t i = 0; i < c.vertices.size(); ++i) colors[c.vertices[i]] = c.colors[i];
  for (Color c : colors)
    if (c == 0) throw std::invalid_argument("contours and labeling do not cover the lattice");
  return Configuration(std::move(lattice), q, std::move(colors));
}

std::optional<Color> contour_type(const TorusLattice& lat, const Contour& contour) {
  const Enclosure enc = enclosure(lat, contour.support);
  if (enc.winds || enc.rim.empty()) return std::nullopt;
  std::optional<Color> type;
  for (VertexId v : enc.rim) {
    const auto it = std::lower_bound(contour.vertices.begin(), contour.vertices.end(), v);
    const Color c = contour.colors[static_cast<std::size_t>(it - contour.vertices.begin())];
    if (type && *type != c) return std::nullopt;
    type = c;
  }
  return type;
}

}  // namespace gpm
