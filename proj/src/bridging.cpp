#include "gpm/bridging.hpp"

#include <stdexcept>

namespace gpm {

namespace {

VertexSet line(const TorusLattice& lat, SeedLine orientation, int i) {
  return orientation == SeedLine::row ? lat.row(i) : lat.column(i);
}

// Contractibility data of one contour, independent of S.
struct Shape {
  bool winds = false;
  std::vector<VertexId> holes;
};

bool escapes(const Shape& shape, const ComponentLabeling& labeling, int k) {
  if (shape.winds) return true;
  for (VertexId v : shape.holes)
    if (labeling.component_of[v] != k) return true;
  return false;
}

Shape shape_of(const TorusLattice& lat, const Contour& c) {
  const Enclosure enc = enclosure(lat, c.support);
  return Shape{enc.winds, enc.interior};
}

double impurity_limit(double delta, std::size_t size) { return delta * static_cast<double>(size); }

std::size_t count_off(const Configuration& sigma, const VertexSet& set, Color label) {
  std::size_t n = 0;
  for (VertexId v : set.members())
    if (sigma[v] != label) ++n;
  return n;
}

}  // namespace

std::string to_string(BridgeProperty p) {
  switch (p) {
    case BridgeProperty::connected: return "connected";
    case BridgeProperty::bridge_bound: return "bridge_bound";
    case BridgeProperty::closed: return "closed";
    case BridgeProperty::pure: return "pure";
  }
  return "unknown";
}

bool noncontractible_in_component(const TorusLattice& lat, const Contour& contour, const ComponentLabeling& labeling,
                                  int k) {
  return escapes(shape_of(lat, contour), labeling, k);
}

std::size_t off_label_count(const Configuration& sigma, const ComponentLabeling& labeling, std::size_t k) {
  return count_off(sigma, labeling.components[k], labeling.labels[k]);
}

BridgeSystem build_bridge_system(const Configuration& sigma, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
  const auto& lat = sigma.lattice();
  const int side = lat.side_length();
  const std::size_t n = lat.vertex_count();
  const ContourSet all = extract_contours(sigma);

  std::vector<Shape> shapes;
  shapes.reserve(all.size());
  BridgeSystem bs;
  bs.delta = delta;
  for (const auto& c : all.contours) {
    shapes.push_back(shape_of(lat, c));
    if (!c.contractible) {
      const Winding w = winding(lat, c.support);
      if (w.crosses_columns && !w.crosses_rows) bs.seed = SeedLine::column;
    }
  }
  const SeedLine across = bs.seed == SeedLine::row ? SeedLine::column : SeedLine::row;

  std::vector<int> owner(n, -1);
  for (std::size_t i = 0; i < all.size(); ++i)
    for (VertexId v : all.contours[i].vertices) owner[v] = static_cast<int>(i);

  std::vector<bool> in_s(all.size(), false);
  auto capture_near = [&](const VertexSet& set, int component, const ComponentLabeling* labeling) {
    std::size_t added = 0;
    for (VertexId v : closed_neighborhood(lat, set).members()) {
      const int i = owner[v];
      if (i < 0 || in_s[i]) continue;
      if (labeling && labeling->component_of[all.contours[i].vertices.front()] != component) continue;
      in_s[i] = true;
      ++added;
    }
    return added;
  };
  auto bridged_support = [&] {
    VertexSet s(n);
    for (std::size_t i = 0; i < all.size(); ++i)
      if (in_s[i]) s |= all.contours[i].support;
    return s;
  };

  bs.bridges = line(lat, bs.seed, 0);
  capture_near(bs.bridges, -1, nullptr);
  // With nothing bridged the seed line is monochromatic; its color labels V.
  const Color seed_color = sigma[bs.bridges.members().front()];

  ComponentLabeling labeling;
  while (true) {
    // Closure under contractibility.
    bool changed = true;
    while (changed) {
      changed = false;
      labeling = component_labels(lat, bridged_support(), sigma);
      for (std::size_t i = 0; i < all.size(); ++i) {
        if (in_s[i]) continue;
        if (escapes(shapes[i], labeling, labeling.component_of[all.contours[i].vertices.front()])) {
          in_s[i] = true;
          changed = true;
        }
      }
    }

    int offending = -1;
    Color label = 0;
    for (std::size_t k = 0; k < labeling.size(); ++k) {
      const Color j = labeling.status[k] == LabelStatus::unanchored ? seed_color : labeling.labels[k];
      if (static_cast<double>(count_off(sigma, labeling.components[k], j)) >
          impurity_limit(delta, labeling.components[k].size())) {
        offending = static_cast<int>(k);
        label = j;
        break;
      }
    }
    if (offending < 0) break;

    const VertexSet& region = labeling.components[offending];
    bool augmented = false;
    for (int i = 0; i < side && !augmented; ++i) {
      VertexSet cut = line(lat, across, i);
      cut &= region;
      if (cut.empty()) continue;
      if (static_cast<double>(count_off(sigma, cut, label)) <= impurity_limit(delta, cut.size())) continue;
      bs.bridges |= cut;
      if (capture_near(cut, offending, &labeling) == 0)
        throw std::logic_error("bridge augmentation found an impure line with no contour near it");
      augmented = true;
    }
    if (!augmented) throw std::logic_error("impure component has no impure line");
    if (++bs.iterations > n) throw std::logic_error("bridge construction did not terminate");
  }

  for (std::size_t i = 0; i < all.size(); ++i) {
    if (!in_s[i]) continue;
    bs.contours.contours.push_back(all.contours[i]);
    bs.contour_ids.push_back(i);
  }
  bs.labeling = std::move(labeling);

  const auto violations = verify_bridge_system(sigma, bs);
  if (!violations.empty()) {
    std::string what = "bridge system violates:";
    for (auto p : violations) what += " " + to_string(p);
    throw std::logic_error(what);
  }
  return bs;
}

std::vector<BridgeProperty> verify_bridge_system(const Configuration& sigma, const BridgeSystem& bs) {
  const auto& lat = sigma.lattice();
  const std::size_t n = lat.vertex_count();
  std::vector<BridgeProperty> out;
  const VertexSet bridged = bs.contours.support(n);

  VertexSet joined = bs.bridges.universe() == n ? bs.bridges : VertexSet(n);
  joined |= bridged;
  if (!joined.empty() && !is_connected(lat, joined)) out.push_back(BridgeProperty::connected);

  const double bound = static_cast<double>(bridged.size()) / (2.0 * bs.delta) + lat.side_length();
  if (static_cast<double>(bs.bridges.size()) > bound + 1e-9) out.push_back(BridgeProperty::bridge_bound);

  const ComponentLabeling labeling = component_labels(lat, bridged, sigma);
  bool closed = true;
  for (std::size_t k = 0; k < labeling.size(); ++k)
    if (labeling.status[k] == LabelStatus::inconsistent) closed = false;
  if (closed) {
    for (const auto& c : extract_contours(sigma).contours) {
      if (c.support.intersects(bridged)) continue;
      if (noncontractible_in_component(lat, c, labeling, labeling.component_of[c.vertices.front()])) {
        closed = false;
        break;
      }
    }
  }
  if (!closed) out.push_back(BridgeProperty::closed);

  for (std::size_t k = 0; k < labeling.size(); ++k) {
    if (static_cast<double>(off_label_count(sigma, labeling, k)) >
        impurity_limit(bs.delta, labeling.components[k].size())) {
      out.push_back(BridgeProperty::pure);
      break;
    }
  }
  return out;
}

}  // namespace gpm
