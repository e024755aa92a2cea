#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "gpm/contours.hpp"
#include "gpm/enumerate.hpp"
#include "gpm/random.hpp"

using namespace gpm;

namespace {

std::shared_ptr<const TorusLattice> torus(int side) { return std::make_shared<const TorusLattice>(side); }

std::vector<Color> colors_of(const Configuration& s) { return {s.colors().begin(), s.colors().end()}; }

// Oracle: direct scan of all edges for bichromatic endpoints.
VertexSet boundary_by_edges(const Configuration& s) {
  const auto& lat = s.lattice();
  VertexSet out(lat.vertex_count());
  for (std::size_t e = 0; e < lat.edge_count(); ++e) {
    const auto [u, v] = lat.edge(e);
    if (s[u] != s[v]) {
      out.insert(u);
      out.insert(v);
    }
  }
  return out;
}

// Oracle: enumerate induced edges of a support by neighbor scan.
double induced_cost(const Configuration& s, const VertexSet& support, const CostMatrix& a) {
  double h = 0;
  for (VertexId v : support.members())
    for (VertexId u : s.lattice().neighbors(v))
      if (u > v && support.contains(u)) h += a(s[u], s[v]);
  return h;
}

void check_invariants(const Configuration& s, const CostMatrix& a) {
  const auto& lat = s.lattice();
  const ContourSet gamma = extract_contours(s);
  const VertexSet bar = boundary_by_edges(s);
  REQUIRE(gamma.support(lat.vertex_count()) == bar);
  double cost = 0;
  for (const auto& c : gamma.contours) {
    REQUIRE(c.size() >= 7);
    REQUIRE(is_connected(lat, c.support));
    REQUIRE(c.contractible == !is_noncontractible(lat, c.support));
    for (std::size_t i = 0; i < c.size(); ++i) REQUIRE(c.colors[i] == s[c.vertices[i]]);
    const double ci = contour_cost(lat, c, a);
    REQUIRE(ci == doctest::Approx(induced_cost(s, c.support, a)));
    cost += ci;
  }
  const double h = contour_cost(lat, gamma, a);
  REQUIRE(h == doctest::Approx(cost));
  REQUIRE(h <= hamiltonian(s, a) + 1e-9);
  const double nbar = static_cast<double>(bar.size());
  REQUIRE(a.min_off_diagonal() / 2.0 * nbar <= h + 1e-9);
  REQUIRE(h <= 3.0 * a.max_off_diagonal() * nbar + 1e-9);
  REQUIRE(check_compatibility(lat, gamma));
  const auto labels = component_labels(lat, bar, s);
  REQUIRE(labels.consistent());
  REQUIRE(colors_of(reconstruct(s.lattice_ptr(), s.q(), gamma, labels)) == colors_of(s));
}

}  // namespace

TEST_CASE("boundary vertices") {
  auto lat = torus(5);
  Configuration mono(lat, 2, Color{1});
  CHECK(boundary_size(mono) == 0);
  CHECK(extract_contours(mono).empty());

  Configuration one = mono;
  one.set(lat->vertex(2, 2), 2);
  const VertexSet b = boundary_vertices(one);
  CHECK(b.size() == 7);
  CHECK(b.contains(lat->vertex(2, 2)));
  for (VertexId u : lat->neighbors(lat->vertex(2, 2))) CHECK(b.contains(u));

  Configuration rows(torus(6), 2, Color{1});
  for (VertexId v = 0; v < 36; ++v)
    if ((v / 6) % 2 == 1) rows.set(v, 2);
  CHECK(boundary_size(rows) == 36);
}

TEST_CASE("single flipped vertex contour") {
  auto lat = torus(5);
  Configuration s(lat, 2, Color{1});
  s.set(lat->vertex(1, 3), 2);
  const auto gamma = extract_contours(s);
  REQUIRE(gamma.size() == 1);
  CHECK(gamma.contours[0].size() == 7);
  CHECK(gamma.contours[0].contractible);
  CHECK(contour_cost(*lat, gamma, builtin_matrix("potts", 2)) == 6);
  CHECK(contour_cost(*lat, ContourSet{}, builtin_matrix("potts", 2)) == 0);
  CHECK(contour_type(*lat, gamma.contours[0]) == Color{1});

  const auto labels = component_labels(*lat, gamma.support(25), s);
  REQUIRE(labels.size() == 1);
  CHECK(labels.labels[0] == 1);
  CHECK(labels.status[0] == LabelStatus::consistent);
}

TEST_CASE("a full row of another color gives one wrapping contour of three rows") {
  auto lat = torus(5);
  Configuration s(lat, 2, Color{1});
  for (int x = 0; x < 5; ++x) s.set(lat->vertex(x, 2), 2);
  const auto gamma = extract_contours(s);
  REQUIRE(gamma.size() == 1);
  CHECK(gamma.contours[0].size() == 15);
  CHECK_FALSE(gamma.contours[0].contractible);
  CHECK_FALSE(contour_type(*lat, gamma.contours[0]).has_value());
  for (int y : {1, 2, 3})
    for (int x = 0; x < 5; ++x) CHECK(gamma.contours[0].support.contains(lat->vertex(x, y)));
}

TEST_CASE("contour type of a region nested in a larger one") {
  auto lat = torus(12);
  Configuration s(lat, 3, Color{1});
  const VertexId c = lat->vertex(6, 6);
  // A 2-blob of radius 1 carrying a 3 at its center.
  s.set(c, 3);
  for (VertexId u : lat->neighbors(c)) s.set(u, 2);
  const auto gamma = extract_contours(s);
  REQUIRE(gamma.size() == 1);
  CHECK(gamma.contours[0].contractible);
  CHECK(contour_type(*lat, gamma.contours[0]) == Color{1});
}

TEST_CASE("component labels on an empty boundary set") {
  auto lat = torus(4);
  Configuration mono(lat, 3, Color{2});
  auto l = component_labels(*lat, lat->empty_set(), mono);
  REQUIRE(l.size() == 1);
  CHECK(l.labels[0] == 2);
  CHECK(l.status[0] == LabelStatus::unanchored);
  CHECK_FALSE(l.flagged[0]);
  CHECK(l.consistent());

  Configuration mixed = mono;
  mixed.set(0, 1);
  l = component_labels(*lat, lat->empty_set(), mixed);
  REQUIRE(l.size() == 1);
  CHECK(l.labels[0] == 2);
  CHECK(l.flagged[0]);
  CHECK_FALSE(l.consistent());
}

TEST_CASE("inconsistent labels are reported") {
  auto lat = torus(6);
  Configuration s(lat, 2, Color{1});
  for (int x = 0; x < 6; ++x) {
    s.set(lat->vertex(x, 3), 2);
    s.set(lat->vertex(x, 4), 2);
  }
  // Row 3 sits between a removed row of color 1 and one of color 2.
  VertexSet removed = lat->row(2);
  removed |= lat->row(4);
  const auto l = component_labels(*lat, removed, s);
  CHECK_FALSE(l.consistent());
  bool any_inconsistent = false;
  for (auto st : l.status) any_inconsistent |= st == LabelStatus::inconsistent;
  CHECK(any_inconsistent);
}

TEST_CASE("compatibility of hand-built sets") {
  auto lat = torus(7);
  ContourSet one;
  Contour c;
  c.support = VertexSet(49);
  c.support.insert(0);
  c.vertices = {0};
  c.colors = {1};
  one.contours.push_back(c);
  CHECK(check_compatibility(*lat, one));
  Contour d = c;
  d.support = VertexSet(49);
  d.support.insert(1);
  d.vertices = {1};
  one.contours.push_back(d);
  CHECK_FALSE(check_compatibility(*lat, one));
  one.contours[1].support = VertexSet(49);
  one.contours[1].support.insert(lat->vertex(3, 3));
  one.contours[1].vertices = {lat->vertex(3, 3)};
  CHECK(check_compatibility(*lat, one));
}

TEST_CASE("exhaustive invariants at L = 3, q = 2") {
  auto lat = torus(3);
  const auto a = builtin_matrix("potts", 2);
  std::size_t visited = 0;
  for_each_coloring(2, 9, [&](const std::vector<Color>& colors) {
    check_invariants(Configuration(lat, 2, colors), a);
    ++visited;
  });
  CHECK(visited == 512);
}

TEST_CASE("exhaustive invariants with weighted costs at L = 3") {
  auto lat = torus(3);
  const auto a = builtin_matrix("blume_capel");
  for_each_coloring(3, 9, [&](const std::vector<Color>& colors) { check_invariants(Configuration(lat, 3, colors), a); });
}

TEST_CASE("randomized invariants at L = 12, q = 4") {
  Rng rng(8);
  auto lat = torus(12);
  const auto a = builtin_matrix("clock", 4);
  for (int t = 0; t < 1000; ++t) {
    std::vector<Color> colors(144);
    // Mix noise levels so both sparse and dense boundaries appear.
    const double p = rng.uniform();
    const Color base = static_cast<Color>(rng.below(4) + 1);
    for (auto& c : colors) c = rng.uniform() < p ? static_cast<Color>(rng.below(4) + 1) : base;
    check_invariants(Configuration(lat, 4, colors), a);
  }
}
