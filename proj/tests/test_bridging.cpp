#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <deque>

#include "gpm/bridging.hpp"
#include "gpm/enumerate.hpp"
#include "gpm/random.hpp"

using namespace gpm;

namespace {

std::shared_ptr<const TorusLattice> torus(int side) { return std::make_shared<const TorusLattice>(side); }

bool has(const std::vector<BridgeProperty>& v, BridgeProperty p) { return std::find(v.begin(), v.end(), p) != v.end(); }

// Independent check of connectivity, the bridge bound and purity by BFS and
// direct counting, sharing nothing with the library verifier.
void oracle_check(const Configuration& s, const BridgeSystem& bs) {
  const auto& lat = s.lattice();
  const std::size_t n = lat.vertex_count();
  std::vector<char> in_s(n, 0), in_joined(n, 0);
  for (const auto& c : bs.contours.contours)
    for (VertexId v : c.vertices) in_s[v] = in_joined[v] = 1;
  for (VertexId v : bs.bridges.members()) in_joined[v] = 1;
  std::size_t joined = 0, sbar = 0;
  VertexId start = 0;
  for (VertexId v = 0; v < n; ++v) {
    joined += in_joined[v];
    sbar += in_s[v];
    if (in_joined[v]) start = v;
  }
  if (joined > 0) {
    std::vector<char> seen(n, 0);
    std::deque<VertexId> queue{start};
    seen[start] = 1;
    std::size_t reached = 1;
    while (!queue.empty()) {
      const VertexId u = queue.front();
      queue.pop_front();
      for (VertexId w : lat.neighbors(u))
        if (in_joined[w] && !seen[w]) {
          seen[w] = 1;
          ++reached;
          queue.push_back(w);
        }
    }
    REQUIRE(reached == joined);
  }
  REQUIRE(static_cast<double>(bs.bridges.size()) <= static_cast<double>(sbar) / (2 * bs.delta) + lat.side_length() + 1e-9);

  // Components of the complement of S-bar, labeled from adjacent S-bar colors
  // or by majority when none touch S-bar.
  std::vector<int> comp(n, -1);
  int next = 0;
  for (VertexId v = 0; v < n; ++v) {
    if (in_s[v] || comp[v] >= 0) continue;
    std::vector<VertexId> members{v};
    comp[v] = next;
    for (std::size_t i = 0; i < members.size(); ++i)
      for (VertexId w : lat.neighbors(members[i]))
        if (!in_s[w] && comp[w] < 0) {
          comp[w] = next;
          members.push_back(w);
        }
    std::vector<std::size_t> adjacent(s.q() + 1, 0), inside(s.q() + 1, 0);
    for (VertexId u : members) {
      ++inside[s[u]];
      for (VertexId w : lat.neighbors(u))
        if (in_s[w]) ++adjacent[s[w]];
    }
    std::size_t distinct = 0;
    Color label = 1;
    for (Color c = 1; c <= s.q(); ++c)
      if (adjacent[c] > 0) {
        ++distinct;
        label = c;
      }
    REQUIRE(distinct <= 1);
    if (distinct == 0)
      for (Color c = 1; c <= s.q(); ++c)
        if (inside[c] > inside[label]) label = c;
    REQUIRE(static_cast<double>(members.size() - inside[label]) <= bs.delta * static_cast<double>(members.size()) + 1e-9);
    ++next;
  }
}

void build_and_check(const Configuration& s, double delta) {
  const BridgeSystem bs = build_bridge_system(s, delta);
  REQUIRE(verify_bridge_system(s, bs).empty());
  oracle_check(s, bs);
  REQUIRE(bs.iterations <= s.size());
  // Every extracted contour within distance 1 of the seed line is bridged.
  const auto& lat = s.lattice();
  const VertexSet seed = bs.seed == SeedLine::row ? lat.row(0) : lat.column(0);
  const auto all = extract_contours(s);
  const VertexSet bridged = bs.support();
  for (const auto& c : all.contours)
    if (graph_distance_le(lat, c.support, seed, 1)) REQUIRE(bridged.contains(c.vertices.front()));
}

}  // namespace

TEST_CASE("monochromatic configurations keep only the seed row") {
  for (double delta : {0.05, 0.5, 0.9}) {
    auto lat = torus(6);
    Configuration s(lat, 3, Color{2});
    const auto bs = build_bridge_system(s, delta);
    CHECK(bs.bridges == lat->row(0));
    CHECK(bs.contours.empty());
    REQUIRE(bs.labeling.size() == 1);
    CHECK(bs.labeling.labels[0] == 2);
    CHECK(bs.iterations == 0);
  }
}

TEST_CASE("delta must lie strictly between 0 and 1") {
  Configuration s(torus(4), 2, Color{1});
  CHECK_THROWS_AS(build_bridge_system(s, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(build_bridge_system(s, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(build_bridge_system(s, -0.2), std::invalid_argument);
}

TEST_CASE("a flipped vertex next to the seed row is captured") {
  auto lat = torus(5);
  Configuration s(lat, 2, Color{1});
  s.set(lat->vertex(2, 1), 2);
  const auto bs = build_bridge_system(s, 0.3);
  REQUIRE(bs.contours.size() == 1);
  CHECK(bs.contours.contours[0].size() == 7);
  CHECK(bs.bridges == lat->row(0));
  CHECK(verify_bridge_system(s, bs).empty());
}

TEST_CASE("a distant flipped vertex is left alone when impurity is tolerated") {
  auto lat = torus(7);
  Configuration s(lat, 2, Color{1});
  s.set(lat->vertex(3, 4), 2);
  const auto loose = build_bridge_system(s, 0.3);
  CHECK(loose.contours.empty());
  CHECK(loose.bridges == lat->row(0));

  // At a tiny delta the single wrong vertex forces an augmenting column.
  const auto tight = build_bridge_system(s, 0.01);
  REQUIRE(tight.contours.size() == 1);
  CHECK(tight.iterations >= 1);
  CHECK(tight.bridges.size() > 7);
  CHECK(verify_bridge_system(s, tight).empty());
  oracle_check(s, tight);
}

TEST_CASE("horizontal stripes away from the bottom row switch the seed to a column") {
  auto lat = torus(8);
  Configuration s(lat, 2, Color{1});
  for (int y : {3, 4})
    for (int x = 0; x < 8; ++x) s.set(lat->vertex(x, y), 2);
  const auto bs = build_bridge_system(s, 0.1);
  CHECK(bs.seed == SeedLine::column);
  // Rows 2 to 5 form a single wrapping contour.
  CHECK(bs.contours.size() == 1);
  CHECK(verify_bridge_system(s, bs).empty());
  oracle_check(s, bs);
}

TEST_CASE("hand-built systems expose violated properties") {
  auto lat = torus(9);
  Configuration s(lat, 2, Color{1});
  s.set(lat->vertex(1, 1), 2);
  s.set(lat->vertex(5, 5), 2);
  const auto all = extract_contours(s);
  REQUIRE(all.size() == 2);
  BridgeSystem bs;
  bs.bridges = lat->empty_set();
  bs.contours = all;
  bs.delta = 0.3;
  const auto v = verify_bridge_system(s, bs);
  CHECK(has(v, BridgeProperty::connected));

  bs.bridges = lat->empty_set();
  for (VertexId u = 0; u < lat->vertex_count(); ++u) bs.bridges.insert(u);
  CHECK(has(verify_bridge_system(s, bs), BridgeProperty::bridge_bound));
}

TEST_CASE("dropping a wrapping contour breaks closure") {
  auto lat = torus(6);
  Configuration s(lat, 2, Color{1});
  for (int x = 0; x < 6; ++x) s.set(lat->vertex(x, 3), 2);
  auto bs = build_bridge_system(s, 0.3);
  REQUIRE(bs.contours.size() == 1);
  CHECK_FALSE(bs.contours.contours[0].contractible);
  bs.contours.contours.clear();
  const auto v = verify_bridge_system(s, bs);
  CHECK(has(v, BridgeProperty::closed));
}

TEST_CASE("impure components are reported") {
  auto lat = torus(6);
  Configuration s(lat, 2, Color{1});
  for (VertexId v = 0; v < 36; v += 3) s.set(v, 2);
  BridgeSystem bs;
  bs.bridges = lat->row(0);
  bs.delta = 0.1;
  CHECK(has(verify_bridge_system(s, bs), BridgeProperty::pure));
  CHECK(to_string(BridgeProperty::pure).size() > 0);
}

TEST_CASE("exhaustive: every configuration at L = 3, q = 2") {
  auto lat = torus(3);
  std::size_t count = 0;
  for_each_coloring(2, 9, [&](const std::vector<Color>& colors) {
    const Configuration s(lat, 2, colors);
    for (double delta : {0.1, 0.3}) build_and_check(s, delta);
    ++count;
  });
  CHECK(count == 512);
}

TEST_CASE("exhaustive: every configuration at L = 3, q = 3") {
  auto lat = torus(3);
  for_each_coloring(3, 9, [&](const std::vector<Color>& colors) {
    const Configuration s(lat, 3, colors);
    build_and_check(s, 0.2);
  });
}

TEST_CASE("randomized configurations at L = 12, q = 4") {
  Rng rng(12);
  auto lat = torus(12);
  for (int t = 0; t < 600; ++t) {
    std::vector<Color> colors(144);
    const double p = rng.uniform();
    // Blocks of colors with noise produce wrapping and nested contours.
    const int mode = static_cast<int>(rng.below(3));
    for (VertexId v = 0; v < 144; ++v) {
      const int x = static_cast<int>(v % 12), y = static_cast<int>(v / 12);
      Color base = 1;
      if (mode == 1) base = static_cast<Color>(1 + (y / 3) % 4);
      if (mode == 2) base = static_cast<Color>(1 + ((x / 4) + 2 * (y / 6)) % 4);
      colors[v] = rng.uniform() < p ? static_cast<Color>(rng.below(4) + 1) : base;
    }
    const Configuration s(lat, 4, colors);
    for (double delta : {0.05, 0.1, 0.3}) build_and_check(s, delta);
  }
}
