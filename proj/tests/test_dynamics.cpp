#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <deque>
#include <set>

#include "gpm/contours.hpp"
#include "gpm/dynamics.hpp"
#include "gpm/enumerate.hpp"

using namespace gpm;

namespace {

ChainParams kawasaki_params(int side, const CostMatrix& a, CountsVector counts, double beta, std::uint64_t seed) {
  ChainParams p;
  p.beta = beta;
  p.matrix = a;
  p.side_length = side;
  p.mode = Dynamics::kawasaki;
  p.counts = std::move(counts);
  p.seed = seed;
  return p;
}

ChainParams glauber_params(int side, const CostMatrix& a, double beta, std::uint64_t seed) {
  ChainParams p;
  p.beta = beta;
  p.matrix = a;
  p.side_length = side;
  p.mode = Dynamics::glauber;
  p.seed = seed;
  return p;
}

std::vector<Color> colors_of(const Configuration& s) { return {s.colors().begin(), s.colors().end()}; }

Configuration from_code(const std::shared_ptr<const TorusLattice>& lat, int q, std::uint64_t code) {
  return Configuration(lat, q, decode_colors(code, q, lat->vertex_count()));
}

// Oracle for stationary weights: exp(-beta H + h.n), computed directly.
double log_weight(const Configuration& s, const CostMatrix& a, double beta, const MagneticField& h) {
  double w = -beta * hamiltonian(s, a);
  if (!h.h.empty())
    for (VertexId v = 0; v < s.size(); ++v) w += h[s[v]];
  return w;
}

}  // namespace

TEST_CASE("sweep sizes") {
  const TorusLattice lat(5);
  CHECK(sweep_size(Dynamics::kawasaki, lat) == 75);
  CHECK(sweep_size(Dynamics::glauber, lat) == 25);
}

TEST_CASE("kawasaki at beta = 0 accepts every bichromatic proposal") {
  const auto a = builtin_matrix("potts", 2);
  auto p = kawasaki_params(4, a, CountsVector{{8, 8}}, 0.0, 5);
  Chain chain(p, canonical_configuration(p));
  std::uint64_t accepted = 0;
  double bichromatic_fraction = 0;
  const int steps = 20000;
  for (int t = 0; t < steps; ++t) {
    bichromatic_fraction += static_cast<double>(bichromatic_edge_count(chain.configuration())) / 48.0;
    const auto prev = colors_of(chain.configuration());
    const bool ok = chain.step();
    const bool changed = prev != colors_of(chain.configuration());
    CHECK(ok == changed);
    accepted += ok;
  }
  CHECK(accepted == chain.accepted());
  // Acceptance rate equals the mean fraction of bichromatic edges.
  CHECK(std::abs(static_cast<double>(accepted) / steps - bichromatic_fraction / steps) < 0.02);
}

TEST_CASE("kawasaki preserves magnetization and tracks energy exactly") {
  for (const char* name : {"potts", "blume_capel"}) {
    const auto a = builtin_matrix(name, 3);
    auto p = kawasaki_params(6, a, CountsVector{{12, 12, 12}}, 0.8, 17);
    Chain chain(p, random_configuration(p, 3));
    const auto m0 = magnetization(chain.configuration());
    for (int t = 0; t < 50000; ++t) {
      chain.step();
      if (t % 997 == 0) {
        REQUIRE(magnetization(chain.configuration()) == m0);
        REQUIRE(chain.energy() == hamiltonian(chain.configuration(), a));
      }
    }
    CHECK(chain.energy() == hamiltonian(chain.configuration(), a));
  }
}

TEST_CASE("running energy drift stays tiny for real-valued matrices") {
  const auto a = builtin_matrix("clock", 5);
  auto p = glauber_params(8, a, 1.3, 4);
  Chain chain(p, random_configuration(p, 1));
  for (int t = 0; t < 300000; ++t) chain.step();
  CHECK(std::abs(chain.energy() - hamiltonian(chain.configuration(), a)) < 1e-6);
  CHECK(magnetization(chain.configuration()) == chain.counts());
}

TEST_CASE("glauber tracks counts and energy") {
  const auto a = builtin_matrix("fig2b");
  auto p = glauber_params(5, a, 0.4, 8);
  Chain chain(p, random_configuration(p, 2));
  for (int t = 0; t < 40000; ++t) chain.step();
  CHECK(magnetization(chain.configuration()) == chain.counts());
  CHECK(chain.energy() == doctest::Approx(hamiltonian(chain.configuration(), a)).epsilon(1e-12));
}

TEST_CASE("glauber at beta = 0 without field samples colors uniformly") {
  const auto a = builtin_matrix("potts", 3);
  auto p = glauber_params(5, a, 0.0, 99);
  Chain chain(p, canonical_configuration(p));
  std::vector<double> freq(3, 0.0);
  const int samples = 4000;
  for (int s = 0; s < samples; ++s) {
    for (int t = 0; t < 25; ++t) chain.step();
    freq[chain.configuration()[12] - 1] += 1.0;
  }
  for (double f : freq) CHECK(std::abs(f / samples - 1.0 / 3.0) < 0.04);
}

TEST_CASE("a field has no influence on kawasaki dynamics") {
  const auto a = builtin_matrix("potts", 2);
  auto p = kawasaki_params(4, a, CountsVector{{6, 10}}, 0.9, 3);
  auto q = p;
  q.field = MagneticField{{0.0, 2.5}};
  Chain c1(p, canonical_configuration(p)), c2(q, canonical_configuration(q));
  for (int t = 0; t < 10000; ++t) {
    c1.step();
    c2.step();
  }
  CHECK(colors_of(c1.configuration()) == colors_of(c2.configuration()));
}

TEST_CASE("runs are deterministic for a seed and differ across seeds") {
  const auto a = builtin_matrix("potts", 3);
  auto p = kawasaki_params(6, a, CountsVector{{10, 10, 16}}, 1.0, 42);
  p.steps = 20000;
  p.thin = 5000;
  std::vector<double> e1, e2;
  const auto r1 = run_chain(p, canonical_configuration(p), [&](const Sample& s) { e1.push_back(s.energy); });
  const auto r2 = run_chain(p, canonical_configuration(p), [&](const Sample& s) { e2.push_back(s.energy); });
  CHECK(e1 == e2);
  CHECK(e1.size() == 5);
  CHECK(colors_of(*r1.final_configuration) == colors_of(*r2.final_configuration));
  p.seed = 43;
  const auto r3 = run_chain(p, canonical_configuration(p), nullptr);
  CHECK(colors_of(*r3.final_configuration) != colors_of(*r1.final_configuration));
}

TEST_CASE("zero steps return the initial state") {
  const auto a = builtin_matrix("potts", 2);
  auto p = kawasaki_params(5, a, CountsVector{{10, 15}}, 1.0, 1);
  p.steps = 0;
  std::size_t emitted = 0;
  const auto init = canonical_configuration(p);
  const auto r = run_chain(p, init, [&](const Sample& s) {
    ++emitted;
    CHECK(s.step == 0);
    CHECK(s.boundary_size == boundary_size(init));
  });
  CHECK(emitted == 1);
  CHECK(r.samples == 1);
  CHECK(colors_of(*r.final_configuration) == colors_of(init));
  CHECK(r.final_energy == hamiltonian(init, a));
  p.thin = 0;
  CHECK_THROWS_AS(run_chain(p, init, nullptr), std::invalid_argument);
}

TEST_CASE("chain construction rejects inconsistent inputs") {
  const auto a = builtin_matrix("potts", 2);
  auto p = kawasaki_params(4, a, CountsVector{{8, 8}}, 1.0, 0);
  auto lat = std::make_shared<const TorusLattice>(4);
  CHECK_THROWS_AS(Chain(p, Configuration(lat, 2, Color{1})), std::invalid_argument);
  CHECK_THROWS_AS(Chain(p, Configuration(std::make_shared<const TorusLattice>(5), 2, Color{1})), std::invalid_argument);
  p.beta = -1;
  CHECK_THROWS_AS(Chain(p, canonical_configuration(p)), std::invalid_argument);
  auto g = glauber_params(4, a, 1.0, 0);
  g.field = MagneticField{{0.0, 1.0, 2.0}};
  CHECK_THROWS_AS(Chain(g, Configuration(lat, 2, Color{1})), std::invalid_argument);
}

TEST_CASE("random configurations honor the requested counts") {
  const auto a = builtin_matrix("potts", 3);
  auto p = kawasaki_params(7, a, CountsVector{{5, 20, 24}}, 1.0, 0);
  const auto s1 = random_configuration(p, 1), s2 = random_configuration(p, 2);
  CHECK(magnetization(s1) == *p.counts);
  CHECK(magnetization(s2) == *p.counts);
  CHECK(colors_of(s1) != colors_of(s2));
  CHECK(colors_of(random_configuration(p, 1)) == colors_of(s1));
}

TEST_CASE("exact table sizes and normalization") {
  const auto a = builtin_matrix("potts", 2);
  const auto all = exact_gibbs(3, a, 0.7, Unrestricted{});
  CHECK(all.size() == 512);
  const auto fixed = exact_gibbs(3, a, 0.7, CountsVector{{4, 5}});
  CHECK(fixed.size() == 126);
  const auto mono = exact_gibbs(3, a, 0.7, CountsVector{{9, 0}});
  CHECK(mono.size() == 1);
  CHECK(mono.probabilities[0] == 1.0);
  for (const auto* t : {&all, &fixed}) {
    double z = 0;
    for (double pr : t->probabilities) z += pr;
    CHECK(z == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::is_sorted(t->codes.begin(), t->codes.end()));
  }
  CHECK_THROWS_AS(exact_gibbs(4, builtin_matrix("potts", 3), 1.0, Unrestricted{}), std::invalid_argument);
}

TEST_CASE("exact probabilities follow Boltzmann ratios") {
  const auto a = builtin_matrix("potts", 2);
  auto lat = std::make_shared<const TorusLattice>(3);
  const MagneticField h{{0.0, 0.3}};
  const auto t = exact_gibbs(3, a, 0.5, h);
  const auto s0 = from_code(lat, 2, t.codes[0]);
  for (std::size_t i = 1; i < t.size(); i += 37) {
    const auto s = from_code(lat, 2, t.codes[i]);
    CHECK(t.energies[i] == hamiltonian(s, a));
    const double ratio = std::exp(log_weight(s, a, 0.5, h) - log_weight(s0, a, 0.5, h));
    CHECK(t.probabilities[i] / t.probabilities[0] == doctest::Approx(ratio).epsilon(1e-12));
  }
}

TEST_CASE("detailed balance on every single-move pair") {
  auto lat = std::make_shared<const TorusLattice>(3);
  const auto a = builtin_matrix("potts", 2);
  SUBCASE("kawasaki") {
    const double beta = 0.7;
    const auto t = exact_gibbs(3, a, beta, CountsVector{{4, 5}});
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      const auto s = from_code(lat, 2, t.codes[i]);
      double out = 0;
      for (std::size_t e = 0; e < lat->edge_count(); ++e) {
        const auto [u, v] = lat->edge(e);
        if (s[u] == s[v]) continue;
        auto s2 = s;
        s2.swap_colors(u, v);
        const auto j = t.find(encode_configuration(s2));
        REQUIRE(j);
        const double lhs = t.probabilities[i] * kawasaki_transition_probability(s, s2, a, beta);
        const double rhs = t.probabilities[*j] * kawasaki_transition_probability(s2, s, a, beta);
        CHECK(std::abs(lhs - rhs) <= 1e-12);
        out += kawasaki_transition_probability(s, s2, a, beta);
        ++pairs;
      }
      CHECK(out <= 1.0 + 1e-12);
    }
    CHECK(pairs > 0);
  }
  SUBCASE("glauber with field") {
    const double beta = 0.5;
    const MagneticField h{{0.0, 0.3}};
    const auto t = exact_gibbs(3, a, beta, h);
    for (std::size_t i = 0; i < t.size(); ++i) {
      const auto s = from_code(lat, 2, t.codes[i]);
      for (VertexId v = 0; v < 9; ++v) {
        auto s2 = s;
        s2.set(v, s[v] == 1 ? 2 : 1);
        const auto j = t.find(encode_configuration(s2));
        REQUIRE(j);
        const double lhs = t.probabilities[i] * glauber_transition_probability(s, s2, a, beta, h);
        const double rhs = t.probabilities[*j] * glauber_transition_probability(s2, s, a, beta, h);
        CHECK(std::abs(lhs - rhs) <= 1e-12);
      }
    }
  }
}

TEST_CASE("transition probabilities vanish off single moves") {
  auto lat = std::make_shared<const TorusLattice>(3);
  const auto a = builtin_matrix("potts", 2);
  Configuration s(lat, 2, std::vector<Color>{1, 1, 1, 1, 2, 2, 2, 2, 2});
  CHECK(kawasaki_transition_probability(s, s, a, 1.0) == 0.0);
  auto far = s;
  far.set(0, 2);
  far.set(8, 1);
  far.set(4, 1);
  far.set(3, 2);
  CHECK(kawasaki_transition_probability(s, far, a, 1.0) == 0.0);
  CHECK(glauber_transition_probability(s, far, a, 1.0, MagneticField{}) == 0.0);
}

TEST_CASE("kawasaki moves connect every state of a fixed magnetization") {
  auto lat = std::make_shared<const TorusLattice>(3);
  const auto t = exact_gibbs(3, builtin_matrix("potts", 2), 1.0, CountsVector{{4, 5}});
  std::vector<bool> seen(t.size(), false);
  std::deque<std::size_t> queue{0};
  seen[0] = true;
  while (!queue.empty()) {
    const auto i = queue.front();
    queue.pop_front();
    const auto s = from_code(lat, 2, t.codes[i]);
    for (std::size_t e = 0; e < lat->edge_count(); ++e) {
      const auto [u, v] = lat->edge(e);
      if (s[u] == s[v]) continue;
      auto s2 = s;
      s2.swap_colors(u, v);
      const auto j = *t.find(encode_configuration(s2));
      if (!seen[j]) {
        seen[j] = true;
        queue.push_back(j);
      }
    }
  }
  CHECK(std::count(seen.begin(), seen.end(), true) == 126);
}

TEST_CASE("short kawasaki chain approaches the exact distribution") {
  const auto a = builtin_matrix("potts", 2);
  const auto t = exact_gibbs(3, a, 0.7, CountsVector{{4, 5}});
  auto p = kawasaki_params(3, a, CountsVector{{4, 5}}, 0.7, 11);
  Chain chain(p, canonical_configuration(p));
  std::vector<std::uint64_t> visits(t.size(), 0);
  for (int k = 0; k < 1'000'000; ++k) {
    chain.step();
    ++visits[*t.find(encode_configuration(chain.configuration()))];
  }
  CHECK(total_variation(t, visits) < 0.03);
  CHECK_THROWS_AS(total_variation(t, std::vector<std::uint64_t>(3, 1)), std::invalid_argument);
}

TEST_CASE("total variation of exact frequencies is zero") {
  const auto t = exact_gibbs(3, builtin_matrix("potts", 2), 0.0, CountsVector{{4, 5}});
  std::vector<std::uint64_t> visits(t.size(), 10);
  CHECK(total_variation(t, visits) == doctest::Approx(0.0));
  CHECK(total_variation(t, visits, visits.size() * 10) == doctest::Approx(0.5));
}

TEST_CASE("fig1 setup forms a large region of the majority color") {
  const auto a = builtin_matrix("potts", 8);
  const auto counts = counts_from_density(DensityVector::proportional({1, 1, 1, 1, 1, 1, 1, 14}), 24);
  auto p = kawasaki_params(24, a, counts, 1.0, 7);
  auto lat = std::make_shared<const TorusLattice>(24);
  p.steps = 2000 * sweep_size(Dynamics::kawasaki, *lat);
  p.thin = p.steps;
  const auto init = random_configuration(p, 1);
  const auto r = run_chain(p, init, nullptr);
  const auto& s = *r.final_configuration;
  CHECK(hamiltonian(s, a) < hamiltonian(init, a));
  std::size_t best = 0;
  Color best_color = 0;
  for (Color c = 1; c <= 8; ++c) {
    VertexSet set(s.size());
    for (VertexId v = 0; v < s.size(); ++v)
      if (s[v] == c) set.insert(v);
    for (const auto& comp : connected_components(s.lattice(), set))
      if (comp.size() > best) {
        best = comp.size();
        best_color = c;
      }
  }
  CHECK(best_color == 8);
  CHECK(best > static_cast<std::size_t>(counts.n[7] / 2));
}
