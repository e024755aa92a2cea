#include "gpm/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "gpm/contours.hpp"
#include "gpm/enumerate.hpp"

namespace gpm {

std::uint64_t sweep_size(Dynamics mode, const TorusLattice& lat) {
  return mode == Dynamics::kawasaki ? lat.edge_count() : lat.vertex_count();
}

Chain::Chain(const ChainParams& params, Configuration init)
    : params_(params),
      sigma_(std::move(init)),
      field_(params.field.h.empty() ? MagneticField::zero(params.matrix.q()) : params.field),
      rng_(params.seed),
      beta_(params.beta) {
  if (!(params.beta >= 0.0) || !std::isfinite(params.beta))
    throw std::invalid_argument("inverse temperature must be finite and >= 0");
  if (sigma_.q() != params.matrix.q()) throw std::invalid_argument("initial configuration and cost matrix disagree on q");
  if (sigma_.lattice().side_length() != params.side_length)
    throw std::invalid_argument("initial configuration has side length " +
                                std::to_string(sigma_.lattice().side_length()) + ", expected " +
                                std::to_string(params.side_length));
  if (static_cast<int>(field_.h.size()) != params.matrix.q())
    throw std::invalid_argument("magnetic field needs one entry per color");
  for (double h : field_.h)
    if (!std::isfinite(h)) throw std::invalid_argument("magnetic field entries must be finite");
  counts_ = magnetization(sigma_);
  if (params.mode == Dynamics::kawasaki && params.counts && !(*params.counts == counts_))
    throw std::invalid_argument("initial configuration magnetization does not match the requested counts");
  energy_ = hamiltonian(sigma_, params.matrix);
  sweep_size_ = sweep_size(params.mode, sigma_.lattice());
  rebuild_acceptance_table();
}

void Chain::set_beta(double beta) {
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw std::invalid_argument("inverse temperature must be finite and >= 0");
  beta_ = beta;
  rebuild_acceptance_table();
}

void Chain::rebuild_acceptance_table() {
  acceptance_.clear();
  if (!params_.matrix.is_integral()) return;
  // |dH| <= 12 A_max for a recolor and <= 10 A_max for a swap.
  const auto max_delta = static_cast<std::size_t>(12.0 * params_.matrix.max_off_diagonal());
  if (max_delta > 4096) return;
  acceptance_.resize(max_delta + 1);
  for (std::size_t k = 0; k <= max_delta; ++k) acceptance_[k] = std::exp(-beta_ * static_cast<double>(k));
}

bool Chain::accept(double delta_energy, double field_gain) {
  if (field_gain == 0.0) {
    if (delta_energy <= 0.0) return true;
    if (!acceptance_.empty()) {
      const auto k = static_cast<std::size_t>(delta_energy);
      if (k < acceptance_.size()) return rng_.uniform() < acceptance_[k];
    }
    return rng_.uniform() < std::exp(-beta_ * delta_energy);
  }
  const double log_ratio = -beta_ * delta_energy + field_gain;
  if (log_ratio >= 0.0) return true;
  return rng_.uniform() < std::exp(log_ratio);
}

void Chain::after_step() {
  ++step_;
  if (!params_.matrix.is_integral() && step_ % kResyncInterval == 0) resync();
}

void Chain::resync() { energy_ = hamiltonian(sigma_, params_.matrix); }

bool Chain::kawasaki_step() {
  const auto& lat = sigma_.lattice();
  const auto [u, v] = lat.edge(rng_.below(lat.edge_count()));
  bool accepted = false;
  if (sigma_[u] != sigma_[v]) {
    const double delta = detail::swap_delta_adjacent(sigma_, params_.matrix, u, v);
    if (accept(delta, 0.0)) {
      sigma_.swap_colors(u, v);
      energy_ += delta;
      accepted = true;
    }
  }
  if (accepted) ++accepted_;
  after_step();
  return accepted;
}

bool Chain::glauber_step() {
  const auto v = static_cast<VertexId>(rng_.below(sigma_.size()));
  const auto c = static_cast<Color>(rng_.below(static_cast<std::uint64_t>(sigma_.q())) + 1);
  const Color old = sigma_[v];
  bool accepted = true;
  if (c != old) {
    const double delta = detail::recolor_delta_unchecked(sigma_, params_.matrix, v, c);
    accepted = accept(delta, field_[c] - field_[old]);
    if (accepted) {
      sigma_.set(v, c);
      energy_ += delta;
      --counts_.n[old - 1];
      ++counts_.n[c - 1];
    }
  }
  if (accepted) ++accepted_;
  after_step();
  return accepted;
}

bool Chain::step() { return params_.mode == Dynamics::kawasaki ? kawasaki_step() : glauber_step(); }

RunSummary run_chain(const ChainParams& params, Configuration init, const SampleSink& sink) {
  if (params.thin == 0) throw std::invalid_argument("thin must be at least 1");
  Chain chain(params, std::move(init));
  RunSummary summary;
  auto emit = [&] {
    if (sink) {
      sink(Sample{chain.steps_taken(), chain.sweeps(), chain.energy(), chain.counts(),
                  boundary_size(chain.configuration()), chain.configuration()});
    }
    ++summary.samples;
  };
  emit();
  for (std::uint64_t s = 1; s <= params.steps; ++s) {
    chain.step();
    if (s % params.thin == 0) emit();
  }
  summary.steps = chain.steps_taken();
  summary.accepted = chain.accepted();
  summary.final_energy = chain.energy();
  summary.final_configuration = chain.configuration();
  return summary;
}

Configuration canonical_configuration(const ChainParams& params) {
  auto lat = std::make_shared<const TorusLattice>(params.side_length);
  if (params.counts) return rowfill_configuration(lat, *params.counts);
  return Configuration(lat, params.matrix.q(), Color{1});
}

Configuration random_configuration(const ChainParams& params, std::uint64_t seed) {
  auto lat = std::make_shared<const TorusLattice>(params.side_length);
  Rng rng(seed);
  if (params.mode == Dynamics::kawasaki && params.counts) {
    Configuration sigma = rowfill_configuration(lat, *params.counts);
    // Fisher-Yates over vertex colors.
    for (std::size_t i = sigma.size(); i > 1; --i) {
      const auto j = static_cast<VertexId>(rng.below(i));
      sigma.swap_colors(static_cast<VertexId>(i - 1), j);
    }
    return sigma;
  }
  std::vector<Color> colors(lat->vertex_count());
  for (auto& c : colors) c = static_cast<Color>(rng.below(static_cast<std::uint64_t>(params.matrix.q())) + 1);
  return Configuration(lat, params.matrix.q(), std::move(colors));
}

std::optional<std::size_t> GibbsTable::find(std::uint64_t code) const {
  const auto it = std::lower_bound(codes.begin(), codes.end(), code);
  if (it == codes.end() || *it != code) return std::nullopt;
  return static_cast<std::size_t>(it - codes.begin());
}

GibbsTable exact_gibbs(int side_length, const CostMatrix& a, double beta, const GibbsRestriction& restriction) {
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw std::invalid_argument("inverse temperature must be finite and >= 0");
  auto lat = std::make_shared<const TorusLattice>(side_length);
  const int q = a.q();
  const std::uint64_t space = power_count(q, lat->vertex_count());
  if (space > kExactStateLimit)
    throw std::invalid_argument("exact enumeration refused: q^(L^2) = " +
                                (space == std::numeric_limits<std::uint64_t>::max() ? std::string("> 2^64")
                                                                                    : std::to_string(space)) +
                                " exceeds the limit of " + std::to_string(kExactStateLimit) + " states");

  GibbsTable table;
  table.side_length = side_length;
  table.q = q;
  std::vector<double> log_weights;
  const MagneticField* field = std::get_if<MagneticField>(&restriction);
  if (field && static_cast<int>(field->h.size()) != q) throw std::invalid_argument("field needs one entry per color");

  auto visit = [&](const std::vector<Color>& colors) {
    Configuration sigma(lat, q, colors);
    const double h = hamiltonian(sigma, a);
    double lw = -beta * h;
    if (field)
      for (Color c : colors) lw += (*field)[c];
    table.codes.push_back(encode_configuration(sigma));
    table.energies.push_back(h);
    log_weights.push_back(lw);
  };

  if (const auto* counts = std::get_if<CountsVector>(&restriction)) {
    if (counts->q() != q) throw std::invalid_argument("counts need one entry per color");
    for_each_coloring_with_counts(*counts, lat->vertex_count(), visit);
  } else {
    for_each_coloring(q, lat->vertex_count(), visit);
  }

  std::vector<std::size_t> order(table.codes.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return table.codes[i] < table.codes[j]; });
  GibbsTable sorted;
  sorted.side_length = side_length;
  sorted.q = q;
  const double max_lw = *std::max_element(log_weights.begin(), log_weights.end());
  double z = 0.0;
  for (std::size_t i : order) {
    sorted.codes.push_back(table.codes[i]);
    sorted.energies.push_back(table.energies[i]);
    sorted.probabilities.push_back(std::exp(log_weights[i] - max_lw));
    z += sorted.probabilities.back();
  }
  for (double& p : sorted.probabilities) p /= z;
  return sorted;
}

double total_variation(const GibbsTable& table, const std::vector<std::uint64_t>& visits, std::uint64_t outside) {
  if (visits.size() != table.size()) throw std::invalid_argument("visit histogram does not match the table");
  const double total = static_cast<double>(std::accumulate(visits.begin(), visits.end(), outside));
  if (total == 0.0) throw std::invalid_argument("no visits recorded");
  double tv = static_cast<double>(outside) / total;
  for (std::size_t i = 0; i < table.size(); ++i)
    tv += std::abs(static_cast<double>(visits[i]) / total - table.probabilities[i]);
  return 0.5 * tv;
}

namespace {

std::vector<VertexId> differing(const Configuration& a, const Configuration& b) {
  if (a.size() != b.size() || a.q() != b.q()) throw std::invalid_argument("configurations are not comparable");
  std::vector<VertexId> out;
  for (VertexId v = 0; v < a.size(); ++v)
    if (a[v] != b[v]) out.push_back(v);
  return out;
}

}  // namespace

double kawasaki_transition_probability(const Configuration& from, const Configuration& to, const CostMatrix& a,
                                       double beta) {
  const auto diff = differing(from, to);
  if (diff.size() != 2) return 0.0;
  const VertexId u = diff[0], v = diff[1];
  const auto& lat = from.lattice();
  if (!lat.adjacent(u, v) || to[u] != from[v] || to[v] != from[u]) return 0.0;
  const double delta = swap_delta(from, a, u, v);
  return std::min(1.0, std::exp(-beta * delta)) / static_cast<double>(lat.edge_count());
}

double glauber_transition_probability(const Configuration& from, const Configuration& to, const CostMatrix& a,
                                      double beta, const MagneticField& field) {
  const auto diff = differing(from, to);
  if (diff.size() != 1) return 0.0;
  const VertexId v = diff[0];
  const double delta = recolor_delta(from, a, v, to[v]);
  const double gain = field.h.empty() ? 0.0 : field[to[v]] - field[from[v]];
  return std::min(1.0, std::exp(-beta * delta + gain)) /
         (static_cast<double>(from.size()) * static_cast<double>(from.q()));
}

}  // namespace gpm
