#include "gpm/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "json.hpp"

namespace gpm {

namespace {

std::string entry_name(int i, int j) {
  return "A(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
}

std::vector<std::vector<double>> scaled(double factor, const std::vector<std::vector<int>>& m) {
  std::vector<std::vector<double>> out;
  for (const auto& row : m) {
    std::vector<double> r;
    for (int v : row) r.push_back(factor * v);
    out.push_back(std::move(r));
  }
  return out;
}

// Interaction matrices for the four 9-color examples; prefactors are folded in
// by builtin_matrix.
const std::vector<std::vector<int>> kFig2a = {
    {0, 1, 2, 2, 4, 4, 4, 4, 4}, {1, 0, 2, 2, 4, 4, 4, 4, 4}, {2, 2, 0, 1, 4, 4, 4, 4, 4},
    {2, 2, 1, 0, 4, 4, 4, 4, 4}, {4, 4, 4, 4, 0, 1, 2, 2, 4}, {4, 4, 4, 4, 1, 0, 2, 2, 4},
    {4, 4, 4, 4, 2, 2, 0, 1, 4}, {4, 4, 4, 4, 2, 2, 1, 0, 4}, {4, 4, 4, 4, 4, 4, 4, 4, 0}};
const std::vector<std::vector<int>> kFig2b = {
    {0, 1, 2, 3, 4, 4, 4, 4, 2}, {1, 0, 1, 2, 4, 4, 4, 4, 2}, {2, 1, 0, 1, 4, 4, 4, 4, 2},
    {3, 2, 1, 0, 4, 4, 4, 4, 2}, {4, 4, 4, 4, 0, 1, 2, 3, 2}, {4, 4, 4, 4, 1, 0, 1, 2, 2},
    {4, 4, 4, 4, 2, 1, 0, 1, 2}, {4, 4, 4, 4, 3, 2, 1, 0, 2}, {2, 2, 2, 2, 2, 2, 2, 2, 0}};
const std::vector<std::vector<int>> kFig2c = {
    {0, 1, 3, 3, 2, 2, 2, 2, 3}, {1, 0, 1, 3, 2, 2, 2, 2, 3}, {3, 1, 0, 1, 2, 2, 2, 2, 3},
    {3, 3, 1, 0, 2, 2, 2, 2, 3}, {2, 2, 2, 2, 0, 1, 3, 3, 3}, {2, 2, 2, 2, 1, 0, 1, 3, 3},
    {2, 2, 2, 2, 3, 1, 0, 1, 3}, {2, 2, 2, 2, 3, 3, 1, 0, 3}, {3, 3, 3, 3, 3, 3, 3, 3, 0}};
const std::vector<std::vector<int>> kFig2d = {
    {0, 2, 2, 2, 2, 2, 2, 2, 5}, {2, 0, 2, 4, 4, 4, 4, 2, 5}, {2, 2, 0, 2, 4, 4, 4, 4, 5},
    {2, 4, 2, 0, 2, 4, 4, 4, 5}, {2, 4, 4, 2, 0, 2, 4, 4, 5}, {2, 4, 4, 4, 2, 0, 2, 4, 5},
    {2, 4, 4, 4, 4, 2, 0, 2, 5}, {2, 2, 4, 4, 4, 4, 2, 0, 5}, {5, 5, 5, 5, 5, 5, 5, 5, 0}};

}  // namespace

CostMatrix::CostMatrix(const std::vector<std::vector<double>>& entries) {
  q_ = static_cast<int>(entries.size());
  if (q_ < 1) throw std::invalid_argument("cost matrix must have at least one color");
  if (q_ > kMaxColors) throw std::invalid_argument("cost matrix has more than 255 colors");
  entries_.reserve(static_cast<std::size_t>(q_) * q_);
  for (int i = 0; i < q_; ++i) {
    if (static_cast<int>(entries[i].size()) != q_)
      throw std::invalid_argument("cost matrix is not square: row " + std::to_string(i + 1) + " has " +
                                  std::to_string(entries[i].size()) + " entries, expected " + std::to_string(q_));
    for (int j = 0; j < q_; ++j) {
      const double v = entries[i][j];
      if (!std::isfinite(v)) throw std::invalid_argument("cost matrix entry " + entry_name(i, j) + " is not finite");
      entries_.push_back(v);
    }
  }
  a_min_ = q_ > 1 ? std::numeric_limits<double>::infinity() : 0.0;
  a_max_ = 0.0;
  for (int i = 0; i < q_; ++i) {
    for (int j = 0; j < q_; ++j) {
      const double v = entries_[i * q_ + j];
      if (i == j) {
        if (v != 0.0)
          throw std::invalid_argument("cost matrix diagonal must be zero: " + entry_name(i, j) + " = " +
                                      std::to_string(v));
        continue;
      }
      if (v != entries_[j * q_ + i])
        throw std::invalid_argument("cost matrix must be symmetric: " + entry_name(i, j) + " != " + entry_name(j, i));
      if (!(v > 0.0))
        throw std::invalid_argument("cost matrix off-diagonal entries must be positive: " + entry_name(i, j) +
                                    " = " + std::to_string(v));
      a_min_ = std::min(a_min_, v);
      a_max_ = std::max(a_max_, v);
    }
  }
  integral_ = std::all_of(entries_.begin(), entries_.end(), [](double v) { return v == std::round(v); });
}

std::vector<std::vector<double>> CostMatrix::rows() const {
  std::vector<std::vector<double>> out(static_cast<std::size_t>(q_));
  for (int i = 0; i < q_; ++i) out[i].assign(entries_.begin() + i * q_, entries_.begin() + (i + 1) * q_);
  return out;
}

CostMatrix cost_matrix_from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("cost matrix JSON does not parse: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("q") || !doc.contains("entries"))
    throw std::invalid_argument("cost matrix JSON needs fields \"q\" and \"entries\"");
  if (!doc["q"].is_number_integer()) throw std::invalid_argument("cost matrix field \"q\" must be an integer");
  const int q = doc["q"].get<int>();
  const auto& rows = doc["entries"];
  if (!rows.is_array()) throw std::invalid_argument("cost matrix field \"entries\" must be an array of rows");
  if (static_cast<int>(rows.size()) != q)
    throw std::invalid_argument("cost matrix has " + std::to_string(rows.size()) + " rows but q = " +
                                std::to_string(q));
  std::vector<std::vector<double>> entries;
  for (const auto& row : rows) {
    if (!row.is_array()) throw std::invalid_argument("cost matrix rows must be arrays of numbers");
    std::vector<double> r;
    for (const auto& v : row) {
      if (!v.is_number()) throw std::invalid_argument("cost matrix entries must be numbers");
      r.push_back(v.get<double>());
    }
    entries.push_back(std::move(r));
  }
  return CostMatrix(entries);
}

std::string cost_matrix_to_json(const CostMatrix& a) {
  nlohmann::json doc;
  doc["q"] = a.q();
  doc["entries"] = a.rows();
  return doc.dump();
}

CostMatrix builtin_matrix(std::string_view name, int q) {
  auto fixed = [&](int natural) {
    if (q != 0 && q != natural)
      throw std::invalid_argument("matrix '" + std::string(name) + "' is defined for q = " + std::to_string(natural) +
                                  ", got q = " + std::to_string(q));
    return natural;
  };
  auto needs_q = [&]() {
    if (q < 1) throw std::invalid_argument("matrix '" + std::string(name) + "' needs an explicit q >= 1");
    if (q > kMaxColors) throw std::invalid_argument("q too large");
    return q;
  };
  auto from_fn = [](int n, auto fn) {
    std::vector<std::vector<double>> m(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n)));
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j) m[i - 1][j - 1] = i == j ? 0.0 : fn(i, j);
    return CostMatrix(m);
  };

  if (name == "potts") return from_fn(needs_q(), [](int, int) { return 1.0; });
  if (name == "ising") return from_fn(fixed(2), [](int, int) { return 1.0; });
  if (name == "blume_capel") return from_fn(fixed(3), [](int i, int j) { return double((i - j) * (i - j)); });
  if (name == "clock") {
    const int n = needs_q();
    return from_fn(n, [n](int i, int j) {
      // |i - j| keeps A(i, j) and A(j, i) bitwise equal.
      const int d = std::abs(i - j);
      return 1.0 - std::cos(2.0 * std::numbers::pi * d / n);
    });
  }
  if (name == "fig2a" || name == "fig2b" || name == "fig2c" || name == "fig2d") {
    fixed(9);
    if (name == "fig2a") return CostMatrix(scaled(2.0, kFig2a));
    if (name == "fig2b") return CostMatrix(scaled(1.0, kFig2b));
    if (name == "fig2c") return CostMatrix(scaled(1.0, kFig2c));
    return CostMatrix(scaled(2.0 / 3.0, kFig2d));
  }
  throw std::invalid_argument("unknown matrix '" + std::string(name) +
                              "' (known: potts, ising, blume_capel, clock, fig2a, fig2b, fig2c, fig2d)");
}

std::vector<std::string> builtin_matrix_names() {
  return {"potts", "ising", "blume_capel", "clock", "fig2a", "fig2b", "fig2c", "fig2d"};
}

Configuration::Configuration(std::shared_ptr<const TorusLattice> lattice, int q, Color fill)
    : lattice_(std::move(lattice)), q_(q) {
  if (q < 1 || q > kMaxColors) throw std::invalid_argument("number of colors must be in [1, 255]");
  if (fill < 1 || fill > q) throw std::invalid_argument("fill color out of range");
  colors_.assign(lattice_->vertex_count(), fill);
}

Configuration::Configuration(std::shared_ptr<const TorusLattice> lattice, int q, std::vector<Color> colors)
    : lattice_(std::move(lattice)), q_(q), colors_(std::move(colors)) {
  if (q < 1 || q > kMaxColors) throw std::invalid_argument("number of colors must be in [1, 255]");
  if (colors_.size() != lattice_->vertex_count())
    throw std::invalid_argument("configuration has " + std::to_string(colors_.size()) + " colors for " +
                                std::to_string(lattice_->vertex_count()) + " vertices");
  for (Color c : colors_)
    if (c < 1 || c > q) throw std::invalid_argument("configuration color " + std::to_string(c) + " outside [1, q]");
}

void Configuration::set(VertexId v, Color c) {
  if (c < 1 || c > q_) throw std::invalid_argument("color " + std::to_string(c) + " outside [1, q]");
  colors_[v] = c;
}

DensityVector::DensityVector(std::vector<double> rho) : rho_(std::move(rho)) {
  if (rho_.empty()) throw std::invalid_argument("density vector is empty");
  double sum = 0.0;
  for (double r : rho_) {
    if (!(r > 0.0)) throw std::invalid_argument("density vector entries must be positive");
    sum += r;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw std::invalid_argument("density vector must sum to 1");
}

DensityVector DensityVector::proportional(const std::vector<double>& weights) {
  double sum = 0.0;
  for (double w : weights) {
    if (!(w > 0.0) || !std::isfinite(w)) throw std::invalid_argument("density weights must be positive");
    sum += w;
  }
  std::vector<double> rho;
  for (double w : weights) rho.push_back(w / sum);
  return DensityVector(std::move(rho));
}

std::int64_t CountsVector::total() const { return std::accumulate(n.begin(), n.end(), std::int64_t{0}); }

double hamiltonian(const Configuration& sigma, const CostMatrix& a) {
  if (sigma.q() != a.q())
    throw std::invalid_argument("configuration has q = " + std::to_string(sigma.q()) + " but cost matrix has q = " +
                                std::to_string(a.q()));
  const auto& lat = sigma.lattice();
  double h = 0.0;
  for (std::size_t e = 0; e < lat.edge_count(); ++e) {
    const auto [u, v] = lat.edge(e);
    h += a(sigma[u], sigma[v]);
  }
  return h;
}

namespace detail {

double swap_delta_adjacent(const Configuration& sigma, const CostMatrix& a, VertexId u, VertexId v) {
  const Color cu = sigma[u], cv = sigma[v];
  if (cu == cv) return 0.0;
  const auto& lat = sigma.lattice();
  double d = 0.0;
  for (VertexId w : lat.neighbors(u)) {
    if (w == v) continue;
    d += a(cv, sigma[w]) - a(cu, sigma[w]);
  }
  for (VertexId w : lat.neighbors(v)) {
    if (w == u) continue;
    d += a(cu, sigma[w]) - a(cv, sigma[w]);
  }
  return d;
}

double recolor_delta_unchecked(const Configuration& sigma, const CostMatrix& a, VertexId v, Color c) {
  const Color old = sigma[v];
  if (old == c) return 0.0;
  double d = 0.0;
  for (VertexId w : sigma.lattice().neighbors(v)) d += a(c, sigma[w]) - a(old, sigma[w]);
  return d;
}

}  // namespace detail

double swap_delta(const Configuration& sigma, const CostMatrix& a, VertexId u, VertexId v) {
  if (sigma.q() != a.q()) throw std::invalid_argument("configuration and cost matrix disagree on q");
  const auto& lat = sigma.lattice();
  if (u >= lat.vertex_count() || v >= lat.vertex_count()) throw std::out_of_range("vertex outside lattice");
  if (!lat.adjacent(u, v)) throw std::invalid_argument("swap_delta needs adjacent vertices");
  return detail::swap_delta_adjacent(sigma, a, u, v);
}

double recolor_delta(const Configuration& sigma, const CostMatrix& a, VertexId v, Color c) {
  if (sigma.q() != a.q()) throw std::invalid_argument("configuration and cost matrix disagree on q");
  if (c < 1 || c > sigma.q()) throw std::invalid_argument("color " + std::to_string(c) + " outside [1, q]");
  if (v >= sigma.size()) throw std::out_of_range("vertex outside lattice");
  return detail::recolor_delta_unchecked(sigma, a, v, c);
}

CountsVector magnetization(const Configuration& sigma) {
  CountsVector out{std::vector<std::int64_t>(static_cast<std::size_t>(sigma.q()), 0)};
  for (Color c : sigma.colors()) ++out.n[c - 1];
  return out;
}

CountsVector counts_from_density(const DensityVector& rho, int side_length, bool require_all_colors) {
  if (side_length < 3) throw std::invalid_argument("lattice side length must be at least 3");
  const std::int64_t total = static_cast<std::int64_t>(side_length) * side_length;
  CountsVector out{std::vector<std::int64_t>(static_cast<std::size_t>(rho.q()), 0)};
  std::int64_t used = 0;
  for (int k = 0; k + 1 < rho.q(); ++k) {
    // The small offset absorbs representation error, e.g. (4/9) * 9 = 3.999...
    out.n[k] = static_cast<std::int64_t>(std::floor(rho.values()[k] * static_cast<double>(total) + 1e-9));
    used += out.n[k];
  }
  out.n.back() = total - used;
  if (out.n.back() < 0) throw std::logic_error("remainder color count is negative");
  if (require_all_colors) {
    for (int k = 0; k < rho.q(); ++k)
      if (out.n[k] == 0)
        throw std::invalid_argument("density gives color " + std::to_string(k + 1) + " no vertices at L = " +
                                    std::to_string(side_length));
  }
  return out;
}

double partition_cost(const TorusLattice& lat, std::span<const Color> labels, const CostMatrix& a) {
  if (labels.size() != lat.vertex_count()) throw std::invalid_argument("partition labels do not cover the lattice");
  for (Color c : labels)
    if (c < 1 || c > a.q()) throw std::invalid_argument("partition label outside [1, q]");
  double h = 0.0;
  for (std::size_t e = 0; e < lat.edge_count(); ++e) {
    const auto [u, v] = lat.edge(e);
    h += a(labels[u], labels[v]);
  }
  return h;
}

std::size_t bichromatic_edge_count(const Configuration& sigma) {
  const auto& lat = sigma.lattice();
  std::size_t count = 0;
  for (std::size_t e = 0; e < lat.edge_count(); ++e) {
    const auto [u, v] = lat.edge(e);
    if (sigma[u] != sigma[v]) ++count;
  }
  return count;
}

Configuration rowfill_configuration(std::shared_ptr<const TorusLattice> lattice, const CountsVector& counts) {
  if (counts.total() != static_cast<std::int64_t>(lattice->vertex_count()))
    throw std::invalid_argument("color counts sum to " + std::to_string(counts.total()) + ", expected " +
                                std::to_string(lattice->vertex_count()));
  std::vector<Color> colors;
  colors.reserve(lattice->vertex_count());
  for (int k = 0; k < counts.q(); ++k) {
    if (counts.n[k] < 0) throw std::invalid_argument("negative color count");
    colors.insert(colors.end(), static_cast<std::size_t>(counts.n[k]), static_cast<Color>(k + 1));
  }
  // Index order x + L y is exactly row by row, left to right, bottom to top.
  return Configuration(std::move(lattice), counts.q(), std::move(colors));
}

}  // namespace gpm
