#include "gpm/io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace gpm {

std::string format_snapshot(const Configuration& sigma) {
  const int side = sigma.lattice().side_length();
  std::string out = "GPM " + std::to_string(side) + " " + std::to_string(sigma.q()) + "\n";
  for (int y = 0; y < side; ++y) {
    for (int x = 0; x < side; ++x) {
      if (x > 0) out += ' ';
      out += std::to_string(sigma[sigma.lattice().vertex(x, y)] - 1);
    }
    out += '\n';
  }
  return out;
}

namespace {

class Tokens {
 public:
  explicit Tokens(std::string_view text) : text_(text) {}

  std::string_view next(const char* what) {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    const std::size_t start = pos_;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) throw std::runtime_error(std::string("snapshot ended before ") + what);
    return text_.substr(start, pos_ - start);
  }

  long integer(const char* what) {
    const auto tok = next(what);
    long value = 0;
    const auto [end, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc() || end != tok.data() + tok.size())
      throw std::runtime_error("snapshot " + std::string(what) + " is not an integer: '" + std::string(tok) + "'");
    return value;
  }

  bool at_end() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    return pos_ == text_.size();
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Configuration parse_snapshot(std::string_view text) {
  Tokens tok(text);
  if (tok.next("header") != "GPM") throw std::runtime_error("snapshot does not start with 'GPM'");
  const long side = tok.integer("side length");
  const long q = tok.integer("color count");
  if (side < 3 || side > 100000) throw std::runtime_error("snapshot side length must be at least 3");
  if (q < 1 || q > kMaxColors) throw std::runtime_error("snapshot color count must lie in [1, 255]");
  auto lat = std::make_shared<const TorusLattice>(static_cast<int>(side));
  std::vector<Color> colors(lat->vertex_count());
  for (int y = 0; y < side; ++y) {
    for (int x = 0; x < side; ++x) {
      const long c = tok.integer("color");
      if (c < 0 || c >= q)
        throw std::runtime_error("snapshot color " + std::to_string(c) + " at (" + std::to_string(x) + ", " +
                                 std::to_string(y) + ") is outside [0, " + std::to_string(q) + ")");
      colors[lat->vertex(x, y)] = static_cast<Color>(c + 1);
    }
  }
  if (!tok.at_end()) throw std::runtime_error("snapshot has trailing data");
  return Configuration(std::move(lat), static_cast<int>(q), std::move(colors));
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

void write_snapshot(const std::filesystem::path& path, const Configuration& sigma) {
  write_file(path, format_snapshot(sigma));
}

Configuration read_snapshot(const std::filesystem::path& path) {
  try {
    return parse_snapshot(read_file(path));
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

std::string format_number(double x) {
  if (x == 0.0) return "0";
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc()) throw std::logic_error("number formatting failed");
  return std::string(buf, end);
}

json contours_to_json(const TorusLattice& lat, const ContourSet& contours, const CostMatrix& a) {
  json out = json::array();
  for (const auto& c : contours.contours) {
    json colors = json::array();
    for (Color k : c.colors) colors.push_back(k - 1);
    out.push_back({{"support", c.vertices},
                   {"colors", std::move(colors)},
                   {"contractible", c.contractible},
                   {"cost", contour_cost(lat, c, a)}});
  }
  return out;
}

json bridge_system_to_json(const Configuration& sigma, const BridgeSystem& bs, const CostMatrix& a) {
  json components = json::array();
  for (std::size_t k = 0; k < bs.labeling.size(); ++k) {
    const auto& comp = bs.labeling.components[k];
    components.push_back({{"vertices", comp.members()},
                          {"label", bs.labeling.labels[k] - 1},
                          {"impurity", static_cast<double>(off_label_count(sigma, bs.labeling, k)) /
                                           static_cast<double>(comp.size())}});
  }
  return {{"bridges", bs.bridges.members()},
          {"contours", contours_to_json(sigma.lattice(), bs.contours, a)},
          {"delta", bs.delta},
          {"seed_line", bs.seed == SeedLine::row ? "row" : "column"},
          {"components", std::move(components)}};
}

json sorted_report_to_json(const SortedReport& r) {
  json out = {{"passed", r.passed},
              {"pure", r.pure},
              {"low_energy", r.low_energy},
              {"partition_sizes", r.partition_sizes},
              {"impurities", r.impurities},
              {"partition_cost", r.partition_cost},
              {"baseline_cost", r.baseline_cost},
              {"baseline_kind", baseline_kind(r.baseline)},
              {"conservative", r.conservative},
              {"ratio", nullptr},
              {"alpha", r.alpha},
              {"delta", r.delta},
              {"boundary_size", r.boundary_size},
              {"bridge_count", r.bridge_count},
              {"bridged_support", r.bridged_support}};
  if (r.ratio) out["ratio"] = *r.ratio;
  return out;
}

std::string metrics_header(int q) {
  std::string out = "step,sweep,energy";
  for (int k = 1; k <= q; ++k) out += ",n_" + std::to_string(k);
  return out + ",boundary_size\n";
}

std::string metrics_row(const Sample& s) {
  std::string out = std::to_string(s.step) + "," + format_number(s.sweep) + "," + format_number(s.energy);
  for (auto n : s.counts.n) out += "," + std::to_string(n);
  return out + "," + std::to_string(s.boundary_size) + "\n";
}

std::string gibbs_table_csv(const GibbsTable& table) {
  const std::size_t n = static_cast<std::size_t>(table.side_length) * table.side_length;
  std::string out = "index,code,configuration,energy,probability\n";
  for (std::size_t i = 0; i < table.size(); ++i) {
    std::string digits;
    std::uint64_t code = table.codes[i];
    for (std::size_t v = 0; v < n; ++v) {
      digits += std::to_string(code % static_cast<std::uint64_t>(table.q));
      if (table.q > 10 && v + 1 < n) digits += ' ';
      code /= static_cast<std::uint64_t>(table.q);
    }
    out += std::to_string(i) + "," + std::to_string(table.codes[i]) + "," + digits + "," +
           format_number(table.energies[i]) + "," + format_number(table.probabilities[i]) + "\n";
  }
  return out;
}

Palette default_palette(int q) {
  Palette out;
  for (int k = 0; k < q; ++k) {
    // HSV with s = 0.8, v = 0.95, hue k / q of a turn.
    const double h = 6.0 * k / q;
    const int sector = static_cast<int>(h) % 6;
    const double f = h - std::floor(h);
    const double v = 0.95, s = 0.8;
    const double p = v * (1 - s), qq = v * (1 - s * f), t = v * (1 - s * (1 - f));
    double r = 0, g = 0, b = 0;
    switch (sector) {
      case 0: r = v, g = t, b = p; break;
      case 1: r = qq, g = v, b = p; break;
      case 2: r = p, g = v, b = t; break;
      case 3: r = p, g = qq, b = v; break;
      case 4: r = t, g = p, b = v; break;
      default: r = v, g = p, b = qq; break;
    }
    auto byte = [](double x) { return static_cast<std::uint8_t>(std::lround(x * 255.0)); };
    out.push_back({byte(r), byte(g), byte(b)});
  }
  return out;
}

Palette parse_palette(std::string_view text) {
  const json j = json::parse(text);
  const json& list = j.is_object() ? j.at("colors") : j;
  if (!list.is_array()) throw std::runtime_error("palette must be a JSON array");
  Palette out;
  for (const auto& e : list) {
    if (e.is_string()) {
      const std::string s = e.get<std::string>();
      if (s.size() != 7 || s[0] != '#') throw std::runtime_error("palette color '" + s + "' is not #rrggbb");
      const unsigned long v = std::stoul(s.substr(1), nullptr, 16);
      out.push_back({static_cast<std::uint8_t>(v >> 16), static_cast<std::uint8_t>(v >> 8),
                     static_cast<std::uint8_t>(v)});
    } else {
      if (!e.is_array() || e.size() != 3) throw std::runtime_error("palette entries must be [r, g, b]");
      Rgb c{};
      for (int i = 0; i < 3; ++i) {
        const int x = e[i].get<int>();
        if (x < 0 || x > 255) throw std::runtime_error("palette channel out of range [0, 255]");
        c[i] = static_cast<std::uint8_t>(x);
      }
      out.push_back(c);
    }
  }
  return out;
}

std::string render_ppm(const Configuration& sigma, const Palette& palette, int cell) {
  if (cell < 2 || cell % 2 != 0) throw std::invalid_argument("cell size must be an even number >= 2");
  if (static_cast<int>(palette.size()) < sigma.q())
    throw std::invalid_argument("palette has " + std::to_string(palette.size()) + " colors, need " +
                                std::to_string(sigma.q()));
  const int side = sigma.lattice().side_length();
  const int width = side * cell;
  const std::string header = "P6\n" + std::to_string(width) + " " + std::to_string(width) + "\n255\n";
  std::string out = header;
  out.resize(header.size() + static_cast<std::size_t>(width) * width * 3);
  char* pixels = out.data() + header.size();
  for (int y = 0; y < side; ++y) {
    const int top = (side - 1 - y) * cell;
    for (int x = 0; x < side; ++x) {
      const Rgb& c = palette[sigma[sigma.lattice().vertex(x, y)] - 1];
      const int left = x * cell + y * cell / 2;
      for (int dy = 0; dy < cell; ++dy) {
        for (int dx = 0; dx < cell; ++dx) {
          const int px = (left + dx) % width;
          char* p = pixels + (static_cast<std::size_t>(top + dy) * width + px) * 3;
          p[0] = static_cast<char>(c[0]);
          p[1] = static_cast<char>(c[1]);
          p[2] = static_cast<char>(c[2]);
        }
      }
    }
  }
  return out;
}

}  // namespace gpm
