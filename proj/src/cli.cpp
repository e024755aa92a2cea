#include "gpm/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "CLI11.hpp"
#include "gpm/analysis.hpp"
#include "gpm/enumerate.hpp"

namespace gpm::cli {

namespace fs = std::filesystem;

namespace {

template <typename T>
void read_optional(const json& j, const char* key, std::optional<T>& field) {
  if (j.contains(key) && !j[key].is_null()) field = j[key].get<T>();
}

template <typename T>
void read_field(const json& j, const char* key, T& field) {
  if (j.contains(key) && !j[key].is_null()) field = j[key].get<T>();
}

Dynamics parse_mode(const std::string& mode) {
  if (mode == "kawasaki") return Dynamics::kawasaki;
  if (mode == "glauber") return Dynamics::glauber;
  throw std::invalid_argument("mode must be kawasaki or glauber, got '" + mode + "'");
}

std::string padded(std::uint64_t value, int width) {
  std::string s = std::to_string(value);
  if (static_cast<int>(s.size()) < width) s.insert(0, static_cast<std::size_t>(width) - s.size(), '0');
  return s;
}

std::vector<double> uniform_weights_with_last(int q, double last) {
  std::vector<double> w(static_cast<std::size_t>(q), 1.0);
  w.back() = last;
  return w;
}

}  // namespace

CostMatrix matrix_from_json(const json& spec, int q) {
  if (spec.is_string()) return builtin_matrix(spec.get<std::string>(), q);
  if (spec.is_object()) {
    CostMatrix a = cost_matrix_from_json(spec.dump());
    if (q != 0 && a.q() != q)
      throw std::invalid_argument("inline matrix has q = " + std::to_string(a.q()) + ", expected " + std::to_string(q));
    return a;
  }
  throw std::invalid_argument("matrix must be a builtin name or an object {\"q\", \"entries\"}");
}

ExperimentConfig ExperimentConfig::from_json(const json& doc) {
  const json& j = doc.contains("config") ? doc.at("config") : doc;
  if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
  static const std::vector<std::string> known = {"L",     "q",     "beta",        "matrix",   "rho",
                                                 "mode",  "steps", "sweeps",      "thin",     "thin_sweeps",
                                                 "seed",  "replicas", "h",        "init",     "init_file",
                                                 "output"};
  for (const auto& [key, value] : j.items())
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw std::invalid_argument("unknown config field '" + key + "'");
  ExperimentConfig c;
  read_field(j, "L", c.side_length);
  read_field(j, "q", c.q);
  read_field(j, "beta", c.beta);
  if (j.contains("matrix")) c.matrix = j["matrix"];
  read_field(j, "rho", c.rho);
  read_field(j, "mode", c.mode);
  read_optional(j, "steps", c.steps);
  read_optional(j, "sweeps", c.sweeps);
  read_optional(j, "thin", c.thin);
  read_optional(j, "thin_sweeps", c.thin_sweeps);
  read_field(j, "seed", c.seed);
  read_field(j, "replicas", c.replicas);
  read_field(j, "h", c.h);
  read_field(j, "init", c.init);
  read_field(j, "init_file", c.init_file);
  read_field(j, "output", c.output);
  return c;
}

json ExperimentConfig::to_json() const {
  json j = {{"L", side_length}, {"q", q},       {"beta", beta},         {"matrix", matrix},
            {"rho", rho},       {"mode", mode}, {"seed", seed},         {"replicas", replicas},
            {"h", h},           {"init", init}, {"init_file", init_file}};
  if (steps) j["steps"] = *steps;
  if (sweeps) j["sweeps"] = *sweeps;
  if (thin) j["thin"] = *thin;
  if (thin_sweeps) j["thin_sweeps"] = *thin_sweeps;
  return j;
}

ResolvedRun resolve(const ExperimentConfig& config) {
  ResolvedRun run;
  ExperimentConfig& c = run.config;
  c = config;
  if (c.side_length < 3) throw std::invalid_argument("L must be at least 3");
  if (!(c.beta >= 0.0)) throw std::invalid_argument("beta must be >= 0");
  if (c.replicas < 1) throw std::invalid_argument("replicas must be at least 1");
  const Dynamics mode = parse_mode(c.mode);

  int q = c.q;
  if (!c.rho.empty()) {
    if (q != 0 && q != static_cast<int>(c.rho.size()))
      throw std::invalid_argument("rho has " + std::to_string(c.rho.size()) + " entries but q = " + std::to_string(q));
    q = static_cast<int>(c.rho.size());
  }
  const CostMatrix a = matrix_from_json(c.matrix, q);
  c.q = a.q();

  ChainParams& p = run.params;
  p.beta = c.beta;
  p.matrix = a;
  p.side_length = c.side_length;
  p.mode = mode;
  if (!c.h.empty()) {
    if (static_cast<int>(c.h.size()) != a.q()) throw std::invalid_argument("h needs one entry per color");
    if (mode == Dynamics::kawasaki) throw std::invalid_argument("a magnetic field applies to glauber runs only");
    p.field = MagneticField{c.h};
  }
  if (!c.rho.empty()) p.counts = counts_from_density(DensityVector::proportional(c.rho), c.side_length);

  if (c.init != "canonical" && c.init != "random" && c.init != "file")
    throw std::invalid_argument("init must be canonical, random or file");
  if (c.init == "file" && c.init_file.empty()) throw std::invalid_argument("init = file needs init_file");
  if (mode == Dynamics::kawasaki && !p.counts && c.init != "file")
    throw std::invalid_argument("kawasaki runs need rho (or an init_file) to fix the magnetization");

  const auto sweep = static_cast<double>(sweep_size(mode, TorusLattice(c.side_length)));
  if (c.steps && c.sweeps) throw std::invalid_argument("give steps or sweeps, not both");
  if (c.thin && c.thin_sweeps) throw std::invalid_argument("give thin or thin_sweeps, not both");
  if (c.sweeps) {
    if (!(*c.sweeps >= 0.0)) throw std::invalid_argument("sweeps must be >= 0");
    c.steps = static_cast<std::uint64_t>(std::llround(*c.sweeps * sweep));
    c.sweeps.reset();
  }
  if (c.thin_sweeps) {
    if (!(*c.thin_sweeps > 0.0)) throw std::invalid_argument("thin_sweeps must be > 0");
    c.thin = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::llround(*c.thin_sweeps * sweep)));
    c.thin_sweeps.reset();
  }
  if (!c.steps) c.steps = 0;
  if (!c.thin) c.thin = std::max<std::uint64_t>(1, *c.steps);
  if (*c.thin == 0) throw std::invalid_argument("thin must be at least 1");
  p.steps = *c.steps;
  p.thin = *c.thin;
  return run;
}

ExperimentConfig preset(const std::string& name) {
  ExperimentConfig c;
  c.side_length = 63;
  c.beta = 1.0;
  c.mode = "kawasaki";
  c.sweeps = 1e4;
  c.thin_sweeps = 1e3;
  if (name == "fig1") {
    c.matrix = "potts";
    c.rho = uniform_weights_with_last(8, 14.0);
    return c;
  }
  if (name == "fig2a" || name == "fig2b" || name == "fig2c" || name == "fig2d") {
    c.matrix = name;
    c.rho = uniform_weights_with_last(9, 16.0);
    return c;
  }
  throw std::invalid_argument("unknown preset '" + name + "'");
}

std::vector<std::string> preset_names() { return {"fig1", "fig2a", "fig2b", "fig2c", "fig2d"}; }

std::uint64_t chain_seed(std::uint64_t seed, int replica) {
  return replica_seed(seed, static_cast<std::uint64_t>(replica));
}

std::uint64_t init_seed(std::uint64_t seed, int replica) { return replica_seed(chain_seed(seed, replica), 1); }

std::size_t worker_count(std::optional<int> flag) {
  if (flag) {
    if (*flag < 1) throw std::invalid_argument("thread count must be at least 1");
    return static_cast<std::size_t>(*flag);
  }
  if (const char* env = std::getenv("GPM_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n >= 1) return static_cast<std::size_t>(n);
    } catch (const std::exception&) {
    }
    throw std::invalid_argument(std::string("GPM_THREADS must be a positive integer, got '") + env + "'");
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

// Runs fn(i) for i in [0, n) on up to `threads` workers; rethrows the first
// failure by index.
template <typename Fn>
void parallel_for(std::size_t n, std::size_t threads, Fn&& fn) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t count = std::min(n, std::max<std::size_t>(1, threads));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < count; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

Configuration initial_state(const ResolvedRun& run, int replica) {
  const ExperimentConfig& c = run.config;
  if (c.init == "file") {
    Configuration sigma = read_snapshot(c.init_file);
    if (sigma.lattice().side_length() != c.side_length || sigma.q() != c.q)
      throw std::invalid_argument("init_file has L = " + std::to_string(sigma.lattice().side_length()) +
                                  ", q = " + std::to_string(sigma.q()) + "; config expects L = " +
                                  std::to_string(c.side_length) + ", q = " + std::to_string(c.q));
    return sigma;
  }
  if (c.init == "random") return random_configuration(run.params, init_seed(c.seed, replica));
  return canonical_configuration(run.params);
}

struct ReplicaResult {
  RunSummary summary;
  std::size_t snapshots = 0;
};

ReplicaResult run_replica(const ResolvedRun& run, int replica, const fs::path& dir) {
  ChainParams params = run.params;
  params.seed = chain_seed(run.config.seed, replica);
  Configuration init = initial_state(run, replica);
  if (params.mode == Dynamics::kawasaki && !params.counts) params.counts = magnetization(init);

  fs::create_directories(dir / "snapshots");
  std::string metrics = metrics_header(params.matrix.q());
  ReplicaResult result;
  const int width = static_cast<int>(std::to_string(params.steps).size());
  result.summary = run_chain(params, std::move(init), [&](const Sample& s) {
    metrics += metrics_row(s);
    write_snapshot(dir / "snapshots" / ("step_" + padded(s.step, width) + ".txt"), s.configuration);
    ++result.snapshots;
  });
  write_file(dir / "metrics.csv", metrics);
  write_snapshot(dir / "final.txt", *result.summary.final_configuration);
  return result;
}

}  // namespace

int cmd_run(const ExperimentConfig& config, std::size_t threads, std::ostream& out, std::ostream& err) {
  ResolvedRun run;
  try {
    run = resolve(config);
  } catch (const std::exception& e) {
    err << "invalid config: " << e.what() << "\n";
    return 2;
  }
  const fs::path root = config.output;
  const auto replicas = static_cast<std::size_t>(run.config.replicas);
  std::vector<ReplicaResult> results(replicas);
  try {
    parallel_for(replicas, threads, [&](std::size_t r) {
      results[r] = run_replica(run, static_cast<int>(r), root / ("replica_" + padded(r, 3)));
    });
  } catch (const std::exception& e) {
    err << "run failed: " << e.what() << "\n";
    return 1;
  }

  json manifest = {{"version", kVersion},
                   {"config", run.config.to_json()},
                   {"seed_rule", "chain seed = replica_seed(seed, r); random init seed = replica_seed(chain seed, 1)"},
                   {"replicas", json::array()}};
  for (std::size_t r = 0; r < replicas; ++r) {
    manifest["replicas"].push_back({{"index", r},
                                    {"directory", "replica_" + padded(r, 3)},
                                    {"chain_seed", chain_seed(run.config.seed, static_cast<int>(r))},
                                    {"init_seed", init_seed(run.config.seed, static_cast<int>(r))},
                                    {"steps", results[r].summary.steps},
                                    {"accepted", results[r].summary.accepted},
                                    {"final_energy", results[r].summary.final_energy},
                                    {"snapshots", results[r].snapshots}});
  }
  write_file(root / "manifest.json", manifest.dump(2) + "\n");
  out << "wrote " << replicas << " replica(s) of " << *run.config.steps << " steps to " << root.string() << "\n";
  return 0;
}

namespace {

std::vector<fs::path> collect_snapshots(const std::vector<std::string>& inputs, std::ostream& err) {
  std::vector<fs::path> files;
  for (const auto& in : inputs) {
    const fs::path p = in;
    if (fs::is_directory(p)) {
      std::vector<fs::path> found;
      for (const auto& e : fs::recursive_directory_iterator(p))
        if (e.is_regular_file() && e.path().extension() == ".txt") found.push_back(e.path());
      std::sort(found.begin(), found.end());
      files.insert(files.end(), found.begin(), found.end());
    } else if (fs::exists(p)) {
      files.push_back(p);
    } else {
      err << "warning: " << in << " does not exist; skipped\n";
    }
  }
  return files;
}

std::string report_name(std::size_t index, const fs::path& file) {
  std::string stem;
  for (const auto& part : file.parent_path()) {
    const std::string s = part.string();
    if (s.rfind("replica_", 0) == 0) stem += s + "_";
  }
  return padded(index, 4) + "_" + stem + file.stem().string();
}

std::string csv_optional(const std::optional<double>& x) { return x ? format_number(*x) : ""; }

}  // namespace

int cmd_analyze(const AnalyzeOptions& o, std::ostream& out, std::ostream& err) {
  BaselineMethod method;
  try {
    method = parse_baseline_method(o.baseline);
    if (!(o.alpha > 1.0)) throw std::invalid_argument("alpha must be > 1");
    if (!(o.delta > 0.0 && o.delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
  } catch (const std::exception& e) {
    err << "invalid options: " << e.what() << "\n";
    return 2;
  }
  const fs::path root = o.output;
  AnnealSchedule schedule;
  schedule.seed = o.anneal_seed;

  std::map<std::pair<int, std::vector<std::int64_t>>, Subdivision> baselines;
  std::vector<Configuration> analyzed;
  std::string rows = "snapshot,passed,pure,low_energy,ratio,partition_cost,baseline_cost,boundary_size\n";
  std::size_t passed = 0, skipped = 0;
  double ratio_sum = 0.0, boundary_sum = 0.0;
  std::size_t ratio_count = 0;

  const auto files = collect_snapshots(o.inputs, err);
  for (std::size_t i = 0; i < files.size(); ++i) {
    try {
      Configuration sigma = read_snapshot(files[i]);
      const int side = sigma.lattice().side_length();
      const CostMatrix a = matrix_from_json(o.matrix, sigma.q());
      CountsVector counts = magnetization(sigma);
      if (!o.rho.empty()) {
        if (static_cast<int>(o.rho.size()) != sigma.q()) throw std::invalid_argument("rho length differs from q");
        counts = counts_from_density(DensityVector::proportional(o.rho), side);
        if (!(counts == magnetization(sigma)))
          throw std::invalid_argument("magnetization does not match rho; not in the fixed-density ensemble");
      }
      auto key = std::make_pair(side, counts.n);
      auto it = baselines.find(key);
      if (it == baselines.end())
        it = baselines.emplace(key, minimal_cost_subdivision(side, counts, a, method, schedule)).first;
      const SortedReport r = check_sorted(sigma, a, o.alpha, o.delta, it->second);

      const std::string name = report_name(i, files[i]);
      json doc = sorted_report_to_json(r);
      doc["snapshot"] = files[i].string();
      if (o.dump_bridges) doc["bridge_system"] = bridge_system_to_json(sigma, build_bridge_system(sigma, o.delta), a);
      write_file(root / (name + ".report.json"), doc.dump(2) + "\n");

      rows += name + "," + (r.passed ? "1" : "0") + "," + (r.pure ? "1" : "0") + "," + (r.low_energy ? "1" : "0") +
              "," + csv_optional(r.ratio) + "," + format_number(r.partition_cost) + "," +
              format_number(r.baseline_cost) + "," + std::to_string(r.boundary_size) + "\n";
      passed += r.passed ? 1 : 0;
      boundary_sum += static_cast<double>(r.boundary_size);
      if (r.ratio) {
        ratio_sum += *r.ratio;
        ++ratio_count;
      }
      analyzed.push_back(std::move(sigma));
    } catch (const std::exception& e) {
      err << "warning: skipping " << files[i].string() << ": " << e.what() << "\n";
      ++skipped;
    }
  }

  const std::size_t n = analyzed.size();
  if (n == 0) {
    err << "no snapshot could be analyzed\n";
    return 1;
  }
  write_file(root / "reports.csv", rows);
  const std::string aggregate =
      "snapshots,skipped,sorted_fraction,mean_ratio,mean_boundary_size\n" + std::to_string(n) + "," +
      std::to_string(skipped) + "," + format_number(static_cast<double>(passed) / static_cast<double>(n)) + "," +
      (ratio_count ? format_number(ratio_sum / static_cast<double>(ratio_count)) : "") + "," +
      format_number(boundary_sum / static_cast<double>(n)) + "\n";
  write_file(root / "aggregate.csv", aggregate);

  if (!o.theta_csv.empty()) {
    std::optional<ThetaEstimate> estimate;
    try {
      estimate = estimate_theta(analyzed, o.delta, o.min_component);
    } catch (const std::exception& e) {
      err << "theta estimation failed: " << e.what() << "\n";
      return 1;
    }
    const ThetaEstimate& est = *estimate;
    std::string csv;
    for (const auto& row : est.theta.rows()) {
      for (std::size_t j = 0; j < row.size(); ++j) csv += (j ? "," : "") + format_number(row[j]);
      csv += "\n";
    }
    write_file(o.theta_csv, csv);
    for (Color c : est.missing())
      err << "warning: no region labeled " << static_cast<int>(c - 1) << " observed; theta column left as identity\n";
  }
  out << "analyzed " << n << " snapshot(s), " << passed << " sorted\n";
  return 0;
}

int cmd_render(const RenderOptions& o, std::ostream& out, std::ostream& err) {
  try {
    const Configuration sigma = read_snapshot(o.input);
    const Palette palette = o.palette.empty() ? default_palette(sigma.q()) : parse_palette(read_file(o.palette));
    write_file(o.output, render_ppm(sigma, palette, o.cell));
  } catch (const std::exception& e) {
    err << "render failed: " << e.what() << "\n";
    return 1;
  }
  out << "wrote " << o.output << "\n";
  return 0;
}

int cmd_oracle(const OracleOptions& o, std::ostream& out, std::ostream& err) {
  json report;
  try {
    const CostMatrix a = matrix_from_json(o.matrix, o.q);
    if (!o.counts.empty() && !o.field.empty()) throw std::invalid_argument("give counts or field, not both");
    GibbsRestriction restriction = Unrestricted{};
    if (!o.counts.empty()) restriction = CountsVector{o.counts};
    if (!o.field.empty()) restriction = MagneticField{o.field};
    const GibbsTable table = exact_gibbs(o.side_length, a, o.beta, restriction);
    write_file(o.output, gibbs_table_csv(table));
    report = {{"states", table.size()}, {"table", o.output}};

    if (o.steps > 0) {
      ChainParams p;
      p.beta = o.beta;
      p.matrix = a;
      p.side_length = o.side_length;
      p.mode = o.counts.empty() ? Dynamics::glauber : Dynamics::kawasaki;
      if (!o.counts.empty()) p.counts = CountsVector{o.counts};
      if (!o.field.empty()) p.field = MagneticField{o.field};
      p.seed = o.seed;
      Chain chain(p, canonical_configuration(p));
      std::vector<std::uint64_t> visits(table.size(), 0);
      std::uint64_t outside = 0;
      for (std::uint64_t s = 0; s < o.steps; ++s) {
        chain.step();
        if (auto idx = table.find(encode_configuration(chain.configuration())))
          ++visits[*idx];
        else
          ++outside;
      }
      report["steps"] = o.steps;
      report["mode"] = p.mode == Dynamics::kawasaki ? "kawasaki" : "glauber";
      report["seed"] = o.seed;
      report["tv"] = total_variation(table, visits, outside);
    }
  } catch (const std::exception& e) {
    err << "oracle failed: " << e.what() << "\n";
    return 1;
  }
  const std::string text = report.dump(2) + "\n";
  if (!o.report.empty()) write_file(o.report, text);
  out << text;
  return 0;
}

int cmd_matrices(const std::string& action, const std::string& name, int q, std::ostream& out, std::ostream& err) {
  try {
    if (action == "list") {
      for (const auto& n : builtin_matrix_names()) out << n << "\n";
      return 0;
    }
    if (action == "dump") {
      out << json::parse(cost_matrix_to_json(builtin_matrix(name, q))).dump(2) << "\n";
      return 0;
    }
    throw std::invalid_argument("matrices action must be list or dump");
  } catch (const std::exception& e) {
    err << "matrices: " << e.what() << "\n";
    return 1;
  }
}

namespace {

json parse_matrix_option(const std::string& name, const std::string& file) {
  if (!file.empty()) return json::parse(read_file(file));
  return name;
}

template <typename T>
std::vector<T> parse_list(const std::string& text) {
  std::vector<T> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = text.find(',', start);
    const std::string tok = text.substr(start, end == std::string::npos ? std::string::npos : end - start);
    if (tok.empty()) throw std::invalid_argument("empty entry in list '" + text + "'");
    std::size_t used = 0;
    if constexpr (std::is_integral_v<T>)
      out.push_back(static_cast<T>(std::stoll(tok, &used)));
    else
      out.push_back(static_cast<T>(std::stod(tok, &used)));
    if (used != tok.size()) throw std::invalid_argument("bad number '" + tok + "' in list");
    if (end == std::string::npos) break;
    start = end + 1;
  }
  return out;
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"Generalized Potts Model simulator and analysis tools"};
  app.set_version_flag("--version", std::string("gpm ") + kVersion);
  app.require_subcommand(1);

  // run
  auto* run_cmd = app.add_subcommand("run", "Run Kawasaki or Glauber chains and write metrics and snapshots");
  std::string config_file, preset_name, matrix_name, matrix_file, rho_text, h_text, mode, init, init_file, output;
  std::optional<int> side, q, replicas, threads;
  std::optional<double> beta, sweeps, thin_sweeps;
  std::optional<std::uint64_t> steps, thin, seed;
  run_cmd->add_option("--config", config_file, "JSON config or manifest");
  run_cmd->add_option("--preset", preset_name, "fig1, fig2a, fig2b, fig2c or fig2d");
  run_cmd->add_option("-L,--side", side, "lattice side length");
  run_cmd->add_option("-q,--colors", q, "number of colors");
  run_cmd->add_option("--beta", beta, "inverse temperature");
  run_cmd->add_option("--matrix", matrix_name, "builtin cost matrix name");
  run_cmd->add_option("--matrix-file", matrix_file, "cost matrix JSON file");
  run_cmd->add_option("--rho", rho_text, "comma-separated density proportions");
  run_cmd->add_option("--mode", mode, "kawasaki or glauber");
  run_cmd->add_option("--steps", steps, "proposals per replica");
  run_cmd->add_option("--sweeps", sweeps, "sweeps per replica");
  run_cmd->add_option("--thin", thin, "snapshot stride in steps");
  run_cmd->add_option("--thin-sweeps", thin_sweeps, "snapshot stride in sweeps");
  run_cmd->add_option("--seed", seed, "64-bit seed");
  run_cmd->add_option("--replicas", replicas, "number of replicas");
  run_cmd->add_option("--field", h_text, "comma-separated field h (glauber)");
  run_cmd->add_option("--init", init, "canonical, random or file");
  run_cmd->add_option("--init-file", init_file, "initial snapshot for init = file");
  run_cmd->add_option("-o,--output", output, "output directory");
  run_cmd->add_option("--threads", threads, "worker threads (default GPM_THREADS or all cores)");

  // analyze
  auto* an_cmd = app.add_subcommand("analyze", "Check Sorted(alpha, delta) on snapshots");
  AnalyzeOptions ao;
  std::string an_matrix = "potts", an_matrix_file, an_rho;
  an_cmd->add_option("inputs", ao.inputs, "snapshot files or directories")->required();
  an_cmd->add_option("--alpha", ao.alpha, "energy ratio bound (> 1)");
  an_cmd->add_option("--delta", ao.delta, "impurity bound in (0, 1)");
  an_cmd->add_option("--baseline", ao.baseline, "exact, rowfill or anneal");
  an_cmd->add_option("--matrix", an_matrix, "builtin cost matrix name");
  an_cmd->add_option("--matrix-file", an_matrix_file, "cost matrix JSON file");
  an_cmd->add_option("--rho", an_rho, "density proportions; default is each snapshot's magnetization");
  an_cmd->add_option("-o,--output", ao.output, "output directory");
  an_cmd->add_option("--theta-csv", ao.theta_csv, "write the estimated theta matrix here");
  an_cmd->add_option("--min-component", ao.min_component, "smallest component used for theta");
  an_cmd->add_option("--anneal-seed", ao.anneal_seed, "seed of the annealed baseline");
  an_cmd->add_flag("--dump-bridges", ao.dump_bridges, "include the bridge system in each report");

  // render
  auto* re_cmd = app.add_subcommand("render", "Render a snapshot as a binary PPM image");
  RenderOptions ro;
  re_cmd->add_option("input", ro.input, "snapshot file")->required();
  re_cmd->add_option("-o,--output", ro.output, "PPM output path")->required();
  re_cmd->add_option("--palette", ro.palette, "palette JSON file");
  re_cmd->add_option("--cell", ro.cell, "pixels per vertex (even)");

  // oracle
  auto* or_cmd = app.add_subcommand("oracle", "Exact Gibbs table on a tiny torus, optionally scored against a chain");
  OracleOptions oo;
  std::string or_matrix = "potts", or_matrix_file, or_counts, or_field;
  or_cmd->add_option("-L,--side", oo.side_length, "lattice side length");
  or_cmd->add_option("-q,--colors", oo.q, "number of colors");
  or_cmd->add_option("--matrix", or_matrix, "builtin cost matrix name");
  or_cmd->add_option("--matrix-file", or_matrix_file, "cost matrix JSON file");
  or_cmd->add_option("--beta", oo.beta, "inverse temperature");
  or_cmd->add_option("--counts", or_counts, "fixed magnetization, comma-separated");
  or_cmd->add_option("--field", or_field, "field h, comma-separated");
  or_cmd->add_option("-o,--output", oo.output, "table CSV path");
  or_cmd->add_option("--report", oo.report, "report JSON path");
  or_cmd->add_option("--steps", oo.steps, "chain steps to score against the table");
  or_cmd->add_option("--seed", oo.seed, "chain seed");

  // matrices
  auto* ma_cmd = app.add_subcommand("matrices", "List or dump builtin cost matrices");
  std::string ma_action = "list", ma_name;
  int ma_q = 0;
  ma_cmd->add_option("action", ma_action, "list or dump");
  ma_cmd->add_option("name", ma_name, "matrix name for dump");
  ma_cmd->add_option("-q,--colors", ma_q, "number of colors");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*run_cmd) {
      ExperimentConfig c;
      if (!config_file.empty()) c = ExperimentConfig::from_json(json::parse(read_file(config_file)));
      if (!preset_name.empty()) {
        if (!config_file.empty()) throw std::invalid_argument("give --config or --preset, not both");
        c = preset(preset_name);
      }
      if (side) c.side_length = *side;
      if (q) c.q = *q;
      if (beta) c.beta = *beta;
      if (!matrix_name.empty() || !matrix_file.empty()) c.matrix = parse_matrix_option(matrix_name, matrix_file);
      if (!rho_text.empty()) c.rho = parse_list<double>(rho_text);
      if (!mode.empty()) c.mode = mode;
      if (steps) c.steps = *steps, c.sweeps.reset();
      if (sweeps) c.sweeps = *sweeps, c.steps.reset();
      if (thin) c.thin = *thin, c.thin_sweeps.reset();
      if (thin_sweeps) c.thin_sweeps = *thin_sweeps, c.thin.reset();
      if (seed) c.seed = *seed;
      if (replicas) c.replicas = *replicas;
      if (!h_text.empty()) c.h = parse_list<double>(h_text);
      if (!init.empty()) c.init = init;
      if (!init_file.empty()) c.init_file = init_file;
      if (!output.empty()) c.output = output;
      return cmd_run(c, worker_count(threads), std::cout, std::cerr);
    }
    if (*an_cmd) {
      ao.matrix = parse_matrix_option(an_matrix, an_matrix_file);
      if (!an_rho.empty()) ao.rho = parse_list<double>(an_rho);
      return cmd_analyze(ao, std::cout, std::cerr);
    }
    if (*re_cmd) return cmd_render(ro, std::cout, std::cerr);
    if (*or_cmd) {
      oo.matrix = parse_matrix_option(or_matrix, or_matrix_file);
      if (!or_counts.empty()) oo.counts = parse_list<std::int64_t>(or_counts);
      if (!or_field.empty()) oo.field = parse_list<double>(or_field);
      return cmd_oracle(oo, std::cout, std::cerr);
    }
    if (*ma_cmd) return cmd_matrices(ma_action, ma_name, ma_q, std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace gpm::cli
