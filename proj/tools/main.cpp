// helitack command-line entry point.

#include "helitack/ca_engine.hpp"
#include "helitack/dataset.hpp"
#include "helitack/error.hpp"
#include "helitack/protocol.hpp"
#include "helitack/report.hpp"
#include "helitack/rollout.hpp"
#include "helitack/serve.hpp"
#include "helitack/simd/kernels.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace helitack;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitInput = 2;
constexpr int kExitSaturated = 3;

struct Globals {
  std::string catalog_path;
  std::string output_dir;
  bool quiet = false;
};

Globals g;

std::shared_ptr<const FuelCatalog> catalog() {
  static std::shared_ptr<const FuelCatalog> cat = [] {
    if (g.catalog_path.empty()) return std::make_shared<const FuelCatalog>(builtin_catalog());
    std::ifstream in(g.catalog_path);
    if (!in) throw ParseError("cannot open catalog " + g.catalog_path);
    std::stringstream ss;
    ss << in.rdbuf();
    return std::make_shared<const FuelCatalog>(load_catalog(ss.str()));
  }();
  return cat;
}

fs::path out_path(const std::string& p) {
  fs::path path(p);
  if (path.is_relative() && !g.output_dir.empty()) return fs::path(g.output_dir) / path;
  return path;
}

// Write-then-rename so a failed run never leaves a partial file behind.
void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    if (!out) throw std::runtime_error("write failed: " + tmp.string());
  }
  fs::rename(tmp, path);
}

void print_config(const std::string& command, json flags) {
  if (g.quiet) return;
  flags["command"] = command;
  flags["catalog"] = g.catalog_path.empty() ? "builtin" : g.catalog_path;
  flags["output_dir"] = g.output_dir;
  flags["simd"] = simd::to_string(simd::kernels().isa);
  std::cerr << "config " << flags.dump() << '\n';
}

fs::path indexed(const fs::path& p, int i) {
  return p.parent_path() / (p.stem().string() + "-" + std::to_string(i) + p.extension().string());
}

// ---- simulate ----

struct ScenarioSource {
  std::string path;
  std::string synthetic;
  int width = kDefaultWidth;
  int height = kDefaultHeight;
  std::uint64_t synthetic_seed = 0;

  void add_options(CLI::App* cmd) {
    cmd->add_option("--scenario", path, "Scenario document");
    cmd->add_option("--synthetic", synthetic, "Built-in fixture: flat_uniform|single_slope|ridge|two_fuel");
    cmd->add_option("--width", width, "Synthetic grid width")->check(CLI::Range(8, 4096));
    cmd->add_option("--height", height, "Synthetic grid height")->check(CLI::Range(8, 4096));
    cmd->add_option("--synthetic-seed", synthetic_seed, "Synthetic fixture seed");
  }

  Scenario load() const {
    if (!path.empty() && !synthetic.empty()) throw ValidationError("use --scenario or --synthetic, not both");
    if (!path.empty()) return load_scenario_file(path, *catalog());
    if (synthetic.empty()) throw ValidationError("one of --scenario or --synthetic is required");
    const auto kind = parse_synthetic_kind(synthetic);
    if (!kind) throw ValidationError("unknown synthetic kind '" + synthetic + "'");
    return synthetic_scenario(*kind, width, height, synthetic_seed);
  }

  json describe() const {
    if (!path.empty()) return {{"scenario", path}};
    return {{"synthetic", synthetic}, {"width", width}, {"height", height}, {"synthetic_seed", synthetic_seed}};
  }
};

struct SimulateArgs {
  ScenarioSource source;
  std::string agent = "circler";
  int max_steps = 0;
  std::optional<std::uint64_t> seed;
  std::string log_out;
  int episodes = 1;
  int parallel = 1;
  bool json_out = false;
};

json summary_json(const EpisodeSummary& s, std::uint64_t seed) {
  return {{"agent", s.agent},
          {"seed", seed},
          {"cells_burned", s.cells_burned},
          {"timesteps", s.timesteps},
          {"helitacks", s.helitacks},
          {"water_gal", s.water_gal},
          {"outcome", to_string(s.outcome.kind)},
          {"reward_total", s.reward_total},
          {"checksum", s.checksum}};
}

int cmd_simulate(const SimulateArgs& a) {
  const Scenario base = a.source.load();
  if (!make_policy(a.agent)) throw ValidationError("unknown agent '" + a.agent + "'");
  if (a.episodes < 1 || a.parallel < 1) throw ValidationError("--episodes and --parallel must be >= 1");
  const std::uint64_t seed0 = a.seed.value_or(base.seed);
  json cfg = a.source.describe();
  cfg.update({{"agent", a.agent}, {"seed", seed0}, {"episodes", a.episodes}, {"parallel", a.parallel},
              {"max_steps", a.max_steps > 0 ? a.max_steps : base.max_steps}, {"log_out", a.log_out}});
  print_config("simulate", cfg);

  const auto cat = catalog();
  std::vector<Rollout> results(static_cast<std::size_t>(a.episodes));
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (int i = next++; i < a.episodes; i = next++) {
      try {
        Scenario s = base;
        s.seed = seed0 + static_cast<std::uint64_t>(i);
        if (a.max_steps > 0) s.max_steps = a.max_steps;
        auto policy = make_policy(a.agent, s.seed);
        results[static_cast<std::size_t>(i)] =
            run_episode(std::make_shared<const Scenario>(std::move(s)), cat, *policy);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < std::min(a.parallel, a.episodes); ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  if (!a.log_out.empty()) {
    const fs::path p = out_path(a.log_out);
    for (int i = 0; i < a.episodes; ++i) {
      write_file(a.episodes == 1 ? p : indexed(p, i), serialize_log(results[i].log) + "\n");
    }
  }

  json all = json::array();
  double burned = 0, steps = 0, drops = 0;
  for (int i = 0; i < a.episodes; ++i) {
    const auto& s = results[i].summary;
    burned += s.cells_burned;
    steps += s.timesteps;
    drops += s.helitacks;
    if (a.json_out) {
      all.push_back(summary_json(s, seed0 + static_cast<std::uint64_t>(i)));
    } else {
      std::cout << summary_line(s) << " | Outcome: " << to_string(s.outcome.kind) << '\n';
    }
  }
  if (a.json_out) {
    std::cout << (a.episodes == 1 ? all[0] : json{{"episodes", all}}).dump() << '\n';
  } else if (a.episodes > 1) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "Mean over %d: Cells Burned: %.1f | Timesteps: %.1f | Helitacks: %.1f",
                  a.episodes, burned / a.episodes, steps / a.episodes, drops / a.episodes);
    std::cout << buf << '\n';
  }
  return 0;
}

// ---- bench ----

struct BenchArgs {
  ScenarioSource source;
  long steps = 5000;
  int episode_steps = 240;
  bool json_out = false;
};

int cmd_bench(BenchArgs a) {
  if (a.source.path.empty() && a.source.synthetic.empty()) a.source.synthetic = "flat_uniform";
  if (a.steps < 0 || a.episode_steps < 1) throw ValidationError("--steps >= 0 and --episode-steps >= 1");
  auto scenario = std::make_shared<const Scenario>(a.source.load());
  json cfg = a.source.describe();
  cfg.update({{"steps", a.steps}, {"episode_steps", a.episode_steps}});
  print_config("bench", cfg);

  const auto cat = catalog();
  using clock = std::chrono::steady_clock;

  // Raw CA stepping.
  Engine engine(scenario, cat);
  SimState state = engine.init();
  std::size_t max_frontier = state.frontier.size();
  int in_episode = 0;
  const auto t0 = clock::now();
  for (long i = 0; i < a.steps; ++i) {
    if (in_episode == a.episode_steps || engine.is_finished(state).kind != Outcome::Kind::Active) {
      state = engine.init();
      in_episode = 0;
    }
    engine.step(state);
    ++in_episode;
    max_frontier = std::max(max_frontier, state.frontier.size());
  }
  const double raw_s = std::chrono::duration<double>(clock::now() - t0).count();
  const std::uint64_t raw_sum = checksum(state);

  // Full env_step: movement only, so the fire matches the raw run.
  Environment env;
  env.reset(scenario, cat);
  in_episode = 0;
  const auto t1 = clock::now();
  for (long i = 0; i < a.steps; ++i) {
    if (in_episode == a.episode_steps || env.done()) {
      env.reset(scenario, cat);
      in_episode = 0;
    }
    env.step(i % 2 == 0 ? Action::Left : Action::Right);
    ++in_episode;
  }
  const double env_s = std::chrono::duration<double>(clock::now() - t1).count();
  const std::uint64_t env_sum = checksum(env.state());

  const double raw_rate = a.steps > 0 && raw_s > 0 ? a.steps / raw_s : 0.0;
  const double env_rate = a.steps > 0 && env_s > 0 ? a.steps / env_s : 0.0;
  char sum[32];
  std::snprintf(sum, sizeof sum, "%016llx", static_cast<unsigned long long>(env_sum));
  if (a.json_out) {
    std::cout << json{{"steps", a.steps},
                      {"raw_steps_per_sec", raw_rate},
                      {"env_steps_per_sec", env_rate},
                      {"max_frontier", max_frontier},
                      {"checksum", sum},
                      {"checksums_match", raw_sum == env_sum}}
                     .dump()
              << '\n';
  } else {
    std::printf("steps: %ld\nraw CA steps/sec: %.0f\nfull env_step/sec: %.0f\nmax frontier: %zu\n"
                "checksum: %s%s\n",
                a.steps, raw_rate, env_rate, max_frontier, sum,
                raw_sum == env_sum ? "" : " (raw run differs)");
  }
  return raw_sum == env_sum ? 0 : kExitFailure;
}

// ---- dataset ----

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  return in;
}

void report_diags(const std::vector<dataset::Diagnostic>& diags) {
  for (const auto& d : diags) std::cerr << dataset::to_json_line(d) << '\n';
}

struct DedupArgs {
  std::string in, out;
  double min_km = 5.0, min_hours = 2.0;
};

int cmd_dedup(const DedupArgs& a) {
  print_config("dataset dedup", {{"in", a.in}, {"out", a.out}, {"min_km", a.min_km}, {"min_hours", a.min_hours}});
  auto in = open_in(a.in);
  std::vector<dataset::Diagnostic> diags;
  auto records = dataset::read_incidents(in, diags);
  report_diags(diags);
  dataset::DedupConfig cfg;
  cfg.min_km = a.min_km;
  cfg.min_hours = a.min_hours;
  const auto kept = dataset::dedup_incidents(records, cfg);
  std::ostringstream os;
  dataset::write_incidents(os, kept);
  write_file(out_path(a.out), os.str());
  std::cerr << "dedup: read " << records.size() << ", kept " << kept.size() << ", rejected rows "
            << diags.size() << '\n';
  return 0;
}

struct NegativesArgs {
  std::string positives, out, region;
  std::vector<double> bbox;
  std::size_t far = 5000, near = 35000, yearly = 36000;
  std::uint64_t seed = 0;
};

int cmd_negatives(const NegativesArgs& a) {
  print_config("dataset negatives", {{"positives", a.positives}, {"out", a.out}, {"region", a.region},
                                     {"bbox", a.bbox}, {"far", a.far}, {"near", a.near},
                                     {"yearly", a.yearly}, {"seed", a.seed}});
  std::vector<dataset::Diagnostic> diags;
  auto in = open_in(a.positives);
  // Accept either an incident table or a samples table.
  const std::string header = [&] {
    std::string h;
    std::getline(in, h);
    in.seekg(0);
    return h;
  }();
  std::vector<dataset::LabeledSample> positives =
      header.find("discovered_at") != std::string::npos
          ? dataset::as_positives(dataset::read_incidents(in, diags))
          : dataset::read_samples(in, diags);
  report_diags(diags);

  dataset::Polygon region = dataset::bbox_polygon(dataset::kConus);
  if (!a.region.empty()) {
    region.clear();
    auto rin = open_in(a.region);
    std::string line;
    while (std::getline(rin, line)) {
      double lat, lon;
      if (std::sscanf(line.c_str(), "%lf,%lf", &lat, &lon) == 2) region.push_back({lat, lon});
    }
  } else if (!a.bbox.empty()) {
    if (a.bbox.size() != 4) throw ValidationError("--bbox needs lat_min,lat_max,lon_min,lon_max");
    region = dataset::bbox_polygon({a.bbox[0], a.bbox[1], a.bbox[2], a.bbox[3]});
  }

  dataset::NegativeConfig cfg;
  cfg.counts = {a.far, a.near, a.yearly};
  cfg.seed = a.seed;
  const auto result = dataset::sample_negatives(positives, region, cfg);
  std::vector<dataset::LabeledSample> all = positives;
  all.insert(all.end(), result.samples.begin(), result.samples.end());
  std::ostringstream os;
  dataset::write_samples(os, all);
  write_file(out_path(a.out), os.str());
  std::cerr << json{{"achieved", {{"far", result.achieved.far}, {"near", result.achieved.near}, {"yearly", result.achieved.yearly}}},
                    {"shortfall", {{"far", result.shortfall.far}, {"near", result.shortfall.near}, {"yearly", result.shortfall.yearly}}}}
                   .dump()
            << '\n';
  return 0;
}

struct WindowsArgs {
  std::string samples, weather, out;
  int pre = 60, post = 15, max_gaps = 3;
};

int cmd_windows(const WindowsArgs& a) {
  print_config("dataset windows", {{"samples", a.samples}, {"weather", a.weather}, {"out", a.out},
                                   {"pre", a.pre}, {"post", a.post}, {"max_gaps", a.max_gaps}});
  std::vector<dataset::Diagnostic> diags;
  auto sin = open_in(a.samples);
  const auto samples = dataset::read_samples(sin, diags);
  auto win = open_in(a.weather);
  const auto table = dataset::read_weather(win, diags);
  report_diags(diags);
  const auto result = dataset::extract_windows(samples, table, {a.pre, a.post, a.max_gaps});
  for (const auto& d : result.diagnostics) {
    std::cerr << json{{"sample", d.row}, {"reason", d.reason}}.dump() << '\n';
  }
  std::ostringstream os;
  dataset::write_windows(os, result.windows);
  write_file(out_path(a.out), os.str());
  std::cerr << "windows: " << result.windows.size() << " emitted, " << result.diagnostics.size()
            << " skipped\n";
  return 0;
}

// ---- serve ----

struct ServeArgs {
  bool stdio = false;
  int socket_port = -1;
  int ws_port = -1;
  std::string http_dir;
  int http_port = 8080;
  std::string host = "127.0.0.1";
  std::string base_dir = ".";
};

int cmd_serve(const ServeArgs& a) {
  const int modes = int(a.stdio) + int(a.socket_port >= 0) + int(a.ws_port >= 0);
  if (modes > 1) throw ValidationError("choose one of --stdio, --socket, --ws");
  if (modes == 0 && a.http_dir.empty()) throw ValidationError("nothing to serve; try --stdio");
  print_config("serve", {{"stdio", a.stdio}, {"socket", a.socket_port}, {"ws", a.ws_port},
                         {"http", a.http_dir}, {"http_port", a.http_port}, {"host", a.host},
                         {"base_dir", a.base_dir}});
  protocol::SessionOptions opts;
  opts.base_dir = a.base_dir;

  std::thread http;
  if (!a.http_dir.empty()) {
    if (!fs::is_directory(a.http_dir)) throw ParseError("--http: not a directory: " + a.http_dir);
    auto run = [dir = a.http_dir, host = a.host, port = a.http_port] {
      if (!serve::serve_http(dir, host, port)) std::cerr << "http: cannot listen on port " << port << '\n';
    };
    if (modes == 0) {
      run();
      return 0;
    }
    http = std::thread(run);
    http.detach();
  }

  if (a.stdio) {
    protocol::Session session(catalog(), opts);
    serve::serve_stream(session, std::cin, std::cout);
    return 0;
  }
  serve::ServerOptions so;
  so.host = a.host;
  so.port = a.socket_port >= 0 ? a.socket_port : a.ws_port;
  so.catalog = catalog();
  so.session = opts;
  serve::Server server(so, a.ws_port >= 0 ? serve::Server::Framing::WebSocket : serve::Server::Framing::Lines);
  const int port = server.bind();
  std::cerr << "listening on " << a.host << ':' << port << '\n';
  server.run();
  return 0;
}

// ---- report / synth / catalog ----

struct ReportArgs {
  std::string log, format = "text", out;
};

int cmd_report(const ReportArgs& a) {
  print_config("report", {{"log", a.log}, {"format", a.format}, {"out", a.out}});
  const auto fmt = report::parse_format(a.format);
  if (!fmt) throw ValidationError("--format must be text or structured");
  const EpisodeLog log = load_log_file(a.log);
  const std::string doc = report::render_report(report::build_report(log), *fmt);
  if (a.out.empty()) {
    std::cout << doc;
  } else {
    write_file(out_path(a.out), doc);
  }
  return 0;
}

struct SynthArgs {
  std::string kind, out, blob;
  int width = kDefaultWidth, height = kDefaultHeight;
  std::uint64_t seed = 0;
};

int cmd_synth(const SynthArgs& a) {
  print_config("synth", {{"kind", a.kind}, {"width", a.width}, {"height", a.height}, {"seed", a.seed},
                         {"out", a.out}, {"blob", a.blob}});
  const auto kind = parse_synthetic_kind(a.kind);
  if (!kind) throw ValidationError("unknown synthetic kind '" + a.kind + "'");
  const Scenario s = synthetic_scenario(*kind, a.width, a.height, a.seed);
  const fs::path out = out_path(a.out);
  if (a.blob.empty()) {
    write_file(out, serialize_scenario(s) + "\n");
  } else {
    const fs::path dir = out.has_parent_path() ? out.parent_path() : fs::path(".");
    if (!dir.empty()) fs::create_directories(dir);
    write_file(out, serialize_scenario(s, dir, a.blob) + "\n");
  }
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"helitack: wildfire spread simulation, suppression agents and dataset tools"};
  app.require_subcommand(1);
  app.fallthrough();
  if (const char* c = std::getenv("HELITACK_CATALOG")) g.catalog_path = c;
  if (const char* o = std::getenv("HELITACK_OUTPUT_DIR")) g.output_dir = o;
  app.add_option("--catalog", g.catalog_path, "Fuel catalog JSON (env HELITACK_CATALOG)");
  app.add_option("--output-dir", g.output_dir, "Base for relative output paths (env HELITACK_OUTPUT_DIR)");
  app.add_flag("-q,--quiet", g.quiet, "Do not print the resolved config");

  int rc = 0;
  auto guard = [&rc](auto fn) {
    return [&rc, fn] {
      try {
        rc = fn();
      } catch (const SaturationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        rc = kExitSaturated;
      } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        rc = kExitInput;
      } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        rc = kExitInput;
      } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        rc = kExitFailure;
      }
    };
  };

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Run agent episodes and print the summary table row");
  sim.source.add_options(simulate);
  simulate->add_option("--agent", sim.agent, "blind|circler")->check(CLI::IsMember({"blind", "circler"}));
  simulate->add_option("--max-steps", sim.max_steps, "Override the scenario's max_steps");
  simulate->add_option("--seed", sim.seed, "Scenario and agent seed (episode i uses seed+i)");
  simulate->add_option("--log-out", sim.log_out, "Episode log path");
  simulate->add_option("--episodes", sim.episodes, "Number of episodes");
  simulate->add_option("--parallel", sim.parallel, "Worker threads");
  simulate->add_flag("--json", sim.json_out, "Machine-readable summary");
  simulate->callback(guard([&] { return cmd_simulate(sim); }));

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Measure raw CA and full env_step throughput");
  bench.source.add_options(bench_cmd);
  bench_cmd->add_option("--steps", bench.steps, "Steps to time");
  bench_cmd->add_option("--episode-steps", bench.episode_steps, "Reset after this many steps");
  bench_cmd->add_flag("--json", bench.json_out, "Machine-readable output");
  bench_cmd->callback(guard([&] { return cmd_bench(bench); }));

  auto* ds = app.add_subcommand("dataset", "Dataset construction pipeline");
  ds->require_subcommand(1);
  DedupArgs dd;
  auto* dedup = ds->add_subcommand("dedup", "Deduplicate incident records");
  dedup->add_option("--in", dd.in, "Incident CSV")->required();
  dedup->add_option("--out", dd.out, "Output CSV")->required();
  dedup->add_option("--min-km", dd.min_km, "Spatial threshold");
  dedup->add_option("--min-hours", dd.min_hours, "Temporal threshold");
  dedup->callback(guard([&] { return cmd_dedup(dd); }));

  NegativesArgs neg;
  auto* negs = ds->add_subcommand("negatives", "Sample far/near/yearly negatives");
  negs->add_option("--positives", neg.positives, "Positive incidents or samples CSV")->required();
  negs->add_option("--out", neg.out, "Output samples CSV")->required();
  negs->add_option("--region", neg.region, "Polygon CSV of lat,lon vertices");
  negs->add_option("--bbox", neg.bbox, "lat_min lat_max lon_min lon_max")->expected(4)->delimiter(',');
  negs->add_option("--far", neg.far, "FarNeg count");
  negs->add_option("--near", neg.near, "NearNeg count");
  negs->add_option("--yearly", neg.yearly, "YearlyNeg count");
  negs->add_option("--seed", neg.seed, "Sampler seed");
  negs->callback(guard([&] { return cmd_negatives(neg); }));

  WindowsArgs wa;
  auto* windows = ds->add_subcommand("windows", "Extract 75-day weather windows");
  windows->add_option("--samples", wa.samples, "Samples CSV")->required();
  windows->add_option("--weather", wa.weather, "Weather table CSV")->required();
  windows->add_option("--out", wa.out, "Output CSV")->required();
  windows->add_option("--pre", wa.pre, "Days before");
  windows->add_option("--post", wa.post, "Days from the sample date on (inclusive of day 0)");
  windows->add_option("--max-gaps", wa.max_gaps, "Missing days tolerated");
  windows->callback(guard([&] { return cmd_windows(wa); }));

  ServeArgs sv;
  auto* serve_cmd = app.add_subcommand("serve", "Expose the environment over the line protocol");
  serve_cmd->add_flag("--stdio", sv.stdio, "Serve on stdin/stdout");
  serve_cmd->add_option("--socket", sv.socket_port, "TCP port (newline-delimited)");
  serve_cmd->add_option("--ws", sv.ws_port, "WebSocket port");
  serve_cmd->add_option("--http", sv.http_dir, "Static asset directory");
  serve_cmd->add_option("--http-port", sv.http_port, "Static server port");
  serve_cmd->add_option("--host", sv.host, "Listen address");
  serve_cmd->add_option("--base-dir", sv.base_dir, "Resolves relative scenario_path values");
  serve_cmd->callback(guard([&] { return cmd_serve(sv); }));

  ReportArgs ra;
  auto* report_cmd = app.add_subcommand("report", "Render a threat report from an episode log");
  report_cmd->add_option("--log", ra.log, "Episode log")->required();
  report_cmd->add_option("--format", ra.format, "text|structured");
  report_cmd->add_option("--out", ra.out, "Output path (default stdout)");
  report_cmd->callback(guard([&] { return cmd_report(ra); }));

  SynthArgs sa;
  auto* synth = app.add_subcommand("synth", "Write a synthetic scenario");
  synth->add_option("--kind", sa.kind, "flat_uniform|single_slope|ridge|two_fuel")->required();
  synth->add_option("--width", sa.width, "Grid width");
  synth->add_option("--height", sa.height, "Grid height");
  synth->add_option("--seed", sa.seed, "Seed");
  synth->add_option("--out", sa.out, "Scenario path")->required();
  synth->add_option("--blob", sa.blob, "Sidecar grid blob path, relative to the scenario");
  synth->callback(guard([&] { return cmd_synth(sa); }));

  auto* cat_cmd = app.add_subcommand("catalog", "Print the fuel catalog");
  cat_cmd->callback(guard([&] {
    std::cout << serialize_catalog(*catalog()) << '\n';
    return 0;
  }));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }
  return rc;
}
