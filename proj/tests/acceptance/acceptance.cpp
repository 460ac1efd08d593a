// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include "fixtures.hpp"

#include "helitack/agents.hpp"
#include "helitack/dataset.hpp"
#include "helitack/protocol.hpp"
#include "helitack/report.hpp"
#include "helitack/rollout.hpp"
#include "helitack/rothermel.hpp"
#include "helitack/serve.hpp"
#include "helitack/simd/kernels.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <set>
#include <sstream>

using namespace helitack;
using helitack::testing::data_path;
using helitack::testing::read_text;
using helitack::testing::shared_catalog;

namespace {

using clock_type = std::chrono::steady_clock;

struct Verdict {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(const char* name, const std::function<Verdict()>& fn) {
  const auto t0 = clock_type::now();
  Verdict v;
  try {
    v = fn();
  } catch (const std::exception& e) {
    v = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(clock_type::now() - t0).count();
  if (!v.pass) ++failures;
  std::printf("%s  %-28s %s [%.2fs]\n", v.pass ? "PASS" : "FAIL", name, v.detail.c_str(), secs);
  std::fflush(stdout);
}

double seconds_since(clock_type::time_point t0) {
  return std::chrono::duration<double>(clock_type::now() - t0).count();
}

double rel(double a, double b) {
  const double d = std::max(std::abs(a), std::abs(b));
  return d == 0.0 ? 0.0 : std::abs(a - b) / d;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Verdict rothermel_identities() {
  const auto t0 = clock_type::now();
  const auto cat = builtin_catalog();
  Rng rng(1001);
  double worst = 0.0;
  int zero_adjust_fail = 0;
  for (int k = 0; k < 10000; ++k) {
    const int id = static_cast<int>(rng.between(1, 13));
    const auto& fm = cat.at(id);
    const double m = rng.uniform(0.0, fm.mx * 0.98);
    const auto sc = rothermel::spread_components(cat, id, m, rng.uniform(0, 900), rng.uniform(-4, 4),
                                                 rng.uniform(-1.5, 1.5), rng.uniform(-4, 4));
    worst = std::max(worst, rel(sc.r_base, sc.i_r * sc.xi / (sc.rho_b * sc.epsilon * sc.q_ig)));
    const auto flat = rothermel::spread_components(cat, id, m, 0.0, 0.0, 0.0, rng.uniform(-4, 4));
    if (flat.r_eff != flat.r_base || rothermel::effective_rate(sc.r_base, 0.0, 0.0) != sc.r_base) {
      ++zero_adjust_fail;
    }
  }
  int monotone_fail = 0;
  for (int k = 0; k < 1000; ++k) {
    const int id = static_cast<int>(rng.between(1, 13));
    const double mx = cat.at(id).mx;
    const double m = rng.uniform(0.0, mx * 0.9);
    double prev = -1.0;
    for (double w = 0.0; w <= 1000.0; w += 50.0) {
      const double r = rothermel::spread_components(cat, id, m, w, 0, 0, 0).r_eff;
      monotone_fail += r < prev;
      prev = r;
    }
    prev = std::numeric_limits<double>::infinity();
    const double w = rng.uniform(0, 600);
    for (double mm = 0.0; mm <= mx * 1.1; mm += mx / 20) {
      const double r = rothermel::spread_components(cat, id, std::min(mm, 1.0), w, 0, 0, 0).r_eff;
      monotone_fail += r > prev;
      prev = r;
    }
  }
  const double t = seconds_since(t0);
  return {worst <= 1e-9 && zero_adjust_fail == 0 && monotone_fail == 0 && t < 5.0,
          fmt("max rel err %.2e (<=1e-9), zero-adjust failures %d, monotonicity violations %d, %.2fs (<5s)",
              worst, zero_adjust_fail, monotone_fail, t)};
}

Verdict kernel_oracle() {
  const auto doc = nlohmann::json::parse(read_text(data_path("rothermel_golden.json")));
  const auto cat = builtin_catalog();
  double worst = 0.0;
  int n = 0;
  for (const auto& c : doc["cases"]) {
    const auto sc = rothermel::spread_components(cat, c["fuel"], c["moisture"], c["wind_ft_min"], 0, 0, 0);
    for (auto [got, key] : {std::pair{sc.i_r, "i_r"}, {sc.xi, "xi"}, {sc.rho_b, "rho_b"},
                            {sc.epsilon, "epsilon"}, {sc.q_ig, "q_ig"}, {sc.r_base, "r_base"},
                            {sc.phi_w, "phi_w"}, {sc.r_eff, "r_eff"}}) {
      worst = std::max(worst, rel(got, c[key].get<double>()));
    }
    ++n;
  }
  return {n == 27 && worst <= 1e-6, fmt("%d golden cases, max rel err %.2e (<=1e-6)", n, worst)};
}

Verdict ca_invariants() {
  const auto t0 = clock_type::now();
  Rng rng(4242);
  long forbidden = 0, nonmonotone = 0, incoherent = 0, steps = 0;
  for (int trial = 0; trial < 100; ++trial) {
    auto s = std::make_shared<const Scenario>(testing::random_scenario(rng, 120, 80));
    Engine e(s, shared_catalog());
    SimState st = e.init();
    std::vector<Phase> before;
    std::vector<std::uint32_t> sorted;
    while (e.is_finished(st).kind == Outcome::Kind::Active) {
      before = st.phase;
      const int burnt = st.burnt_count;
      e.step(st);
      ++steps;
      for (std::size_t i = 0; i < before.size(); ++i) forbidden += !transition_allowed(before[i], st.phase[i]);
      nonmonotone += st.burnt_count < burnt;
      sorted = st.frontier;
      std::sort(sorted.begin(), sorted.end());
      incoherent += sorted != recompute_frontier(st);
    }
  }
  const double t = seconds_since(t0);
  return {forbidden == 0 && nonmonotone == 0 && incoherent == 0 && t < 60.0,
          fmt("100 scenarios, %ld steps: forbidden %ld, non-monotone %ld, frontier mismatches %ld, %.1fs (<60s)",
              steps, forbidden, nonmonotone, incoherent, t)};
}

Verdict determinism() {
  const auto suite = fixture_suite(10);
  int pairs = 0, mismatches = 0;
  for (const auto& sc : suite) {
    auto s = std::make_shared<const Scenario>(sc);
    for (const char* agent : {"blind", "circler"}) {
      auto p1 = make_policy(agent, sc.seed), p2 = make_policy(agent, sc.seed);
      const auto a = run_episode(s, shared_catalog(), *p1);
      // Second run: a fresh scenario copy replaying the recorded action sequence.
      Environment env;
      env.reset(std::make_shared<const Scenario>(sc), std::make_shared<const FuelCatalog>(builtin_catalog()));
      for (auto act : a.log.actions) env.step(static_cast<Action>(act));
      const auto b = run_episode(s, shared_catalog(), *p2);
      mismatches += checksum(env.state()) != a.summary.checksum || b.summary.checksum != a.summary.checksum;
      ++pairs;
    }
  }
  return {pairs == 20 && mismatches == 0, fmt("%d scenario/agent pairs, %d checksum mismatches", pairs, mismatches)};
}

Verdict symmetry() {
  Scenario s = synthetic_scenario(SyntheticKind::FlatUniform, kDefaultWidth, kDefaultHeight, 0);
  s.wind_speed_ms = 0.0;
  const Scenario r = testing::rotate_cw(s);
  Engine ea(std::make_shared<const Scenario>(s), shared_catalog());
  Engine eb(std::make_shared<const Scenario>(r), shared_catalog());
  SimState a = ea.init(), b = eb.init();
  for (int k = 0; k < 50; ++k) {
    ea.step(a);
    eb.step(b);
  }
  long diff = 0;
  for (int row = 0; row < s.height; ++row) {
    for (int col = 0; col < s.width; ++col) {
      diff += a.cell(Cell{row, col}).phase != b.cell(Cell{col, s.height - 1 - row}).phase;
    }
  }
  const int affected = a.burnt_count + a.burning_count;

  Scenario w = s;
  w.wind_speed_ms = 2.0;
  w.wind_dir_deg = 90.0;
  Engine ew(std::make_shared<const Scenario>(w), shared_catalog());
  SimState st = ew.init();
  const int c0 = w.ignitions.front().col;
  int bad_steps = 0, last_east = 0, last_west = 0;
  for (int k = 1; k <= 50; ++k) {
    ew.step(st);
    int east = 0, west = 0;
    for (int row = 0; row < w.height; ++row) {
      for (int col = 0; col < w.width; ++col) {
        const Phase p = st.cell(Cell{row, col}).phase;
        if (p == Phase::Unburnt) continue;
        east += col > c0;
        west += col < c0;
      }
    }
    bad_steps += !(east > west);
    last_east = east;
    last_west = west;
  }
  return {diff == 0 && affected > 1 && bad_steps == 0,
          fmt("rotation: %ld differing cells of %d affected after 50 steps; east wind: east>west at all "
              "50 steps (violations %d, final %d vs %d)",
              diff, affected, bad_steps, last_east, last_west)};
}

Verdict agent_dominance() {
  struct Agg {
    double burned = 0, drops = 0, contained_steps = 0;
    int contained = 0, n = 0;
  };
  Agg agg[2];
  const char* names[2] = {"circler", "blind"};
  for (const auto& sc : fixture_suite(20)) {
    auto s = std::make_shared<const Scenario>(sc);
    for (int a = 0; a < 2; ++a) {
      auto p = make_policy(names[a], sc.seed);
      const auto r = run_episode(s, shared_catalog(), *p);
      agg[a].burned += r.summary.cells_burned;
      agg[a].drops += r.summary.helitacks;
      if (r.summary.outcome.kind == Outcome::Kind::ContainedAt) {
        agg[a].contained_steps += r.summary.outcome.step;
        ++agg[a].contained;
      }
      ++agg[a].n;
    }
  }
  auto mean_steps = [](const Agg& g) {
    return g.contained ? g.contained_steps / g.contained : std::numeric_limits<double>::infinity();
  };
  const double cb = agg[0].burned / 20, bb = agg[1].burned / 20;
  const double cs = mean_steps(agg[0]), bs = mean_steps(agg[1]);
  const double cd = agg[0].drops / 20, bd = agg[1].drops / 20;
  return {agg[0].contained > 0 && cb < bb && cs < bs && cd < bd,
          fmt("circler vs blind: cells %.1f<%.1f, steps-to-containment %.1f<%.1f (contained %d/20 vs "
              "%d/20), drops %.1f<%.1f",
              cb, bb, cs, bs, agg[0].contained, agg[1].contained, cd, bd)};
}

Verdict water_accounting() {
  EpisodeLog log;
  log.width = log.height = 8;
  log.cell_size_m = 30;
  log.max_steps = 500;
  log.outcome = {Outcome::Kind::ContainedAt, 100};
  log.final_phase.assign(64, Phase::Unburnt);
  log.burnt_trajectory = {0};
  log.burning_trajectory = {1};
  double gal[2];
  int i = 0;
  for (int n : {18, 47}) {
    log.drops.assign(static_cast<std::size_t>(n), DropRecord{});
    gal[i++] = report::build_report(log).suppression.water_gal;
  }
  EpisodeSummary s;
  s.helitacks = 18;
  s.water_gal = 18 * 800.0;
  const bool line_ok = summary_line(s).find("Water Used: 14400 gal") != std::string::npos;
  return {gal[0] == 14400.0 && gal[1] == 37600.0 && line_ok,
          fmt("18 drops -> %.0f gal, 47 drops -> %.0f gal", gal[0], gal[1])};
}

Verdict dataset_oracle() {
  const auto t0 = clock_type::now();
  Rng rng(77);
  int mismatches = 0;
  std::size_t largest = 0;
  const std::int64_t base = *dataset::parse_timestamp("2020-06-01T00:00:00Z");
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = trial == 0 ? 2000 : 1 + rng.below(2000);
    largest = std::max(largest, n);
    std::vector<GeoRef> centers;
    const int nc = static_cast<int>(rng.between(1, 40));
    for (int c = 0; c < nc; ++c) centers.push_back({rng.uniform(20, 52), rng.uniform(-128, -64)});
    std::vector<dataset::IncidentRecord> recs;
    for (std::size_t i = 0; i < n; ++i) {
      const auto c = centers[rng.below(centers.size())];
      const auto p = dataset::destination(c, rng.uniform(0, 6.283), rng.uniform(0, 15));
      recs.push_back({p.lat, p.lon, base + static_cast<std::int64_t>(rng.below(5 * 86400))});
    }
    const auto fast = dataset::dedup_incidents(recs);
    // Quadratic oracle.
    auto sorted = recs;
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const auto& a, const auto& b) { return a.discovered_at < b.discovered_at; });
    std::vector<dataset::IncidentRecord> kept;
    for (const auto& r : sorted) {
      if (!dataset::kConus.contains(r.lat, r.lon)) continue;
      bool ok = true;
      for (const auto& k : kept) {
        if (dataset::haversine_km({r.lat, r.lon}, {k.lat, k.lon}) < 5.0 &&
            (dataset::day_of(r.discovered_at) == dataset::day_of(k.discovered_at) ||
             r.discovered_at - k.discovered_at < 7200)) {
          ok = false;
          break;
        }
      }
      if (ok) kept.push_back(r);
    }
    mismatches += fast != kept;
  }

  std::vector<dataset::LabeledSample> pos;
  const dataset::Day d0 = *dataset::parse_date("2018-01-01");
  for (int i = 0; i < 1000; ++i) {
    pos.push_back({rng.uniform(30, 47), rng.uniform(-122, -75), d0 + static_cast<dataset::Day>(rng.below(1000)),
                   dataset::Label::Wildfire, dataset::Tier::Positive, -1});
  }
  dataset::NegativeConfig cfg;
  cfg.counts = {500, 3500, 1000};
  cfg.seed = 9;
  const auto neg = dataset::sample_negatives(pos, dataset::bbox_polygon(dataset::kConus), cfg);
  const auto audit = dataset::audit_negatives(neg.samples, pos, cfg);
  const double t = seconds_since(t0);
  return {mismatches == 0 && audit.ok() && t < 60.0,
          fmt("dedup: 200 instances (largest %zu), %d mismatches; negatives: %zu far/%zu near/%zu yearly, "
              "%zu audit violations; %.1fs (<60s)",
              largest, mismatches, neg.achieved.far, neg.achieved.near, neg.achieved.yearly,
              audit.violations.size(), t)};
}

Verdict table1_round_trip() {
  std::vector<dataset::Diagnostic> diags;
  std::ifstream sin(data_path("table1_samples.csv"));
  const auto samples = dataset::read_samples(sin, diags);
  std::ifstream win(data_path("table1_weather.csv"));
  const auto table = dataset::read_weather(win, diags);
  const auto res = dataset::extract_windows(samples, table);
  std::ostringstream out;
  dataset::write_windows(out, res.windows);
  std::set<std::vector<std::string>> emitted;
  auto split = [](const std::string& line) {
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string x;
    while (std::getline(ss, x, ',')) f.push_back(x);
    return f;
  };
  std::istringstream lines(out.str());
  std::string line, header;
  std::getline(lines, header);
  while (std::getline(lines, line)) emitted.insert(split(line));
  std::istringstream expected(read_text(data_path("table1_rows.csv")));
  std::string want_header;
  std::getline(expected, want_header);
  int rows = 0, matched = 0;
  while (std::getline(expected, line)) {
    ++rows;
    matched += emitted.count(split(line)) != 0;
  }
  return {rows == 3 && matched == rows && header == want_header && diags.empty(),
          fmt("%d of %d rows reproduced field-for-field, header %s", matched, rows,
              header == want_header ? "matches" : "differs")};
}

Verdict throughput() {
  auto s = std::make_shared<const Scenario>(
      synthetic_scenario(SyntheticKind::FlatUniform, kDefaultWidth, kDefaultHeight, 0));
  Environment env;
  auto obs = env.reset(s, shared_catalog());
  // Warm-up episode, untimed.
  for (int k = 0; k < 100; ++k) env.step(k % 2 ? Action::Left : Action::Right);
  constexpr long kSteps = 30000;
  std::size_t max_frontier = 0;
  int in_episode = 0;
  obs = env.reset(s, shared_catalog());
  const auto t0 = clock_type::now();
  for (long i = 0; i < kSteps; ++i) {
    if (in_episode == 240 || env.done()) {
      obs = env.reset(s, shared_catalog());
      in_episode = 0;
    }
    obs = env.step(i % 2 ? Action::Left : Action::Right).obs;
    ++in_episode;
    max_frontier = std::max(max_frontier, env.state().frontier.size());
  }
  const double rate = kSteps / seconds_since(t0);
  return {rate >= 5000.0 && max_frontier <= 500,
          fmt("%.0f env_step/s (>=5000) on 240x160, max frontier %zu (<=500)", rate, max_frontier)};
}

Verdict golden_transcript() {
  protocol::SessionOptions o;
  o.base_dir = HELITACK_TEST_DATA;
  protocol::Session session(shared_catalog(), o);
  std::istringstream in(read_text(data_path("transcript_requests.jsonl")));
  std::ostringstream out;
  serve::serve_stream(session, in, out);
  const std::string want = read_text(data_path("transcript_golden.jsonl"));
  const auto lines = std::count(want.begin(), want.end(), '\n');
  return {out.str() == want, fmt("%ld reply lines, %s", static_cast<long>(lines),
                                 out.str() == want ? "byte-identical" : "differs")};
}

} // namespace

int main() {
  std::printf("simd: %s\n", std::string(simd::to_string(simd::kernels().isa)).c_str());
  criterion("rothermel-identities", rothermel_identities);
  criterion("kernel-oracle", kernel_oracle);
  criterion("ca-invariants", ca_invariants);
  criterion("determinism", determinism);
  criterion("symmetry-anisotropy", symmetry);
  criterion("agent-dominance", agent_dominance);
  criterion("water-accounting", water_accounting);
  criterion("dataset-oracle", dataset_oracle);
  criterion("dataset-rows-round-trip", table1_round_trip);
  criterion("throughput", throughput);
  criterion("protocol-golden-transcript", golden_transcript);
  std::printf("%s: %d failed\n", failures ? "FAILED" : "ALL PASSED", failures);
  return failures ? 1 : 0;
}
