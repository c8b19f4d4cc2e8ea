#include "passchart/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "passchart/analysis.hpp"
#include "passchart/csv.hpp"
#include "passchart/extract.hpp"
#include "passchart/ingest.hpp"
#include "passchart/linkage.hpp"
#include "passchart/parallel.hpp"
#include "passchart/plot.hpp"
#include "passchart/synthgen.hpp"

namespace passchart {

namespace fs = std::filesystem;

namespace {

// Configuration problems detected before any work starts.
class ConfigError : public Error {
 public:
  using Error::Error;
};

void require_file(const fs::path& p, const char* what) {
  if (!fs::is_regular_file(p)) throw ConfigError(std::string(what) + " not found: " + p.string());
}

void require_dir(const fs::path& p, const char* what) {
  if (!fs::is_directory(p)) throw ConfigError(std::string(what) + " not found: " + p.string());
}

void ensure_parent(const fs::path& p) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
}

std::ofstream open_out(const fs::path& p) {
  ensure_parent(p);
  std::ofstream out(p, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + p.string());
  return out;
}

std::string safe_name(const std::string& s) {
  std::string out;
  for (char c : s) {
    out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '.') ? c : '_';
  }
  return out.empty() ? "_" : out;
}

struct ExtractArgs {
  std::string input, games, output, palette, dump_rectified;
  std::uint64_t seed = kDefaultSeed;
  double marker_radius = 0.0;
  unsigned jobs = 1;
};

int cmd_extract(const ExtractArgs& a, std::ostream& out, std::ostream& err) {
  require_dir(a.input, "input directory");
  if (!a.games.empty()) require_file(a.games, "games file");
  ExtractOptions opts;
  std::string palette_path = a.palette;
  if (palette_path.empty()) {
    if (const char* env = std::getenv("PASSCHART_PALETTE")) palette_path = env;
  }
  if (!palette_path.empty()) {
    require_file(palette_path, "palette");
    try {
      opts.palette = load_palette(palette_path);
    } catch (const Error& e) {
      throw ConfigError(e.what());
    }
  }
  if (a.marker_radius > 0.0) opts.palette.marker_radius_px = a.marker_radius;
  opts.seed = a.seed;
  opts.keep_rectified = !a.dump_rectified.empty();

  ChartArchive archive = load_archive(a.input);
  if (!a.games.empty()) archive = join_games(std::move(archive), a.games);
  for (const auto& w : archive.warnings) err << "warning: " << w << '\n';

  std::vector<ChartExtraction> results(archive.entries.size());
  parallel_for(results.size(), a.jobs, [&](std::size_t i) {
    results[i] = extract_entry(archive.entries[i], opts);
  });

  std::vector<PassRecord> records;
  int failures = 0;
  int anomalous = 0;
  auto sidecar = open_out(fs::path(a.output + ".anomalies.csv"));
  write_csv_row(sidecar, {"game_id", "name", "image", "status", "message"});
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& e = archive.entries[i];
    const auto& r = results[i];
    for (const auto& w : r.warnings) err << "warning: " << e.image_path.string() << ": " << w << '\n';
    const char* status = r.failed ? "failed" : "anomalous";
    for (const auto& m : r.anomalies) {
      write_csv_row(sidecar, {e.meta.game_id, e.meta.player_name(), e.image_path.string(), status, m});
      err << status << ": " << e.image_path.string() << ": " << m << '\n';
    }
    if (r.failed) {
      ++failures;
      continue;
    }
    if (!r.anomalies.empty()) ++anomalous;
    records.insert(records.end(), r.records.begin(), r.records.end());
    if (r.rectified) {
      const fs::path dir(a.dump_rectified);
      fs::create_directories(dir);
      write_png(dir / (safe_name(e.meta.game_id + "_" + e.meta.player_name()) + ".png"),
                r.rectified->image);
    }
  }
  auto csv = open_out(a.output);
  write_pass_records(csv, records);
  out << "extracted " << records.size() << " passes from " << (results.size() - failures) << " of "
      << results.size() << " charts";
  if (failures || anomalous) out << " (" << failures << " failed, " << anomalous << " anomalous)";
  out << '\n';
  return failures || anomalous ? kExitItemFailures : kExitOk;
}

struct AnalyzeArgs {
  std::string input, out_dir, group_by = "qb";
  std::optional<int> season;
  int min_passes = 100;
  std::optional<double> prior_weight;
  double resolution = kDefaultResolution;
  unsigned jobs = 1;
  bool plots = true;
};

AnalysisOptions analysis_options(const AnalyzeArgs& a) {
  AnalysisOptions o;
  try {
    o.group_by = parse_group_by(a.group_by);
    o.geometry = make_geometry(a.resolution);
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  if (a.min_passes < 0) throw ConfigError("--min-passes must be non-negative");
  if (a.prior_weight && !(*a.prior_weight > 0.0)) throw ConfigError("--prior-weight must be positive");
  o.min_passes = a.min_passes;
  o.prior_weight = a.prior_weight;
  o.jobs = a.jobs;
  return o;
}

std::vector<SeasonAnalysis> analyze_all(const AnalyzeArgs& a, const AnalysisOptions& o,
                                        std::ostream& err) {
  require_file(a.input, "pass records");
  const PassRecordTable table = read_pass_records(fs::path(a.input));
  for (const auto& w : table.warnings) err << "warning: " << w << '\n';
  std::vector<int> seasons = seasons_in(table.records);
  if (a.season) seasons = {*a.season};
  std::vector<SeasonAnalysis> out;
  for (int s : seasons) {
    try {
      out.push_back(analyze_season(table.records, s, o));
    } catch (const InsufficientData& e) {
      err << "warning: season " << s << ": " << e.what() << '\n';
    }
    if (!out.empty() && out.back().season == s) {
      for (const auto& w : out.back().warnings) err << "warning: " << w << '\n';
    }
  }
  return out;
}

void write_heatmap(const fs::path& p, const SurfaceGrid& g, ColorScale scale,
                   std::span<const FieldCoordinate> overlay = {}) {
  PlotOptions po;
  po.scale = scale;
  write_png(p, render_heatmap(g, po, overlay));
}

int cmd_analyze(const AnalyzeArgs& a, std::ostream& out, std::ostream& err) {
  const AnalysisOptions o = analysis_options(a);
  const auto seasons = analyze_all(a, o, err);
  const fs::path dir(a.out_dir);
  fs::create_directories(dir);
  for (const auto& s : seasons) {
    const std::string tag = std::to_string(s.season);
    write_grid_csv(dir / (tag + "_league_density.csv"), s.league_density);
    write_grid_csv(dir / (tag + "_league_surface.csv"), s.league_surface);
    if (a.plots) {
      write_heatmap(dir / (tag + "_league_density.png"), s.league_density, ColorScale::Sequential);
      write_heatmap(dir / (tag + "_league_surface.png"), clamp_probabilities(s.league_surface),
                    ColorScale::Sequential);
    }
    for (const auto& g : s.groups) {
      const std::string stem = tag + "_" + safe_name(g.group);
      write_grid_csv(dir / (stem + "_density.csv"), g.density);
      write_grid_csv(dir / (stem + "_surface.csv"), g.surface);
      write_grid_csv(dir / (stem + "_shrunk.csv"), g.shrunk);
      write_grid_csv(dir / (stem + "_difference.csv"), g.difference);
      if (a.plots) {
        write_heatmap(dir / (stem + "_surface.png"), clamp_probabilities(g.shrunk),
                      ColorScale::Sequential, g.passes);
        write_heatmap(dir / (stem + "_difference.png"), g.difference, ColorScale::Diverging,
                      g.passes);
      }
    }
    out << "season " << s.season << ": " << s.n_passes << " passes, " << s.groups.size()
        << " groups, prior weight " << format_number(s.prior_weight) << '\n';
  }
  const auto results = cpae_results(seasons);
  auto table = open_out(dir / "cpae.csv");
  write_cpae_table(table, results, o.group_by);
  return kExitOk;
}

struct CpaeArgs {
  AnalyzeArgs analysis;
  std::string table, output;
  std::optional<int> season_a, season_b;
};

void report_stability(std::span<const CpaeResult> results, const CpaeArgs& a, std::ostream& out,
                      std::ostream& err) {
  std::set<int> seasons;
  for (const auto& r : results) seasons.insert(r.season);
  if (seasons.size() < 2 && !(a.season_a && a.season_b)) return;
  const int sa = a.season_a.value_or(*std::prev(seasons.end(), 2));
  const int sb = a.season_b.value_or(*seasons.rbegin());
  try {
    const auto st = cpae_stability(results, sa, sb);
    char buf[128];
    std::snprintf(buf, sizeof buf, "stability %d-%d: r = %.4f over %zu groups\n", sa, sb,
                  st.correlation, st.groups.size());
    out << buf;
  } catch (const InsufficientData& e) {
    err << "warning: " << e.what() << '\n';
  }
}

int cmd_cpae(const CpaeArgs& a, std::ostream& out, std::ostream& err) {
  std::vector<CpaeResult> results;
  GroupBy by = GroupBy::Qb;
  if (!a.table.empty()) {
    require_file(a.table, "CPAE table");
    results = read_cpae_table(fs::path(a.table));
  } else {
    if (a.analysis.input.empty()) throw ConfigError("cpae needs --input or --table");
    const AnalysisOptions o = analysis_options(a.analysis);
    by = o.group_by;
    results = cpae_results(analyze_all(a.analysis, o, err));
  }
  if (!a.output.empty()) {
    auto f = open_out(a.output);
    write_cpae_table(f, results, by);
  } else {
    write_cpae_table(out, results, by);
  }
  report_stability(results, a, out, err);
  return kExitOk;
}

struct LinkArgs {
  std::string chart, tracking, report;
};

int cmd_link(const LinkArgs& a, std::ostream& out, std::ostream& err) {
  require_file(a.chart, "chart records");
  require_file(a.tracking, "tracking file");
  const auto chart = read_pass_records(fs::path(a.chart));
  const auto tracked = read_tracked_passes(fs::path(a.tracking));
  for (const auto& w : chart.warnings) err << "warning: " << w << '\n';
  for (const auto& w : tracked.warnings) err << "warning: " << w << '\n';
  const LinkReport report = link_games(chart.records, tracked.passes);
  for (const auto& w : report.warnings) err << "warning: " << w << '\n';
  const fs::path rp(a.report);
  {
    auto f = open_out(rp);
    write_link_report(f, report);
  }
  {
    auto f = open_out(rp.parent_path() / (rp.stem().string() + "_summary.csv"));
    write_link_summary(f, report);
  }
  const double m = report.median_distance();
  out << "linked " << report.distances().size() << " passes in " << report.games.size()
      << " QB-games; median distance " << (std::isnan(m) ? std::string("NA") : format_number(m))
      << " yards\n";
  return kExitOk;
}

struct SynthArgs {
  int n_charts = 10;
  std::uint64_t seed = kDefaultSeed;
  std::string out_dir;
  int phantoms = 0;
  double noise = 0.0;
  int min_passes = 3;
  int max_passes = 45;
  bool plain = false;
  int season = 2017;
};

int cmd_synth(const SynthArgs& a, std::ostream& out, std::ostream&) {
  if (a.n_charts < 0) throw ConfigError("--n-charts must be non-negative");
  if (a.min_passes < 0 || a.max_passes < a.min_passes) throw ConfigError("invalid pass range");
  static const char* kTeams[] = {"PHI", "NE", "NO", "MIN", "LA", "JAX", "PIT", "ATL"};
  const fs::path dir(a.out_dir);
  fs::create_directories(dir);
  auto games = open_out(dir / "games.csv");
  write_csv_row(games, {"game_id", "home_team", "away_team"});
  std::vector<PassRecord> all;
  for (int i = 0; i < a.n_charts; ++i) {
    Rng rng(derive_seed(a.seed, static_cast<std::uint64_t>(i)));
    RandomSpecOptions ro;
    ro.min_passes = a.min_passes;
    ro.max_passes = a.max_passes;
    ro.phantom_incompletions = a.phantoms;
    ro.noise_features = !a.plain;
    SynthSpec spec = random_spec(rng, ro);
    spec.noise_sd = a.noise;
    char id[64];
    std::snprintf(id, sizeof id, "%04d", i);
    const std::string stem = std::string("chart_") + id;
    const std::string team = kTeams[i % 8];
    const std::string opponent = kTeams[(i % 8 + 1 + (i / 8) % 7) % 8];
    spec.identity.game_id = "synth" + std::to_string(a.seed) + "_" + id;
    spec.identity.first_name = "Synth";
    spec.identity.last_name = "QB" + std::to_string(i % 12);
    spec.identity.team = team;
    spec.identity.position = "QB";
    spec.identity.season = a.season;
    spec.identity.week = std::to_string(i % 17 + 1);
    spec.identity.image_ref = stem + ".png";
    const SynthChart chart = render(spec, derive_seed(a.seed ^ 0x5EEDULL, static_cast<std::uint64_t>(i)));
    write_png(dir / (stem + ".png"), chart.image);
    auto meta = open_out(dir / (stem + ".json"));
    meta << chart_metadata_json(chart.meta);
    std::vector<PassRecord> truth = chart.truth;
    const bool home = i % 2 == 0;
    for (auto& r : truth) {
      r.home_team = home ? team : opponent;
      r.away_team = home ? opponent : team;
    }
    write_pass_records(dir / (stem + "_truth.csv"), truth);
    write_csv_row(games, {spec.identity.game_id, home ? team : opponent, home ? opponent : team});
    all.insert(all.end(), truth.begin(), truth.end());
  }
  write_pass_records(dir / "truth.csv", all);
  out << "wrote " << a.n_charts << " charts to " << dir.string() << '\n';
  return kExitOk;
}

struct PlotArgs {
  std::string grid, output, scale = "sequential", passes;
  int pixels_per_cell = 4;
};

int cmd_plot(const PlotArgs& a, std::ostream& out, std::ostream& err) {
  require_file(a.grid, "grid");
  PlotOptions po;
  if (a.scale == "sequential") {
    po.scale = ColorScale::Sequential;
  } else if (a.scale == "diverging") {
    po.scale = ColorScale::Diverging;
  } else {
    throw ConfigError("--scale must be sequential or diverging");
  }
  if (a.pixels_per_cell < 1) throw ConfigError("--pixels-per-cell must be positive");
  po.pixels_per_cell = a.pixels_per_cell;
  std::vector<FieldCoordinate> overlay;
  if (!a.passes.empty()) {
    require_file(a.passes, "pass records");
    const auto table = read_pass_records(fs::path(a.passes));
    for (const auto& w : table.warnings) err << "warning: " << w << '\n';
    for (const auto& r : table.records) {
      if (r.coord) overlay.push_back(*r.coord);
    }
  }
  const SurfaceGrid grid = read_grid_csv(a.grid);
  ensure_parent(a.output);
  write_png(a.output, render_heatmap(grid, po, overlay));
  out << "wrote " << a.output << '\n';
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Pass-chart extraction and completion-surface analysis"};
  app.name("passchart");
  app.require_subcommand(1);

  ExtractArgs ea;
  auto* extract = app.add_subcommand("extract", "Extract pass locations from chart images");
  extract->add_option("--input", ea.input, "Directory of chart images and metadata JSON")->required();
  extract->add_option("--output", ea.output, "Pass-record CSV to write")->required();
  extract->add_option("--games", ea.games, "CSV with game_id, home_team, away_team");
  extract->add_option("--seed", ea.seed, "Clustering seed");
  extract->add_option("--marker-radius", ea.marker_radius, "Marker radius in rectified pixels");
  extract->add_option("--palette", ea.palette, "Palette JSON (default: $PASSCHART_PALETTE or built in)");
  extract->add_option("--jobs", ea.jobs, "Worker threads")->check(CLI::PositiveNumber);
  extract->add_option("--dump-rectified", ea.dump_rectified, "Directory for rectified images");

  AnalyzeArgs aa;
  auto add_analysis = [](CLI::App* cmd, AnalyzeArgs& a, bool required_input) {
    auto* in = cmd->add_option("--input", a.input, "Pass-record CSV");
    if (required_input) in->required();
    cmd->add_option("--group-by", a.group_by, "qb, defense or league");
    cmd->add_option("--season", a.season, "Only this season");
    cmd->add_option("--min-passes", a.min_passes, "Minimum located passes per group");
    cmd->add_option("--prior-weight", a.prior_weight, "Shrinkage prior weight (default: median group size)");
    cmd->add_option("--resolution", a.resolution, "Grid cell size in yards");
    cmd->add_option("--jobs", a.jobs, "Worker threads")->check(CLI::PositiveNumber);
  };
  auto* analyze = app.add_subcommand("analyze", "Fit densities, completion surfaces and CPAE");
  add_analysis(analyze, aa, true);
  analyze->add_option("--out", aa.out_dir, "Output directory")->required();
  analyze->add_flag("!--no-plots", aa.plots, "Skip PNG heatmaps");

  CpaeArgs ca;
  auto* cpae_cmd = app.add_subcommand("cpae", "CPAE ranking table and season-to-season stability");
  add_analysis(cpae_cmd, ca.analysis, false);
  cpae_cmd->add_option("--table", ca.table, "Existing CPAE table instead of --input");
  cpae_cmd->add_option("--output", ca.output, "Table CSV to write (default: stdout)");
  cpae_cmd->add_option("--season-a", ca.season_a, "First season for stability");
  cpae_cmd->add_option("--season-b", ca.season_b, "Second season for stability");

  LinkArgs la;
  auto* link = app.add_subcommand("link", "Link chart completions to tracking data");
  link->add_option("--chart", la.chart, "Pass-record CSV")->required();
  link->add_option("--tracking", la.tracking, "Tracked-pass CSV")->required();
  link->add_option("--report", la.report, "Link report CSV")->required();

  SynthArgs sa;
  auto* synth = app.add_subcommand("synth", "Render synthetic charts with ground truth");
  synth->add_option("--n-charts", sa.n_charts, "Number of charts");
  synth->add_option("--seed", sa.seed, "Seed");
  synth->add_option("--out", sa.out_dir, "Output directory")->required();
  synth->add_option("--phantoms", sa.phantoms, "Declared but undrawn incompletions per chart");
  synth->add_option("--noise", sa.noise, "Per-channel Gaussian pixel noise (sd)");
  synth->add_option("--min-passes", sa.min_passes, "Minimum passes per chart");
  synth->add_option("--max-passes", sa.max_passes, "Maximum passes per chart");
  synth->add_option("--season", sa.season, "Season written to metadata");
  synth->add_flag("--plain", sa.plain, "No scrimmage line, trajectories or sideline numbers");

  PlotArgs pa;
  auto* plot = app.add_subcommand("plot", "Render a surface grid CSV as a PNG heatmap");
  plot->add_option("--grid", pa.grid, "Grid CSV")->required();
  plot->add_option("--output", pa.output, "PNG to write")->required();
  plot->add_option("--scale", pa.scale, "sequential or diverging");
  plot->add_option("--passes", pa.passes, "Pass-record CSV to overlay");
  plot->add_option("--pixels-per-cell", pa.pixels_per_cell, "Pixels per grid cell");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n\n" << app.help();
    return kExitConfigError;
  }

  try {
    if (*extract) return cmd_extract(ea, out, err);
    if (*analyze) return cmd_analyze(aa, out, err);
    if (*cpae_cmd) return cmd_cpae(ca, out, err);
    if (*link) return cmd_link(la, out, err);
    if (*synth) return cmd_synth(sa, out, err);
    if (*plot) return cmd_plot(pa, out, err);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitItemFailures;
  }
  return kExitConfigError;
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace passchart
