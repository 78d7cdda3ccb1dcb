// dscert: certified Dobrushin-Shlosman uniqueness checks for the
// nearest-neighbor ferromagnetic Ising model on finite boxes.
//
// Subcommands:
//   check   evaluate the dependence-coefficient sum at one beta
//   beta-v  bracket the threshold beta_V by grid scan + bisection
//   dss     randomized sweep of the covariance inequality
//   oracle  cross-validate the fast transport route against the exact solver
//
// stdout carries exactly one JSON report per run; progress goes to stderr.
// Exit codes: 0 success (check: condition holds), 1 negative outcome
// (check: fails; dss: violation; oracle: delta above threshold), 2 error.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "dscert/bisection.hpp"
#include "dscert/certifier.hpp"
#include "dscert/inequality_lab.hpp"
#include "dscert/oracle_harness.hpp"
#include "dscert/parallel.hpp"
#include "dscert/report_io.hpp"
#include "dscert/version.hpp"

namespace {

using ordered_json = nlohmann::ordered_json;

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::vector<int> parse_extents(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, 'x')) {
    try {
      std::size_t pos = 0;
      const int v = std::stoi(part, &pos);
      if (pos != part.size() || v < 1) throw std::invalid_argument("");
      out.push_back(v);
    } catch (...) {
      throw CLI::ValidationError("--extents", "expected positive integers like 3x4");
    }
  }
  if (out.empty() || out.size() > 3)
    throw CLI::ValidationError("--extents", "expected 1 to 3 factors");
  return out;
}

struct Emitter {
  std::string out_path;
  bool with_timing = true;

  int emit(ordered_json doc) const {
    const std::string text = doc.dump(2) + "\n";
    std::fputs(text.c_str(), stdout);
    if (!out_path.empty()) {
      std::ofstream f(out_path, std::ios::binary);
      if (!f) {
        std::cerr << "dscert: cannot write " << out_path << "\n";
        return 2;
      }
      f << text;
    }
    return 0;
  }
};

ordered_json make_manifest(const std::string& command, ordered_json config, bool with_timing,
                           double wall_seconds, ordered_json phases = ordered_json::object()) {
  ordered_json m;
  m["version"] = dscert::kVersion;
  m["command"] = command;
  m["config"] = std::move(config);
  if (with_timing) {
    m["timestamp"] = utc_timestamp();
    m["timing"] = {{"wall_seconds", wall_seconds}, {"phases", std::move(phases)}};
  }
  return m;
}

ordered_json wrap(const std::string& kind, ordered_json manifest, ordered_json report) {
  ordered_json doc;
  doc["schema"] = dscert::kReportSchema;
  doc["kind"] = kind;
  doc["manifest"] = std::move(manifest);
  doc["report"] = std::move(report);
  return doc;
}

int emit_error(const Emitter& emitter, const std::string& command, ordered_json config,
               const std::string& message) {
  ordered_json manifest = make_manifest(command, std::move(config), emitter.with_timing, 0.0);
  manifest["error"] = message;
  ordered_json doc;
  doc["schema"] = dscert::kReportSchema;
  doc["kind"] = command;
  doc["manifest"] = std::move(manifest);
  std::cerr << "dscert: " << message << "\n";
  emitter.emit(std::move(doc));
  return 2;
}

struct CommonArgs {
  int dim = 2;
  std::string extents = "1x1";
  std::string mode = "fast";
  std::string symmetry = "on";
  bool extremal = false;
  int threads = 0;
  std::string out_path;
  bool no_timing = false;

  void attach_geometry(CLI::App* cmd) {
    cmd->add_option("--dim", dim, "lattice dimension")->check(CLI::Range(1, 3));
    cmd->add_option("--extents", extents, "box extents, e.g. 3x4")->required();
  }
  void attach_certifier(CLI::App* cmd) {
    cmd->add_option("--mode", mode, "coefficient mode")
        ->check(CLI::IsMember({"fast", "oracle"}));
    cmd->add_option("--symmetry", symmetry, "orbit reduction")
        ->check(CLI::IsMember({"on", "off"}));
    cmd->add_flag("--extremal", extremal,
                  "score only the extremal boundary (exploration, non-certifying)");
  }
  void attach_output(CLI::App* cmd) {
    cmd->add_option("--threads", threads, "worker cap (0 = hardware)");
    cmd->add_option("--out", out_path, "also write the JSON report to this file");
    cmd->add_flag("--no-timing", no_timing, "omit timestamp and timing fields");
  }

  dscert::BoxGeometry box() const {
    const std::vector<int> e = parse_extents(extents);
    if (static_cast<int>(e.size()) != dim)
      throw std::invalid_argument("--extents must have exactly --dim factors");
    return dscert::build_box(dim, e);
  }
  dscert::CertifierOptions certifier_options() const {
    dscert::CertifierOptions o;
    o.mode = (mode == "oracle") ? dscert::CoefficientMode::kOracle
                                : dscert::CoefficientMode::kFast;
    o.use_symmetry = (symmetry == "on");
    o.extremal_only = extremal;
    o.workers = threads;
    return o;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"certified uniqueness-condition checks for the finite-box Ising model"};
  app.require_subcommand(1);

  // ---- check ----
  CommonArgs check_args;
  double check_beta = 0.0;
  CLI::App* check = app.add_subcommand("check", "evaluate the certificate at one beta");
  check_args.attach_geometry(check);
  check->add_option("--beta", check_beta, "inverse temperature")->required();
  check_args.attach_certifier(check);
  check_args.attach_output(check);

  // ---- beta-v ----
  CommonArgs bv_args;
  double bv_tol = 1e-6, bv_beta_max = 0.6;
  int bv_grid = 24;
  std::string bv_csv;
  CLI::App* betav = app.add_subcommand("beta-v", "bracket the threshold beta_V");
  bv_args.attach_geometry(betav);
  betav->add_option("--tol", bv_tol, "bracket tolerance");
  betav->add_option("--beta-max", bv_beta_max, "upper end of the scan");
  betav->add_option("--grid", bv_grid, "grid points over (0, beta-max]");
  bv_args.attach_certifier(betav);
  betav->add_option("--csv", bv_csv, "write the grid scan as CSV to this file");
  bv_args.attach_output(betav);

  // ---- dss ----
  CommonArgs dss_args;
  std::uint64_t dss_trials = 10000, dss_seed = 0;
  int dss_max_extent = 3;
  std::string dss_field = "random", dss_replay_spec;
  CLI::App* dss = app.add_subcommand("dss", "randomized covariance-inequality sweep");
  dss->set_help_flag("--help", "print help");  // frees -h for the field option
  dss->add_option("--trials", dss_trials, "number of trials");
  dss->add_option("--seed", dss_seed, "master seed");
  dss->add_option("--max-extent", dss_max_extent, "max box extent per axis")
      ->check(CLI::Range(1, 4));
  dss->add_option("--h", dss_field, "field style")->check(CLI::IsMember({"random", "zero"}));
  dss->add_option("--replay", dss_replay_spec, "re-run one trial, format SEED:INDEX");
  dss_args.attach_output(dss);

  // ---- oracle ----
  CommonArgs oracle_args;
  int oracle_max_volume = 6, oracle_dim = 2;
  std::string oracle_betas = "0.1,0.3,0.5";
  bool oracle_single = false;
  CLI::App* orac = app.add_subcommand("oracle", "fast-vs-exact transport cross-checks");
  orac->add_option("--max-volume", oracle_max_volume, "largest |V| to sweep")
      ->check(CLI::Range(0, 12));
  orac->add_option("--betas", oracle_betas, "comma-separated beta list");
  orac->add_flag("--single-site", oracle_single, "compare against the single-site brute force");
  orac->add_option("--dim", oracle_dim, "dimension for --single-site")->check(CLI::Range(1, 3));
  oracle_args.attach_output(orac);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp") ? 0 : 2;
  }

  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };

  if (check->parsed()) {
    Emitter emitter{check_args.out_path, !check_args.no_timing};
    ordered_json config{{"dim", check_args.dim},       {"extents", check_args.extents},
                        {"beta", check_beta},          {"mode", check_args.mode},
                        {"symmetry", check_args.symmetry}, {"threads", check_args.threads}};
    try {
      const dscert::BoxGeometry g = check_args.box();
      std::cerr << "check " << g.id() << " beta=" << check_beta << "\n";
      const dscert::CertificateReport rep =
          dscert::certify_box(g, check_beta, check_args.certifier_options());
      ordered_json doc = wrap(
          "check",
          make_manifest("check", config, emitter.with_timing, elapsed(),
                        {{"certify_seconds", rep.wall_seconds}}),
          ordered_json::parse(dscert::certificate_to_json(rep, emitter.with_timing)));
      if (emitter.emit(std::move(doc)) != 0) return 2;
      return rep.holds ? 0 : 1;
    } catch (const std::exception& e) {
      return emit_error(emitter, "check", config, e.what());
    }
  }

  if (betav->parsed()) {
    Emitter emitter{bv_args.out_path, !bv_args.no_timing};
    ordered_json config{{"dim", bv_args.dim},         {"extents", bv_args.extents},
                        {"tol", bv_tol},              {"beta_max", bv_beta_max},
                        {"grid", bv_grid},            {"mode", bv_args.mode},
                        {"symmetry", bv_args.symmetry}, {"threads", bv_args.threads}};
    try {
      const dscert::BoxGeometry g = bv_args.box();
      std::cerr << "beta-v " << g.id() << " tol=" << bv_tol << "\n";
      dscert::BisectionOptions opts;
      opts.tolerance = bv_tol;
      opts.beta_max = bv_beta_max;
      opts.grid_points = bv_grid;
      opts.certifier = bv_args.certifier_options();
      const dscert::BisectionResult r = dscert::bisect_threshold(g, opts);
      if (!bv_csv.empty()) {
        std::ofstream f(bv_csv, std::ios::binary);
        if (!f) throw std::runtime_error("cannot write " + bv_csv);
        f << dscert::bisection_grid_csv(r, g.volume());
      }
      ordered_json doc = wrap(
          "beta-v",
          make_manifest("beta-v", config, emitter.with_timing, elapsed(),
                        {{"grid_seconds", r.grid_seconds}, {"bisect_seconds", r.bisect_seconds}}),
          ordered_json::parse(dscert::bisection_to_json(r, emitter.with_timing)));
      if (emitter.emit(std::move(doc)) != 0) return 2;
      if (r.ambiguous) {
        std::cerr << "dscert: threshold ambiguous, both grid brackets reported\n";
        return 2;
      }
      return 0;
    } catch (const std::exception& e) {
      return emit_error(emitter, "beta-v", config, e.what());
    }
  }

  if (dss->parsed()) {
    Emitter emitter{dss_args.out_path, !dss_args.no_timing};
    ordered_json config{{"trials", dss_trials},   {"seed", dss_seed},
                        {"max_extent", dss_max_extent}, {"h", dss_field},
                        {"replay", dss_replay_spec},    {"threads", dss_args.threads}};
    try {
      if (!dss_replay_spec.empty()) {
        const auto colon = dss_replay_spec.find(':');
        if (colon == std::string::npos)
          throw std::invalid_argument("--replay expects SEED:INDEX");
        dscert::DssSweepConfig cfg;
        cfg.seed = std::stoull(dss_replay_spec.substr(0, colon));
        cfg.trials = 1;
        cfg.max_extent = dss_max_extent;
        cfg.zero_field = (dss_field == "zero");
        const std::uint64_t index = std::stoull(dss_replay_spec.substr(colon + 1));
        const dscert::DssTrial t = dscert::dss_replay(cfg, index);
        ordered_json report{{"index", t.index},
                            {"box", std::to_string(t.width) + "x" + std::to_string(t.height)},
                            {"beta", t.beta},
                            {"h", t.field},
                            {"u", t.u},
                            {"v", t.v},
                            {"u_equals_v", t.u_equals_v},
                            {"margin", t.margin}};
        ordered_json doc = wrap(
            "dss-replay", make_manifest("dss", config, emitter.with_timing, elapsed()), report);
        if (emitter.emit(std::move(doc)) != 0) return 2;
        return t.margin >= -1e-12 ? 0 : 1;
      }

      dscert::DssSweepConfig cfg;
      cfg.seed = dss_seed;
      cfg.trials = dss_trials;
      cfg.max_extent = dss_max_extent;
      cfg.zero_field = (dss_field == "zero");
      cfg.workers = dss_args.threads;
      std::cerr << "dss trials=" << dss_trials << " seed=" << dss_seed << "\n";
      const dscert::DssSweepReport rep = dscert::dss_sweep(cfg);
      ordered_json doc =
          wrap("dss",
               make_manifest("dss", config, emitter.with_timing, elapsed(),
                             {{"sweep_seconds", rep.wall_seconds}}),
               ordered_json::parse(dscert::dss_report_to_json(rep, emitter.with_timing)));
      if (emitter.emit(std::move(doc)) != 0) return 2;
      return rep.violation_count == 0 ? 0 : 1;
    } catch (const std::exception& e) {
      return emit_error(emitter, "dss", config, e.what());
    }
  }

  // oracle
  {
    Emitter emitter{oracle_args.out_path, !oracle_args.no_timing};
    ordered_json config{{"max_volume", oracle_max_volume},
                        {"betas", oracle_betas},
                        {"single_site", oracle_single},
                        {"dim", oracle_dim},
                        {"threads", oracle_args.threads}};
    try {
      std::vector<double> betas;
      std::stringstream ss(oracle_betas);
      std::string part;
      while (std::getline(ss, part, ',')) {
        if (!part.empty()) betas.push_back(std::stod(part));
      }

      dscert::OracleReport rep;
      if (oracle_single) {
        rep = dscert::oracle_single_site(oracle_dim, betas);
      } else if (oracle_max_volume == 0) {
        rep.betas = betas;  // empty box list: empty report, success
      } else {
        dscert::OracleSweepConfig cfg;
        cfg.max_volume = oracle_max_volume;
        cfg.betas = betas;
        cfg.workers = oracle_args.threads;
        std::cerr << "oracle sweep |V| <= " << oracle_max_volume << "\n";
        rep = dscert::oracle_sweep(cfg);
      }
      ordered_json doc =
          wrap("oracle",
               make_manifest("oracle", config, emitter.with_timing, elapsed(),
                             {{"sweep_seconds", rep.wall_seconds}}),
               ordered_json::parse(dscert::oracle_report_to_json(rep, emitter.with_timing)));
      if (emitter.emit(std::move(doc)) != 0) return 2;
      const bool ok = rep.max_delta <= 1e-9 && rep.single_site_max_delta <= 1e-12;
      return ok ? 0 : 1;
    } catch (const std::exception& e) {
      return emit_error(emitter, "oracle", config, e.what());
    }
  }
}
