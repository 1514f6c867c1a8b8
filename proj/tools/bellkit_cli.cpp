// bellkit command-line harness: correlation sweeps, published-table
// reproduction, convergence/vicinity scans, attack experiments, and noise
// fits, emitting CSV/JSON and simple SVG plots.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bellkit/angle_sets.hpp"
#include "bellkit/attack.hpp"
#include "bellkit/chsh.hpp"
#include "bellkit/convergence.hpp"
#include "bellkit/io.hpp"
#include "bellkit/noise.hpp"
#include "bellkit/report.hpp"

namespace {

using bellkit::json;

#ifndef BELLKIT_DATA_FILE
#define BELLKIT_DATA_FILE "data/angle_sets.json"
#endif

struct CommonOpts {
  std::string out;
  std::string format = "json";
  std::uint64_t seed = 0;
  bool svg = false;
  bool degrees = false;
  std::string data_file = BELLKIT_DATA_FILE;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--out", opts.out, "output path (stdout when omitted)");
  cmd->add_option("--format", opts.format, "csv|json")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--seed", opts.seed, "64-bit RNG seed");
  cmd->add_flag("--svg", opts.svg, "also write an SVG plot next to --out");
  cmd->add_flag("--degrees", opts.degrees, "interpret angle arguments as degrees");
  cmd->add_option("--data", opts.data_file, "angle-set data file");
}

double in_radians(const CommonOpts& opts, double angle) {
  return opts.degrees ? angle * bellkit::kPi / 180.0 : angle;
}

void emit(const CommonOpts& opts, const std::string& content) {
  if (opts.out.empty())
    std::cout << content;
  else
    bellkit::write_text_file(opts.out, content);
}

void emit_svg(const CommonOpts& opts, const std::vector<bellkit::SvgSeries>& series,
              const std::string& title) {
  if (!opts.svg) return;
  const std::string path = opts.out.empty() ? "plot.svg" : opts.out + ".svg";
  bellkit::write_text_file(path, bellkit::render_svg_plot(series, title));
}

// Built-in two-particle curves: E_qm(theta) = cos(theta) on the Bell state,
// E_hvt(theta) = 1 - 2*theta/pi for the sign model.
bellkit::Curve qm_curve() {
  return [](double t) {
    const std::array<bellkit::MeasurementSetting, 2> s = {
        bellkit::observable_setting(0.0), bellkit::observable_setting(t)};
    return bellkit::correlation_exact(bellkit::prepare_bell_state(), s).value;
  };
}

bellkit::Curve hvt_curve() {
  return [](double t) { return bellkit::lhv_correlation_analytic(0.0, t).value; };
}

int cmd_sweep(const CommonOpts& opts, double lo, double hi, double step, double eps) {
  if (step <= 0.0) throw std::invalid_argument("sweep: --step must be > 0");
  lo = in_radians(opts, lo);
  hi = in_radians(opts, hi);
  step = in_radians(opts, step);

  struct Row {
    double theta, e_qm, e_hvt, s_qm, s_hvt;
  };
  std::vector<Row> rows;
  const auto qm = qm_curve();
  const auto hvt = hvt_curve();
  for (double t = lo; t <= hi + 1e-12; t += step) {
    const auto policy = bellkit::SettingsPolicy::vicinity_offset(0.0, t);
    const auto sq = bellkit::chsh_from_source(bellkit::CorrelationSource::quantum_exact(),
                                              policy.settings());
    const auto sl = bellkit::chsh_from_source(bellkit::CorrelationSource::lhv_analytic(),
                                              policy.settings());
    rows.push_back({t, qm(t), hvt(t), sq.s_value, sl.s_value});
  }
  const auto regions = bellkit::overlap_regions(qm, hvt, lo, hi, std::min(step, 1e-3), eps);

  if (opts.format == "csv") {
    std::ostringstream out;
    out << "theta,e_qm,e_hvt,s_qm,s_hvt\n";
    for (const auto& r : rows)
      out << bellkit::format_double(r.theta) << ',' << bellkit::format_double(r.e_qm) << ','
          << bellkit::format_double(r.e_hvt) << ',' << bellkit::format_double(r.s_qm) << ','
          << bellkit::format_double(r.s_hvt) << '\n';
    emit(opts, out.str());
    const std::string rpath = opts.out.empty() ? "" : opts.out + ".regions.csv";
    if (!rpath.empty()) bellkit::write_text_file(rpath, bellkit::regions_csv(regions));
  } else {
    json series = json::array();
    for (const auto& r : rows)
      series.push_back({{"theta", r.theta},
                        {"e_qm", r.e_qm},
                        {"e_hvt", r.e_hvt},
                        {"s_qm", r.s_qm},
                        {"s_hvt", r.s_hvt}});
    json jr = json::array();
    for (const auto& r : regions) jr.push_back(bellkit::to_json(r));
    emit(opts, json{{"series", series}, {"overlap_regions", jr}, {"epsilon", eps}}.dump(2) + "\n");
  }

  bellkit::SvgSeries qm_s{"E_qm", "#1f77b4", {}}, hvt_s{"E_hvt", "#ff7f0e", {}};
  bellkit::SvgSeries sq_s{"S_qm", "#2ca02c", {}}, sl_s{"S_hvt", "#d62728", {}};
  for (const auto& r : rows) {
    qm_s.points.push_back({r.theta, r.e_qm});
    hvt_s.points.push_back({r.theta, r.e_hvt});
    sq_s.points.push_back({r.theta, r.s_qm});
    sl_s.points.push_back({r.theta, r.s_hvt});
  }
  emit_svg(opts, {qm_s, hvt_s, sq_s, sl_s}, "Correlation and CHSH sweep");
  return 0;
}

int cmd_reproduce_tables(const CommonOpts& opts, const std::string& table) {
  const auto data = bellkit::load_angle_sets(opts.data_file);
  std::vector<bellkit::TableRowReport> rows;
  if (table == "B1" || table == "both")
    for (auto& r : bellkit::reproduce_table(data.b1)) rows.push_back(std::move(r));
  if (table == "B2" || table == "both")
    for (auto& r : bellkit::reproduce_table(data.b2)) rows.push_back(std::move(r));

  if (opts.format == "csv") {
    std::ostringstream out;
    out << "table,label,best_reading,best_computed_delta,reported_theoretical_s,"
           "reproduced,exceeds_tsirelson\n";
    for (const auto& r : rows)
      out << bellkit::to_string(r.table) << ',' << r.label << ',' << r.best_reading << ','
          << bellkit::format_double(r.best_delta) << ','
          << (r.reported_theoretical_s ? bellkit::format_double(*r.reported_theoretical_s) : "")
          << ',' << (r.reproduced ? "yes" : "no") << ','
          << (r.exceeds_tsirelson ? "yes" : "no") << '\n';
    emit(opts, out.str());
  } else {
    json jr = json::array();
    for (const auto& r : rows) jr.push_back(bellkit::to_json(r));
    emit(opts, json{{"data_version", data.version}, {"rows", jr}}.dump(2) + "\n");
  }
  return 0;
}

int cmd_convergence(const CommonOpts& opts, double delta_j, double lo, double hi,
                    double step, double eps) {
  lo = in_radians(opts, lo);
  hi = in_radians(opts, hi);
  const auto qm = qm_curve();
  const auto hvt = hvt_curve();
  const auto points = bellkit::find_convergence_points(qm, hvt, lo, hi, step, 1e-10);
  const bellkit::VicinityParams params{delta_j};
  std::vector<bellkit::ConvergenceRegion> vicinities;
  for (const auto& p : points) vicinities.push_back(bellkit::hup_vicinity(p, params, qm, hvt));
  const auto regions = bellkit::overlap_regions(qm, hvt, lo, hi, step, eps);

  if (opts.format == "csv") {
    emit(opts, bellkit::regions_csv(vicinities));
    if (!opts.out.empty())
      bellkit::write_text_file(opts.out + ".overlap.csv", bellkit::regions_csv(regions));
  } else {
    json jp = json::array(), jv = json::array(), jr = json::array();
    for (const auto& p : points) jp.push_back(bellkit::to_json(p));
    for (const auto& v : vicinities) jv.push_back(bellkit::to_json(v));
    for (const auto& r : regions) jr.push_back(bellkit::to_json(r));
    emit(opts, json{{"delta_j", delta_j},
                    {"delta_theta", params.delta_theta()},
                    {"epsilon", eps},
                    {"convergence_points", jp},
                    {"hup_vicinities", jv},
                    {"overlap_regions", jr}}
                   .dump(2) +
                   "\n");
  }

  bellkit::SvgSeries gap{"|E_qm - E_hvt|", "#1f77b4", {}};
  for (double t = lo; t <= hi; t += std::max(step, 1e-3))
    gap.points.push_back({t, std::fabs(qm(t) - hvt(t))});
  emit_svg(opts, {gap}, "QM-HVT gap and convergence points");
  return 0;
}

int cmd_attack(const CommonOpts& opts, const std::string& policy_name, double theta,
               double theta0, double delta_j, int steps, long long rounds,
               long long trials) {
  theta = in_radians(opts, theta);
  theta0 = in_radians(opts, theta0);

  bellkit::SettingsPolicy policy;
  if (policy_name == "canonical")
    policy = bellkit::SettingsPolicy::fixed_chsh(bellkit::canonical_chsh_settings());
  else if (policy_name == "aligned")
    policy = bellkit::SettingsPolicy::aligned_pair(theta);
  else
    policy = bellkit::SettingsPolicy::vicinity_offset(theta0, 0.0);

  bellkit::SessionConfig cfg;
  cfg.policy = policy;
  cfg.rounds = rounds;
  cfg.seed = opts.seed;

  cfg.source = bellkit::SourceKind::LhvAdversary;
  const auto detect = bellkit::detection_probability(cfg, trials);
  cfg.source = bellkit::SourceKind::EntangledQuantum;
  const auto true_neg = bellkit::detection_probability(cfg, trials);

  const auto sweep = bellkit::vicinity_attack_sweep(theta0, bellkit::VicinityParams{delta_j},
                                                    steps, rounds, opts.seed);

  if (opts.format == "csv") {
    emit(opts, bellkit::sweep_rows_csv(sweep));
  } else {
    emit(opts, json{{"policy", policy_name},
                    {"rounds", rounds},
                    {"trials", trials},
                    {"statistic", "cumulative-over-session"},
                    {"lhv_detection", bellkit::to_json(detect)},
                    {"quantum_true_negative", bellkit::to_json(true_neg)},
                    {"vicinity_sweep_csv", bellkit::sweep_rows_csv(sweep)}}
                   .dump(2) +
                   "\n");
  }

  bellkit::SvgSeries zrow{"z", "#1f77b4", {}};
  for (const auto& r : sweep) zrow.points.push_back({r.delta, r.z});
  emit_svg(opts, {zrow}, "Source distinguishability across the vicinity");
  return 0;
}

int cmd_noise_fit(const CommonOpts& opts) {
  const auto data = bellkit::load_angle_sets(opts.data_file);
  const auto report = bellkit::fit_table_attenuation(data.b2);
  if (opts.format == "csv") {
    std::ostringstream out;
    out << "label,s_theoretical,s_observed,factor,clamped,extreme,p_only,eps_only\n";
    for (const auto& r : report.rows)
      out << r.label << ',' << bellkit::format_double(r.s_theoretical) << ','
          << bellkit::format_double(r.s_observed) << ',' << bellkit::format_double(r.factor)
          << ',' << (r.clamped ? "yes" : "no") << ',' << (r.extreme ? "yes" : "no") << ','
          << bellkit::format_double(r.p_only) << ',' << bellkit::format_double(r.eps_only)
          << '\n';
    emit(opts, out.str());
  } else {
    emit(opts, bellkit::to_json(report).dump(2) + "\n");
  }
  return 0;
}

// A JSON config file may supply any flag: {"step": 0.01, "svg": true} is
// expanded to trailing command-line arguments.
std::vector<std::string> expand_config(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  for (std::size_t i = 0; i + 1 < args.size(); ++i) {
    if (args[i] != "--config") continue;
    std::ifstream in(args[i + 1]);
    if (!in) throw std::runtime_error("cannot open config file: " + args[i + 1]);
    json cfg;
    in >> cfg;
    args.erase(args.begin() + i, args.begin() + i + 2);
    for (const auto& [key, value] : cfg.items()) {
      if (value.is_boolean()) {
        if (value.get<bool>()) args.push_back("--" + key);
      } else if (value.is_string()) {
        args.push_back("--" + key);
        args.push_back(value.get<std::string>());
      } else {
        args.push_back("--" + key);
        args.push_back(value.dump());
      }
    }
    break;
  }
  return args;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bell-test correlation and QKD vulnerability toolkit"};
  app.require_subcommand(1);

  CommonOpts sweep_opts, tables_opts, conv_opts, attack_opts, noise_opts;

  auto* sweep = app.add_subcommand("sweep", "correlation and CHSH curves vs angle");
  double lo = 0.0, hi = bellkit::kPi, step = 0.01, eps = 0.05;
  sweep->add_option("--lo", lo, "range start");
  sweep->add_option("--hi", hi, "range end");
  sweep->add_option("--step", step, "grid step");
  sweep->add_option("--epsilon", eps, "overlap tolerance for region shading");
  add_common(sweep, sweep_opts);

  auto* tables = app.add_subcommand("reproduce-tables", "compare computed vs reported S values");
  std::string table = "both";
  tables->add_option("--table", table, "B1|B2|both")->check(CLI::IsMember({"B1", "B2", "both"}));
  add_common(tables, tables_opts);

  auto* conv = app.add_subcommand("convergence", "convergence points, HUP vicinities, overlaps");
  double delta_j = 0.0, c_lo = 0.0, c_hi = bellkit::kPi, c_step = 1e-3, c_eps = 0.05;
  conv->add_option("--delta-j", delta_j, "uncertainty of the conjugate variable (units of hbar)")
      ->required()
      ->check(CLI::PositiveNumber);
  conv->add_option("--lo", c_lo, "range start");
  conv->add_option("--hi", c_hi, "range end");
  conv->add_option("--step", c_step, "scan step");
  conv->add_option("--epsilon", c_eps, "overlap tolerance");
  add_common(conv, conv_opts);

  auto* attack = app.add_subcommand("attack", "E91-style session detection experiments");
  std::string policy = "canonical";
  double theta = 0.0, theta0 = 0.0, a_delta_j = 1.0;
  int steps = 21;
  long long rounds = 10000, trials = 100;
  attack->add_option("--policy", policy, "canonical|aligned|vicinity")
      ->check(CLI::IsMember({"canonical", "aligned", "vicinity"}));
  attack->add_option("--theta", theta, "aligned-pair angle");
  attack->add_option("--theta0", theta0, "vicinity center");
  attack->add_option("--delta-j", a_delta_j, "vicinity width parameter")->check(CLI::PositiveNumber);
  attack->add_option("--steps", steps, "sweep steps");
  attack->add_option("--rounds", rounds, "rounds per session");
  attack->add_option("--trials", trials, "sessions per probability estimate");
  add_common(attack, attack_opts);

  auto* noise = app.add_subcommand("noise-fit", "per-set attenuation factors for table B2");
  add_common(noise, noise_opts);

  try {
    const auto args = expand_config(argc, argv);
    std::vector<const char*> cargs = {argv[0]};
    for (const auto& a : args) cargs.push_back(a.c_str());
    app.parse(static_cast<int>(cargs.size()), cargs.data());

    if (sweep->parsed()) return cmd_sweep(sweep_opts, lo, hi, step, eps);
    if (tables->parsed()) return cmd_reproduce_tables(tables_opts, table);
    if (conv->parsed()) return cmd_convergence(conv_opts, delta_j, c_lo, c_hi, c_step, c_eps);
    if (attack->parsed())
      return cmd_attack(attack_opts, policy, theta, theta0, a_delta_j, steps, rounds, trials);
    if (noise->parsed()) return cmd_noise_fit(noise_opts);
    return 1;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << bellkit::json{{"error", {{"type", "usage"}, {"message", e.what()}}}}.dump()
              << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << bellkit::json{{"error", {{"type", "runtime"}, {"message", e.what()}}}}.dump()
              << "\n";
    return 1;
  }
}
