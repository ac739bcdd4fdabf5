#pragma once

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hopd/bench.hpp"
#include "hopd/envelope.hpp"
#include "hopd/hopd.hpp"

namespace hopd::cli {

struct Options {
  std::string models = "er,ws";
  int m = 30;
  int repeats = 30;
  std::string n_range = "0..30";
  std::uint64_t seed = 20260502;
  std::string out = ".";
  std::string units = "ns";
  int threads = 1;
  std::string psi = "golden";
  std::string format = "csv";
  double support_min = 1e2, support_max = 1e5;
  std::string essential = "cap";
  double delta = 0;
  unsigned c = 1, n = 1, r = 2;
};

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, sep);)
    if (!item.empty()) out.push_back(item);
  return out;
}

inline ExperimentConfig to_config(const Options& o) {
  ExperimentConfig cfg;
  cfg.models.clear();
  for (const auto& name : split(o.models, ',')) cfg.models.push_back(parse_model(name));
  cfg.m = o.m;
  cfg.repeats = o.repeats;
  auto dots = o.n_range.find("..");
  try {
    if (dots == std::string::npos) {
      cfg.n_min = cfg.n_max = std::stoi(o.n_range);
    } else {
      cfg.n_min = std::stoi(o.n_range.substr(0, dots));
      cfg.n_max = std::stoi(o.n_range.substr(dots + 2));
    }
  } catch (const std::logic_error&) {
    throw InvalidArgument("bad --n-range '" + o.n_range + "', expected A..B");
  }
  cfg.base_seed = o.seed;
  cfg.out_dir = o.out;
  cfg.units = o.units == "ms" ? TimeUnit::ms : o.units == "min" ? TimeUnit::min : TimeUnit::ns;
  cfg.threads = o.threads;
  if (o.psi.rfind("file:", 0) == 0) cfg.psi.path = o.psi.substr(5);
  else if (o.psi != "golden") throw InvalidArgument("--psi must be golden or file:PATH");
  cfg.format = o.format == "jsonl" ? OutputFormat::jsonl : OutputFormat::csv;
  cfg.support_min = o.support_min;
  cfg.support_max = o.support_max;
  cfg.essential.kind = o.essential == "inf" ? EssentialPolicy::Kind::infinite : EssentialPolicy::Kind::cap;
  cfg.essential.delta = o.delta;
  cfg.validate();
  return cfg;
}

inline std::string out_path(const ExperimentConfig& cfg, const std::string& stem) {
  std::filesystem::create_directories(cfg.out_dir);
  return (std::filesystem::path(cfg.out_dir) / (stem + (cfg.format == OutputFormat::jsonl ? ".jsonl" : ".csv"))).string();
}

inline std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw Error("cannot write " + path);
  return f;
}

inline int run_speedup(const ExperimentConfig& cfg) {
  auto cells = run_speedup_matrix(cfg);
  auto path = out_path(cfg, "speedup");
  auto f = open_out(path);
  write_speedup(f, cells, cfg.units, cfg.format);
  write_speedup(std::cout, cells, cfg.units, OutputFormat::csv);
  std::cerr << "wrote " << path << "\n";
  return 0;
}

inline int run_scaling(const ExperimentConfig& cfg) {
  auto res = run_runtime_scaling(cfg);
  auto rows = out_path(cfg, "scaling_rows");
  auto summary = out_path(cfg, "scaling_summary");
  {
    auto f = open_out(rows);
    write_scaling_rows(f, res, cfg.units, cfg.format);
  }
  {
    auto f = open_out(summary);
    write_scaling_summary(f, res, cfg.units, cfg.format);
  }
  auto svg = (std::filesystem::path(cfg.out_dir) / "scaling.svg").string();
  open_out(svg) << scaling_svg(res);
  write_scaling_summary(std::cout, res, cfg.units, OutputFormat::csv);
  if (res.summary.size() >= 2) {
    std::vector<double> xs, yn, yh;
    for (const auto& s : res.summary) {
      xs.push_back(static_cast<double>(s.support));
      yn.push_back(static_cast<double>(s.naive_median));
      yh.push_back(static_cast<double>(s.harmonic_median));
    }
    std::cout << "slope naive=" << fit_loglog(xs, yn).slope << " harmonic=" << fit_loglog(xs, yh).slope << "\n";
  }
  std::cerr << "wrote " << rows << ", " << summary << ", " << svg << "\n";
  return 0;
}

inline int run_wbench_cmd(const ExperimentConfig& cfg) {
  auto rows = run_wbench(cfg);
  auto path = out_path(cfg, "wbench");
  auto f = open_out(path);
  write_wbench(f, rows, cfg.units, cfg.format);
  write_wbench(std::cout, rows, cfg.units, OutputFormat::csv);
  std::cerr << "wrote " << path << "\n";
  return 0;
}

inline int run_envelope(const Options& o) {
  auto w = envelope_worst(o.c, o.n, o.r);
  std::cout << "c=" << o.c << " N=" << o.n << " r=" << o.r << "\n";
  std::cout << "naive_aggregation " << w.naive_aggregation << "\n";
  std::cout << "harmonic " << w.harmonic.str(12) << "\n";
  std::cout << "naive_wasserstein " << w.naive_wasserstein << "\n";
  std::cout << "certified_wasserstein " << w.certified_wasserstein << "\n";
  std::cout << "ratio " << w.ratio << "\n";
  if (o.n <= 12 && (std::uint64_t{o.c} << o.n) <= 512) {
    std::cout << "average_naive " << envelope_average(o.c, o.n, EnvelopeMode::naive).str(20) << "\n";
    std::cout << "average_certified " << envelope_average(o.c, o.n, EnvelopeMode::certified).str(20) << "\n";
  }
  return 0;
}

inline int run_demo(const ExperimentConfig& cfg) {
  Universe U;
  Model a = cfg.models.front();
  Model b = cfg.models.size() > 1 ? cfg.models[1] : a;
  auto in = build_pair_input(U, cfg, a, b);
  auto psi = load_psi(U, cfg.psi, 1);
  auto mean = mean_aggregate(U, in.gammas);
  Phase pn = evaluate_character(U, psi, mean);
  Phase ph = harmonic_mean_phase(U, in.gammas, psi);
  std::filesystem::create_directories(cfg.out_dir);
  auto path = (std::filesystem::path(cfg.out_dir) / "demo_mean_aggregate.hopd").string();
  open_out(path) << write_document(U, mean, 2);
  std::cout << "models " << model_name(a) << " vs " << model_name(b) << ", m=" << cfg.m << "\n";
  std::cout << "input support " << in.support << ", aggregate support " << mean.size() << "\n";
  std::cout << "explicit phase " << pn.radians() << " rad, harmonic phase " << ph.radians() << " rad, "
            << (pn == ph ? "equal" : "DIFFERENT") << "\n";
  Writer w(U);
  std::vector<RationalDiagram::Term> top(mean.begin(), mean.end());
  std::stable_sort(top.begin(), top.end(), [](const auto& x, const auto& y) {
    return boost::abs(x.second) > boost::abs(y.second);
  });
  if (top.size() > 10) top.resize(10);
  for (const auto& [atom, c] : top) {
    std::cout << "  " << std::setw(8) << Writer::coeff(c) << "  " << w.atom(atom) << "\n";
  }
  std::cerr << "wrote " << path << "\n";
  return pn == ph ? 0 : 1;
}

inline int cli_main(int argc, char** argv) {
  CLI::App app{"hopd_bench: aggregation and Wasserstein benchmarks"};
  app.set_config("--config", "", "key=value config file mirroring the flags");
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--models", o.models, "comma-separated models: er,ws,ba,cm,sbm,chunglu,ksw,girg,hrg,ergm");
    sub->add_option("--m", o.m, "samples per aggregate");
    sub->add_option("--repeats", o.repeats, "timed repeats");
    sub->add_option("--n-range", o.n_range, "ladder range A..B");
    sub->add_option("--seed", o.seed, "base seed");
    sub->add_option("--out", o.out, "output directory");
    sub->add_option("--units", o.units, "time units")->check(CLI::IsMember({"ns", "ms", "min"}));
    sub->add_option("--threads", o.threads, "worker threads outside timed regions")->envname("HOPD_THREADS");
    sub->add_option("--psi", o.psi, "golden or file:PATH");
    sub->add_option("--format", o.format, "csv or jsonl")->check(CLI::IsMember({"csv", "jsonl"}));
    sub->add_option("--support-min", o.support_min, "smallest ladder support");
    sub->add_option("--support-max", o.support_max, "largest ladder support");
    sub->add_option("--essential", o.essential, "essential H1 classes: cap or inf")->check(CLI::IsMember({"cap", "inf"}));
    sub->add_option("--delta", o.delta, "added to the cap for essential classes");
  };

  auto* speedup = app.add_subcommand("speedup", "speedup matrix over model pairs");
  auto* scaling = app.add_subcommand("scaling", "runtime against support size");
  auto* wbench = app.add_subcommand("wbench", "naive against certified Wasserstein");
  auto* envelope = app.add_subcommand("envelope", "worst and average case envelopes");
  auto* demo = app.add_subcommand("demo", "one mean aggregate, printed and saved");
  for (auto* s : {speedup, scaling, wbench, demo}) common(s);
  envelope->add_option("--c", o.c, "components")->check(CLI::PositiveNumber);
  envelope->add_option("--n", o.n, "depth")->check(CLI::PositiveNumber);
  envelope->add_option("--r", o.r, "order dimension")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return 2;
  }

  ExperimentConfig cfg;
  try {
    if (!envelope->parsed()) cfg = to_config(o);
  } catch (const Error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (speedup->parsed()) return run_speedup(cfg);
    if (scaling->parsed()) return run_scaling(cfg);
    if (wbench->parsed()) return run_wbench_cmd(cfg);
    if (envelope->parsed()) return run_envelope(o);
    if (demo->parsed()) return run_demo(cfg);
  } catch (const InvalidArgument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

} // namespace hopd::cli
