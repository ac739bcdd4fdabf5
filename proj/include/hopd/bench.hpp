#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iomanip>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"

#include "hopd/aggregation.hpp"
#include "hopd/filtration.hpp"
#include "hopd/graphgen.hpp"
#include "hopd/harmonic.hpp"
#include "hopd/serialize.hpp"
#include "hopd/synthetic.hpp"
#include "hopd/wasserstein.hpp"

namespace hopd {

enum class TimeUnit { ns, ms, min };
enum class OutputFormat { csv, jsonl };

inline std::string unit_name(TimeUnit u) { return u == TimeUnit::ns ? "ns" : u == TimeUnit::ms ? "ms" : "min"; }

inline double convert_ns(std::int64_t ns, TimeUnit u) {
  switch (u) {
  case TimeUnit::ns: return static_cast<double>(ns);
  case TimeUnit::ms: return static_cast<double>(ns) / 1e6;
  case TimeUnit::min: return static_cast<double>(ns) / 6e10;
  }
  return 0;
}

/// Where psi comes from: golden hashing of ids, or a file of atom angles
/// (unlisted atoms fall back to golden hashing).
struct PsiSource {
  std::optional<std::string> path;
};

struct ExperimentConfig {
  std::vector<Model> models{Model::er, Model::ws};
  int m = 30;
  int repeats = 30;
  int n_min = 0, n_max = 30;
  std::uint64_t base_seed = 20260502;
  std::string out_dir = ".";
  TimeUnit units = TimeUnit::ns;
  int threads = 1;
  PsiSource psi;
  OutputFormat format = OutputFormat::csv;
  double support_min = 1e2, support_max = 1e5;
  EssentialPolicy essential;
  ModelSpec spec_overrides;  // n and parameters other than the model id

  void validate() const {
    if (models.empty()) throw InvalidArgument("no models selected");
    if (m < 1) throw InvalidArgument("m must be >= 1");
    if (repeats < 1) throw InvalidArgument("repeats must be >= 1");
    if (n_min < 0 || n_max < n_min) throw InvalidArgument("bad N range");
    if (threads < 1) throw InvalidArgument("threads must be >= 1");
    if (!(support_min >= 1) || support_max < support_min) throw InvalidArgument("bad support range");
  }
};

enum class Method { naive, harmonic };

struct TimingRecord {
  Method method = Method::naive;
  std::size_t support = 0;
  std::int64_t elapsed_ns = 0;
  std::uint64_t pairs_visited = 0;
  std::uint64_t transform_ops = 0;
};

template <class F> std::int64_t time_ns(F&& f) {
  auto t0 = std::chrono::steady_clock::now();
  f();
  auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count();
}

inline std::int64_t median(std::vector<std::int64_t> xs) {
  std::sort(xs.begin(), xs.end());
  if (xs.empty()) return 0;
  std::size_t k = xs.size() / 2;
  return xs.size() % 2 ? xs[k] : (xs[k - 1] + xs[k]) / 2;
}

/// Runs fn(i) for i in [0, n) on up to `threads` workers.
inline void parallel_for(int threads, std::size_t n, const std::function<void(std::size_t)>& fn) {
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::jthread> pool;
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(threads);
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i; (i = next++) < n;) fn(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  pool.clear();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

/// psi file: `hopd-psi v1 level=<n> r0=<r>` then `<atom> <angle in radians>` per line.
inline CoboundaryCharacter load_psi(Universe& U, const PsiSource& src, int level) {
  if (!src.path) return CoboundaryCharacter::golden(level);
  std::ifstream in(*src.path);
  if (!in) throw Error("cannot open psi file " + *src.path);
  std::string header;
  std::getline(in, header);
  std::istringstream hs(header);
  std::string magic, version, tok;
  hs >> magic >> version;
  if (magic != "hopd-psi" || version != "v1") throw ParseError("bad psi header");
  int file_level = 1, r0 = 1;
  while (hs >> tok) {
    if (tok.rfind("level=", 0) == 0) file_level = std::stoi(tok.substr(6));
    else if (tok.rfind("r0=", 0) == 0) r0 = std::stoi(tok.substr(3));
  }
  if (file_level != level || r0 != U.ground_dim()) throw ParseError("psi file level or r0 mismatch");
  absl::flat_hash_map<AtomId, Phase> table;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto cut = line.find_last_of(' ');
    if (cut == std::string::npos) throw ParseError("bad psi line: " + line);
    Parser p(U, std::string_view(line).substr(0, cut));
    AtomId a = p.atom(level);
    p.finish();
    table[a] = Phase::from_radians(std::stod(line.substr(cut + 1)));
  }
  return CoboundaryCharacter::from_table(level, std::move(table), true);
}

/// Per-sample persistence pairs, computed outside any timed region.
inline std::vector<PersistencePair> sample_pairs(const ModelSpec& spec, std::uint64_t seed, const EssentialPolicy& pol) {
  auto g = generate(spec, seed);
  return h1_pairs(build_clique_filtration(g.graph, true), pol);
}

struct AggregateInput {
  std::vector<VirtualDiagram> gammas;
  std::size_t support = 0;
};

/// Gamma_k = D(G_k) - D(H_k). Self-pairs draw H from sample indices m..2m-1.
inline AggregateInput build_pair_input(Universe& U, const ExperimentConfig& cfg, Model a, Model b) {
  ModelSpec sa = cfg.spec_overrides, sb = cfg.spec_overrides;
  sa.model = a;
  sb.model = b;
  const std::size_t m = cfg.m;
  const std::uint64_t offset = a == b ? m : 0;
  std::vector<std::vector<PersistencePair>> g(m), h(m);
  parallel_for(cfg.threads, 2 * m, [&](std::size_t i) {
    if (i < m) g[i] = sample_pairs(sa, seed_for(model_index(a), i), cfg.essential);
    else h[i - m] = sample_pairs(sb, seed_for(model_index(b), i - m + offset), cfg.essential);
  });
  AggregateInput in;
  for (std::size_t k = 0; k < m; ++k) {
    auto x = to_virtual(U, pairs_to_diagram(U, g[k]));
    auto y = to_virtual(U, pairs_to_diagram(U, h[k]));
    x -= y;
    if (x.empty()) x = VirtualDiagram(1);
    in.support += x.size();
    in.gammas.push_back(std::move(x));
  }
  return in;
}

/// Explicit path: materialize the mean aggregate, then evaluate chi_psi on it.
inline Phase naive_mean_phase(Universe& U, const std::vector<VirtualDiagram>& gammas, const CoboundaryCharacter& psi,
                              AggregateStats* st = nullptr) {
  auto mean = mean_aggregate(U, gammas, {}, st);
  return evaluate_character(U, psi, mean);
}

/// Fast path: sum of per-sample coboundary phases, divided by m.
inline Phase harmonic_mean_phase(const Universe& U, const std::vector<VirtualDiagram>& gammas,
                                 const CoboundaryCharacter& psi, HarmonicStats* st = nullptr) {
  HarmonicWorkspace ws;
  RawPhase s = 0;
  for (const auto& g : gammas) s += harmonic_eval_raw(U, g, psi, st, &ws);
  return Phase::reduce(floor_div(s, static_cast<std::int64_t>(gammas.size())));
}

class OracleMismatch : public Error {
public:
  using Error::Error;
};

struct SpeedupCell {
  std::string model_a, model_b;
  int m = 0;
  std::size_t support = 0;
  std::int64_t t_naive_ns = 0, t_harmonic_ns = 0;
  double speedup = 0;
  TimingRecord naive, harmonic;
};

inline std::vector<std::pair<Model, Model>> model_pairs(const std::vector<Model>& ms) {
  std::vector<std::pair<Model, Model>> out;
  if (ms.size() == 1) return {{ms[0], ms[0]}};
  for (std::size_t i = 0; i < ms.size(); ++i)
    for (std::size_t j = i + 1; j < ms.size(); ++j) out.emplace_back(ms[i], ms[j]);
  return out;
}

/// One cell: untimed warm-up with the oracle check, then the median of
/// `repeats` timed runs for each method.
inline SpeedupCell speedup_cell(const ExperimentConfig& cfg, Model a, Model b) {
  Universe U;
  auto in = build_pair_input(U, cfg, a, b);
  auto psi = load_psi(U, cfg.psi, 1);
  AggregateStats ast;
  HarmonicStats hst;
  Phase pn = naive_mean_phase(U, in.gammas, psi, &ast);
  Phase ph = harmonic_mean_phase(U, in.gammas, psi, &hst);
  if (circular_distance(pn, ph) > 1e-9)
    throw OracleMismatch("harmonic and explicit phases differ for " + std::string(model_name(a)) + "/" +
                         std::string(model_name(b)));
  std::vector<std::int64_t> tn, th;
  for (int r = 0; r < cfg.repeats; ++r) {
    tn.push_back(time_ns([&] { pn = naive_mean_phase(U, in.gammas, psi); }));
    th.push_back(time_ns([&] { ph = harmonic_mean_phase(U, in.gammas, psi); }));
    if (pn != ph) throw OracleMismatch("phase changed between repeats");
  }
  SpeedupCell c;
  c.model_a = model_name(a);
  c.model_b = model_name(b);
  c.m = cfg.m;
  c.support = in.support;
  c.t_naive_ns = median(tn);
  c.t_harmonic_ns = median(th);
  c.speedup = static_cast<double>(c.t_naive_ns) / std::max<std::int64_t>(1, c.t_harmonic_ns);
  c.naive = {Method::naive, in.support, c.t_naive_ns, ast.pairs_visited, 0};
  c.harmonic = {Method::harmonic, in.support, c.t_harmonic_ns, 0, hst.dominance.ops};
  return c;
}

inline std::vector<SpeedupCell> run_speedup_matrix(const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<SpeedupCell> out;
  for (auto [a, b] : model_pairs(cfg.models)) out.push_back(speedup_cell(cfg, a, b));
  return out;
}

struct ScalingRow {
  int N = 0, repeat = 0;
  std::size_t support = 0;
  std::int64_t t_naive_ns = 0, t_harmonic_ns = 0;
  std::uint64_t pairs_visited = 0, transform_ops = 0;
};

struct ScalingSummary {
  int N = 0;
  std::size_t support = 0;
  std::int64_t naive_min = 0, naive_median = 0, naive_max = 0;
  std::int64_t harmonic_min = 0, harmonic_median = 0, harmonic_max = 0;
};

struct ScalingResult {
  std::vector<ScalingRow> rows;
  std::vector<ScalingSummary> summary;
};

/// Support size for ladder index N: log-uniform from support_min at n_min
/// to support_max at n_max.
inline std::size_t ladder_support(const ExperimentConfig& cfg, int N) {
  if (cfg.n_max == cfg.n_min) return static_cast<std::size_t>(std::llround(cfg.support_min));
  double t = static_cast<double>(N - cfg.n_min) / (cfg.n_max - cfg.n_min);
  return static_cast<std::size_t>(std::llround(std::exp(std::log(cfg.support_min) + t * std::log(cfg.support_max / cfg.support_min))));
}

/// Every (N, repeat) draws a fresh windowed input in its own universe and
/// times one cold run of each method; the row is kept only if both phases agree.
inline ScalingResult run_runtime_scaling(const ExperimentConfig& cfg, const std::vector<int>& Ns = {}) {
  cfg.validate();
  std::vector<int> grid = Ns;
  if (grid.empty())
    for (int N = cfg.n_min; N <= cfg.n_max; ++N) grid.push_back(N);
  ScalingResult res;
  for (int N : grid) {
    std::size_t support = ladder_support(cfg, N);
    ScalingSummary s;
    s.N = N;
    s.support = support;
    std::vector<std::int64_t> tn, th;
    for (int r = 0; r < cfg.repeats; ++r) {
      Universe U;
      Pcg32 rng(cfg.base_seed + 1000003ull * (N + 1) + 9176ull * (r + 1), 7);
      auto xi = windowed_virtual(U, rng, support);
      auto psi = load_psi(U, cfg.psi, 1);
      AggregateStats ast;
      HarmonicStats hst;
      Phase pn, ph;
      std::int64_t a = time_ns([&] { pn = evaluate_character(U, psi, naive_self_aggregate(U, xi, {}, &ast)); });
      std::int64_t b = time_ns([&] { ph = harmonic_eval(U, xi, psi, &hst); });
      if (pn != ph) throw OracleMismatch("harmonic and explicit phases differ at N=" + std::to_string(N));
      res.rows.push_back({N, r, support, a, b, ast.pairs_visited, hst.dominance.ops});
      tn.push_back(a);
      th.push_back(b);
    }
    s.naive_min = *std::min_element(tn.begin(), tn.end());
    s.naive_max = *std::max_element(tn.begin(), tn.end());
    s.naive_median = median(tn);
    s.harmonic_min = *std::min_element(th.begin(), th.end());
    s.harmonic_max = *std::max_element(th.begin(), th.end());
    s.harmonic_median = median(th);
    res.summary.push_back(s);
  }
  return res;
}

struct LogLogFit {
  double slope = 0, intercept = 0;
};

/// Least squares fit of log y against log x.
inline LogLogFit fit_loglog(const std::vector<double>& xs, const std::vector<double>& ys) {
  const std::size_t n = xs.size();
  if (n < 2 || ys.size() != n) throw InvalidArgument("need at least two points to fit");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double x = std::log(xs[i]), y = std::log(std::max(ys[i], 1.0));
    sx += x, sy += y, sxx += x * x, sxy += x * y;
  }
  double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return {slope, (sy - slope * sx) / n};
}

struct WbenchRow {
  int instance = 0;
  double p = 1;
  std::size_t atoms_left = 0, atoms_right = 0;
  std::int64_t naive_ns = 0, certified_ns = 0;
  WassersteinCounters naive, certified;
  double distance = 0;
};

/// Naive against certified W_p on random level-2 pairs (approximate
/// diagonal mode). Rows are emitted only when both distances agree.
inline std::vector<WbenchRow> run_wbench(const ExperimentConfig& cfg, const std::vector<double>& ps = {1, 2, kInf},
                                         int max_atoms = 5) {
  cfg.validate();
  std::vector<WbenchRow> out;
  for (int i = 0; i < cfg.repeats; ++i) {
    Universe U;
    Pcg32 rng(cfg.base_seed + 7919ull * (i + 1), 11);
    DiagramId G = random_level2_diagram(U, rng, max_atoms);
    DiagramId L = random_level2_diagram(U, rng, max_atoms);
    for (double p : ps) {
      WbenchRow row;
      row.instance = i;
      row.p = p;
      row.atoms_left = U.diagram(G).entries.size();
      row.atoms_right = U.diagram(L).entries.size();
      double dn = 0, dc = 0;
      row.naive_ns = time_ns([&] { dn = naive_wasserstein(U, G, L, p, DiagonalConfig::approximate(), &row.naive); });
      row.certified_ns =
          time_ns([&] { dc = certified_wasserstein(U, G, L, p, DiagonalConfig::approximate(), &row.certified); });
      if (std::abs(dn - dc) > 1e-9) throw OracleMismatch("naive and certified distances differ");
      row.distance = dc;
      out.push_back(row);
    }
  }
  return out;
}

namespace detail {

inline std::string csv_value(double x) {
  std::ostringstream os;
  os << std::setprecision(10) << x;
  return os.str();
}

inline std::string time_value(std::int64_t ns, TimeUnit u) {
  return u == TimeUnit::ns ? std::to_string(ns) : csv_value(convert_ns(ns, u));
}

inline nlohmann::json time_json(std::int64_t ns, TimeUnit u) {
  if (u == TimeUnit::ns) return ns;
  return convert_ns(ns, u);
}

inline std::string p_name(double p) { return p == kInf ? "inf" : csv_value(p); }

} // namespace detail

inline void write_speedup(std::ostream& os, const std::vector<SpeedupCell>& cells, TimeUnit u, OutputFormat f) {
  const std::string un = unit_name(u);
  if (f == OutputFormat::csv) {
    os << "model_a,model_b,m,support,t_naive_" << un << ",t_harmonic_" << un << ",speedup\n";
    for (const auto& c : cells)
      os << c.model_a << ',' << c.model_b << ',' << c.m << ',' << c.support << ','
         << detail::time_value(c.t_naive_ns, u) << ',' << detail::time_value(c.t_harmonic_ns, u) << ','
         << detail::csv_value(c.speedup) << '\n';
    return;
  }
  for (const auto& c : cells) {
    nlohmann::ordered_json j;
    j["model_a"] = c.model_a;
    j["model_b"] = c.model_b;
    j["m"] = c.m;
    j["support"] = c.support;
    j["t_naive_" + un] = detail::time_json(c.t_naive_ns, u);
    j["t_harmonic_" + un] = detail::time_json(c.t_harmonic_ns, u);
    j["speedup"] = c.speedup;
    j["pairs_visited"] = c.naive.pairs_visited;
    j["transform_ops"] = c.harmonic.transform_ops;
    os << j.dump() << '\n';
  }
}

inline void write_scaling_rows(std::ostream& os, const ScalingResult& r, TimeUnit u, OutputFormat f) {
  const std::string un = unit_name(u);
  if (f == OutputFormat::csv) {
    os << "N,repeat,support,t_naive_" << un << ",t_harmonic_" << un << ",pairs_visited,transform_ops\n";
    for (const auto& x : r.rows)
      os << x.N << ',' << x.repeat << ',' << x.support << ',' << detail::time_value(x.t_naive_ns, u) << ','
         << detail::time_value(x.t_harmonic_ns, u) << ',' << x.pairs_visited << ',' << x.transform_ops << '\n';
    return;
  }
  for (const auto& x : r.rows) {
    nlohmann::ordered_json j;
    j["N"] = x.N;
    j["repeat"] = x.repeat;
    j["support"] = x.support;
    j["t_naive_" + un] = detail::time_json(x.t_naive_ns, u);
    j["t_harmonic_" + un] = detail::time_json(x.t_harmonic_ns, u);
    j["pairs_visited"] = x.pairs_visited;
    j["transform_ops"] = x.transform_ops;
    os << j.dump() << '\n';
  }
}

inline void write_scaling_summary(std::ostream& os, const ScalingResult& r, TimeUnit u, OutputFormat f) {
  const std::string un = unit_name(u);
  const char* names[] = {"naive_min_", "naive_median_", "naive_max_", "harmonic_min_", "harmonic_median_", "harmonic_max_"};
  auto values = [](const ScalingSummary& s) {
    return std::array<std::int64_t, 6>{s.naive_min,    s.naive_median,    s.naive_max,
                                       s.harmonic_min, s.harmonic_median, s.harmonic_max};
  };
  if (f == OutputFormat::csv) {
    os << "N,support";
    for (auto n : names) os << ',' << n << un;
    os << '\n';
    for (const auto& s : r.summary) {
      os << s.N << ',' << s.support;
      for (auto v : values(s)) os << ',' << detail::time_value(v, u);
      os << '\n';
    }
    return;
  }
  for (const auto& s : r.summary) {
    nlohmann::ordered_json j;
    j["N"] = s.N;
    j["support"] = s.support;
    auto v = values(s);
    for (int i = 0; i < 6; ++i) j[std::string(names[i]) + un] = detail::time_json(v[i], u);
    os << j.dump() << '\n';
  }
}

inline void write_wbench(std::ostream& os, const std::vector<WbenchRow>& rows, TimeUnit u, OutputFormat f) {
  const std::string un = unit_name(u);
  if (f == OutputFormat::csv) {
    os << "instance,p,atoms_left,atoms_right,t_naive_" << un << ",t_certified_" << un
       << ",naive_expansions,certified_expansions,prunes,memo_hits,distance\n";
    for (const auto& r : rows)
      os << r.instance << ',' << detail::p_name(r.p) << ',' << r.atoms_left << ',' << r.atoms_right << ','
         << detail::time_value(r.naive_ns, u) << ',' << detail::time_value(r.certified_ns, u) << ','
         << r.naive.expansions << ',' << r.certified.expansions << ',' << r.certified.prunes << ','
         << r.certified.memo_hits << ',' << detail::csv_value(r.distance) << '\n';
    return;
  }
  for (const auto& r : rows) {
    nlohmann::ordered_json j;
    j["instance"] = r.instance;
    j["p"] = detail::p_name(r.p);
    j["atoms_left"] = r.atoms_left;
    j["atoms_right"] = r.atoms_right;
    j["t_naive_" + un] = detail::time_json(r.naive_ns, u);
    j["t_certified_" + un] = detail::time_json(r.certified_ns, u);
    j["naive_expansions"] = r.naive.expansions;
    j["certified_expansions"] = r.certified.expansions;
    j["prunes"] = r.certified.prunes;
    j["memo_hits"] = r.certified.memo_hits;
    j["distance"] = r.distance;
    os << j.dump() << '\n';
  }
}

/// Log-log line chart of median times with min/max bands.
inline std::string scaling_svg(const ScalingResult& r) {
  const double W = 640, H = 420, L = 70, R = 20, T = 20, B = 50;
  double xmin = 1e300, xmax = 0, ymin = 1e300, ymax = 0;
  for (const auto& s : r.summary) {
    double x = std::log10(std::max<std::size_t>(1, s.support));
    xmin = std::min(xmin, x), xmax = std::max(xmax, x);
    for (auto v : {s.naive_min, s.naive_max, s.harmonic_min, s.harmonic_max}) {
      double y = std::log10(std::max<std::int64_t>(1, v));
      ymin = std::min(ymin, y), ymax = std::max(ymax, y);
    }
  }
  if (r.summary.empty()) xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  if (xmax == xmin) xmax = xmin + 1;
  if (ymax == ymin) ymax = ymin + 1;
  auto px = [&](double x) { return L + (x - xmin) / (xmax - xmin) * (W - L - R); };
  auto py = [&](double y) { return H - B - (y - ymin) / (ymax - ymin) * (H - T - B); };
  auto pt = [&](std::size_t s, std::int64_t v) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(1) << px(std::log10(std::max<std::size_t>(1, s))) << ','
       << py(std::log10(std::max<std::int64_t>(1, v)));
    return os.str();
  };
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"" << H - 15 << "\" text-anchor=\"middle\" font-size=\"12\">log10 support</text>\n";
  os << "<text x=\"15\" y=\"" << H / 2 << "\" font-size=\"12\" transform=\"rotate(-90 15 " << H / 2
     << ")\" text-anchor=\"middle\">log10 time (ns)</text>\n";
  struct Series {
    const char* name;
    const char* color;
    std::int64_t ScalingSummary::*lo, ScalingSummary::*mid, ScalingSummary::*hi;
  };
  Series series[] = {{"naive", "#c0392b", &ScalingSummary::naive_min, &ScalingSummary::naive_median, &ScalingSummary::naive_max},
                     {"harmonic", "#2471a3", &ScalingSummary::harmonic_min, &ScalingSummary::harmonic_median,
                      &ScalingSummary::harmonic_max}};
  int legend = 0;
  for (const auto& s : series) {
    os << "<polygon fill=\"" << s.color << "\" fill-opacity=\"0.2\" stroke=\"none\" points=\"";
    for (const auto& x : r.summary) os << pt(x.support, x.*(s.hi)) << ' ';
    for (auto it = r.summary.rbegin(); it != r.summary.rend(); ++it) os << pt(it->support, (*it).*(s.lo)) << ' ';
    os << "\"/>\n<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"2\" points=\"";
    for (const auto& x : r.summary) os << pt(x.support, x.*(s.mid)) << ' ';
    os << "\"/>\n";
    os << "<text x=\"" << L + 10 << "\" y=\"" << T + 15 + 15 * legend++ << "\" fill=\"" << s.color
       << "\" font-size=\"12\">" << s.name << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

} // namespace hopd
