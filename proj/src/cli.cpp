#include "fdiv/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "fdiv/complexity.hpp"
#include "fdiv/discrete_dist.hpp"
#include "fdiv/divergence.hpp"
#include "fdiv/errors.hpp"
#include "fdiv/estimate.hpp"
#include "fdiv/generator.hpp"
#include "fdiv/online/game.hpp"
#include "fdiv/parallel.hpp"
#include "fdiv/report.hpp"
#include "fdiv/sampler.hpp"
#include "fdiv/witness.hpp"

namespace fdv {

namespace {

using nlohmann::json;

struct UsageError : Error {
  explicit UsageError(const std::string& msg) : Error("usage", msg, true) {}
};

// Writes to --out when given, otherwise to the caller's stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : os_(&fallback) {
    if (path.empty()) return;
    file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
    if (!*file_) throw Error("io_write", "cannot write " + path, false);
    os_ = file_.get();
  }
  std::ostream& operator*() { return *os_; }
  void close() {
    if (file_) {
      file_->close();
      if (!*file_) throw Error("io_write", "write failed", false);
    }
  }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* os_;
};

std::string cell(const std::optional<double>& v) { return v ? fmt(*v) : std::string(); }

std::string param_cell(const Generator& g) {
  return g.kind() == GeneratorKind::Renyi || g.kind() == GeneratorKind::EGamma ? fmt(g.param())
                                                                              : std::string();
}

json opt_json(const std::optional<double>& v) { return v ? json_real(*v) : json(nullptr); }

std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  std::replace(s.begin(), s.end(), '\r', ' ');
  return s;
}

// ------------------------------------------------------------------ options

struct Options {
  std::string gen;
  std::string nu, mu, p;
  std::string out, summary;
  std::vector<double> eps_list;
  std::vector<double> n_list;
  std::vector<std::int64_t> sizes;
  std::vector<std::string> bounds;
  std::optional<double> D, eps, delta, sigma, zeta, T_real, d_real, n_real;
  std::string construction = "bernoulli";
  std::int64_t T = 1000;
  std::int64_t seeds = 1;
  std::int64_t grid = 512;
  std::uint64_t seed = 0;
  std::string learner = "ftpl";
  std::string adversary = "smooth_iid";
  double online_sigma = 0.1;
  double eta = -1.0;
  std::int64_t m = 64;
  bool preset = false;
  double c = 2.0;
  std::int64_t playout_n = 1;
  double noise = 0.1;
  double window = 0.125;
  int K = 4;
  std::optional<double> atom_delta;
  int replicates = 50;
  std::optional<double> est_eps;
  std::int64_t block = 0;
  std::int64_t coupling_T = 100;
  double coupling_eps = 0.1;
  double coupling_delta = 0.01;
};

// ----------------------------------------------------------------- commands

void cmd_div(const Options& o, std::ostream& out) {
  Generator g = Generator::parse(o.gen);
  DiscreteDist nu = load_dist(o.nu);
  DiscreteDist mu = load_dist(o.mu);
  double d = divergence(g, nu, mu);
  json config = {{"command", "div"}, {"gen", g.name()}, {"nu", o.nu}, {"mu", o.mu}};
  Sink sink(o.out, out);
  write_json_report(*sink, config, {{"divergence", json_real(d)}});
  sink.close();
}

void cmd_complexity(const Options& o, std::ostream& out) {
  Generator g = Generator::parse(o.gen);
  std::optional<std::int64_t> T, d;
  if (o.T_real) {
    require(*o.T_real >= 1 && std::floor(*o.T_real) == *o.T_real, "T must be a positive integer");
    T = static_cast<std::int64_t>(*o.T_real);
  }
  if (o.d_real) {
    require(*o.d_real >= 1 && std::floor(*o.d_real) == *o.d_real, "d must be a positive integer");
    d = static_cast<std::int64_t>(*o.d_real);
  }

  struct Row {
    std::string name;
    double value;
  };
  const std::vector<std::string> all = {"upper_bound_n",  "lower_bound_n",   "lower_bound_tv",
                                        "coupling_n",     "regret_minimax",  "regret_improper",
                                        "regret_ftpl"};
  auto has_inputs = [&](const std::string& b) {
    if (b == "upper_bound_n" || b == "lower_bound_n") return o.D && o.eps;
    if (b == "lower_bound_tv") return o.D && o.n_real && o.zeta;
    if (b == "coupling_n") return o.sigma && o.eps && o.delta && T;
    return o.sigma.has_value() && T.has_value();
  };
  // lower_bound_n reads the divergence level from --D; its regime is
  // eps <= 1/4 and D > 2 f(1/2).
  auto in_regime = [&](const std::string& b) {
    if (b != "lower_bound_n") return true;
    return *o.eps <= 0.25 && *o.D > 2.0 * g.f(0.5);
  };
  std::vector<std::string> wanted;
  if (o.bounds.empty()) {
    for (const auto& b : all) {
      if (has_inputs(b) && in_regime(b)) wanted.push_back(b);
    }
  } else {
    for (const auto& b : o.bounds) {
      if (std::find(all.begin(), all.end(), b) == all.end()) {
        throw UsageError("unknown bound '" + b + "'");
      }
      if (!has_inputs(b)) throw UsageError("missing parameters for " + b);
      wanted.push_back(b);
    }
  }
  std::vector<Row> rows;
  std::optional<RegretBounds> regret;
  for (const auto& b : wanted) {
    if (b == "upper_bound_n") rows.push_back({b, upper_bound_n(g, *o.D, *o.eps)});
    if (b == "lower_bound_n") rows.push_back({b, lower_bound_n(g, *o.D, *o.eps)});
    if (b == "lower_bound_tv") rows.push_back({b, lower_bound_tv(g, *o.D, *o.n_real, *o.zeta)});
    if (b == "coupling_n") rows.push_back({b, coupling_n(g, *o.sigma, *o.eps, *o.delta, *T)});
    if (b.rfind("regret_", 0) == 0) {
      if (!regret) regret = regret_bounds(BoundQuery{g, *o.sigma, *T, d.value_or(1)});
      if (b == "regret_minimax") rows.push_back({b, regret->minimax});
      if (b == "regret_improper") rows.push_back({b, regret->improper});
      if (b == "regret_ftpl") rows.push_back({b, regret->ftpl});
    }
  }
  if (rows.empty()) throw UsageError("no bound has all of its parameters set");

  json config = {{"command", "complexity"}, {"gen", g.name()}, {"D", opt_json(o.D)},
                 {"eps", opt_json(o.eps)},  {"delta", opt_json(o.delta)},
                 {"sigma", opt_json(o.sigma)}, {"T", opt_json(o.T_real)},
                 {"d", opt_json(o.d_real)}, {"n", opt_json(o.n_real)},
                 {"zeta", opt_json(o.zeta)}, {"bound", o.bounds}};
  Sink sink(o.out, out);
  CsvWriter csv(*sink, config,
                {"kind", "param", "D", "eps", "delta", "sigma", "T", "d", "bound_name", "value"});
  for (const auto& r : rows) {
    csv.row({g.kind_name(), param_cell(g), cell(o.D), cell(o.eps), cell(o.delta), cell(o.sigma),
             T ? fmt(*T) : "", d ? fmt(*d) : "", r.name, fmt(r.value)});
  }
  sink.close();
}

void cmd_sample_verify(const Options& o, std::ostream& out) {
  Generator g = Generator::parse(o.gen);
  DiscreteDist nu = load_dist(o.nu);
  DiscreteDist mu = load_dist(o.mu);
  std::vector<double> eps = o.eps_list.empty() ? std::vector<double>{0.3, 0.2, 0.1} : o.eps_list;
  double D = divergence(g, nu, mu);
  if (!std::isfinite(D)) throw UnboundedTruncation("divergence is infinite; no plan exists");

  struct Row {
    double eps, M;
    std::int64_t n;
    double tv;
  };
  std::vector<Row> rows;
  for (double e : eps) {
    SamplerPlan plan = make_plan(g, D, e);
    OutputLaw law = exact_output_law(nu, mu, plan.M, plan.n);
    rows.push_back({e, plan.M, plan.n, law.tv_to_target});
  }

  json config = {{"command", "sample verify"}, {"gen", g.name()}, {"nu", o.nu},
                 {"mu", o.mu},                 {"eps", eps}};
  Sink sink(o.out, out);
  CsvWriter csv(*sink, config, {"eps", "D", "M", "n", "tv_exact", "tv_bound_ok"});
  for (const auto& r : rows) {
    csv.row({fmt(r.eps), fmt(D), fmt(r.M), fmt(r.n), fmt(r.tv), fmt(r.tv <= r.eps)});
  }
  sink.close();
}

void cmd_witness(const Options& o, std::ostream& out) {
  Generator g = Generator::parse(o.gen);
  struct Row {
    std::string eps, n, zeta, delta, what;
    double value;
  };
  std::vector<Row> rows;
  std::vector<double> eps = o.eps_list.empty() ? std::vector<double>{0.1} : o.eps_list;
  std::vector<double> ns = o.n_list.empty() ? std::vector<double>{8} : o.n_list;

  if (o.construction == "bernoulli") {
    for (double e : eps) {
      for (double nd : ns) {
        require(nd >= 1 && std::floor(nd) == nd, "witness n must be a positive integer");
        int n = static_cast<int>(nd);
        BernoulliWitness w = bernoulli_witness(g, e, n);
        ClampResult c = clamp_projection(w.nu, w.mu, static_cast<double>(n));
        std::string es = fmt(e), nstr = fmt(static_cast<std::int64_t>(n));
        rows.push_back({es, nstr, "", "", "e_n", w.e_n});
        rows.push_back({es, nstr, "", "", "divergence", w.divergence});
        rows.push_back({es, nstr, "", "", "divergence_bound", w.df_bound});
        rows.push_back({es, nstr, "", "", "min_tv_ratio_le_n", c.tv_min});
      }
    }
  } else if (o.construction == "linear") {
    for (double e : eps) {
      LinearWitness w = linear_witness(g, e);
      rows.push_back({fmt(e), "", "", "", "divergence", w.df_value});
      rows.push_back({fmt(e), "", "", "", "tv_floor", w.tv_floor});
    }
  } else if (o.construction == "superlinear") {
    double zeta = o.zeta.value_or(1.0);
    double delta = o.delta.value_or(1.0);
    SuperlinearWitness w = superlinear_witness(g, zeta, delta);
    std::string zs = fmt(zeta), ds = fmt(delta);
    rows.push_back({"", "", zs, ds, "quadrature_mean", w.quadrature_mean});
    rows.push_back({"", "", zs, ds, "full_mean", w.full_mean});
    rows.push_back({"", "", zs, ds, "divergence_upper", w.df_upper});
    rows.push_back({"", "", zs, ds, "growth_threshold", w.growth_threshold});
    rows.push_back({"", "", zs, ds, "t0", w.law.t0()});
    for (double n : ns) {
      require(n >= 1.0, "witness n must be at least 1");
      std::string nstr = fmt(n);
      rows.push_back({"", nstr, zs, ds, "e_n_lower", w.e_n_lower(n)});
      rows.push_back({"", nstr, zs, ds, "e_n_exact", w.e_n_exact(n)});
      rows.push_back({"", nstr, zs, ds, "packaged_bound", w.packaged_bound(n)});
    }
  } else {
    throw UsageError("unknown construction '" + o.construction + "'");
  }

  json config = {{"command", "witness"}, {"construction", o.construction}, {"gen", g.name()},
                 {"eps", eps},           {"n", ns},
                 {"zeta", opt_json(o.zeta)}, {"delta", opt_json(o.delta)}};
  Sink sink(o.out, out);
  CsvWriter csv(*sink, config,
                {"construction", "generator", "eps", "n", "zeta", "delta", "certified_quantity",
                 "value"});
  for (const auto& r : rows) {
    csv.row({o.construction, g.name(), r.eps, r.n, r.zeta, r.delta, r.what, fmt(r.value)});
  }
  sink.close();
}

LearnerKind parse_learner(const std::string& s) {
  if (s == "ftpl") return LearnerKind::ftpl;
  if (s == "relaxation") return LearnerKind::relaxation;
  if (s == "ftl") return LearnerKind::ftl;
  throw UsageError("unknown learner '" + s + "'");
}

AdversaryKind parse_adversary(const std::string& s) {
  if (s == "smooth_iid") return AdversaryKind::smooth_iid;
  if (s == "atom_mixture") return AdversaryKind::atom_mixture;
  if (s == "adaptive_greedy") return AdversaryKind::adaptive_greedy;
  throw UsageError("unknown adversary '" + s + "'");
}

void cmd_online_run(const Options& o, std::ostream& out) {
  require(o.T >= 1, "T must be positive");
  require(o.seeds >= 1, "seeds must be positive");
  AdversarySpec adv;
  adv.kind = parse_adversary(o.adversary);
  adv.generator = Generator::parse(o.gen.empty() ? "renyi:2" : o.gen);
  adv.sigma = o.online_sigma;
  adv.noise = o.noise;
  adv.window = o.window;
  adv.delta = o.atom_delta;
  adv.K = o.K;
  LearnerSpec ls;
  ls.kind = parse_learner(o.learner);
  ls.eta = o.eta;
  ls.m = o.m;
  ls.preset = o.preset;
  ls.c = o.c;
  ls.playout_n = o.playout_n;

  std::unique_ptr<ContextGrid> grid;
  if (o.mu.empty()) {
    require(o.grid >= 2, "grid needs at least 2 points");
    grid = std::make_unique<ContextGrid>(static_cast<std::size_t>(o.grid));
  } else {
    grid = std::make_unique<ContextGrid>(load_dist(o.mu));
  }

  std::vector<RegretTrace> traces(static_cast<std::size_t>(o.seeds));
  parallel_for(traces.size(), [&](std::size_t i) {
    std::uint64_t s = child_seed(o.seed, "online/run", i);
    traces[i] = run_game(o.T, adv, ls, *grid, s);
  });

  std::vector<double> regrets;
  double calls = 0.0;
  for (const auto& t : traces) {
    regrets.push_back(t.regret);
    calls += t.calls_per_round;
  }
  calls /= static_cast<double>(traces.size());
  double mean = 0.0;
  for (double r : regrets) mean += r;
  mean /= static_cast<double>(regrets.size());
  double var = 0.0;
  for (double r : regrets) var += (r - mean) * (r - mean);
  double sd = regrets.size() > 1 ? std::sqrt(var / static_cast<double>(regrets.size() - 1)) : 0.0;

  json config = {{"command", "online run"},
                 {"T", o.T},
                 {"learner", o.learner},
                 {"adversary", o.adversary},
                 {"generator", adv.generator.name()},
                 {"sigma", o.online_sigma},
                 {"seeds", o.seeds},
                 {"seed", o.seed},
                 {"grid", o.mu.empty() ? json(o.grid) : json(o.mu)},
                 {"eta", o.eta},
                 {"m", o.m},
                 {"preset", o.preset},
                 {"c", o.c},
                 {"playout_n", o.playout_n},
                 {"noise", o.noise},
                 {"window", o.window},
                 {"K", o.K},
                 {"delta", opt_json(o.atom_delta)}};

  std::ostringstream csv_text;
  {
    CsvWriter csv(csv_text, config,
                  {"seed", "learner", "adversary", "T", "regret", "cumulative_loss", "best_loss",
                   "best_theta", "oracle_calls", "calls_per_round"});
    for (const auto& t : traces) {
      csv.row({std::to_string(t.seed), t.learner, o.adversary, fmt(o.T), fmt(t.regret),
               fmt(t.cumulative_loss), fmt(t.best_loss), fmt(t.best_theta), fmt(t.oracle_calls),
               fmt(t.calls_per_round)});
    }
  }
  std::ostringstream summary_text;
  write_json_report(summary_text, config,
                    {{"mean_regret", json_real(mean)},
                     {"std", json_real(sd)},
                     {"calls_per_round", json_real(calls)}});

  Sink csv_sink(o.out, out);
  *csv_sink << csv_text.str();
  csv_sink.close();
  std::string summary_path = o.summary;
  if (summary_path.empty() && !o.out.empty()) summary_path = o.out + ".json";
  Sink json_sink(summary_path, out);
  *json_sink << summary_text.str();
  json_sink.close();
}

void cmd_coupling(const Options& o, std::ostream& out) {
  Generator g = Generator::parse(o.gen);
  DiscreteDist p = load_dist(o.p);
  DiscreteDist mu = load_dist(o.mu);
  CouplingReport r = coupling_demo(p, mu, g, o.coupling_eps, o.coupling_delta, o.coupling_T);
  json config = {{"command", "coupling"}, {"gen", g.name()},           {"p", o.p},
                 {"mu", o.mu},            {"eps", o.coupling_eps}, {"delta", o.coupling_delta},
                 {"T", o.coupling_T}};
  Sink sink(o.out, out);
  write_json_report(*sink, config,
                    {{"divergence", json_real(r.divergence)},
                     {"sigma", json_real(r.sigma)},
                     {"coupling_n", json_real(r.coupling_n)},
                     {"M", json_real(r.M)},
                     {"plan_n", r.plan_n},
                     {"n_used", r.n_used},
                     {"tv", json_real(r.tv)},
                     {"tv_ok", r.ok}});
  sink.close();
}

const std::vector<std::string> kEstimateHeader = {"estimator", "n",        "m",      "eps",
                                                  "mean_err",  "std_err", "bound_value"};

void cmd_estimate_compare(const Options& o, std::ostream& out) {
  Generator g = Generator::parse(o.gen.empty() ? "renyi:2" : o.gen);
  DiscreteDist nu = load_dist(o.nu);
  DiscreteDist mu = load_dist(o.mu);
  std::vector<std::int64_t> ns =
      o.sizes.empty() ? std::vector<std::int64_t>{1000, 10000} : o.sizes;
  auto rows = compare_estimators(mu, nu, g, ns, o.replicates, o.seed, o.est_eps.value_or(-1.0),
                                 o.block);
  json config = {{"command", "estimate compare"}, {"gen", g.name()},   {"nu", o.nu},
                 {"mu", o.mu},                     {"n", ns},          {"replicates", o.replicates},
                 {"seed", o.seed},                 {"eps", opt_json(o.est_eps)},
                 {"m", o.block}};
  Sink sink(o.out, out);
  CsvWriter csv(*sink, config, kEstimateHeader);
  for (const auto& r : rows) {
    csv.row({r.estimator, fmt(r.n), fmt(r.m), fmt(r.eps), fmt(r.mean_err), fmt(r.std_err),
             fmt(r.bound_value)});
  }
  sink.close();
}

void cmd_estimate_knee(const Options& o, std::ostream& out) {
  DiscreteDist nu = load_dist(o.nu);
  DiscreteDist mu = load_dist(o.mu);
  std::vector<std::int64_t> ns = o.sizes;
  if (ns.empty()) {
    AlignedPair a = align(nu, mu);
    double kl = divergence_aligned(Generator::kl(), a.nu, a.mu);
    if (!std::isfinite(kl)) throw DataError("undefined ratio: nu has mass off supp(mu)");
    ns = knee_grid(kl);
  }
  KneeResult res = kl_threshold_experiment(mu, nu, ns, o.replicates, o.seed);
  json config = {{"command", "estimate kl-knee"}, {"nu", o.nu},   {"mu", o.mu}, {"n", ns},
                 {"replicates", o.replicates},     {"seed", o.seed}};
  Sink sink(o.out, out);
  CsvWriter csv(*sink, config, kEstimateHeader);
  csv.row({"kl_marker", fmt(static_cast<std::int64_t>(std::ceil(res.marker))), "", "", "", "",
           fmt(res.marker)});
  for (const auto& r : res.rows) {
    csv.row({"importance", fmt(r.n), "1", "", fmt(r.mean_err), fmt(r.std_err), ""});
  }
  sink.close();
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"f-divergence rejection sampling toolkit", "fdiv"};
  app.set_version_flag("--version", version());
  app.require_subcommand(1);

  auto* div = app.add_subcommand("div", "divergence between two distributions");
  div->add_option("--gen", o.gen, "generator: tv, kl, renyi:<l>, egamma:<g>")->required();
  div->add_option("--nu", o.nu, "target distribution JSON")->required();
  div->add_option("--mu", o.mu, "proposal distribution JSON")->required();
  div->add_option("--out", o.out, "output path");

  auto* cx = app.add_subcommand("complexity", "sample-complexity and regret bounds");
  cx->add_option("--gen", o.gen)->required();
  cx->add_option("--D", o.D);
  cx->add_option("--eps", o.eps);
  cx->add_option("--delta", o.delta);
  cx->add_option("--sigma", o.sigma);
  cx->add_option("--T", o.T_real);
  cx->add_option("--d", o.d_real);
  cx->add_option("--n", o.n_real);
  cx->add_option("--zeta", o.zeta);
  cx->add_option("--bound", o.bounds, "bounds to evaluate (default: all with inputs set)")
      ->delimiter(',');
  cx->add_option("--out", o.out);

  auto* sample = app.add_subcommand("sample", "rejection sampler");
  sample->require_subcommand(1);
  auto* verify = sample->add_subcommand("verify", "exact TV check of the sampler plan");
  verify->add_option("--gen", o.gen)->required();
  verify->add_option("--nu", o.nu)->required();
  verify->add_option("--mu", o.mu)->required();
  verify->add_option("--eps", o.eps_list, "comma-separated targets")->delimiter(',');
  verify->add_option("--out", o.out);

  auto* wit = app.add_subcommand("witness", "lower-bound witness constructions");
  wit->add_option("--construction", o.construction, "bernoulli, linear or superlinear");
  wit->add_option("--gen", o.gen)->required();
  wit->add_option("--eps", o.eps_list)->delimiter(',');
  wit->add_option("--n", o.n_list)->delimiter(',');
  wit->add_option("--zeta", o.zeta);
  wit->add_option("--delta", o.delta);
  wit->add_option("--out", o.out);

  auto* online = app.add_subcommand("online", "smoothed online learning");
  online->require_subcommand(1);
  auto* run = online->add_subcommand("run", "play learner against adversary");
  run->add_option("--T", o.T);
  run->add_option("--learner", o.learner, "ftpl, relaxation or ftl");
  run->add_option("--adversary", o.adversary, "smooth_iid, atom_mixture or adaptive_greedy");
  run->add_option("--generator", o.gen, "smoothness generator (default renyi:2)");
  run->add_option("--sigma", o.online_sigma);
  run->add_option("--seeds", o.seeds, "number of games");
  run->add_option("--seed", o.seed, "base seed")->required();
  run->add_option("--grid", o.grid, "uniform context grid size");
  run->add_option("--mu", o.mu, "base measure JSON over numeric labels (overrides --grid)");
  run->add_option("--eta", o.eta, "FTPL perturbation scale (default sqrt(m))");
  run->add_option("--m", o.m, "FTPL perturbation size");
  run->add_flag("--preset", o.preset, "FTPL schedule tuned to (lambda, sigma, T)");
  run->add_option("--c", o.c, "relaxation playout coefficient");
  run->add_option("--playout-n", o.playout_n, "relaxation playout draws per round");
  run->add_option("--noise", o.noise);
  run->add_option("--window", o.window);
  run->add_option("--K", o.K);
  run->add_option("--delta", o.atom_delta, "atom_mixture atom weight");
  run->add_option("--out", o.out, "per-seed CSV path");
  run->add_option("--summary", o.summary, "aggregate JSON path");

  auto* cp = app.add_subcommand("coupling", "coupling demonstration");
  cp->add_option("--gen", o.gen)->required();
  cp->add_option("--p", o.p)->required();
  cp->add_option("--mu", o.mu)->required();
  cp->add_option("--eps", o.coupling_eps);
  cp->add_option("--delta", o.coupling_delta);
  cp->add_option("--T", o.coupling_T);
  cp->add_option("--out", o.out);

  auto* est = app.add_subcommand("estimate", "mean estimation");
  est->require_subcommand(1);
  auto* cmp = est->add_subcommand("compare", "importance vs rejection uniform error");
  cmp->add_option("--gen", o.gen, "generator for the rejection plan (default renyi:2)");
  cmp->add_option("--nu", o.nu)->required();
  cmp->add_option("--mu", o.mu)->required();
  cmp->add_option("--n", o.sizes)->delimiter(',');
  cmp->add_option("--replicates", o.replicates);
  cmp->add_option("--seed", o.seed)->required();
  cmp->add_option("--eps", o.est_eps, "TV target (default n^{-1/3})");
  cmp->add_option("--m", o.block, "block size (default: sampler budget)");
  cmp->add_option("--out", o.out);
  auto* knee = est->add_subcommand("kl-knee", "importance error around n = e^KL");
  knee->add_option("--nu", o.nu)->required();
  knee->add_option("--mu", o.mu)->required();
  knee->add_option("--n", o.sizes)->delimiter(',');
  knee->add_option("--replicates", o.replicates);
  knee->add_option("--seed", o.seed)->required();
  knee->add_option("--out", o.out);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
      app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
      out << app.help();
      return 0;
    } catch (const CLI::CallForAllHelp&) {
      out << app.help("", CLI::AppFormatMode::All);
      return 0;
    } catch (const CLI::CallForVersion&) {
      out << version() << "\n";
      return 0;
    } catch (const CLI::ParseError& e) {
      throw UsageError(e.what());
    }

    if (div->parsed()) cmd_div(o, out);
    else if (cx->parsed()) cmd_complexity(o, out);
    else if (verify->parsed()) cmd_sample_verify(o, out);
    else if (wit->parsed()) cmd_witness(o, out);
    else if (run->parsed()) cmd_online_run(o, out);
    else if (cp->parsed()) cmd_coupling(o, out);
    else if (cmp->parsed()) cmd_estimate_compare(o, out);
    else if (knee->parsed()) cmd_estimate_knee(o, out);
    else throw UsageError("no subcommand given");
    return 0;
  } catch (const Error& e) {
    err << "code=" << e.code() << ", msg=" << one_line(e.what()) << "\n";
    return e.validation() ? 1 : 2;
  } catch (const std::exception& e) {
    err << "code=internal, msg=" << one_line(e.what()) << "\n";
    return 2;
  }
}

}  // namespace fdv
