#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "deltrace/avgcase.hpp"
#include "deltrace/binomial_kit.hpp"
#include "deltrace/coupling.hpp"
#include "deltrace/distinguisher.hpp"
#include "deltrace/error.hpp"
#include "deltrace/exact_oracle.hpp"
#include "deltrace/mc_distance.hpp"
#include "deltrace/parallel.hpp"
#include "deltrace/report.hpp"
#include "deltrace/stats.hpp"

namespace deltrace::cli {

namespace {

using Rows = std::vector<ReportRow>;

struct Common {
  std::string out;
  std::string format = "csv";
  unsigned workers = 1;
  bool timing = false;
};

const CLI::Validator kOpenUnit(
    [](std::string& text) -> std::string {
      double v = 0.0;
      try {
        v = std::stod(text);
      } catch (...) {
        return "value must be a number";
      }
      return v > 0.0 && v < 1.0 ? std::string() : "value must lie strictly between 0 and 1";
    },
    "in (0,1)");

void add_common(CLI::App* sub, Common& common) {
  sub->add_option("--out", common.out, "Report path (stdout when omitted)");
  sub->add_option("--format", common.format, "Report format")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--workers", common.workers, "Worker threads; never changes the output")
      ->check(CLI::Range(1u, 1024u));
  sub->add_flag("--timing", common.timing, "Record wall-clock milliseconds (otherwise written as 0)");
}

PairKind parse_pair(const std::string& s) { return s == "xy" ? PairKind::XY : PairKind::XYPrime; }

// Option names and values in declaration order; output location, worker count
// and timing are excluded so that they never change the report bytes.
std::string canonical_config(const CLI::App* sub) {
  std::string text = sub->get_name();
  for (const CLI::Option* opt : sub->get_options()) {
    const std::string name = opt->get_name();
    if (name == "--out" || name == "--workers" || name == "--timing" || name == "--help" || name.empty()) continue;
    text += ' ' + name + '=';
    if (opt->count() > 0) {
      const auto& results = opt->results();
      for (std::size_t i = 0; i < results.size(); ++i) text += (i ? "," : "") + results[i];
    } else {
      text += opt->get_default_str();
    }
  }
  return text;
}

std::filesystem::path resolve_output(const std::string& out) {
  std::filesystem::path path(out);
  if (const char* dir = std::getenv("DELTRACE_OUTPUT_DIR"); dir && *dir && path.is_relative()) {
    path = std::filesystem::path(dir) / path;
  }
  return path;
}

void write_report(const std::string& text, const Common& common, std::ostream& out) {
  if (common.out.empty()) {
    out << text;
    return;
  }
  const auto path = resolve_output(common.out);
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  // Written beside the target and renamed so that a failure leaves no partial file.
  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  {
    std::ofstream file(tmp, std::ios::binary | std::ios::trunc);
    if (!file) fail(ErrorKind::InvalidParameter, "cannot open output file " + path.string());
    file << text;
    if (!file.flush()) fail(ErrorKind::InvalidParameter, "cannot write output file " + path.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string json_error(std::string_view kind, const std::string& message) {
  nlohmann::ordered_json j;
  j["error"] = kind;
  j["message"] = message;
  return j.dump();
}

// --- commands -------------------------------------------------------------

struct ExactTvArgs {
  std::string pair = "xy";
  std::vector<int> ns{1, 2, 3};
  double q = 0.5;
  std::size_t cap = kDefaultSupportCap;
};

Rows run_exact_tv(const ExactTvArgs& a) {
  const ChannelParams params(a.q);
  Rows rows;
  for (int n : a.ns) {
    const auto pair = make_pair(parse_pair(a.pair), n);
    const auto d = exact_distances(pair.left, pair.right, params, a.cap);
    const auto support = static_cast<std::int64_t>(d.union_support);
    rows.push_back({"exact-tv", n, a.q, "tv", d.tv, 0.0, support, 0, 0});
    rows.push_back({"exact-tv", n, a.q, "hellinger_sq", d.hellinger_sq, 0.0, support, 0, 0});
  }
  return rows;
}

struct McArgs {
  std::string pair = "xy";
  std::vector<int> ns{1};
  double q = 0.5;
  std::uint64_t samples = 100000;
  std::uint64_t seed = 0;
  std::string variant;  // sampling / form
  std::string backend = "scaled";
};

Rows run_mc(const McArgs& a, Metric metric, unsigned workers) {
  const ChannelParams params(a.q);
  McOptions opts;
  opts.workers = workers;
  opts.backend = a.backend == "bigint" ? CountBackend::BigInt : CountBackend::ScaledDouble;
  Rows rows;
  for (int n : a.ns) {
    const auto pair = make_pair(parse_pair(a.pair), n);
    const auto start = std::chrono::steady_clock::now();
    EstimateWithCI est;
    std::string name;
    if (metric == Metric::TV) {
      est = estimate_tv(pair.left, pair.right, params, a.samples, a.seed, opts,
                        a.variant == "symmetrized" ? TvSampling::Symmetrized : TvSampling::OneSided);
      name = "tv";
    } else {
      est = estimate_hellinger_sq(pair.left, pair.right, params, a.samples, a.seed, opts,
                                  a.variant == "symmetric" ? HellingerForm::Symmetric : HellingerForm::Affinity);
      name = "hellinger_sq";
    }
    const auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    rows.push_back({metric == Metric::TV ? "mc-tv" : "mc-hellinger", n, a.q, name, est.value, est.stderr_,
                    static_cast<std::int64_t>(est.n_samples), a.seed, std::llround(ms)});
  }
  return rows;
}

struct RateArgs {
  std::string pair = "xy";
  std::vector<int> ns{8, 16, 32, 64};
  double q = 0.5;
  std::string metric = "tv";
  std::uint64_t samples = 100000;
  std::uint64_t seed = 0;
  double target_rel = 0.0;
  std::uint64_t max_samples = 0;
  std::string form = "symmetric";
};

Rows run_rate(const RateArgs& a, unsigned workers, std::ostream& err) {
  RateSweepConfig cfg;
  cfg.pair = parse_pair(a.pair);
  cfg.ns = a.ns;
  cfg.q = a.q;
  cfg.metric = a.metric == "tv" ? Metric::TV : Metric::HellingerSq;
  cfg.samples = a.samples;
  cfg.seed = a.seed;
  cfg.target_rel_stderr = a.target_rel;
  cfg.max_samples = a.max_samples;
  cfg.hellinger_form = a.form == "affinity" ? HellingerForm::Affinity : HellingerForm::Symmetric;
  cfg.options.workers = workers;
  auto result = rate_sweep(cfg);
  if (!result.slope) err << "note: fewer than two usable points, slope not reported\n";
  return result.rows;
}

struct DistinguishArgs {
  std::vector<int> ns{16};
  std::vector<std::uint64_t> ts;
  double c = 0.0;
  double t_divisor = 1.0;
  double q = 0.5;
  std::string tester = "z";
  std::uint64_t reps = 100;
  std::uint64_t seed = 0;
  std::uint64_t calibration = 1000000;
};

Rows run_distinguish(const DistinguishArgs& a, unsigned workers) {
  ErrorSweepConfig cfg;
  cfg.ns = a.ns;
  cfg.q = a.q;
  cfg.tester = a.tester == "lr" ? Tester::LikelihoodRatio : Tester::Z;
  cfg.reps = a.reps;
  cfg.seed = a.seed;
  cfg.calibration_samples = a.calibration;
  cfg.workers = workers;
  if (a.c > 0.0) {
    for (int n : a.ns) {
      const auto t = static_cast<std::uint64_t>(std::ceil(static_cast<double>(trace_budget(a.c, n)) / a.t_divisor));
      cfg.t_per_n.push_back(std::max<std::uint64_t>(t, 1));
    }
  } else {
    require(!a.ts.empty(), ErrorKind::InvalidParameter, "give either --ts or --c");
    cfg.ts = a.ts;
  }
  return error_rate_sweep(cfg).rows;
}

struct CouplingArgs {
  std::vector<int> ns{1, 2, 3};
  double q = 0.5;
  std::uint64_t samples = 1000000;
  std::uint64_t seed = 0;
  int event_n = 100;
  double c0 = 3.0;
};

Rows run_coupling(const CouplingArgs& a, unsigned workers) {
  const ChannelParams params(a.q);
  Rows rows;
  {
    // Composition of both stages must give {p^2, pq, pq, q^2} exactly.
    const auto law = block01_marginal_law(a.q);
    const Rational q = exact_rational(a.q), p = Rational(1) - q;
    const bool exact = law.total() == 1 && law.probability(BitString{0, 1}) == p * p &&
                       law.probability(BitString{1}) == p * q && law.probability(BitString{0}) == p * q &&
                       law.probability(BitString{}) == q * q;
    rows.push_back({"coupling-check", 1, a.q, "block01_marginal_exact", exact ? 1.0 : 0.0, 0.0, 0, a.seed, 0});
  }
  for (int n : a.ns) {
    const auto x = build_xy(n).left;
    const auto law = exact_distribution(x, params);
    std::vector<BitString> keys;
    std::vector<double> probs;
    for (const auto& [k, m] : law) {
      keys.push_back(k);
      probs.push_back(m);
    }
    const StagedSampler sampler(Variant::X, n, params);
    const std::uint64_t seed = derive_domain_seed(a.seed, static_cast<std::uint64_t>(n));
    auto parts = map_chunks(a.samples, 65536, workers, [&](std::size_t begin, std::size_t end) {
      std::vector<std::uint64_t> counts(keys.size(), 0);
      for (std::size_t i = begin; i < end; ++i) {
        Rng rng(derive_stream_seed(seed, i));
        const BitString w = sampler(rng);
        const auto it = std::lower_bound(keys.begin(), keys.end(), w);
        require(it != keys.end() && *it == w, ErrorKind::InvalidTrace, "staged sample outside the trace support");
        ++counts[it - keys.begin()];
      }
      return counts;
    });
    std::vector<std::uint64_t> counts(keys.size(), 0);
    for (const auto& part : parts)
      for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += part[i];
    double tv_sum = 0.0;
    for (std::size_t i = 0; i < counts.size(); ++i)
      tv_sum += std::fabs(static_cast<double>(counts[i]) / static_cast<double>(a.samples) - probs[i]);
    const auto chi = chi_square_gof(counts, probs);
    const auto s = static_cast<std::int64_t>(a.samples);
    rows.push_back({"coupling-check", n, a.q, "tv_empirical", 0.5 * tv_sum, 0.0, s, a.seed, 0});
    rows.push_back({"coupling-check", n, a.q, "chi2_p_value", chi.p_value, 0.0, s, a.seed, 0});
  }
  if (a.event_n >= 2) {
    const CouplingConfig cc{a.c0};
    const std::uint64_t seed = derive_domain_seed(a.seed, 0xa);
    auto parts = map_chunks(a.samples, 65536, workers, [&](std::size_t begin, std::size_t end) {
      std::uint64_t misses = 0;
      for (std::size_t i = begin; i < end; ++i) {
        Rng rng(derive_stream_seed(seed, i));
        misses += !event_a_indicator(sample_partial2(Variant::X, a.event_n, params, rng), cc);
      }
      return misses;
    });
    std::uint64_t misses = 0;
    for (auto m : parts) misses += m;
    const double frac = static_cast<double>(misses) / static_cast<double>(a.samples);
    const auto s = static_cast<std::int64_t>(a.samples);
    rows.push_back({"coupling-check", a.event_n, a.q, "event_a_complement_mc", frac,
                    std::sqrt(frac * (1 - frac) / static_cast<double>(a.samples)), s, a.seed, 0});
    rows.push_back({"coupling-check", a.event_n, a.q, "event_a_complement_exact",
                    event_a_complement_exact(Variant::X, a.event_n, params, cc), 0.0, 0, a.seed, 0});
  }
  return rows;
}

struct BinomialArgs {
  std::int64_t n_max = 200;
  std::vector<double> s_grid{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  double c = 1.0;
  std::vector<std::int64_t> ratio_ns{100, 1000, 10000};
  double ratio_q = 0.5;
  double c0 = 3.0;
};

Rows run_binomial(const BinomialArgs& a) {
  std::int64_t shift_bad = 0, tv_bad = 0, tail_bad = 0, checked = 0;
  double worst_rel = 0.0;
  for (double s : a.s_grid) {
    for (std::int64_t n = 1; n <= a.n_max; ++n) {
      const BinomialSpec spec(n, s);
      for (std::int64_t k = 0; k <= n; ++k) {
        const auto g = binom_shift_gap(spec, k);
        const double pk = binom_pmf(spec, k);
        const double diff = std::fabs(g.lhs - g.rhs);
        if (diff > 1e-10 * g.rhs + 1e-14 * pk) ++shift_bad;
        if (g.rhs > 0.0) worst_rel = std::max(worst_rel, diff / g.rhs);
        ++checked;
      }
      const auto t = binom_tv_exact_and_bound(spec);
      if (t.lhs > t.rhs) ++tv_bad;
      const auto tail = binom_tail_check(spec, a.c);
      if (!tail.degenerate && tail.tail > tail.bound) ++tail_bad;
    }
  }
  const std::int64_t grid = static_cast<std::int64_t>(a.s_grid.size()) * a.n_max;
  Rows rows{
      {"binomial-checks", a.n_max, 0.0, "shift_gap_violations", static_cast<double>(shift_bad), 0.0, checked, 0, 0},
      {"binomial-checks", a.n_max, 0.0, "shift_gap_max_rel_error", worst_rel, 0.0, checked, 0, 0},
      {"binomial-checks", a.n_max, 0.0, "tv_bound_violations", static_cast<double>(tv_bad), 0.0, grid, 0, 0},
      {"binomial-checks", a.n_max, 0.0, "tail_bound_violations", static_cast<double>(tail_bad), 0.0, grid, 0, 0},
  };
  const double s = 1.0 - a.ratio_q * a.ratio_q / 2.0;
  for (auto n : a.ratio_ns) {
    const double v = ratio_deviation(n, s, a.c0);
    const double nn = static_cast<double>(n);
    rows.push_back({"binomial-checks", n, a.ratio_q, "ratio_deviation", v, 0.0, 0, 0, 0});
    rows.push_back({"binomial-checks", n, a.ratio_q, "ratio_deviation_scaled", v * std::sqrt(nn / std::log(nn)), 0.0,
                    0, 0, 0});
  }
  return rows;
}

struct DefectArgs {
  std::vector<int> js{16, 64, 256, 1024};
  double q = 0.5;
  std::string defect = "10";
  std::string method = "mc";
  std::uint64_t samples = 100000;
  std::uint64_t seed = 0;
};

Rows run_defect(const DefectArgs& a, unsigned workers) {
  const PVec pv = defect_pvec(a.q, BitString::parse(a.defect));
  const auto method = a.method == "exact" ? DefectTvMethod::Exact : DefectTvMethod::MonteCarlo;
  Rows rows;
  std::vector<double> xs, ys;
  for (int j : a.js) {
    const auto est = defect_block_tv(j, j, pv, method, a.samples, derive_domain_seed(a.seed, j), workers);
    rows.push_back({"defect-tv", j, a.q, "defect_tv", est.value, est.stderr_, static_cast<std::int64_t>(est.n_samples),
                    a.seed, 0});
    if (j > 0 && est.value > 0.0) {
      xs.push_back(j);
      ys.push_back(est.value);
    }
  }
  if (const auto fit = loglog_fit(xs, ys)) {
    rows.push_back({"defect-tv", 0, a.q, "slope_defect_tv", fit->slope, fit->slope_stderr,
                    static_cast<std::int64_t>(fit->points), a.seed, 0});
  }
  return rows;
}

struct AvgArgs {
  std::vector<int> ns{8, 64, 403, 404, 1000};
  int r = 0;
  std::string base = "e";
};

Rows run_avgcase(const AvgArgs& a) {
  Rows rows;
  for (int n : a.ns) {
    const int r = a.r > 0 ? a.r : default_r(n, a.base == "2" ? LogBase::Two : LogBase::Natural);
    const auto b = success_upper_bound(n, r);
    rows.push_back({"avgcase-bound", n, 0.0, "r", static_cast<double>(r), 0.0, 0, 0, 0});
    rows.push_back({"avgcase-bound", n, 0.0, "success_bound", b.value, 0.0, 0, 0, 0});
    if (b.relaxed_applicable) rows.push_back({"avgcase-bound", n, 0.0, "success_bound_relaxed", b.relaxed, 0.0, 0, 0, 0});
  }
  return rows;
}

struct ConcArgs {
  int n = 256;
  double q = 0.5;
  std::vector<double> rs{0.5, 1.0, 1.5, 2.0};
  std::uint64_t samples = 1000000;
  std::uint64_t seed = 0;
};

Rows run_concentration(const ConcArgs& a, unsigned workers) {
  const auto res = z_concentration_check(a.n, ChannelParams(a.q), a.rs, a.samples, a.seed, workers);
  const auto s = static_cast<std::int64_t>(a.samples);
  Rows rows{{"z-concentration", a.n, a.q, "mean_z_exact", res.mean, 0.0, 0, a.seed, 0}};
  for (const auto& row : res.rows) {
    const double se = std::sqrt(row.tail * (1.0 - row.tail) / static_cast<double>(a.samples));
    rows.push_back({"z-concentration", a.n, a.q, "tail_r=" + format_double(row.r), row.tail, se, s, a.seed, 0});
  }
  if (res.fitted_c) rows.push_back({"z-concentration", a.n, a.q, "fitted_c", *res.fitted_c, 0.0, s, a.seed, 0});
  rows.push_back({"z-concentration", a.n, a.q, "tails_decreasing", res.decreasing ? 1.0 : 0.0, 0.0, s, a.seed, 0});
  return rows;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Deletion-channel trace experiments", "deltrace"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  Common common;
  std::function<Rows()> action;
  CLI::App* chosen = nullptr;
  auto bind = [&](CLI::App* sub, std::function<Rows()> fn) {
    add_common(sub, common);
    sub->callback([&, sub, fn] {
      chosen = sub;
      action = fn;
    });
  };
  auto q_opt = [](CLI::App* sub, double& q) {
    sub->add_option("--q", q, "Deletion probability")->check(kOpenUnit)->capture_default_str();
  };
  const std::vector<std::string> pairs{"xy", "xy_prime"};

  ExactTvArgs exact;
  auto* s_exact = app.add_subcommand("exact-tv", "Exact TV and squared Hellinger distance between trace laws");
  s_exact->add_option("--pair", exact.pair)->check(CLI::IsMember(pairs))->capture_default_str();
  s_exact->add_option("--ns", exact.ns)->delimiter(',')->check(CLI::Range(1, 64))->capture_default_str();
  q_opt(s_exact, exact.q);
  s_exact->add_option("--support-cap", exact.cap)->check(CLI::PositiveNumber)->capture_default_str();
  bind(s_exact, [&] { return run_exact_tv(exact); });

  McArgs mc_tv, mc_h;
  mc_h.variant = "affinity";
  mc_tv.variant = "one-sided";
  for (auto [name, args, metric] : {std::tuple{"mc-tv", &mc_tv, Metric::TV},
                                    std::tuple{"mc-hellinger", &mc_h, Metric::HellingerSq}}) {
    auto* sub = app.add_subcommand(name, metric == Metric::TV ? "Monte Carlo TV estimate"
                                                              : "Monte Carlo squared Hellinger estimate");
    McArgs& a = *args;
    sub->add_option("--pair", a.pair)->check(CLI::IsMember(pairs))->capture_default_str();
    sub->add_option("--ns", a.ns)->delimiter(',')->check(CLI::Range(1, 1 << 20))->capture_default_str();
    q_opt(sub, a.q);
    sub->add_option("--samples", a.samples)->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--seed", a.seed)->required();
    if (metric == Metric::TV) {
      sub->add_option("--sampling", a.variant)->check(CLI::IsMember({"one-sided", "symmetrized"}))->capture_default_str();
    } else {
      sub->add_option("--form", a.variant)->check(CLI::IsMember({"affinity", "symmetric"}))->capture_default_str();
    }
    sub->add_option("--backend", a.backend)->check(CLI::IsMember({"scaled", "bigint"}))->capture_default_str();
    bind(sub, [&, metric = metric, args = args] { return run_mc(*args, metric, common.workers); });
  }

  RateArgs rate;
  auto* s_rate = app.add_subcommand("rate-sweep", "Distance against n with a log-log slope");
  s_rate->add_option("--pair", rate.pair)->check(CLI::IsMember(pairs))->capture_default_str();
  s_rate->add_option("--ns", rate.ns)->delimiter(',')->check(CLI::Range(1, 1 << 20))->capture_default_str();
  q_opt(s_rate, rate.q);
  s_rate->add_option("--metric", rate.metric)->check(CLI::IsMember({"tv", "hellinger"}))->capture_default_str();
  s_rate->add_option("--samples", rate.samples)->check(CLI::PositiveNumber)->capture_default_str();
  s_rate->add_option("--seed", rate.seed)->required();
  s_rate->add_option("--target-rel-stderr", rate.target_rel, "Double samples until stderr/estimate is below this")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  s_rate->add_option("--max-samples", rate.max_samples)->capture_default_str();
  s_rate->add_option("--form", rate.form)->check(CLI::IsMember({"affinity", "symmetric"}))->capture_default_str();
  bind(s_rate, [&] { return run_rate(rate, common.workers, err); });

  DistinguishArgs dist;
  auto* s_dist = app.add_subcommand("distinguish-sweep", "Empirical error of the Z or likelihood tester");
  s_dist->add_option("--ns", dist.ns)->delimiter(',')->check(CLI::Range(2, 1 << 16))->capture_default_str();
  s_dist->add_option("--ts", dist.ts, "Trace counts shared by every n")->delimiter(',');
  s_dist->add_option("--c", dist.c, "Use T = ceil(C n^1.5 ln n) per n")->check(CLI::NonNegativeNumber);
  s_dist->add_option("--t-divisor", dist.t_divisor, "Divide the budget T by this")
      ->check(CLI::Range(1.0, 1e9))
      ->capture_default_str();
  q_opt(s_dist, dist.q);
  s_dist->add_option("--tester", dist.tester)->check(CLI::IsMember({"z", "lr"}))->capture_default_str();
  s_dist->add_option("--reps", dist.reps, "Trials per true label")->check(CLI::PositiveNumber)->capture_default_str();
  s_dist->add_option("--seed", dist.seed)->required();
  s_dist->add_option("--calibration-samples", dist.calibration)->check(CLI::PositiveNumber)->capture_default_str();
  bind(s_dist, [&] { return run_distinguish(dist, common.workers); });

  CouplingArgs coup;
  auto* s_coup = app.add_subcommand("coupling-check", "Staged sampler against the exact trace law");
  s_coup->add_option("--ns", coup.ns)->delimiter(',')->check(CLI::Range(1, 6))->capture_default_str();
  q_opt(s_coup, coup.q);
  s_coup->add_option("--samples", coup.samples)->check(CLI::PositiveNumber)->capture_default_str();
  s_coup->add_option("--seed", coup.seed)->required();
  s_coup->add_option("--event-n", coup.event_n, "n for the event-A frequency (0 to skip)")->capture_default_str();
  s_coup->add_option("--c0", coup.c0)->check(CLI::PositiveNumber)->capture_default_str();
  bind(s_coup, [&] { return run_coupling(coup, common.workers); });

  BinomialArgs bin;
  auto* s_bin = app.add_subcommand("binomial-checks", "Binomial identities and bounds on a grid");
  s_bin->add_option("--n-max", bin.n_max)->check(CLI::Range(1, 5000))->capture_default_str();
  s_bin->add_option("--s-grid", bin.s_grid)->delimiter(',')->check(kOpenUnit)->capture_default_str();
  s_bin->add_option("--c", bin.c, "Tail constant")->check(CLI::PositiveNumber)->capture_default_str();
  s_bin->add_option("--ratio-ns", bin.ratio_ns)->delimiter(',')->check(CLI::Range(2, 10000000))->capture_default_str();
  s_bin->add_option("--ratio-q", bin.ratio_q)->check(kOpenUnit)->capture_default_str();
  s_bin->add_option("--c0", bin.c0)->check(CLI::PositiveNumber)->capture_default_str();
  bind(s_bin, [&] { return run_binomial(bin); });

  DefectArgs def;
  auto* s_def = app.add_subcommand("defect-tv", "TV between the defect-conditioned and free contracted laws");
  s_def->add_option("--js", def.js)->delimiter(',')->check(CLI::Range(0, 1 << 20))->capture_default_str();
  q_opt(s_def, def.q);
  s_def->add_option("--defect", def.defect)->check(CLI::IsMember({"10", "1", "0"}))->capture_default_str();
  s_def->add_option("--method", def.method)->check(CLI::IsMember({"exact", "mc"}))->capture_default_str();
  s_def->add_option("--samples", def.samples)->check(CLI::PositiveNumber)->capture_default_str();
  s_def->add_option("--seed", def.seed)->required();
  bind(s_def, [&] { return run_defect(def, common.workers); });

  AvgArgs avg;
  auto* s_avg = app.add_subcommand("avgcase-bound", "Success bound of the average-case reduction");
  s_avg->add_option("--ns", avg.ns)->delimiter(',')->check(CLI::Range(8, 1 << 30))->capture_default_str();
  s_avg->add_option("--r", avg.r, "Block length (default floor(log(n)/2))")->check(CLI::NonNegativeNumber);
  s_avg->add_option("--log-base", avg.base)->check(CLI::IsMember({"e", "2"}))->capture_default_str();
  bind(s_avg, [&] { return run_avgcase(avg); });

  ConcArgs conc;
  auto* s_conc = app.add_subcommand("z-concentration", "Tail frequencies of Z around its mean");
  s_conc->add_option("--n", conc.n)->check(CLI::Range(2, 1 << 20))->capture_default_str();
  q_opt(s_conc, conc.q);
  s_conc->add_option("--rs", conc.rs)->delimiter(',')->check(CLI::NonNegativeNumber)->capture_default_str();
  s_conc->add_option("--samples", conc.samples)->check(CLI::PositiveNumber)->capture_default_str();
  s_conc->add_option("--seed", conc.seed)->required();
  bind(s_conc, [&] { return run_concentration(conc, common.workers); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    Rows rows = action();
    if (!common.timing)
      for (auto& r : rows) r.wall_ms = 0;
    const std::string comment = provenance_comment(canonical_config(chosen));
    const std::string text = common.format == "json" ? rows_to_json(rows, comment) : rows_to_csv(rows, comment);
    write_report(text, common, out);
    return kExitOk;
  } catch (const Error& e) {
    err << json_error(to_string(e.kind()), e.what()) << '\n';
    return kExitFailure;
  } catch (const std::exception& e) {
    err << json_error("internal", e.what()) << '\n';
    return kExitFailure;
  }
}

}  // namespace deltrace::cli
