#include "sglb/experiment.hpp"

#include <cmath>
#include <sstream>

#include "parallel.hpp"
#include "sglb/analysis.hpp"
#include "sglb/csv.hpp"
#include "sglb/errors.hpp"
#include "sglb/lecam.hpp"
#include "sglb/samplers.hpp"

namespace sglb {
namespace {

constexpr std::uint64_t kDefaultTrials = 10000;

HardInstancePair pair_for(const ExperimentConfig& c, double n, std::uint64_t d, double sigma) {
  return c.alpha ? build_hard_instance(n, d, sigma, *c.alpha) : build_hard_instance(n, d, sigma);
}

std::optional<BoundReport> try_bound(const ExperimentConfig& c, double n, std::uint64_t d, double sigma) {
  try {
    return make_bound_report(n, d, sigma, c.alpha);
  } catch (const PreconditionViolation&) {
    return std::nullopt;
  }
}

CsvRow base_row(std::string experiment, double n, std::uint64_t d, double sigma,
                const std::optional<BoundReport>& bound, std::uint64_t seed) {
  CsvRow r;
  r.experiment = std::move(experiment);
  r.n = n;
  r.d = d;
  r.sigma = sigma;
  r.bound = bound;
  r.seed = seed;
  return r;
}

CsvRow metric_row(CsvRow row, std::string metric, std::optional<double> value,
                  std::optional<double> std_error = std::nullopt) {
  row.metric = std::move(metric);
  row.value = value;
  row.std_error = std_error;
  return row;
}

std::string describe(const BoundReport& b) {
  std::ostringstream os;
  os << "n = " << format_number(b.n) << ", d = " << b.d << ", sigma = " << format_number(b.sigma) << '\n'
     << "  alpha                = " << format_number(b.alpha) << '\n'
     << "  lambda               = " << format_number(b.lambda) << '\n'
     << "  per-query KL         = " << format_number(b.per_query_kl) << " nats\n"
     << "  transcript KL bound  = " << format_number(b.transcript_kl_bound) << " nats\n"
     << "  TV bound (Pinsker)   = " << format_number(b.tv_bound) << '\n'
     << "  psi1 lower           = " << format_number(b.psi1_lower) << '\n'
     << "  psi2 upper           = " << format_number(b.psi2_upper) << '\n'
     << "  minimax intermediate = " << format_number(b.minimax_intermediate) << '\n'
     << "  minimax lower bound  = " << format_number(b.minimax_lower) << '\n';
  return os.str();
}

NoiseKind noise_for(const ExperimentConfig& c, bool centered) {
  if (c.noise) return parse_noise_kind(*c.noise);
  return centered ? NoiseKind::IsotropicGaussian : NoiseKind::FirstCoordinate;
}

struct CellSpec {
  double n;
  std::uint64_t d;
  double sigma;
  std::string sampler;
};

std::vector<CsvRow> run_cell(const ExperimentConfig& c, const CellSpec& cell, std::uint64_t seed) {
  const bool centered = c.target.value_or("hard") == "centered";
  const std::size_t n = static_cast<std::size_t>(cell.n);
  const auto bound = try_bound(c, cell.n, cell.d, cell.sigma);
  CsvRow row = base_row("sweep:" + cell.sampler, cell.n, cell.d, cell.sigma, bound, seed);
  if (!bound) row.status = "bound_unavailable";

  // Targets and oracles of the cell: one centered target, or both hypotheses.
  std::vector<IsotropicGaussianTarget> targets;
  double alpha;
  if (centered) {
    alpha = c.target_alpha.value_or(1.0);
    targets.emplace_back(Vector(cell.d, 0.0), alpha);
  } else {
    const HardInstancePair pair = pair_for(c, cell.n, cell.d, cell.sigma);
    alpha = pair.alpha;
    targets.push_back(pair.target(Hypothesis::One));
    targets.push_back(pair.target(Hypothesis::Two));
  }
  const auto sampler = make_sampler(c, cell.sampler, alpha);
  const NoiseKind noise = noise_for(c, centered);

  std::vector<CsvRow> rows;
  std::optional<double> exact_tv;
  for (const auto& target : targets) {
    const GradientOracle oracle(target, noise, cell.sigma);
    const auto law = exact_output_law(*sampler, oracle, n);
    if (!law) {
      exact_tv.reset();
      break;
    }
    const double tv = gaussian_tv(*law, DiagonalGaussian{target.mean(), Vector(cell.d, target.variance())});
    exact_tv = std::max(exact_tv.value_or(0.0), tv);
  }
  if (exact_tv) rows.push_back(metric_row(row, "exact_tv", *exact_tv));

  const std::uint64_t trials = c.trials.value_or(0);
  if (trials >= 1000) {
    double lower = 0.0, correction = 0.0;
    for (std::size_t k = 0; k < targets.size(); ++k) {
      const GradientOracle oracle(targets[k], noise, cell.sigma);
      std::vector<Vector> samples(trials);
      for (std::size_t i = 0; i < trials; ++i)
        samples[i] = run_protocol(*sampler, oracle, n, derive_seed(seed, "sample", k * trials + i)).sample;
      const auto b = empirical_tv_lower_bound(samples, targets[k], c.bins.value_or(128));
      lower = std::max(lower, b.lower_bound);
      correction = b.correction;
    }
    rows.push_back(metric_row(row, "empirical_tv_lower", lower));
    rows.push_back(metric_row(row, "empirical_tv_correction", correction));
  }
  if (rows.empty()) rows.push_back(metric_row(row, "none", std::nullopt));
  return rows;
}

}  // namespace

std::unique_ptr<Sampler> make_sampler(const ExperimentConfig& c, std::string_view kind, double alpha) {
  const InitialLaw init =
      c.init.value_or("origin") == "gaussian" ? InitialLaw::gaussian(1.0 / alpha) : InitialLaw::origin();
  if (kind == "baseline") return std::make_unique<AveragingBaseline>(alpha);
  if (kind == "ula") {
    const StepSchedule schedule = c.eta ? StepSchedule::constant(*c.eta) : StepSchedule::sqrt_budget(alpha);
    return std::make_unique<LangevinSampler>("ula", schedule, init);
  }
  if (kind == "sgld") {
    const std::string s = c.schedule.value_or("default");
    StepSchedule schedule = StepSchedule::sqrt_budget(alpha);
    if (s == "constant") schedule = StepSchedule::constant(c.eta.value());
    else if (s == "inverse_time") schedule = StepSchedule::inverse_time(c.eta_scale.value());
    return std::make_unique<LangevinSampler>(make_sgld({schedule, init}));
  }
  throw ConfigError("unknown sampler '" + std::string(kind) + "'");
}

CommandOutput cmd_bound(const ExperimentConfig& c) {
  validate_config(c, "bound");
  const double sigma = c.sigma.value_or(1.0);
  const BoundReport b = make_bound_report(*c.n, *c.d, sigma, c.alpha);
  CsvRow row = base_row("bound", b.n, b.d, sigma, b, c.seed.value_or(0));
  CommandOutput out;
  out.csv = render_csv({metric_row(row, "minimax_intermediate", b.minimax_intermediate)});
  out.summary = describe(b);
  return out;
}

CommandOutput cmd_lecam(const ExperimentConfig& c) {
  validate_config(c, "lecam");
  const double sigma = c.sigma.value_or(1.0);
  const std::size_t n = static_cast<std::size_t>(*c.n);
  const std::uint64_t trials = c.trials.value_or(kDefaultTrials);
  const std::uint64_t seed = c.seed.value_or(0);
  const HardInstancePair pair = pair_for(c, *c.n, *c.d, sigma);
  const BoundReport bound = make_bound_report(*c.n, *c.d, sigma, c.alpha);
  const std::string sampler_name = c.sampler.value_or("sgld");
  const auto sampler = make_sampler(c, sampler_name, pair.alpha);
  const EstimatorSpec estimator = parse_estimator(c.estimator.value_or("first_coordinate"));
  const NoiseKind noise = noise_for(c, false);

  const TwoPointResult test =
      run_two_point_experiment(*sampler, estimator, pair, n, trials, derive_seed(seed, "two-point"), noise);
  const GapReport gap = randomization_gap_report(*sampler, EstimatorSpec::first_coordinate(), pair, n, trials,
                                                 derive_seed(seed, "gap"), noise);
  const RiskEstimate psi1 = estimator.kind == EstimatorSpec::Kind::FirstCoordinateOfSample
                                ? gap.psi1_hat
                                : estimate_psi1_hat(*sampler, estimator, pair, n, trials,
                                                    derive_seed(seed, "psi1"), noise);

  CsvRow row = base_row("lecam:" + sampler_name + ":" + std::string(to_string(estimator.kind)), *c.n, *c.d,
                        sigma, bound, seed);
  std::vector<CsvRow> rows{
      metric_row(row, "test_error", test.error_rate, test.std_error),
      metric_row(row, "test_error_theta1",
                 static_cast<double>(test.errors_per_theta[0]) / static_cast<double>(test.trials_per_theta[0])),
      metric_row(row, "test_error_theta2",
                 static_cast<double>(test.errors_per_theta[1]) / static_cast<double>(test.trials_per_theta[1])),
      metric_row(row, "test_ci_hoeffding", test.ci_half_width),
      metric_row(row, "test_floor", test.theoretical_floor),
      metric_row(row, "psi1_hat", psi1.mean, psi1.std_error),
      metric_row(row, "gap_psi1_hat", gap.psi1_hat.mean, gap.psi1_hat.std_error),
      metric_row(row, "psi2_hat", gap.psi2_hat.mean, gap.psi2_hat.std_error),
      metric_row(row, "gap", gap.gap, gap.tolerance / 3.0),
      metric_row(row, gap.tv_method == "exact" ? "sup_tv_exact" : "sup_tv_empirical_lower", gap.sup_tv),
      metric_row(row, "gap_inequality_holds", gap.holds ? 1.0 : 0.0),
  };
  if (!gap.conclusive) rows.back().status = "inconclusive";

  std::ostringstream os;
  os << describe(bound) << "two-point test (" << sampler_name << ", " << to_string(estimator.kind) << ", "
     << to_string(noise) << " noise, " << trials << " stratified trials)\n"
     << "  error rate      = " << format_number(test.error_rate) << " +- " << format_number(test.ci_half_width)
     << " (hoeffding 95%)\n"
     << "  floor (1-TV)/2  = " << format_number(test.theoretical_floor) << '\n'
     << "  psi1_hat        = " << format_number(psi1.mean) << " (psi1 lower " << format_number(bound.psi1_lower)
     << ")\n"
     << "  psi2_hat        = " << format_number(gap.psi2_hat.mean) << " (psi2 upper "
     << format_number(bound.psi2_upper) << ")\n"
     << "randomization gap (" << gap.tv_method << " TV)\n"
     << "  sup TV          = " << format_number(gap.sup_tv) << '\n'
     << "  psi1 - psi2     = " << format_number(gap.gap) << " (tolerance " << format_number(gap.tolerance) << ")\n"
     << "  inequality      = " << (gap.holds ? "holds" : "violated") << (gap.conclusive ? "" : " (inconclusive)")
     << '\n'
     << "  note: " << gap.note << '\n';
  return {render_csv(rows), os.str()};
}

CommandOutput cmd_sweep(const ExperimentConfig& c) {
  validate_config(c, "sweep");
  const std::vector<double> ns = c.grid_n.value_or(std::vector<double>{c.n.value_or(0.0)});
  const std::vector<std::uint64_t> ds = c.grid_d.value_or(std::vector<std::uint64_t>{c.d.value_or(0)});
  const std::vector<double> sigmas = c.grid_sigma.value_or(std::vector<double>{c.sigma.value_or(1.0)});
  const std::vector<std::string> samplers =
      c.grid_sampler.value_or(std::vector<std::string>{c.sampler.value_or("sgld")});
  const std::uint64_t seed = c.seed.value_or(0);

  std::vector<CellSpec> cells;
  for (double n : ns)
    for (auto d : ds)
      for (double s : sigmas)
        for (const auto& m : samplers) cells.push_back({n, d, s, m});

  std::vector<std::vector<CsvRow>> results(cells.size());
  detail::parallel_for(cells.size(), [&](std::size_t i) {
    const std::uint64_t cell_seed = derive_seed(seed, "cell", i);
    try {
      results[i] = run_cell(c, cells[i], cell_seed);
    } catch (const std::exception& e) {
      CsvRow row = base_row("sweep:" + cells[i].sampler, cells[i].n, cells[i].d, cells[i].sigma,
                            try_bound(c, cells[i].n, cells[i].d, cells[i].sigma), cell_seed);
      row.metric = "none";
      row.status = std::string("error: ") + e.what();
      results[i] = {row};
    }
  });

  std::vector<CsvRow> rows;
  std::size_t failed = 0;
  for (auto& r : results) {
    if (r.front().status.rfind("error", 0) == 0) ++failed;
    rows.insert(rows.end(), r.begin(), r.end());
  }
  std::ostringstream os;
  os << "sweep: " << cells.size() << " cells, " << rows.size() << " rows, " << failed << " failed cells\n";
  return {render_csv(rows), os.str()};
}

CommandOutput run_command(std::string_view command, const ExperimentConfig& config) {
  if (command == "bound") return cmd_bound(config);
  if (command == "lecam") return cmd_lecam(config);
  if (command == "sweep") return cmd_sweep(config);
  throw ConfigError("unknown command '" + std::string(command) + "'");
}

std::string lecam_transcript_csv(const ExperimentConfig& c) {
  validate_config(c, "lecam");
  const double sigma = c.sigma.value_or(1.0);
  const HardInstancePair pair = pair_for(c, *c.n, *c.d, sigma);
  const auto sampler = make_sampler(c, c.sampler.value_or("sgld"), pair.alpha);
  const GradientOracle oracle(pair.target(Hypothesis::One), noise_for(c, false), sigma);
  const Transcript t = run_protocol(*sampler, oracle, static_cast<std::size_t>(*c.n),
                                    derive_seed(derive_seed(c.seed.value_or(0), "two-point"), "trial", 0));
  std::ostringstream os;
  write_transcript_csv(os, t);
  return os.str();
}

}  // namespace sglb
