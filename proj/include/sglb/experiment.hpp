#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "sglb/config.hpp"
#include "sglb/oracle.hpp"

namespace sglb {

struct CommandOutput {
  std::string csv;      // artifact of record, schema kCsvHeader
  std::string summary;  // human-readable lines
};

// Closed-form bound report for (n, d, sigma[, alpha]).
CommandOutput cmd_bound(const ExperimentConfig& config);

// Two-point experiment, psi estimates and the randomization gap report on
// the hard instance.
CommandOutput cmd_lecam(const ExperimentConfig& config);

// Grid over n x d x sigma x sampler in lexicographic order; cells run in
// parallel with seeds derived from (seed, cell index).
CommandOutput cmd_sweep(const ExperimentConfig& config);

// Validates the config for `command` and dispatches.
CommandOutput run_command(std::string_view command, const ExperimentConfig& config);

// Sampler named `kind` with the config's hyperparameters; `alpha` is the
// (public) smoothness of the target family.
std::unique_ptr<Sampler> make_sampler(const ExperimentConfig& config, std::string_view kind, double alpha);

// Debug dump of the first lecam trial (theta = 1) in transcript CSV form.
std::string lecam_transcript_csv(const ExperimentConfig& config);

}  // namespace sglb
