#pragma once

#include <string>

#include "minklab/config.hpp"

namespace minklab {

// Subcommand entry points.  Each reads its config, runs the experiment,
// writes CSV/JSON artifacts plus a run manifest into out_dir, and returns
// the process exit code (nonzero exactly when the acceptance property of
// that subcommand fails).  A fixed seed makes the CSV/JSON output
// byte-identical across reruns.
int run_geodesic(const ExperimentConfig& cfg, const std::string& out_dir,
                 std::uint64_t seed);
int run_mourre(const ExperimentConfig& cfg, const std::string& out_dir,
               std::uint64_t seed);
int run_resolvent(const ExperimentConfig& cfg, const std::string& out_dir,
                  std::uint64_t seed);
int run_optimality(const ExperimentConfig& cfg, const std::string& out_dir,
                   std::uint64_t seed);

}  // namespace minklab
