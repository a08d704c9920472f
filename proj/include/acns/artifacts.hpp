#pragma once

#include <filesystem>
#include <string>

#include "acns/config_file.hpp"
#include "acns/sweep.hpp"

namespace acns {

/// Deterministic shortest-round-trip formatting used by every CSV.
std::string format_double(double v);

/// Per-step energy ledger ("acns-ledger-v1"). Written during the run only;
/// it samples every step and cannot be recomputed from snapshots.
void write_ledger_csv(const std::filesystem::path& path, const EnergyLedger& ledger);

/// Per-snapshot diagnostics ("acns-diagnostics-v1"): the audit artifact the
/// analyze command reproduces byte-for-byte from stored snapshots. The
/// fractional-norm columns depend on the basis rank recorded in the header
/// line.
void write_diagnostics_csv(const std::filesystem::path& path, const Trajectory& traj,
                           double epsilon, double mu, const SpectralBasis& basis);
std::string diagnostics_csv_text(const Trajectory& traj, double epsilon, double mu,
                                 const SpectralBasis& basis);

/// Master sweep table ("acns-report-v1") and the plain-text summary.
void write_report_csv(const std::filesystem::path& path, const ConvergenceReport& report);
void write_summary_text(const std::filesystem::path& path, const ConvergenceReport& report);

/// Write one run's artifacts under dir: config echo, ledger, diagnostics,
/// and (optionally) snaps/snap_NNNNNN.acns.
void write_run_artifacts(const std::filesystem::path& dir, const ResolvedConfig& cfg,
                         const RunResult& result, double epsilon,
                         const SpectralBasis& basis, bool write_snapshots);

/// Rebuild a trajectory from a run directory written by write_run_artifacts.
Trajectory read_run_trajectory(const std::filesystem::path& dir, const GeometryPtr& geom);

}  // namespace acns
