#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "farmsched/engine.hpp"

namespace farmsched {

/// The (error rate, d) experiment grid.
struct SweepGrid {
    std::vector<double> d_values;    // strictly increasing, all > 0
    std::vector<double> error_rates; // strictly increasing, all in [0, 1]
    int replicates = 1;              // independent seeds per cell

    /// 12 log-spaced d-values over [0.0001, 3.0] crossed with the five
    /// decade error rates 1e-5 .. 1e-1.
    static SweepGrid defaults();

    /// n points log-spaced over [lo, hi]; endpoints are exact.
    static std::vector<double> log_spaced(double lo, double hi, int n);

    std::size_t cell_count() const {
        return d_values.size() * error_rates.size() *
               static_cast<std::size_t>(replicates);
    }

    void validate() const; // throws ConfigError

    bool operator==(const SweepGrid&) const = default;
};

/// One grid cell: the run at (error_rate, d, replicate).
struct SweepCell {
    double error_rate;
    double d_value;
    int replicate;
    RunMetrics metrics;

    bool operator==(const SweepCell&) const = default;
};

/// Experimentally located optimum for one error rate.
struct OptimumRow {
    double error_rate;
    double d_star;     // member of the grid's d_values
    double throughput; // mean crossings_processed at d_star

    bool operator==(const OptimumRow&) const = default;
};

struct SweepResult {
    SweepGrid grid;
    std::vector<SweepCell> cells;    // ascending (error_rate, d_value, replicate)
    std::vector<OptimumRow> optimum; // one row per error rate, ascending

    bool operator==(const SweepResult&) const = default;
};

/// Seed words for the cell at (e_idx, d_idx, replicate): the base seed xored
/// with a splitmix64 hash of the indices, so cells are statistically
/// independent yet individually reproducible.
std::pair<std::uint32_t, std::uint32_t> cell_seed(std::uint32_t base_z,
                                                  std::uint32_t base_w,
                                                  int e_idx, int d_idx,
                                                  int replicate);

/// Reference implementation: one engine run per cell, executed in grid
/// order on the calling thread.
SweepResult run_sweep_serial(const SweepGrid& grid, const EngineConfig& base);

/// Same result as run_sweep_serial, with cells fanned out across `threads`
/// OpenMP workers. Cells are independent runs and results are merged in
/// grid order, so the output is identical for any thread count.
SweepResult run_sweep(const SweepGrid& grid, const EngineConfig& base,
                      int threads = 1);

/// The d-value maximizing mean crossings processed for the given error
/// rate, with ties broken toward the smaller d. Returns (d*, throughput).
/// Throws std::out_of_range for an error rate not present in the result.
std::pair<double, double> find_optimum_d(const SweepResult& result,
                                         double error_rate);

/// Throughput at the nearest grid point at or above d* x factor divided by
/// throughput at the nearest grid point at or below d* / factor. Values
/// above 1 mean under-monitoring costs more than over-monitoring. Throws
/// std::domain_error naming the missing side when d* sits too close to a
/// grid boundary.
double asymmetry_ratio(const SweepResult& result, double error_rate,
                       double factor);

} // namespace farmsched
