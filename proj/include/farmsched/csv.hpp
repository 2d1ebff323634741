#pragma once

#include <cstddef>
#include <ostream>
#include <string>

#include "farmsched/engine.hpp"
#include "farmsched/sweep.hpp"

namespace farmsched {

/// Real formatting shared by every CSV artifact: shortest form within 12
/// significant digits, fixed across platforms so goldens stay byte-stable.
std::string format_real(double v);

/// Per-cell sweep table. Header:
///   error_rate,d_value,replicate,crossings_processed,crossings_lost,
///   faults_injected,faults_cleared,mean_time_to_clear,mean_fvla_tick_fraction
/// Rows ascend by (error_rate, d_value, replicate). Returns bytes written.
std::size_t emit_cells_csv(const SweepResult& result, std::ostream& out);

/// Optimum-per-error-rate table. Header:
///   error_rate,optimum_d,throughput_at_optimum
std::size_t emit_optimum_csv(const SweepResult& result, std::ostream& out);

/// Both sweep tables; returns total bytes written.
std::size_t emit_sweep_csv(const SweepResult& result, std::ostream& cells_out,
                           std::ostream& optimum_out);

/// Streams engine trace rows as CSV with header
///   tick,farmlet,dsp,task,watermark,staleness,active_fault_count,processed
class CsvTraceSink : public TraceSink {
public:
    explicit CsvTraceSink(std::ostream& out);
    void row(const TraceRow& r) override;

private:
    std::ostream& out_;
};

/// Human-readable run summary for the CLI.
void print_metrics(const RunMetrics& m, std::ostream& out);

} // namespace farmsched
