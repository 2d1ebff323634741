#include "farmsched/csv.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace farmsched {

std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

namespace {

constexpr const char* kCellsHeader =
    "error_rate,d_value,replicate,crossings_processed,crossings_lost,"
    "faults_injected,faults_cleared,mean_time_to_clear,"
    "mean_fvla_tick_fraction\n";

constexpr const char* kOptimumHeader =
    "error_rate,optimum_d,throughput_at_optimum\n";

struct CountingWriter {
    std::ostream& out;
    std::size_t bytes = 0;

    void write(const std::string& s) {
        out.write(s.data(), static_cast<std::streamsize>(s.size()));
        if (!out) {
            std::ostringstream os;
            os << "csv sink write failed after " << bytes << " bytes";
            throw std::runtime_error(os.str());
        }
        bytes += s.size();
    }
};

} // namespace

std::size_t emit_cells_csv(const SweepResult& result, std::ostream& out) {
    CountingWriter w{out};
    w.write(kCellsHeader);
    for (const auto& cell : result.cells) {
        const RunMetrics& m = cell.metrics;
        std::ostringstream os;
        os << format_real(cell.error_rate) << ',' << format_real(cell.d_value)
           << ',' << cell.replicate << ',' << m.crossings_processed << ','
           << m.crossings_lost << ',' << m.faults_injected << ','
           << m.faults_cleared << ',' << format_real(m.mean_time_to_clear())
           << ',' << format_real(m.mean_fvla_tick_fraction()) << '\n';
        w.write(os.str());
    }
    return w.bytes;
}

std::size_t emit_optimum_csv(const SweepResult& result, std::ostream& out) {
    CountingWriter w{out};
    w.write(kOptimumHeader);
    for (const auto& row : result.optimum) {
        std::ostringstream os;
        os << format_real(row.error_rate) << ',' << format_real(row.d_star)
           << ',' << format_real(row.throughput) << '\n';
        w.write(os.str());
    }
    return w.bytes;
}

std::size_t emit_sweep_csv(const SweepResult& result, std::ostream& cells_out,
                           std::ostream& optimum_out) {
    return emit_cells_csv(result, cells_out) +
           emit_optimum_csv(result, optimum_out);
}

CsvTraceSink::CsvTraceSink(std::ostream& out) : out_(out) {
    out_ << "tick,farmlet,dsp,task,watermark,staleness,active_fault_count,"
            "processed\n";
}

void CsvTraceSink::row(const TraceRow& r) {
    out_ << r.tick << ',' << r.farmlet << ',' << r.dsp << ','
         << to_string(r.task) << ',' << format_real(r.watermark) << ','
         << r.staleness << ',' << r.active_fault_count << ',' << r.processed
         << '\n';
}

void print_metrics(const RunMetrics& m, std::ostream& out) {
    out << "crossings_generated   " << m.crossings_generated << '\n'
        << "crossings_processed   " << m.crossings_processed << '\n'
        << "crossings_lost        " << m.crossings_lost << '\n'
        << "residual_fill         " << m.residual_fill << '\n'
        << "injection_attempts    " << m.injection_attempts << '\n'
        << "faults_injected       " << m.faults_injected << '\n'
        << "faults_cleared        " << m.faults_cleared << '\n'
        << "mean_time_to_clear    " << format_real(m.mean_time_to_clear())
        << '\n'
        << "mean_fvla_fraction    " << format_real(m.mean_fvla_tick_fraction())
        << '\n';
}

} // namespace farmsched
