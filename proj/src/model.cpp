#include "farmsched/model.hpp"

#include <cmath>

namespace farmsched {

FaultCatalog default_fault_catalog() {
    // Severity ordering: control-flow corruption (0.5) > budget/transfer
    // failures (0.7) > data anomalies and slowdowns (0.85).
    return {
        {"e1", "over time budget on crossing processing", 0.7},
        {"e2", "PA stuck in a loop inside software timer control", 0.7},
        {"e3", "framework stuck in a loop outside software timer control", 0.5},
        {"e4", "branch to an illegal instruction", 0.5},
        {"e5", "per-crossing processing times out of range", 0.85},
        {"e6", "too many track segments", 0.85},
        {"e7", "corrupt crossing data (truncated, misaligned, or bad header)", 0.85},
        {"e8", "corrupt data referencing nonexistent detector channels", 0.85},
        {"e9", "crossing data lost", 0.5},
        {"e10", "failed to transfer results down the L1 buffer link", 0.7},
    };
}

long effective_rate(const DspState& dsp, const FaultCatalog& catalog) {
    double factor = 1.0;
    for (const auto& f : dsp.faults)
        if (f.active()) factor *= catalog[static_cast<size_t>(f.kind)].penalty_factor;
    return static_cast<long>(
        std::floor(static_cast<double>(dsp.base_rate) * factor));
}

double RunMetrics::mean_fvla_tick_fraction() const {
    if (fvla_tick_fraction.empty()) return 0.0;
    double sum = 0.0;
    for (double f : fvla_tick_fraction) sum += f;
    return sum / static_cast<double>(fvla_tick_fraction.size());
}

} // namespace farmsched
