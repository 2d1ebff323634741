#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace farmsched {

/// Task in control of a DSP at a given tick.
enum class Task { PA, VLA };

inline const char* to_string(Task t) { return t == Task::PA ? "PA" : "VLA"; }

/// One entry of the fault taxonomy (e1..e10). While a fault of this kind is
/// active on a DSP, the DSP's processing rate is multiplied by penalty_factor.
struct FaultKind {
    std::string id;
    std::string description;
    double penalty_factor; // in (0, 1); 1 would be a no-op and is rejected at config load

    bool operator==(const FaultKind&) const = default;
};

using FaultCatalog = std::vector<FaultKind>;

/// The ten built-in fault kinds with the default penalty table. Ordering is
/// stable (e1..e10).
FaultCatalog default_fault_catalog();

/// One fault occurrence on a DSP. Active until cleared_at is set.
struct FaultInstance {
    int kind;      // index into the run's fault catalog
    long injected_at;
    std::optional<long> cleared_at;

    bool active() const { return !cleared_at.has_value(); }
};

/// Bounded queue of crossings awaiting processing. Counts every crossing
/// dropped on overflow.
struct CrossingBuffer {
    long fill = 0;
    long capacity = 1;
    long long overflow_count = 0;

    double watermark() const {
        return static_cast<double>(fill) / static_cast<double>(capacity);
    }

    /// Enqueues n crossings, dropping whatever exceeds capacity.
    /// Returns the number dropped.
    long push(long n) {
        long room = capacity - fill;
        long dropped = n > room ? n - room : 0;
        fill += n - dropped;
        overflow_count += dropped;
        return dropped;
    }

    /// Dequeues up to n crossings; returns the number actually removed.
    long pop(long n) {
        long taken = n < fill ? n : fill;
        fill -= taken;
        return taken;
    }
};

/// One worker node of the farm.
struct DspState {
    int index = 0;                 // global index across the farm
    CrossingBuffer buffer;
    long base_rate = 0;            // crossings per tick when fault-free
    long staleness = 0;            // ticks since this DSP last completed an FVLA check
    Task active_task = Task::VLA;
    std::vector<FaultInstance> faults; // active instances only; at most one per kind
    long check_cooldown = 0;       // ticks remaining in an in-progress check
    int rr_cursor = 0;             // round-robin peer cursor, persists across checks
    int pending_target = -1;       // member index under check, -1 when idle/all-peers
    long vla_ticks = 0;            // lifetime ticks spent under VLA control
    long vla_interval_ticks = 0;   // VLA ticks in the current budget interval
    long checks_completed = 0;
    long processed_this_tick = 0;  // scratch for trace emission

    bool has_active_fault(int kind) const {
        for (const auto& f : faults)
            if (f.kind == kind) return true;
        return false;
    }
};

/// Peer group of DSPs that monitor one another. FVLA checks never cross
/// farmlet boundaries.
struct Farmlet {
    int id = 0;
    std::vector<DspState> members; // size >= 2
    double arrival_rate = 0.0;     // expected crossings per member per tick
    CrossingBuffer shared;         // used only in shared-queue arrival mode
};

/// Crossings the DSP can process this tick: floor(base_rate * product of
/// active penalty factors). No active faults leaves base_rate untouched.
long effective_rate(const DspState& dsp, const FaultCatalog& catalog);

/// Aggregated counters for one simulation run.
struct RunMetrics {
    long long crossings_generated = 0;
    long long crossings_processed = 0;
    long long crossings_lost = 0;
    long long faults_injected = 0;
    long long faults_cleared = 0;
    long long injection_attempts = 0; // successful Bernoulli draws, incl. duplicate-kind no-ops
    long long sum_time_to_clear = 0;
    long long residual_fill = 0;      // total crossings still buffered at run end
    std::vector<double> fvla_tick_fraction; // per DSP, indexed by global index

    double mean_time_to_clear() const {
        return faults_cleared == 0
                   ? 0.0
                   : static_cast<double>(sum_time_to_clear) /
                         static_cast<double>(faults_cleared);
    }

    double mean_fvla_tick_fraction() const;

    bool operator==(const RunMetrics&) const = default;
};

} // namespace farmsched
