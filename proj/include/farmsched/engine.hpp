#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "farmsched/mcw_rng.hpp"
#include "farmsched/model.hpp"
#include "farmsched/scheduler.hpp"

namespace farmsched {

/// Invalid configuration, reported with the offending section and key.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Which peers a completed FVLA check clears.
enum class CheckFanout { OnePeerRoundRobin, AllPeers };

/// Where arriving crossings are queued: one buffer per DSP, or one buffer
/// shared by the whole farmlet.
enum class ArrivalMode { PerDsp, SharedQueue };

/// Buffer, rate, and fault-table defaults applied to every DSP.
struct ModelParams {
    long capacity = 1000;
    long base_rate = 20;
    double arrival_rate = -1.0; // < 0 means the default 0.85 * base_rate
    FaultCatalog catalog = default_fault_catalog();

    // The default load leaves a 15% idle margin per DSP. Monitoring has to
    // fit inside that margin; at 10% the farm cannot keep the fault
    // equilibrium clear of saturation at the highest error rates.
    double resolved_arrival_rate() const {
        return arrival_rate < 0.0 ? 0.85 * static_cast<double>(base_rate)
                                  : arrival_rate;
    }

    bool operator==(const ModelParams&) const = default;
};

struct EngineConfig {
    int n_farmlets = 10;
    int dsps_per_farmlet = 5;
    long ticks = 10000;
    double error_rate = 0.001; // per-DSP per-tick fault probability
    long check_cost = 1;       // ticks one FVLA check occupies
    // One completed check audits the checker's whole farmlet. Blind
    // one-peer rotation cannot clear faults fast enough at the top error
    // rates, so it is available as config but not the default.
    CheckFanout check_fanout = CheckFanout::AllPeers;
    ArrivalMode arrival_mode = ArrivalMode::PerDsp;
    SchedulerParams scheduler;
    bool budget_cap = false; // enforce the per-interval VLA budget below
    BudgetParams budget;
    ModelParams model;
    std::uint32_t seed_z = McwRng::kDefaultZ;
    std::uint32_t seed_w = McwRng::kDefaultW;

    int total_dsps() const { return n_farmlets * dsps_per_farmlet; }

    /// Throws ConfigError naming the section and key of the first violated
    /// constraint.
    void validate() const;

    bool operator==(const EngineConfig&) const = default;
};

/// Non-fatal conditions worth surfacing (d outside the documented sweep
/// range, infeasible VLA budget).
std::vector<std::string> config_warnings(const EngineConfig& cfg);

/// One per-DSP trace record, emitted at the end of each tick.
struct TraceRow {
    long tick;
    int farmlet;
    int dsp;
    Task task;
    double watermark;
    long staleness;
    int active_fault_count;
    long processed;

    bool operator==(const TraceRow&) const = default;
};

class TraceSink {
public:
    virtual ~TraceSink() = default;
    virtual void row(const TraceRow& r) = 0;
};

/// Full mutable state of one simulation run.
struct Farm {
    std::vector<Farmlet> farmlets;
    std::vector<McwRng> rngs; // per DSP, indexed by global index
    long now = 0;             // index of the next tick to execute
};

Farm build_farm(const EngineConfig& cfg);

/// Bernoulli(error_rate) fault draw for one DSP. On success draws a kind
/// uniformly from the catalog; injecting a kind already active is a no-op
/// counted as an attempt but not as an injection. Returns instances added
/// (0 or 1).
int inject_faults(DspState& dsp, const FaultCatalog& catalog, double error_rate,
                  McwRng& rng, long now, RunMetrics& metrics);

/// Starts an FVLA check: picks the target per fanout (advancing the
/// checker's round-robin cursor) and occupies the checker for check_cost
/// ticks. Pre: checker.check_cooldown == 0.
void begin_fvla_check(Farmlet& farmlet, int checker_member, CheckFanout fanout,
                      long check_cost);

/// Finishes a check at tick `now`: marks every active fault on the target
/// peer(s) cleared, drops them from the peer's active list, and resets the
/// checker's staleness. Returns the number of faults cleared.
long complete_fvla_check(Farmlet& farmlet, int checker_member, long now,
                         RunMetrics& metrics);

/// Advances the farm by one tick. Phase order is fixed: arrivals,
/// arbitration, action, injection, bookkeeping.
void tick(Farm& farm, const EngineConfig& cfg, RunMetrics& metrics,
          TraceSink* trace = nullptr);

/// Validates, builds the farm, runs cfg.ticks ticks, and finalizes the
/// metrics (per-DSP VLA fractions, residual buffer fill).
RunMetrics run(const EngineConfig& cfg, TraceSink* trace = nullptr);

} // namespace farmsched
