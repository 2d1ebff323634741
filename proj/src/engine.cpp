#include "farmsched/engine.hpp"

#include <cassert>
#include <cmath>
#include <sstream>

namespace farmsched {

namespace {

[[noreturn]] void fail(const std::string& key, const std::string& msg) {
    throw ConfigError(key + " " + msg);
}

void require(bool ok, const std::string& key, const std::string& msg) {
    if (!ok) fail(key, msg);
}

CrossingBuffer& arrival_buffer(Farmlet& flt, DspState& dsp, ArrivalMode mode) {
    return mode == ArrivalMode::PerDsp ? dsp.buffer : flt.shared;
}

} // namespace

void EngineConfig::validate() const {
    require(n_farmlets >= 1, "[engine].n_farmlets", "must be >= 1");
    require(dsps_per_farmlet >= 2, "[engine].dsps_per_farmlet",
            "must be >= 2 (a farmlet needs a peer to check)");
    require(ticks >= 1, "[engine].ticks", "must be >= 1");
    require(error_rate >= 0.0 && error_rate <= 1.0, "[engine].error_rate",
            "must be in [0, 1]");
    require(check_cost >= 1, "[engine].check_cost", "must be >= 1");
    require(!(seed_z == 0 && seed_w == 0), "[engine].seed",
            "z and w must not both be zero");
    require(scheduler.d > 0.0, "[scheduler].d", "must be > 0");
    require(scheduler.c >= 0.0, "[scheduler].c", "must be >= 0");
    require(scheduler.epsilon > 0.0, "[scheduler].epsilon", "must be > 0");
    require(budget.interval >= 1, "[scheduler].budget_interval", "must be >= 1");
    require(budget.pa_share >= 0, "[scheduler].budget_pa", "must be >= 0");
    require(budget.os_share >= 0, "[scheduler].budget_os", "must be >= 0");
    require(model.capacity >= 1, "[model].capacity", "must be >= 1");
    require(model.base_rate >= 1, "[model].base_rate", "must be >= 1");
    require(model.resolved_arrival_rate() >= 0.0, "[model].arrival_rate",
            "must be >= 0");
    require(!model.catalog.empty(), "[model].catalog", "must not be empty");
    for (size_t i = 0; i < model.catalog.size(); ++i) {
        const auto& k = model.catalog[i];
        if (!(k.penalty_factor > 0.0 && k.penalty_factor < 1.0))
            fail("[model].penalty_" + k.id,
                 "must be in (0, 1); 1 would make the fault a no-op");
    }
}

std::vector<std::string> config_warnings(const EngineConfig& cfg) {
    std::vector<std::string> out;
    if (cfg.scheduler.d < 1e-4 || cfg.scheduler.d > 3.0) {
        std::ostringstream os;
        os << "[scheduler].d = " << cfg.scheduler.d
           << " is outside the documented sweep range [0.0001, 3.0]";
        out.push_back(os.str());
    }
    if (cfg.budget_cap && !cfg.budget.feasible()) {
        std::ostringstream os;
        os << "[scheduler] budget is infeasible (pa " << cfg.budget.pa_share
           << " + os " << cfg.budget.os_share << " > interval "
           << cfg.budget.interval << "); VLA budget clamps to 0";
        out.push_back(os.str());
    }
    return out;
}

Farm build_farm(const EngineConfig& cfg) {
    Farm farm;
    const int per = cfg.dsps_per_farmlet;
    farm.farmlets.resize(static_cast<size_t>(cfg.n_farmlets));
    farm.rngs.reserve(static_cast<size_t>(cfg.total_dsps()));
    for (int f = 0; f < cfg.n_farmlets; ++f) {
        Farmlet& flt = farm.farmlets[static_cast<size_t>(f)];
        flt.id = f;
        flt.arrival_rate = cfg.model.resolved_arrival_rate();
        flt.shared.capacity = cfg.model.capacity * per;
        flt.members.resize(static_cast<size_t>(per));
        for (int j = 0; j < per; ++j) {
            DspState& dsp = flt.members[static_cast<size_t>(j)];
            dsp.index = f * per + j;
            dsp.buffer.capacity = cfg.model.capacity;
            dsp.base_rate = cfg.model.base_rate;
            farm.rngs.push_back(McwRng::substream(
                cfg.seed_z, cfg.seed_w, static_cast<std::uint32_t>(dsp.index)));
        }
    }
    return farm;
}

int inject_faults(DspState& dsp, const FaultCatalog& catalog, double error_rate,
                  McwRng& rng, long now, RunMetrics& metrics) {
    if (!(rng.next_unit() < error_rate)) return 0;
    metrics.injection_attempts += 1;
    int kind = static_cast<int>(rng.next_u32() % catalog.size());
    if (dsp.has_active_fault(kind)) return 0; // duplicate kinds do not stack
    dsp.faults.push_back(FaultInstance{kind, now, std::nullopt});
    metrics.faults_injected += 1;
    return 1;
}

void begin_fvla_check(Farmlet& farmlet, int checker_member, CheckFanout fanout,
                      long check_cost) {
    DspState& checker = farmlet.members[static_cast<size_t>(checker_member)];
    assert(checker.check_cooldown == 0);
    assert(farmlet.members.size() >= 2);
    if (fanout == CheckFanout::OnePeerRoundRobin) {
        const int peers = static_cast<int>(farmlet.members.size()) - 1;
        int slot = checker.rr_cursor % peers;
        checker.pending_target = slot < checker_member ? slot : slot + 1;
        checker.rr_cursor = (slot + 1) % peers;
    } else {
        checker.pending_target = -1; // all peers
    }
    checker.check_cooldown = check_cost;
}

namespace {

long clear_faults_on(DspState& target, long now, RunMetrics& metrics) {
    long cleared = 0;
    for (auto& f : target.faults) {
        f.cleared_at = now;
        metrics.faults_cleared += 1;
        metrics.sum_time_to_clear += now - f.injected_at;
        ++cleared;
    }
    target.faults.clear();
    return cleared;
}

} // namespace

long complete_fvla_check(Farmlet& farmlet, int checker_member, long now,
                         RunMetrics& metrics) {
    DspState& checker = farmlet.members[static_cast<size_t>(checker_member)];
    long cleared = 0;
    if (checker.pending_target >= 0) {
        cleared = clear_faults_on(
            farmlet.members[static_cast<size_t>(checker.pending_target)], now,
            metrics);
    } else {
        for (int j = 0; j < static_cast<int>(farmlet.members.size()); ++j)
            if (j != checker_member)
                cleared += clear_faults_on(
                    farmlet.members[static_cast<size_t>(j)], now, metrics);
    }
    checker.pending_target = -1;
    checker.staleness = 0; // resets even when nothing was cleared
    checker.checks_completed += 1;
    return cleared;
}

#ifndef NDEBUG
namespace {

void assert_invariants(const Farm& farm, const FaultCatalog& catalog) {
    for (const auto& flt : farm.farmlets) {
        assert(flt.members.size() >= 2);
        assert(flt.shared.fill >= 0 && flt.shared.fill <= flt.shared.capacity);
        for (const auto& dsp : flt.members) {
            assert(dsp.buffer.fill >= 0 && dsp.buffer.fill <= dsp.buffer.capacity);
            assert(dsp.staleness >= 0 && dsp.check_cooldown >= 0);
            assert(effective_rate(dsp, catalog) >= 0);
            for (size_t a = 0; a < dsp.faults.size(); ++a) {
                assert(dsp.faults[a].active());
                for (size_t b = a + 1; b < dsp.faults.size(); ++b)
                    assert(dsp.faults[a].kind != dsp.faults[b].kind);
            }
        }
    }
}

} // namespace
#endif

void tick(Farm& farm, const EngineConfig& cfg, RunMetrics& metrics,
          TraceSink* trace) {
    const long now = farm.now;
    const FaultCatalog& catalog = cfg.model.catalog;
    const long vla_budget = vla_time_budget(cfg.budget);

    // Phase 1: arrivals.
    for (auto& flt : farm.farmlets) {
        const long arrival_whole = static_cast<long>(std::floor(flt.arrival_rate));
        const double arrival_frac =
            flt.arrival_rate - static_cast<double>(arrival_whole);
        for (auto& dsp : flt.members) {
            long n = arrival_whole;
            if (arrival_frac > 0.0 &&
                farm.rngs[static_cast<size_t>(dsp.index)].next_unit() <
                    arrival_frac)
                n += 1;
            metrics.crossings_generated += n;
            metrics.crossings_lost +=
                arrival_buffer(flt, dsp, cfg.arrival_mode).push(n);
        }
    }

    // Phase 2: arbitration. Each decision reads only the DSP's own
    // pre-action state; DSPs mid-check stay VLA.
    for (auto& flt : farm.farmlets) {
        for (auto& dsp : flt.members) {
            if (cfg.budget_cap && now % cfg.budget.interval == 0)
                dsp.vla_interval_ticks = 0;
            if (dsp.check_cooldown > 0) {
                dsp.active_task = Task::VLA;
                continue;
            }
            double w = arrival_buffer(flt, dsp, cfg.arrival_mode).watermark();
            Task t = choose_task(w, static_cast<double>(dsp.staleness),
                                 cfg.scheduler);
            if (cfg.budget_cap && t == Task::VLA &&
                dsp.vla_interval_ticks >= vla_budget)
                t = Task::PA;
            dsp.active_task = t;
        }
    }

    // Phase 3: action.
    for (auto& flt : farm.farmlets) {
        for (int j = 0; j < static_cast<int>(flt.members.size()); ++j) {
            DspState& dsp = flt.members[static_cast<size_t>(j)];
            dsp.processed_this_tick = 0;
            if (dsp.active_task == Task::PA) {
                long did = arrival_buffer(flt, dsp, cfg.arrival_mode)
                               .pop(effective_rate(dsp, catalog));
                dsp.processed_this_tick = did;
                metrics.crossings_processed += did;
            } else if (dsp.check_cooldown == 0) {
                begin_fvla_check(flt, j, cfg.check_fanout, cfg.check_cost);
            }
        }
    }

    // Phase 4: injection. A fault lands after this tick's processing, so it
    // first affects the next tick.
    for (auto& flt : farm.farmlets)
        for (auto& dsp : flt.members)
            inject_faults(dsp, catalog, cfg.error_rate,
                          farm.rngs[static_cast<size_t>(dsp.index)], now,
                          metrics);

    // Phase 5: bookkeeping. Cooldowns tick down; a cooldown reaching zero
    // completes the check and resets the checker's staleness; everyone else
    // goes one tick staler.
    for (auto& flt : farm.farmlets) {
        for (int j = 0; j < static_cast<int>(flt.members.size()); ++j) {
            DspState& dsp = flt.members[static_cast<size_t>(j)];
            if (dsp.active_task == Task::VLA) {
                dsp.vla_ticks += 1;
                dsp.vla_interval_ticks += 1;
            }
            bool completed = false;
            if (dsp.check_cooldown > 0) {
                dsp.check_cooldown -= 1;
                if (dsp.check_cooldown == 0) {
                    complete_fvla_check(flt, j, now, metrics);
                    completed = true;
                }
            }
            if (!completed) dsp.staleness += 1;
        }
    }

    if (trace) {
        for (auto& flt : farm.farmlets) {
            for (auto& dsp : flt.members) {
                int active = 0;
                for (const auto& f : dsp.faults)
                    if (f.active()) ++active;
                trace->row(TraceRow{
                    now, flt.id, dsp.index, dsp.active_task,
                    arrival_buffer(flt, dsp, cfg.arrival_mode).watermark(),
                    dsp.staleness, active, dsp.processed_this_tick});
            }
        }
    }

#ifndef NDEBUG
    assert_invariants(farm, catalog);
#endif
    farm.now = now + 1;
}

RunMetrics run(const EngineConfig& cfg, TraceSink* trace) {
    cfg.validate();
    Farm farm = build_farm(cfg);
    RunMetrics metrics;
    for (long t = 0; t < cfg.ticks; ++t) tick(farm, cfg, metrics, trace);

    metrics.fvla_tick_fraction.resize(static_cast<size_t>(cfg.total_dsps()));
    for (const auto& flt : farm.farmlets) {
        for (const auto& dsp : flt.members) {
            metrics.fvla_tick_fraction[static_cast<size_t>(dsp.index)] =
                static_cast<double>(dsp.vla_ticks) /
                static_cast<double>(cfg.ticks);
            metrics.residual_fill += dsp.buffer.fill;
        }
        metrics.residual_fill += flt.shared.fill;
    }
    return metrics;
}

} // namespace farmsched
