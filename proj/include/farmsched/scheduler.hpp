#pragma once

#include <algorithm>
#include <cmath>

#include "farmsched/model.hpp"

namespace farmsched {

/// Parameters of the PA/VLA arbitration rule.
struct SchedulerParams {
    double d = 0.5;         // sigmoid steepness; documented regime [1e-4, 3.0]
    double c = 1.0;         // weight on FVLA checks in the utility value
    double epsilon = 1e-9;  // singularity clamp for the utility denominators

    bool operator==(const SchedulerParams&) const = default;
};

/// Worst-case time shares within one interval of T ticks.
struct BudgetParams {
    long interval = 100; // T
    long pa_share = 70;  // ticks the application claims per interval
    long os_share = 10;  // ticks the kernel/command processor claims

    bool feasible() const { return pa_share + os_share <= interval; }
    bool operator==(const BudgetParams&) const = default;
};

/// Maps staleness to a monitoring urgency in [0, 1): 2*(logistic(d*F) - 1/2),
/// analytically tanh(d*F/2). Zero at F = 0, strictly increasing, saturating
/// toward 1. The saturated value is pinned one ulp below 1 so the result
/// stays comparable against a full watermark.
inline double adjusted_sigmoid(double staleness, double d) {
    double s = 2.0 * (1.0 / (1.0 + std::exp(-d * staleness)) - 0.5);
    return std::min(s, 0x1.fffffffffffffp-1);
}

/// Diagnostic utility value D/w + c/F with both denominators clamped at
/// epsilon. Not used by the tick-level arbitration (see choose_task).
inline double utility_value(double expected_rate, double watermark,
                            double staleness, double weight, double epsilon) {
    return expected_rate / std::max(watermark, epsilon) +
           weight / std::max(staleness, epsilon);
}

/// The arbitration rule: PA wins only when the watermark strictly exceeds
/// the urgency; ties keep (or hand) control to the VLA.
inline Task choose_task(double watermark, double staleness,
                        const SchedulerParams& params) {
    return watermark > adjusted_sigmoid(staleness, params.d) ? Task::PA
                                                             : Task::VLA;
}

/// Ticks per interval left over for the VLA once the application and the
/// OS have taken their worst-case shares. Infeasible budgets clamp to 0.
inline long vla_time_budget(const BudgetParams& b) {
    return std::max(0L, b.interval - b.pa_share - b.os_share);
}

} // namespace farmsched
