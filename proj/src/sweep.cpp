#include "farmsched/sweep.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace farmsched {

SweepGrid SweepGrid::defaults() {
    SweepGrid g;
    g.d_values = log_spaced(0.0001, 3.0, 12);
    g.error_rates = {0.00001, 0.0001, 0.001, 0.01, 0.1};
    g.replicates = 1;
    return g;
}

std::vector<double> SweepGrid::log_spaced(double lo, double hi, int n) {
    if (n < 2 || !(lo > 0.0) || !(hi > lo))
        throw ConfigError("[sweep] log spacing needs n >= 2 and 0 < lo < hi");
    std::vector<double> out(static_cast<size_t>(n));
    const double ratio = hi / lo;
    for (int i = 0; i < n; ++i)
        out[static_cast<size_t>(i)] =
            lo * std::pow(ratio, static_cast<double>(i) / (n - 1));
    out.front() = lo;
    out.back() = hi;
    return out;
}

void SweepGrid::validate() const {
    if (d_values.empty()) throw ConfigError("[sweep].d_values must not be empty");
    if (error_rates.empty())
        throw ConfigError("[sweep].error_rates must not be empty");
    if (replicates < 1) throw ConfigError("[sweep].replicates must be >= 1");
    for (size_t i = 0; i < d_values.size(); ++i) {
        if (!(d_values[i] > 0.0))
            throw ConfigError("[sweep].d_values must all be > 0");
        if (i > 0 && !(d_values[i] > d_values[i - 1]))
            throw ConfigError("[sweep].d_values must be strictly increasing");
    }
    for (size_t i = 0; i < error_rates.size(); ++i) {
        if (error_rates[i] < 0.0 || error_rates[i] > 1.0)
            throw ConfigError("[sweep].error_rates must be in [0, 1]");
        if (i > 0 && !(error_rates[i] > error_rates[i - 1]))
            throw ConfigError("[sweep].error_rates must be strictly increasing");
    }
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

} // namespace

std::pair<std::uint32_t, std::uint32_t> cell_seed(std::uint32_t base_z,
                                                  std::uint32_t base_w,
                                                  int e_idx, int d_idx,
                                                  int replicate) {
    std::uint64_t key = (static_cast<std::uint64_t>(e_idx) << 42) |
                        (static_cast<std::uint64_t>(d_idx) << 21) |
                        static_cast<std::uint64_t>(replicate);
    std::uint64_t h = splitmix64(key);
    return {base_z ^ static_cast<std::uint32_t>(h >> 32),
            base_w ^ static_cast<std::uint32_t>(h)};
}

namespace {

struct CellJob {
    int e_idx;
    int d_idx;
    int rep;
};

std::vector<CellJob> grid_jobs(const SweepGrid& grid) {
    std::vector<CellJob> jobs;
    jobs.reserve(grid.cell_count());
    for (int e = 0; e < static_cast<int>(grid.error_rates.size()); ++e)
        for (int d = 0; d < static_cast<int>(grid.d_values.size()); ++d)
            for (int r = 0; r < grid.replicates; ++r)
                jobs.push_back(CellJob{e, d, r});
    return jobs;
}

RunMetrics run_cell(const SweepGrid& grid, const EngineConfig& base,
                    const CellJob& job) {
    EngineConfig cfg = base;
    cfg.error_rate = grid.error_rates[static_cast<size_t>(job.e_idx)];
    cfg.scheduler.d = grid.d_values[static_cast<size_t>(job.d_idx)];
    auto [z, w] = cell_seed(base.seed_z, base.seed_w, job.e_idx, job.d_idx,
                            job.rep);
    cfg.seed_z = z;
    cfg.seed_w = w;
    return run(cfg);
}

std::string cell_label(const SweepGrid& grid, const CellJob& job) {
    std::ostringstream os;
    os << "cell (error_rate="
       << grid.error_rates[static_cast<size_t>(job.e_idx)]
       << ", d=" << grid.d_values[static_cast<size_t>(job.d_idx)]
       << ", replicate=" << job.rep << "): ";
    return os.str();
}

SweepResult assemble(const SweepGrid& grid, std::vector<CellJob> jobs,
                     std::vector<RunMetrics> metrics) {
    SweepResult result;
    result.grid = grid;
    result.cells.reserve(jobs.size());
    for (size_t i = 0; i < jobs.size(); ++i)
        result.cells.push_back(SweepCell{
            grid.error_rates[static_cast<size_t>(jobs[i].e_idx)],
            grid.d_values[static_cast<size_t>(jobs[i].d_idx)], jobs[i].rep,
            std::move(metrics[i])});
    for (double e : grid.error_rates) {
        auto [d_star, thr] = find_optimum_d(result, e);
        result.optimum.push_back(OptimumRow{e, d_star, thr});
    }
    return result;
}

} // namespace

SweepResult run_sweep_serial(const SweepGrid& grid, const EngineConfig& base) {
    grid.validate();
    std::vector<CellJob> jobs = grid_jobs(grid);
    std::vector<RunMetrics> metrics(jobs.size());
    for (size_t i = 0; i < jobs.size(); ++i) {
        try {
            metrics[i] = run_cell(grid, base, jobs[i]);
        } catch (const ConfigError& e) {
            throw ConfigError(cell_label(grid, jobs[i]) + e.what());
        }
    }
    return assemble(grid, std::move(jobs), std::move(metrics));
}

SweepResult run_sweep(const SweepGrid& grid, const EngineConfig& base,
                      int threads) {
#ifdef _OPENMP
    if (threads > 1) {
        grid.validate();
        std::vector<CellJob> jobs = grid_jobs(grid);
        std::vector<RunMetrics> metrics(jobs.size());
        std::vector<std::string> errors(jobs.size());
        const int n = static_cast<int>(jobs.size());
#pragma omp parallel for schedule(dynamic) num_threads(threads)
        for (int i = 0; i < n; ++i) {
            try {
                metrics[static_cast<size_t>(i)] =
                    run_cell(grid, base, jobs[static_cast<size_t>(i)]);
            } catch (const std::exception& e) {
                errors[static_cast<size_t>(i)] =
                    cell_label(grid, jobs[static_cast<size_t>(i)]) + e.what();
            }
        }
        for (const auto& err : errors) // report the first cell in grid order
            if (!err.empty()) throw ConfigError(err);
        return assemble(grid, std::move(jobs), std::move(metrics));
    }
#else
    (void)threads;
#endif
    return run_sweep_serial(grid, base);
}

std::pair<double, double> find_optimum_d(const SweepResult& result,
                                         double error_rate) {
    bool found_e = false;
    bool have_best = false;
    double best_d = 0.0;
    double best_thr = 0.0;
    for (size_t di = 0; di < result.grid.d_values.size(); ++di) {
        double d = result.grid.d_values[di];
        double sum = 0.0;
        long n = 0;
        for (const auto& cell : result.cells) {
            if (cell.error_rate == error_rate && cell.d_value == d) {
                sum += static_cast<double>(cell.metrics.crossings_processed);
                ++n;
            }
        }
        if (n == 0) continue;
        found_e = true;
        double mean = sum / static_cast<double>(n);
        if (!have_best || mean > best_thr) { // ties keep the smaller d
            have_best = true;
            best_d = d;
            best_thr = mean;
        }
    }
    if (!found_e) {
        std::ostringstream os;
        os << "no sweep cells at error_rate=" << error_rate;
        throw std::out_of_range(os.str());
    }
    return {best_d, best_thr};
}

namespace {

double mean_throughput_at(const SweepResult& result, double error_rate,
                          double d) {
    double sum = 0.0;
    long n = 0;
    for (const auto& cell : result.cells)
        if (cell.error_rate == error_rate && cell.d_value == d) {
            sum += static_cast<double>(cell.metrics.crossings_processed);
            ++n;
        }
    return sum / static_cast<double>(n);
}

} // namespace

double asymmetry_ratio(const SweepResult& result, double error_rate,
                       double factor) {
    if (!(factor > 1.0))
        throw std::invalid_argument("asymmetry factor must be > 1");
    auto [d_star, thr] = find_optimum_d(result, error_rate);
    (void)thr;

    const auto& ds = result.grid.d_values;
    double lo_target = d_star / factor;
    double hi_target = d_star * factor;

    double d_lo = 0.0;
    bool have_lo = false;
    for (double d : ds)
        if (d <= lo_target) {
            d_lo = d; // ascending scan keeps the largest qualifying d
            have_lo = true;
        }
    double d_hi = 0.0;
    bool have_hi = false;
    for (double d : ds)
        if (d >= hi_target) {
            d_hi = d; // first qualifying d is the nearest from above
            have_hi = true;
            break;
        }

    if (!have_lo) {
        std::ostringstream os;
        os << "no grid point at or below d*/factor = " << lo_target
           << " (under-monitoring side missing)";
        throw std::domain_error(os.str());
    }
    if (!have_hi) {
        std::ostringstream os;
        os << "no grid point at or above d**factor = " << hi_target
           << " (over-monitoring side missing)";
        throw std::domain_error(os.str());
    }
    return mean_throughput_at(result, error_rate, d_hi) /
           mean_throughput_at(result, error_rate, d_lo);
}

} // namespace farmsched
