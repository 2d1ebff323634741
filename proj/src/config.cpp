#include "farmsched/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

namespace farmsched {

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string strip_comment(const std::string& line) {
    size_t pos = line.find_first_of("#;");
    return pos == std::string::npos ? line : line.substr(0, pos);
}

size_t edit_distance(const std::string& a, const std::string& b) {
    std::vector<size_t> prev(b.size() + 1), cur(b.size() + 1);
    for (size_t j = 0; j <= b.size(); ++j) prev[j] = j;
    for (size_t i = 1; i <= a.size(); ++i) {
        cur[0] = i;
        for (size_t j = 1; j <= b.size(); ++j) {
            size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

std::string nearest_key(const std::string& key,
                        const std::vector<std::string>& valid) {
    std::string best;
    size_t best_dist = SIZE_MAX;
    for (const auto& v : valid) {
        size_t d = edit_distance(key, v);
        if (d < best_dist) {
            best_dist = d;
            best = v;
        }
    }
    return best;
}

[[noreturn]] void fail_at(int line, const std::string& msg) {
    std::ostringstream os;
    os << "line " << line << ": " << msg;
    throw ConfigError(os.str());
}

double parse_double(const std::string& path, int line, const std::string& v) {
    double out = 0.0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size())
        fail_at(line, path + ": invalid real value '" + v + "'");
    return out;
}

long parse_long(const std::string& path, int line, const std::string& v) {
    long out = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size())
        fail_at(line, path + ": invalid integer value '" + v + "'");
    return out;
}

std::uint32_t parse_u32(const std::string& path, int line,
                        const std::string& v) {
    std::uint32_t out = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size())
        fail_at(line, path + ": invalid unsigned value '" + v + "'");
    return out;
}

bool parse_bool(const std::string& path, int line, const std::string& v) {
    if (v == "true" || v == "yes" || v == "1") return true;
    if (v == "false" || v == "no" || v == "0") return false;
    fail_at(line, path + ": invalid boolean value '" + v +
                      "' (use true/false)");
}

std::vector<double> parse_double_list(const std::string& path, int line,
                                      const std::string& v) {
    std::vector<double> out;
    std::string item;
    std::istringstream is(v);
    while (std::getline(is, item, ',')) {
        item = trim(item);
        if (item.empty()) fail_at(line, path + ": empty list element");
        out.push_back(parse_double(path, line, item));
    }
    if (out.empty()) fail_at(line, path + ": empty list");
    return out;
}

std::string format_shortest(double v) {
    char buf[40];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, ptr);
}

const std::vector<std::string> kEngineKeys = {
    "n_farmlets", "dsps_per_farmlet", "ticks",  "error_rate", "check_cost",
    "check_fanout", "arrival_mode",   "seed_z", "seed_w"};
const std::vector<std::string> kSchedulerKeys = {
    "d",      "c",          "epsilon",   "budget_cap",
    "budget_interval", "budget_pa", "budget_os"};
const std::vector<std::string> kSweepKeys = {
    "d_values", "d_min", "d_max", "d_count", "error_rates", "replicates"};

std::vector<std::string> model_keys(const FaultCatalog& catalog) {
    std::vector<std::string> keys = {"capacity", "base_rate", "arrival_rate"};
    for (const auto& k : catalog) keys.push_back("penalty_" + k.id);
    return keys;
}

struct SweepRaw {
    std::vector<double> d_values;
    bool have_values = false;
    double d_min = 0.0001;
    double d_max = 3.0;
    long d_count = 12;
    bool have_endpoints = false;
};

} // namespace

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    SweepRaw sweep_raw;

    std::istringstream is(text);
    std::string raw;
    std::string section;
    int line = 0;
    while (std::getline(is, raw)) {
        ++line;
        std::string s = trim(strip_comment(raw));
        if (s.empty()) continue;

        if (s.front() == '[') {
            if (s.back() != ']') fail_at(line, "unterminated section header");
            section = trim(s.substr(1, s.size() - 2));
            if (section != "engine" && section != "scheduler" &&
                section != "model" && section != "sweep")
                fail_at(line, "unknown section [" + section +
                                  "] (valid: engine, scheduler, model, sweep)");
            continue;
        }

        size_t eq = s.find('=');
        if (eq == std::string::npos)
            fail_at(line, "expected 'key = value' or '[section]'");
        std::string key = trim(s.substr(0, eq));
        std::string value = trim(s.substr(eq + 1));
        if (key.empty()) fail_at(line, "missing key before '='");
        if (section.empty())
            fail_at(line, "key '" + key + "' appears before any [section]");

        const std::string path = "[" + section + "]." + key;
        EngineConfig& e = cfg.engine;

        if (section == "engine") {
            if (key == "n_farmlets")
                e.n_farmlets = static_cast<int>(parse_long(path, line, value));
            else if (key == "dsps_per_farmlet")
                e.dsps_per_farmlet =
                    static_cast<int>(parse_long(path, line, value));
            else if (key == "ticks")
                e.ticks = parse_long(path, line, value);
            else if (key == "error_rate")
                e.error_rate = parse_double(path, line, value);
            else if (key == "check_cost")
                e.check_cost = parse_long(path, line, value);
            else if (key == "check_fanout") {
                if (value == "one-peer-round-robin")
                    e.check_fanout = CheckFanout::OnePeerRoundRobin;
                else if (value == "all-peers")
                    e.check_fanout = CheckFanout::AllPeers;
                else
                    fail_at(line, path + ": expected one-peer-round-robin or "
                                         "all-peers, got '" + value + "'");
            } else if (key == "arrival_mode") {
                if (value == "per-dsp")
                    e.arrival_mode = ArrivalMode::PerDsp;
                else if (value == "shared-queue")
                    e.arrival_mode = ArrivalMode::SharedQueue;
                else
                    fail_at(line, path + ": expected per-dsp or shared-queue, "
                                         "got '" + value + "'");
            } else if (key == "seed_z")
                e.seed_z = parse_u32(path, line, value);
            else if (key == "seed_w")
                e.seed_w = parse_u32(path, line, value);
            else
                fail_at(line, path + ": unknown key (did you mean '" +
                                  nearest_key(key, kEngineKeys) + "'?)");
        } else if (section == "scheduler") {
            if (key == "d")
                e.scheduler.d = parse_double(path, line, value);
            else if (key == "c")
                e.scheduler.c = parse_double(path, line, value);
            else if (key == "epsilon")
                e.scheduler.epsilon = parse_double(path, line, value);
            else if (key == "budget_cap")
                e.budget_cap = parse_bool(path, line, value);
            else if (key == "budget_interval")
                e.budget.interval = parse_long(path, line, value);
            else if (key == "budget_pa")
                e.budget.pa_share = parse_long(path, line, value);
            else if (key == "budget_os")
                e.budget.os_share = parse_long(path, line, value);
            else
                fail_at(line, path + ": unknown key (did you mean '" +
                                  nearest_key(key, kSchedulerKeys) + "'?)");
        } else if (section == "model") {
            if (key == "capacity")
                e.model.capacity = parse_long(path, line, value);
            else if (key == "base_rate")
                e.model.base_rate = parse_long(path, line, value);
            else if (key == "arrival_rate")
                e.model.arrival_rate = parse_double(path, line, value);
            else if (key.rfind("penalty_", 0) == 0) {
                std::string id = key.substr(8);
                bool found = false;
                for (auto& k : e.model.catalog)
                    if (k.id == id) {
                        k.penalty_factor = parse_double(path, line, value);
                        found = true;
                        break;
                    }
                if (!found)
                    fail_at(line,
                            path + ": unknown key (did you mean '" +
                                nearest_key(key, model_keys(e.model.catalog)) +
                                "'?)");
            } else
                fail_at(line,
                        path + ": unknown key (did you mean '" +
                            nearest_key(key, model_keys(e.model.catalog)) +
                            "'?)");
        } else { // sweep
            if (key == "d_values") {
                sweep_raw.d_values = parse_double_list(path, line, value);
                sweep_raw.have_values = true;
            } else if (key == "d_min") {
                sweep_raw.d_min = parse_double(path, line, value);
                sweep_raw.have_endpoints = true;
            } else if (key == "d_max") {
                sweep_raw.d_max = parse_double(path, line, value);
                sweep_raw.have_endpoints = true;
            } else if (key == "d_count") {
                sweep_raw.d_count = parse_long(path, line, value);
                sweep_raw.have_endpoints = true;
            } else if (key == "error_rates")
                cfg.sweep.error_rates = parse_double_list(path, line, value);
            else if (key == "replicates")
                cfg.sweep.replicates =
                    static_cast<int>(parse_long(path, line, value));
            else
                fail_at(line, path + ": unknown key (did you mean '" +
                                  nearest_key(key, kSweepKeys) + "'?)");
        }
    }

    if (sweep_raw.have_values && sweep_raw.have_endpoints)
        throw ConfigError(
            "[sweep] specify either d_values or d_min/d_max/d_count, not both");
    if (sweep_raw.have_values)
        cfg.sweep.d_values = sweep_raw.d_values;
    else if (sweep_raw.have_endpoints)
        cfg.sweep.d_values = SweepGrid::log_spaced(
            sweep_raw.d_min, sweep_raw.d_max,
            static_cast<int>(sweep_raw.d_count));

    cfg.engine.validate();
    cfg.sweep.validate();
    return cfg;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return parse_config(os.str());
}

std::string dump_config(const RunConfig& cfg) {
    const EngineConfig& e = cfg.engine;
    std::ostringstream os;
    os << "[engine]\n";
    os << "n_farmlets = " << e.n_farmlets << '\n';
    os << "dsps_per_farmlet = " << e.dsps_per_farmlet << '\n';
    os << "ticks = " << e.ticks << '\n';
    os << "error_rate = " << format_shortest(e.error_rate) << '\n';
    os << "check_cost = " << e.check_cost << '\n';
    os << "check_fanout = "
       << (e.check_fanout == CheckFanout::OnePeerRoundRobin
               ? "one-peer-round-robin"
               : "all-peers")
       << '\n';
    os << "arrival_mode = "
       << (e.arrival_mode == ArrivalMode::PerDsp ? "per-dsp" : "shared-queue")
       << '\n';
    os << "seed_z = " << e.seed_z << '\n';
    os << "seed_w = " << e.seed_w << '\n';
    os << '\n';
    os << "[scheduler]\n";
    os << "d = " << format_shortest(e.scheduler.d) << '\n';
    os << "c = " << format_shortest(e.scheduler.c) << '\n';
    os << "epsilon = " << format_shortest(e.scheduler.epsilon) << '\n';
    os << "budget_cap = " << (e.budget_cap ? "true" : "false") << '\n';
    os << "budget_interval = " << e.budget.interval << '\n';
    os << "budget_pa = " << e.budget.pa_share << '\n';
    os << "budget_os = " << e.budget.os_share << '\n';
    os << '\n';
    os << "[model]\n";
    os << "capacity = " << e.model.capacity << '\n';
    os << "base_rate = " << e.model.base_rate << '\n';
    if (e.model.arrival_rate >= 0.0)
        os << "arrival_rate = " << format_shortest(e.model.arrival_rate)
           << '\n';
    else
        os << "# arrival_rate defaults to 0.85 * base_rate\n";
    for (const auto& k : e.model.catalog)
        os << "penalty_" << k.id << " = " << format_shortest(k.penalty_factor)
           << '\n';
    os << '\n';
    os << "[sweep]\n";
    os << "d_values = ";
    for (size_t i = 0; i < cfg.sweep.d_values.size(); ++i)
        os << (i ? ", " : "") << format_shortest(cfg.sweep.d_values[i]);
    os << '\n';
    os << "error_rates = ";
    for (size_t i = 0; i < cfg.sweep.error_rates.size(); ++i)
        os << (i ? ", " : "") << format_shortest(cfg.sweep.error_rates[i]);
    os << '\n';
    os << "replicates = " << cfg.sweep.replicates << '\n';
    return os.str();
}

} // namespace farmsched
