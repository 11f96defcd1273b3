#include "worldsim/ensemble.hpp"

#include "worldsim/errors.hpp"
#include "worldsim/sdl.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

namespace worldsim {

namespace {

std::string fmt(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

int grid_point(const TimeGrid& grid, double year) {
    const double k = (year - grid.start) / grid.step;
    const int ki = static_cast<int>(std::lround(k));
    if (ki < 0 || ki >= grid.points() || std::abs(grid.at(ki) - year) > 1e-9) return -1;
    return ki;
}

} // namespace

int EnsembleResult::var_index(const std::string& name) const {
    for (size_t v = 0; v < variables.size(); ++v) {
        if (variables[v] == name) return static_cast<int>(v);
    }
    throw MissingVariableError("ensemble has no variable '" + name + "'");
}

double EnsembleResult::value(int realization, int var, int point) const {
    const size_t T = static_cast<size_t>(grid.points());
    return values[(static_cast<size_t>(realization) * variables.size() + var) * T + point];
}

double EnsembleResult::mean_at(const std::string& name, double year) const {
    const int v = var_index(name);
    const int k = grid_point(grid, year);
    if (k < 0) throw MissingMilestoneError("year " + fmt(year) + " not on the ensemble grid");
    return mean[static_cast<size_t>(v) * grid.points() + k];
}

double EnsembleResult::std_at(const std::string& name, double year) const {
    const int v = var_index(name);
    const int k = grid_point(grid, year);
    if (k < 0) throw MissingMilestoneError("year " + fmt(year) + " not on the ensemble grid");
    return std_dev[static_cast<size_t>(v) * grid.points() + k];
}

EnsembleResult run_ensemble(const ExecutableModel& model, const std::string& pathway_id,
                            const std::unordered_map<std::string, double>& parameters,
                            const std::vector<ParameterRange>& uncertainty, const TimeGrid& grid,
                            int n, std::uint64_t seed, int workers) {
    if (n < 1) throw OutOfRangeError("run_ensemble: need at least one realization");
    if (workers < 1) workers = static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;
    grid.validate();

    EnsembleResult result;
    result.pathway_id = pathway_id;
    result.grid = grid;
    result.sampled = uncertainty;
    result.seed = seed;
    result.realizations = n;
    result.variables = model.definition().outputs.empty() ? model.recorded_names()
                                                          : model.definition().outputs;

    std::vector<int> recorded;
    recorded.reserve(result.variables.size());
    for (const auto& name : result.variables) recorded.push_back(model.recorded_index(name));

    const ExecutableModel::Overrides base = model.make_overrides(parameters);
    std::vector<std::int32_t> sampled_slots;
    sampled_slots.reserve(uncertainty.size());
    for (const auto& r : uncertainty) sampled_slots.push_back(model.parameter_slot(r.name));

    const SampleMatrix samples = lhs_sample(uncertainty, n, seed);

    const size_t V = result.variables.size();
    const size_t T = static_cast<size_t>(grid.points());
    result.values.assign(static_cast<size_t>(n) * V * T, 0.0);

    std::atomic<int> next{0};
    std::atomic<bool> failed{false};
    std::mutex failure_mutex;
    std::string failure_message;

    auto work = [&] {
        ExecutableModel::Overrides ov = base;
        const size_t base_size = base.size();
        ov.resize(base_size + sampled_slots.size());
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= n || failed.load()) return;
            for (size_t j = 0; j < sampled_slots.size(); ++j) {
                ov[base_size + j] = {sampled_slots[j], samples.at(i, static_cast<int>(j))};
            }
            try {
                model.run_into(grid, ov, recorded, result.values.data() + static_cast<size_t>(i) * V * T,
                               static_cast<int>(T));
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failed.exchange(true)) {
                    std::ostringstream os;
                    os << "realization " << i << " failed: " << e.what() << " [sampled:";
                    for (size_t j = 0; j < uncertainty.size(); ++j) {
                        os << ' ' << uncertainty[j].name << '=' << samples.at(i, static_cast<int>(j));
                    }
                    os << ']';
                    failure_message = os.str();
                }
            }
        }
    };

    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    if (failed.load()) throw RealizationFailure(failure_message);

    // Sequential two-pass reduction in realization order; independent of the
    // worker count by construction.
    result.mean.assign(V * T, 0.0);
    result.std_dev.assign(V * T, 0.0);
    for (int i = 0; i < n; ++i) {
        const double* row = result.values.data() + static_cast<size_t>(i) * V * T;
        for (size_t j = 0; j < V * T; ++j) result.mean[j] += row[j];
    }
    for (size_t j = 0; j < V * T; ++j) result.mean[j] /= n;
    if (n > 1) {
        for (int i = 0; i < n; ++i) {
            const double* row = result.values.data() + static_cast<size_t>(i) * V * T;
            for (size_t j = 0; j < V * T; ++j) {
                const double d = row[j] - result.mean[j];
                result.std_dev[j] += d * d;
            }
        }
        for (size_t j = 0; j < V * T; ++j) result.std_dev[j] = std::sqrt(result.std_dev[j] / (n - 1));
    }
    return result;
}

std::vector<ParameterRange> screen_then_range(const ExecutableModel& model,
                                              const ParameterRegistry& registry,
                                              const PathwaySpec& spec,
                                              const std::string& objective_variable, int k, int r,
                                              int p, std::uint64_t seed) {
    if (k < 1) throw OutOfRangeError("screen_then_range: k must be >= 1");
    std::vector<ParameterRange> candidates = spec.uncertainty;
    if (candidates.empty()) {
        for (const auto& e : registry.entries()) {
            if (e.low < e.high) candidates.push_back({e.name, e.low, e.high});
        }
    }
    if (static_cast<int>(candidates.size()) <= k) return candidates;

    const TimeGrid grid;
    const int objective_index = model.recorded_index(objective_variable);
    const int last = grid.points() - 1;
    auto base_params = apply_pathway(registry.nominals(), spec);

    const ExecutableModel::Overrides base = model.make_overrides(base_params);
    std::vector<std::int32_t> slots;
    slots.reserve(candidates.size());
    for (const auto& c : candidates) slots.push_back(model.parameter_slot(c.name));

    std::vector<int> rec = {objective_index};
    std::vector<double> out(grid.points());
    auto objective = [&](std::span<const double> x) {
        ExecutableModel::Overrides ov = base;
        for (size_t j = 0; j < slots.size(); ++j) ov.emplace_back(slots[j], x[j]);
        model.run_into(grid, ov, rec, out.data(), grid.points());
        return out[last];
    };

    const MorrisResult morris = morris_screen(objective, candidates, r, p, seed);
    std::vector<ParameterRange> kept;
    kept.reserve(k);
    for (int idx : morris.ranking()) {
        kept.push_back(candidates[idx]);
        if (static_cast<int>(kept.size()) == k) break;
    }
    return kept;
}

void write_envelope_csv(const EnsembleResult& result, std::ostream& out) {
    out << "pathway,variable,year,mean,std\n";
    const size_t T = static_cast<size_t>(result.grid.points());
    for (size_t v = 0; v < result.variables.size(); ++v) {
        for (size_t t = 0; t < T; ++t) {
            out << result.pathway_id << ',' << result.variables[v] << ','
                << fmt(result.grid.at(static_cast<int>(t))) << ',' << fmt(result.mean[v * T + t])
                << ',' << fmt(result.std_dev[v * T + t]) << '\n';
        }
    }
}

void write_indicator_csv(const EnsembleResult& result, const std::vector<std::string>& variables,
                         const std::vector<double>& years, std::ostream& out) {
    out << "pathway,realization,variable,year,value\n";
    std::vector<int> vidx, tidx;
    for (const auto& name : variables) vidx.push_back(result.var_index(name));
    for (double y : years) {
        const int k = grid_point(result.grid, y);
        if (k < 0) throw MissingMilestoneError("year " + fmt(y) + " not on the ensemble grid");
        tidx.push_back(k);
    }
    for (int i = 0; i < result.realizations; ++i) {
        for (size_t v = 0; v < vidx.size(); ++v) {
            for (size_t y = 0; y < years.size(); ++y) {
                out << result.pathway_id << ',' << i << ',' << variables[v] << ',' << fmt(years[y])
                    << ',' << fmt(result.value(i, vidx[v], tidx[y])) << '\n';
            }
        }
    }
}

const std::vector<double>& IndicatorSamples::at(const std::string& variable, double year) const {
    auto it = series.find({variable, year});
    if (it != series.end()) return it->second;
    for (const auto& [key, unused] : series) {
        if (key.first == variable) {
            throw MissingMilestoneError("indicator samples for '" + variable +
                                        "' have no year " + fmt(year));
        }
    }
    throw MissingVariableError("indicator samples have no variable '" + variable + "'");
}

bool IndicatorSamples::has(const std::string& variable, double year) const {
    return series.count({variable, year}) > 0;
}

IndicatorSamples load_indicator_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open indicator CSV: " + path);
    std::string line;
    if (!std::getline(in, line) || sdl::trim(line) != "pathway,realization,variable,year,value") {
        throw ParseError(path + ": bad indicator CSV header");
    }
    IndicatorSamples samples;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (sdl::trim(line).empty()) continue;
        std::array<std::string, 5> field;
        size_t pos = 0;
        for (int f = 0; f < 5; ++f) {
            const size_t comma = f < 4 ? line.find(',', pos) : line.size();
            if (comma == std::string::npos) {
                throw ParseError(path + ":" + std::to_string(lineno) + ": expected 5 fields");
            }
            field[f] = line.substr(pos, comma - pos);
            pos = comma + 1;
        }
        if (samples.pathway_id.empty()) samples.pathway_id = field[0];
        const int realization = static_cast<int>(sdl::parse_double(field[1]));
        samples.realizations = std::max(samples.realizations, realization + 1);
        samples.series[{field[2], sdl::parse_double(field[3])}].push_back(sdl::parse_double(field[4]));
    }
    for (const auto& [key, vals] : samples.series) {
        if (static_cast<int>(vals.size()) != samples.realizations) {
            throw ParseError(path + ": variable '" + key.first + "' year " + fmt(key.second) +
                             " has " + std::to_string(vals.size()) + " rows, expected " +
                             std::to_string(samples.realizations));
        }
    }
    return samples;
}

IndicatorSamples extract_indicator_samples(const EnsembleResult& result,
                                           const std::vector<std::string>& variables,
                                           const std::vector<double>& years) {
    IndicatorSamples samples;
    samples.pathway_id = result.pathway_id;
    samples.realizations = result.realizations;
    for (const auto& name : variables) {
        const int v = result.var_index(name);
        for (double y : years) {
            const int k = grid_point(result.grid, y);
            if (k < 0) throw MissingMilestoneError("year " + fmt(y) + " not on the ensemble grid");
            auto& vec = samples.series[{name, y}];
            vec.reserve(result.realizations);
            for (int i = 0; i < result.realizations; ++i) vec.push_back(result.value(i, v, k));
        }
    }
    return samples;
}

double EnvelopeTable::mean_at(const std::string& variable, double year) const {
    auto it = stats.find({variable, year});
    if (it == stats.end()) {
        throw MissingVariableError("envelope has no entry for '" + variable + "' at year " +
                                   fmt(year));
    }
    return it->second.first;
}

double EnvelopeTable::std_at(const std::string& variable, double year) const {
    auto it = stats.find({variable, year});
    if (it == stats.end()) {
        throw MissingVariableError("envelope has no entry for '" + variable + "' at year " +
                                   fmt(year));
    }
    return it->second.second;
}

EnvelopeTable load_envelope_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open envelope CSV: " + path);
    std::string line;
    if (!std::getline(in, line) || sdl::trim(line) != "pathway,variable,year,mean,std") {
        throw ParseError(path + ": bad envelope CSV header");
    }
    EnvelopeTable table;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (sdl::trim(line).empty()) continue;
        std::array<std::string, 5> field;
        size_t pos = 0;
        for (int f = 0; f < 5; ++f) {
            const size_t comma = f < 4 ? line.find(',', pos) : line.size();
            if (comma == std::string::npos) {
                throw ParseError(path + ":" + std::to_string(lineno) + ": expected 5 fields");
            }
            field[f] = line.substr(pos, comma - pos);
            pos = comma + 1;
        }
        if (table.pathway_id.empty()) table.pathway_id = field[0];
        table.stats[{field[1], sdl::parse_double(field[2])}] = {sdl::parse_double(field[3]),
                                                                sdl::parse_double(field[4])};
    }
    return table;
}

EnvelopeTable extract_envelope(const EnsembleResult& result) {
    EnvelopeTable table;
    table.pathway_id = result.pathway_id;
    const size_t T = static_cast<size_t>(result.grid.points());
    for (size_t v = 0; v < result.variables.size(); ++v) {
        for (size_t t = 0; t < T; ++t) {
            table.stats[{result.variables[v], result.grid.at(static_cast<int>(t))}] = {
                result.mean[v * T + t], result.std_dev[v * T + t]};
        }
    }
    return table;
}

} // namespace worldsim
