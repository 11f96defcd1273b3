#pragma once

#include "worldsim/expr.hpp"
#include "worldsim/table.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

namespace worldsim {

struct StockDef {
    std::string name;
    std::string initial;  // expression over parameters (usually a literal)
    std::string units;
};

struct AuxDef {
    std::string name;
    std::string expr;
    std::string units;
};

// source/sink name a stock each, or are empty for an external boundary.
struct FlowDef {
    std::string name;
    std::string source;
    std::string sink;
    std::string expr;
};

struct ParamDef {
    std::string name;
    double value = 0.0;
    std::string units;
};

struct TableDef {
    std::string name;
    std::vector<std::pair<double, double>> knots;
};

struct ModelDefinition {
    std::vector<StockDef> stocks;
    std::vector<AuxDef> auxiliaries;
    std::vector<FlowDef> flows;
    std::vector<ParamDef> parameters;
    std::vector<TableDef> tables;
    // Variables of record for ensemble envelopes; empty means "all".
    std::vector<std::string> outputs;
};

struct TimeGrid {
    double start = 2015.0;
    double end = 2100.0;
    double step = 1.0;

    void validate() const;
    int points() const { return static_cast<int>((end - start) / step + 0.5) + 1; }
    double at(int k) const { return start + step * k; }
};

struct Trajectory {
    TimeGrid grid;
    std::vector<std::string> names;
    std::vector<std::vector<double>> values;  // [variable][grid point]

    int index_of(const std::string& name) const;  // -1 when absent
    const std::vector<double>& series(const std::string& name) const;
    double at(const std::string& name, double year) const;

    void write_csv(std::ostream& out) const;
    void write_csv_file(const std::string& path) const;
};

// Immutable compiled model; safe to share across threads. Parameter values
// live in the definition; per-run overrides are applied to a private slot
// array, so concurrent runs never interfere.
class ExecutableModel {
public:
    using Overrides = std::vector<std::pair<std::int32_t, double>>;

    int stock_count() const { return static_cast<int>(stock_names_.size()); }
    const std::vector<std::string>& stock_names() const { return stock_names_; }
    const std::vector<std::string>& computed_names() const { return computed_names_; }
    const std::vector<std::string>& recorded_names() const { return recorded_names_; }
    const ModelDefinition& definition() const { return def_; }

    // Slot index of a parameter, for building Overrides. Throws UnknownReferenceError.
    std::int32_t parameter_slot(const std::string& name) const;
    // Index into the recorded-variable order. Throws UnknownReferenceError.
    int recorded_index(const std::string& name) const;

    Overrides make_overrides(const std::unordered_map<std::string, double>& by_name) const;

    // One explicit-Euler step from the given stock values at year t.
    std::vector<double> step(const std::vector<double>& stocks, double t,
                             const Overrides& overrides = {}) const;

    Trajectory run(const TimeGrid& grid, const Overrides& overrides = {}) const;

    // Record only the named variables (resolved via recorded_index) into a
    // caller buffer laid out [variable][grid point]; used by the ensemble
    // runner to avoid allocating full trajectories per realization.
    void run_into(const TimeGrid& grid, const Overrides& overrides,
                  const std::vector<int>& recorded, double* out, int stride) const;

    friend ExecutableModel compile_model(const ModelDefinition& def);

private:
    struct Computed {
        ExprProgram program;
        std::int32_t slot;
    };
    struct StockFlow {
        std::int32_t flow_slot;
        std::int32_t source;  // stock index or -1
        std::int32_t sink;    // stock index or -1
    };

    void eval_computed(std::vector<double>& slots, double t) const;
    std::vector<double> initial_stocks(std::vector<double>& slots) const;
    std::vector<double> base_slots(const Overrides& overrides) const;

    ModelDefinition def_;
    std::vector<LookupTable> tables_;
    std::vector<std::string> stock_names_;
    std::vector<std::string> computed_names_;  // auxiliaries then flows, declaration order
    std::vector<std::string> recorded_names_;  // stocks then computed
    std::vector<double> param_values_;
    std::vector<ExprProgram> initial_programs_;
    std::vector<Computed> computed_;  // topological evaluation order
    std::vector<StockFlow> stock_flows_;
    std::unordered_map<std::string, std::int32_t> slot_of_;
    std::unordered_map<std::string, int> recorded_of_;
    std::int32_t stock_base_ = 0;  // slot of first stock
    std::int32_t slot_count_ = 0;
};

// Validates the definition and produces the evaluation plan. Throws
// DuplicateNameError, UnknownReferenceError, AlgebraicLoopError, InputError.
ExecutableModel compile_model(const ModelDefinition& def);

// Loads a model definition from the structured text format (blocks: param,
// stock, aux, flow, table, outputs).
ModelDefinition load_model_definition(const std::string& path);

} // namespace worldsim
