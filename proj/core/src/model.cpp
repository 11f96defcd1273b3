#include "worldsim/model.hpp"

#include "worldsim/errors.hpp"
#include "worldsim/sdl.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <deque>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

namespace worldsim {

void TimeGrid::validate() const {
    if (!(start < end)) throw InputError("time grid: start must be < end");
    if (!(step > 0.0)) throw InputError("time grid: step must be > 0");
    const double n = (end - start) / step;
    if (std::fabs(n - std::round(n)) > 1e-9) {
        throw InputError("time grid: (end - start) must be divisible by step");
    }
}

int Trajectory::index_of(const std::string& name) const {
    for (size_t i = 0; i < names.size(); ++i) {
        if (names[i] == name) return static_cast<int>(i);
    }
    return -1;
}

const std::vector<double>& Trajectory::series(const std::string& name) const {
    int i = index_of(name);
    if (i < 0) throw UnknownReferenceError("trajectory has no variable '" + name + "'");
    return values[i];
}

double Trajectory::at(const std::string& name, double year) const {
    const double k = (year - grid.start) / grid.step;
    const int ki = static_cast<int>(std::round(k));
    if (std::fabs(k - ki) > 1e-9 || ki < 0 || ki >= grid.points()) {
        throw InputError("year " + std::to_string(year) + " not on trajectory grid");
    }
    return series(name)[ki];
}

namespace {

void format_double(std::string& out, double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    out.append(buf, ptr);
}

} // namespace

void Trajectory::write_csv(std::ostream& out) const {
    std::string line = "year";
    for (const auto& n : names) {
        line += ',';
        line += n;
    }
    line += '\n';
    out << line;
    const int n = grid.points();
    for (int k = 0; k < n; ++k) {
        line.clear();
        format_double(line, grid.at(k));
        for (const auto& col : values) {
            line += ',';
            format_double(line, col[k]);
        }
        line += '\n';
        out << line;
    }
}

void Trajectory::write_csv_file(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write file: " + path);
    write_csv(out);
}

std::int32_t ExecutableModel::parameter_slot(const std::string& name) const {
    auto it = slot_of_.find(name);
    if (it == slot_of_.end() || it->second <= 0 ||
        it->second > static_cast<std::int32_t>(param_values_.size())) {
        throw UnknownReferenceError("not a declared parameter: '" + name + "'");
    }
    return it->second;
}

int ExecutableModel::recorded_index(const std::string& name) const {
    auto it = recorded_of_.find(name);
    if (it == recorded_of_.end()) {
        throw UnknownReferenceError("model records no variable '" + name + "'");
    }
    return it->second;
}

ExecutableModel::Overrides ExecutableModel::make_overrides(
    const std::unordered_map<std::string, double>& by_name) const {
    Overrides ov;
    ov.reserve(by_name.size());
    for (const auto& [name, value] : by_name) ov.emplace_back(parameter_slot(name), value);
    std::sort(ov.begin(), ov.end());
    return ov;
}

std::vector<double> ExecutableModel::base_slots(const Overrides& overrides) const {
    std::vector<double> slots(slot_count_, 0.0);
    std::copy(param_values_.begin(), param_values_.end(), slots.begin() + 1);
    for (const auto& [slot, value] : overrides) slots[slot] = value;
    return slots;
}

std::vector<double> ExecutableModel::initial_stocks(std::vector<double>& slots) const {
    std::vector<double> stocks(stock_names_.size());
    for (size_t i = 0; i < stocks.size(); ++i) {
        stocks[i] = initial_programs_[i].eval(slots.data(), tables_);
        if (!std::isfinite(stocks[i])) {
            throw NonFiniteValueError("non-finite initial value for stock '" + stock_names_[i] + "'");
        }
    }
    return stocks;
}

void ExecutableModel::eval_computed(std::vector<double>& slots, double t) const {
    double* s = slots.data();
    for (const auto& c : computed_) {
        const double v = c.program.eval(s, tables_);
        if (!std::isfinite(v)) {
            throw NonFiniteValueError("non-finite value for '" +
                                      computed_names_[c.slot - stock_base_ - stock_names_.size()] +
                                      "' at year " + std::to_string(static_cast<long>(t)));
        }
        s[c.slot] = v;
    }
}

std::vector<double> ExecutableModel::step(const std::vector<double>& stocks, double t,
                                          const Overrides& overrides) const {
    if (stocks.size() != stock_names_.size()) {
        throw InputError("step: expected " + std::to_string(stock_names_.size()) + " stock values");
    }
    std::vector<double> slots = base_slots(overrides);
    slots[0] = t;
    std::copy(stocks.begin(), stocks.end(), slots.begin() + stock_base_);
    eval_computed(slots, t);
    std::vector<double> next = stocks;
    const double dt = 1.0;
    for (const auto& sf : stock_flows_) {
        const double rate = slots[sf.flow_slot] * dt;
        if (sf.source >= 0) next[sf.source] -= rate;
        if (sf.sink >= 0) next[sf.sink] += rate;
    }
    for (size_t i = 0; i < next.size(); ++i) {
        if (!std::isfinite(next[i])) {
            throw NonFiniteValueError("non-finite value for stock '" + stock_names_[i] +
                                      "' at year " + std::to_string(static_cast<long>(t)));
        }
    }
    return next;
}

Trajectory ExecutableModel::run(const TimeGrid& grid, const Overrides& overrides) const {
    grid.validate();
    const int n = grid.points();
    Trajectory traj;
    traj.grid = grid;
    traj.names = recorded_names_;
    traj.values.assign(recorded_names_.size(), std::vector<double>(n));

    std::vector<double> slots = base_slots(overrides);
    slots[0] = grid.start;
    std::vector<double> stocks = initial_stocks(slots);
    const size_t ns = stock_names_.size();
    const size_t nc = computed_names_.size();
    const double dt = grid.step;

    for (int k = 0; k < n; ++k) {
        const double t = grid.at(k);
        slots[0] = t;
        std::copy(stocks.begin(), stocks.end(), slots.begin() + stock_base_);
        eval_computed(slots, t);
        for (size_t i = 0; i < ns; ++i) traj.values[i][k] = stocks[i];
        for (size_t i = 0; i < nc; ++i) {
            traj.values[ns + i][k] = slots[stock_base_ + ns + i];
        }
        if (k + 1 < n) {
            for (const auto& sf : stock_flows_) {
                const double amount = slots[sf.flow_slot] * dt;
                if (sf.source >= 0) stocks[sf.source] -= amount;
                if (sf.sink >= 0) stocks[sf.sink] += amount;
            }
            for (size_t i = 0; i < ns; ++i) {
                if (!std::isfinite(stocks[i])) {
                    throw NonFiniteValueError("non-finite value for stock '" + stock_names_[i] +
                                              "' at year " + std::to_string(static_cast<long>(t + dt)));
                }
            }
        }
    }
    return traj;
}

void ExecutableModel::run_into(const TimeGrid& grid, const Overrides& overrides,
                               const std::vector<int>& recorded, double* out, int stride) const {
    grid.validate();
    const int n = grid.points();
    std::vector<double> slots = base_slots(overrides);
    slots[0] = grid.start;
    std::vector<double> stocks = initial_stocks(slots);
    const size_t ns = stock_names_.size();
    const double dt = grid.step;

    for (int k = 0; k < n; ++k) {
        const double t = grid.at(k);
        slots[0] = t;
        std::copy(stocks.begin(), stocks.end(), slots.begin() + stock_base_);
        eval_computed(slots, t);
        for (size_t r = 0; r < recorded.size(); ++r) {
            const int idx = recorded[r];
            const double v = idx < static_cast<int>(ns)
                                 ? stocks[idx]
                                 : slots[stock_base_ + idx];
            out[r * stride + k] = v;
        }
        if (k + 1 < n) {
            for (const auto& sf : stock_flows_) {
                const double amount = slots[sf.flow_slot] * dt;
                if (sf.source >= 0) stocks[sf.source] -= amount;
                if (sf.sink >= 0) stocks[sf.sink] += amount;
            }
            for (size_t i = 0; i < ns; ++i) {
                if (!std::isfinite(stocks[i])) {
                    throw NonFiniteValueError("non-finite value for stock '" + stock_names_[i] +
                                              "' at year " + std::to_string(static_cast<long>(t + dt)));
                }
            }
        }
    }
}

ExecutableModel compile_model(const ModelDefinition& def) {
    ExecutableModel m;
    m.def_ = def;

    // Name uniqueness across every category, plus the reserved "time".
    std::unordered_map<std::string, char> kinds;  // p/s/a/f/t
    auto declare = [&](const std::string& name, char kind) {
        if (name.empty()) throw InputError("empty name in model definition");
        if (name == "time") throw DuplicateNameError("'time' is reserved");
        if (!kinds.emplace(name, kind).second) {
            throw DuplicateNameError("duplicate name '" + name + "'");
        }
    };
    for (const auto& p : def.parameters) declare(p.name, 'p');
    for (const auto& s : def.stocks) declare(s.name, 's');
    for (const auto& a : def.auxiliaries) declare(a.name, 'a');
    for (const auto& f : def.flows) declare(f.name, 'f');
    for (const auto& t : def.tables) declare(t.name, 't');

    for (const auto& t : def.tables) m.tables_.emplace_back(t.name, t.knots);

    // Slot layout: [0]=time, parameters, stocks, then auxiliaries and flows.
    std::int32_t next = 0;
    m.slot_of_["time"] = next++;
    for (const auto& p : def.parameters) {
        m.slot_of_[p.name] = next++;
        m.param_values_.push_back(p.value);
    }
    m.stock_base_ = next;
    for (const auto& s : def.stocks) {
        m.slot_of_[s.name] = next++;
        m.stock_names_.push_back(s.name);
    }
    for (const auto& a : def.auxiliaries) {
        m.slot_of_[a.name] = next++;
        m.computed_names_.push_back(a.name);
    }
    for (const auto& f : def.flows) {
        m.slot_of_[f.name] = next++;
        m.computed_names_.push_back(f.name);
    }
    m.slot_count_ = next;

    std::unordered_map<std::string, std::int32_t> table_of;
    for (size_t i = 0; i < m.tables_.size(); ++i) {
        table_of[m.tables_[i].name()] = static_cast<std::int32_t>(i);
    }

    auto value_slot = [&](const std::string& name) -> std::int32_t {
        auto it = m.slot_of_.find(name);
        if (it == m.slot_of_.end()) {
            throw UnknownReferenceError("reference to undeclared name '" + name + "'");
        }
        if (kinds.count(name) && kinds[name] == 't') {
            throw UnknownReferenceError("table '" + name + "' used without an argument");
        }
        return it->second;
    };
    auto table_index = [&](const std::string& name) -> std::int32_t {
        auto it = table_of.find(name);
        if (it == table_of.end()) {
            throw UnknownReferenceError("reference to undeclared table '" + name + "'");
        }
        return it->second;
    };

    // Initial-value expressions may use parameters and tables only.
    for (const auto& s : def.stocks) {
        ExprNode ast = parse_expression(s.initial);
        for (const auto& ref : referenced_names(ast).values) {
            auto k = kinds.find(ref);
            if (k == kinds.end()) {
                throw UnknownReferenceError("stock '" + s.name + "' initial: undeclared name '" + ref + "'");
            }
            if (k->second != 'p') {
                throw InputError("stock '" + s.name +
                                 "' initial value may only reference parameters, not '" + ref + "'");
            }
        }
        m.initial_programs_.push_back(compile_expression(ast, value_slot, table_index));
    }

    // Dependency graph over the computed items (auxiliaries + flows).
    const size_t na = def.auxiliaries.size();
    const size_t ncomp = na + def.flows.size();
    std::unordered_map<std::string, int> comp_index;
    for (size_t i = 0; i < m.computed_names_.size(); ++i) {
        comp_index[m.computed_names_[i]] = static_cast<int>(i);
    }
    std::vector<ExprNode> asts;
    asts.reserve(ncomp);
    std::vector<std::vector<int>> dependents(ncomp);
    std::vector<int> indegree(ncomp, 0);
    auto expr_of = [&](size_t i) -> const std::string& {
        return i < na ? def.auxiliaries[i].expr : def.flows[i - na].expr;
    };
    for (size_t i = 0; i < ncomp; ++i) {
        ExprNode ast = parse_expression(expr_of(i));
        const ExprRefs refs = referenced_names(ast);
        for (const auto& ref : refs.values) {
            if (!kinds.count(ref) && ref != "time") {
                throw UnknownReferenceError("'" + m.computed_names_[i] +
                                            "': reference to undeclared name '" + ref + "'");
            }
            auto it = comp_index.find(ref);
            if (it != comp_index.end()) {
                dependents[it->second].push_back(static_cast<int>(i));
                ++indegree[i];
            }
        }
        for (const auto& ref : refs.tables) {
            if (!table_of.count(ref)) {
                throw UnknownReferenceError("'" + m.computed_names_[i] +
                                            "': reference to undeclared table '" + ref + "'");
            }
        }
        asts.push_back(std::move(ast));
    }

    // Kahn topological sort, declaration order as tie break for stable plans.
    std::deque<int> ready;
    for (size_t i = 0; i < ncomp; ++i) {
        if (indegree[i] == 0) ready.push_back(static_cast<int>(i));
    }
    std::vector<int> order;
    order.reserve(ncomp);
    std::vector<int> remaining = indegree;
    while (!ready.empty()) {
        const int i = ready.front();
        ready.pop_front();
        order.push_back(i);
        for (int d : dependents[i]) {
            if (--remaining[d] == 0) ready.push_back(d);
        }
    }
    if (order.size() != ncomp) {
        std::string cycle;
        for (size_t i = 0; i < ncomp; ++i) {
            if (remaining[i] > 0) {
                if (!cycle.empty()) cycle += ", ";
                cycle += m.computed_names_[i];
            }
        }
        throw AlgebraicLoopError("algebraic loop among auxiliaries/flows: {" + cycle +
                                 "} (loops must pass through a stock)");
    }
    for (int i : order) {
        ExecutableModel::Computed c;
        c.program = compile_expression(asts[i], value_slot, table_index);
        c.slot = m.stock_base_ + static_cast<std::int32_t>(m.stock_names_.size()) + i;
        m.computed_.push_back(std::move(c));
    }

    // Flow endpoints.
    std::unordered_map<std::string, int> stock_index;
    for (size_t i = 0; i < m.stock_names_.size(); ++i) {
        stock_index[m.stock_names_[i]] = static_cast<int>(i);
    }
    for (size_t i = 0; i < def.flows.size(); ++i) {
        const auto& f = def.flows[i];
        ExecutableModel::StockFlow sf;
        sf.flow_slot = m.stock_base_ + static_cast<std::int32_t>(m.stock_names_.size() + na + i);
        auto resolve = [&](const std::string& endpoint) -> std::int32_t {
            if (endpoint.empty() || endpoint == "external") return -1;
            auto it = stock_index.find(endpoint);
            if (it == stock_index.end()) {
                throw UnknownReferenceError("flow '" + f.name + "': endpoint '" + endpoint +
                                            "' is not a declared stock");
            }
            return it->second;
        };
        sf.source = resolve(f.source);
        sf.sink = resolve(f.sink);
        m.stock_flows_.push_back(sf);
    }

    m.recorded_names_ = m.stock_names_;
    m.recorded_names_.insert(m.recorded_names_.end(), m.computed_names_.begin(),
                             m.computed_names_.end());
    for (size_t i = 0; i < m.recorded_names_.size(); ++i) {
        m.recorded_of_[m.recorded_names_[i]] = static_cast<int>(i);
    }
    for (const auto& out : def.outputs) {
        if (!m.recorded_of_.count(out)) {
            throw MissingOutputError("declared output '" + out + "' is not a model variable");
        }
    }
    return m;
}

ModelDefinition load_model_definition(const std::string& path) {
    const sdl::Document doc = sdl::parse_file(path);
    ModelDefinition def;
    for (const auto& b : doc.blocks) {
        if (b.kind == "param") {
            def.parameters.push_back({b.name, b.get_double("value"), b.get_or("units", "")});
        } else if (b.kind == "stock") {
            def.stocks.push_back({b.name, b.get("initial"), b.get_or("units", "")});
        } else if (b.kind == "aux") {
            def.auxiliaries.push_back({b.name, b.get("expr"), b.get_or("units", "")});
        } else if (b.kind == "flow") {
            def.flows.push_back({b.name, b.get_or("from", ""), b.get_or("to", ""), b.get("expr")});
        } else if (b.kind == "table") {
            def.tables.push_back({b.name, sdl::parse_knots(b.get("knots"))});
        } else if (b.kind == "outputs") {
            std::istringstream vars(b.get("vars"));
            std::string v;
            while (std::getline(vars, v, ',')) {
                v = sdl::trim(v);
                if (!v.empty()) def.outputs.push_back(v);
            }
        } else {
            throw ParseError(path + ": unknown block kind '" + b.kind + "' at line " +
                             std::to_string(b.line));
        }
    }
    return def;
}

} // namespace worldsim
