#include "worldsim/sdg.hpp"

#include "worldsim/errors.hpp"
#include "worldsim/sdl.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>
#include <set>
#include <sstream>

namespace worldsim::sdg {

namespace {

std::string fmt(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

const std::set<std::string> kGoals = {"SDG2", "SDG3", "SDG4", "SDG7", "SDG8",
                                      "SDG12", "SDG13", "SDG15"};
const std::set<std::string> kBases = {"sdg-absolute", "technical-optimum", "leave-no-one-behind",
                                      "sensible-improvement"};

int milestone_index(double milestone) {
    for (size_t i = 0; i < kMilestones.size(); ++i) {
        if (std::abs(kMilestones[i] - milestone) < 1e-9) return static_cast<int>(i);
    }
    return -1;
}

void row_stats(ProgressReport::Row& row) {
    const size_t n = row.scores.size();
    double sum = 0.0;
    for (double s : row.scores) sum += s;
    row.score_mean = sum / static_cast<double>(n);
    if (n > 1) {
        double ss = 0.0;
        for (double s : row.scores) {
            const double d = s - row.score_mean;
            ss += d * d;
        }
        row.score_std = std::sqrt(ss / static_cast<double>(n - 1));
    }
    std::vector<ProgressLevel> levels;
    levels.reserve(n);
    for (double s : row.scores) levels.push_back(classify(s));
    row.summary = modal_progress(levels);
}

} // namespace

const char* to_string(ProgressLevel level) {
    switch (level) {
        case ProgressLevel::Deteriorating: return "Deteriorating";
        case ProgressLevel::Stagnating: return "Stagnating";
        case ProgressLevel::Improving: return "Improving";
        case ProgressLevel::OnTrack: return "OnTrack";
    }
    return "?";
}

const char* to_string(Ambition ambition) {
    switch (ambition) {
        case Ambition::Weak: return "weak";
        case Ambition::Moderate: return "moderate";
        case Ambition::Ambitious: return "ambitious";
    }
    return "?";
}

Ambition parse_ambition(const std::string& text) {
    if (text == "weak") return Ambition::Weak;
    if (text == "moderate") return Ambition::Moderate;
    if (text == "ambitious") return Ambition::Ambitious;
    throw ParseError("unknown ambition level '" + text + "' (expected weak|moderate|ambitious)");
}

std::vector<IndicatorDef> load_catalog(const std::string& path) {
    const sdl::Document doc = sdl::parse_file(path);
    std::vector<IndicatorDef> catalog;
    std::set<std::string> seen;
    for (const auto& b : doc.blocks) {
        if (b.kind != "indicator") {
            throw ParseError(path + ": catalog accepts only 'indicator' blocks, got '" + b.kind +
                             "' at line " + std::to_string(b.line));
        }
        if (!seen.insert(b.name).second) {
            throw DuplicateNameError(path + ": duplicate indicator '" + b.name + "'");
        }
        IndicatorDef def;
        def.id = b.name;
        def.goal = b.get("goal");
        def.variable = b.get("variable");
        def.units = b.get_or("units", "");
        if (!kGoals.count(def.goal)) {
            throw ParseError(path + ": indicator '" + def.id + "' has unknown goal '" + def.goal +
                             "'");
        }
        catalog.push_back(std::move(def));
    }
    return catalog;
}

double TargetSet::target(const std::string& indicator, Ambition ambition, double milestone) const {
    auto it = by_indicator.find(indicator);
    if (it == by_indicator.end()) {
        throw MissingVariableError("target set has no indicator '" + indicator + "'");
    }
    const int m = milestone_index(milestone);
    if (m < 0) {
        throw MissingMilestoneError("no targets for milestone " + fmt(milestone) +
                                    " (expected 2030, 2050 or 2100)");
    }
    return it->second.values[static_cast<int>(ambition)][m];
}

std::map<std::string, int> TargetSet::basis_counts() const {
    std::map<std::string, int> counts;
    for (const auto& [id, t] : by_indicator) counts[t.basis] += 1;
    return counts;
}

TargetSet load_targets(const std::string& path) {
    const sdl::Document doc = sdl::parse_file(path);
    TargetSet set;
    for (const auto& b : doc.blocks) {
        if (b.kind != "target") {
            throw ParseError(path + ": target file accepts only 'target' blocks, got '" + b.kind +
                             "' at line " + std::to_string(b.line));
        }
        if (set.by_indicator.count(b.name)) {
            throw DuplicateNameError(path + ": duplicate targets for indicator '" + b.name + "'");
        }
        TargetSet::IndicatorTargets t;
        t.basis = b.get("basis");
        if (!kBases.count(t.basis)) {
            throw ParseError(path + ": indicator '" + b.name + "' has unknown basis tag '" +
                             t.basis + "'");
        }
        t.base = b.get_double("base");
        for (const Ambition a : {Ambition::Weak, Ambition::Moderate, Ambition::Ambitious}) {
            const auto knots = sdl::parse_knots(b.get(to_string(a)));
            if (knots.size() != kMilestones.size()) {
                throw ParseError(path + ": indicator '" + b.name + "', ambition '" + to_string(a) +
                                 "': expected 3 milestone targets");
            }
            for (size_t m = 0; m < knots.size(); ++m) {
                if (std::abs(knots[m].first - kMilestones[m]) > 1e-9) {
                    throw ParseError(path + ": indicator '" + b.name +
                                     "': milestones must be 2030, 2050, 2100 in order");
                }
                const double value = knots[m].second;
                if (value == t.base) {
                    throw DegenerateTargetError(path + ": indicator '" + b.name + "', ambition '" +
                                                to_string(a) + "', milestone " +
                                                fmt(kMilestones[m]) + ": target equals base value");
                }
                t.values[static_cast<int>(a)][m] = value;
            }
            const double direction = t.values[static_cast<int>(a)][0] - t.base;
            for (size_t m = 1; m < kMilestones.size(); ++m) {
                const double step = t.values[static_cast<int>(a)][m] -
                                    t.values[static_cast<int>(a)][m - 1];
                if (step * direction < 0.0) {
                    throw NonMonotoneAmbitionError(
                        path + ": indicator '" + b.name + "', ambition '" + to_string(a) +
                        "': milestone targets not monotone in the improving direction");
                }
            }
        }
        set.by_indicator.emplace(b.name, std::move(t));
    }
    return set;
}

double normalize(double x, double w, double t) {
    if (t == w) throw DegenerateTargetError("normalize: target equals base value");
    return (x - w) / (t - w) * 100.0;
}

double goal_index(std::span<const double> scores) {
    if (scores.empty()) throw EmptyGoalError("goal_index: no indicator scores");
    double sum = 0.0;
    for (double s : scores) sum += s;
    return sum / static_cast<double>(scores.size());
}

ProgressLevel classify(double score) {
    if (score <= 0.0) return ProgressLevel::Deteriorating;
    if (score < 50.0) return ProgressLevel::Stagnating;
    if (score < 100.0) return ProgressLevel::Improving;
    return ProgressLevel::OnTrack;
}

ModalSummary modal_progress(std::span<const ProgressLevel> levels) {
    if (levels.empty()) throw EmptyGoalError("modal_progress: no realizations");
    std::array<std::size_t, 4> counts{};
    for (ProgressLevel l : levels) counts[static_cast<int>(l)] += 1;
    int modal = 0;
    for (int l = 1; l < 4; ++l) {
        if (counts[l] > counts[modal]) modal = l;  // ties keep the lower (pessimistic) level
    }
    ModalSummary summary;
    summary.modal = static_cast<ProgressLevel>(modal);
    for (int l = 0; l < 4; ++l) {
        summary.shares[l] = static_cast<double>(counts[l]) / static_cast<double>(levels.size());
    }
    return summary;
}

ProgressReport score_ensemble(const IndicatorSamples& ens,
                              const std::vector<IndicatorDef>& catalog, const TargetSet& targets,
                              Ambition ambition, double milestone) {
    if (milestone_index(milestone) < 0) {
        throw MissingMilestoneError("no targets for milestone " + fmt(milestone) +
                                    " (expected 2030, 2050 or 2100)");
    }
    ProgressReport report;
    report.pathway_id = ens.pathway_id;
    report.milestone = milestone;
    report.ambition = ambition;

    const int n = ens.realizations;
    for (const auto& def : catalog) {
        const std::vector<double>& x = ens.at(def.variable, milestone);
        const std::vector<double>& w = ens.at(def.variable, 2015.0);
        const double t = targets.target(def.id, ambition, milestone);
        ProgressReport::Row row;
        row.goal = def.goal;
        row.indicator = def.id;
        row.scores.reserve(n);
        for (int i = 0; i < n; ++i) row.scores.push_back(normalize(x[i], w[i], t));
        row_stats(row);
        report.indicators.push_back(std::move(row));
    }

    // Goals aggregate in catalog order of first appearance.
    std::vector<std::string> goal_order;
    for (const auto& def : catalog) {
        if (std::find(goal_order.begin(), goal_order.end(), def.goal) == goal_order.end()) {
            goal_order.push_back(def.goal);
        }
    }
    for (const auto& goal : goal_order) {
        ProgressReport::Row row;
        row.goal = goal;
        row.scores.assign(n, 0.0);
        for (int i = 0; i < n; ++i) {
            std::vector<double> scores;
            for (const auto& ind : report.indicators) {
                if (ind.goal == goal) scores.push_back(ind.scores[i]);
            }
            row.scores[i] = goal_index(scores);
        }
        row_stats(row);
        report.goals.push_back(std::move(row));
    }
    return report;
}

ProgressReport score_ensemble(const EnsembleResult& ens, const std::vector<IndicatorDef>& catalog,
                              const TargetSet& targets, Ambition ambition, double milestone) {
    std::vector<std::string> variables;
    for (const auto& def : catalog) {
        if (std::find(variables.begin(), variables.end(), def.variable) == variables.end()) {
            variables.push_back(def.variable);
        }
    }
    return score_ensemble(extract_indicator_samples(ens, variables, {2015.0, milestone}), catalog,
                          targets, ambition, milestone);
}

namespace {

void write_row_csv(const ProgressReport& report, const ProgressReport::Row& row,
                   std::ostream& out) {
    out << report.pathway_id << ',' << row.goal << ',' << row.indicator << ','
        << fmt(report.milestone) << ',' << to_string(report.ambition) << ','
        << fmt(row.score_mean) << ',' << fmt(row.score_std) << ',' << to_string(row.summary.modal);
    for (int l = 0; l < 4; ++l) out << ',' << fmt(row.summary.shares[l]);
    out << '\n';
}

} // namespace

void write_report_csv(const ProgressReport& report, std::ostream& out) {
    out << "pathway,goal,indicator,milestone,ambition,score_mean,score_std,modal_level,"
           "share_deteriorating,share_stagnating,share_improving,share_on_track\n";
    for (const auto& row : report.indicators) write_row_csv(report, row, out);
    for (const auto& row : report.goals) write_row_csv(report, row, out);
}

void write_report_json(const ProgressReport& report, std::ostream& out) {
    nlohmann::json j;
    j["pathway"] = report.pathway_id;
    j["milestone"] = report.milestone;
    j["ambition"] = to_string(report.ambition);
    auto row_json = [](const ProgressReport::Row& row) {
        nlohmann::json r;
        r["goal"] = row.goal;
        if (!row.indicator.empty()) r["indicator"] = row.indicator;
        r["score_mean"] = row.score_mean;
        r["score_std"] = row.score_std;
        r["modal_level"] = to_string(row.summary.modal);
        r["shares"] = {{"deteriorating", row.summary.shares[0]},
                       {"stagnating", row.summary.shares[1]},
                       {"improving", row.summary.shares[2]},
                       {"on_track", row.summary.shares[3]}};
        r["scores"] = row.scores;
        return r;
    };
    j["indicators"] = nlohmann::json::array();
    for (const auto& row : report.indicators) j["indicators"].push_back(row_json(row));
    j["goals"] = nlohmann::json::array();
    for (const auto& row : report.goals) j["goals"].push_back(row_json(row));
    out << j.dump(2) << '\n';
}

void write_level_shares_csv(const ProgressReport& report, std::ostream& out) {
    out << "pathway,goal,milestone,ambition,level,share\n";
    for (const auto& row : report.goals) {
        for (int l = 0; l < 4; ++l) {
            out << report.pathway_id << ',' << row.goal << ',' << fmt(report.milestone) << ','
                << to_string(report.ambition) << ','
                << to_string(static_cast<ProgressLevel>(l)) << ',' << fmt(row.summary.shares[l])
                << '\n';
        }
    }
}

std::string SystemsChangeDelta::annotation() const {
    std::ostringstream os;
    os << std::llround(mean_pct) << "% (" << std::llround(lo_pct) << "%-" << std::llround(hi_pct)
       << "%)";
    return os.str();
}

SystemsChangeDelta systems_change(const EnvelopeTable& ref, const EnvelopeTable& alt,
                                  const std::string& variable, double year, bool pooled_sigma) {
    const double mean_ref = ref.mean_at(variable, year);
    const double mean_alt = alt.mean_at(variable, year);
    if (mean_ref == 0.0) {
        throw ZeroReferenceError("systems_change: reference mean of '" + variable + "' at " +
                                 fmt(year) + " is zero");
    }
    double sigma = alt.std_at(variable, year);
    if (pooled_sigma) {
        const double s_ref = ref.std_at(variable, year);
        sigma = std::sqrt((s_ref * s_ref + sigma * sigma) / 2.0);
    }
    SystemsChangeDelta delta;
    delta.variable = variable;
    delta.year = year;
    for (const auto& [entry, var] : entry_point_variables()) {
        if (var == variable) delta.entry_point = entry;
    }
    delta.mean_pct = (mean_alt - mean_ref) / std::abs(mean_ref) * 100.0;
    const double band = 100.0 * sigma / std::abs(mean_ref);
    delta.lo_pct = delta.mean_pct - band;
    delta.hi_pct = delta.mean_pct + band;
    return delta;
}

const std::vector<std::pair<std::string, std::string>>& entry_point_variables() {
    static const std::vector<std::pair<std::string, std::string>> vars = {
        {"well-being", "life_expectancy"},
        {"well-being", "education_access"},
        {"food", "animal_caloric_intake"},
        {"food", "total_food_supply"},
        {"energy", "renewable_share"},
        {"energy", "fossil_energy_production"},
        {"economy", "gwp_per_capita"},
        {"economy", "energy_intensity"},
    };
    return vars;
}

void write_delta_csv(const std::vector<SystemsChangeDelta>& deltas, std::ostream& out) {
    out << "entry_point,variable,year,mean_pct,lo_pct,hi_pct\n";
    for (const auto& d : deltas) {
        out << d.entry_point << ',' << d.variable << ',' << fmt(d.year) << ',' << fmt(d.mean_pct)
            << ',' << fmt(d.lo_pct) << ',' << fmt(d.hi_pct) << '\n';
    }
}

} // namespace worldsim::sdg
