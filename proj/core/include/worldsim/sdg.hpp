#pragma once

#include "worldsim/ensemble.hpp"

#include <array>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace worldsim::sdg {

enum class ProgressLevel { Deteriorating = 0, Stagnating = 1, Improving = 2, OnTrack = 3 };
const char* to_string(ProgressLevel level);

enum class Ambition { Weak = 0, Moderate = 1, Ambitious = 2 };
const char* to_string(Ambition ambition);
Ambition parse_ambition(const std::string& text);  // throws ParseError

// One scored indicator: a model output mapped to its goal.
struct IndicatorDef {
    std::string id;
    std::string goal;  // SDG2, SDG3, SDG4, SDG7, SDG8, SDG12, SDG13, SDG15
    std::string variable;
    std::string units;
};

std::vector<IndicatorDef> load_catalog(const std::string& path);

inline constexpr std::array<double, 3> kMilestones = {2030.0, 2050.0, 2100.0};

// Targets per indicator: one value per (ambition, milestone) plus the basis
// tag and a reference base value used for load-time degeneracy and
// monotonicity checks (scoring itself uses each realization's own 2015 value).
struct TargetSet {
    struct IndicatorTargets {
        std::string basis;  // sdg-absolute | technical-optimum | leave-no-one-behind | sensible-improvement
        double base = 0.0;
        std::array<std::array<double, 3>, 3> values{};  // [ambition][milestone]
    };
    std::map<std::string, IndicatorTargets> by_indicator;

    // Throws MissingVariableError (unknown indicator) / MissingMilestoneError.
    double target(const std::string& indicator, Ambition ambition, double milestone) const;
    std::map<std::string, int> basis_counts() const;
};

// Throws ParseError, DegenerateTargetError, NonMonotoneAmbitionError.
TargetSet load_targets(const std::string& path);

// Eq. 1: l = (x - w) / (t - w) * 100, unclamped. Throws DegenerateTargetError.
double normalize(double x, double w, double t);

// Eq. 2: equal-weight arithmetic mean, unclamped. Throws EmptyGoalError.
double goal_index(std::span<const double> scores);

// <=0 Deteriorating, (0,50) Stagnating, [50,100) Improving, >=100 OnTrack.
ProgressLevel classify(double score);

struct ModalSummary {
    ProgressLevel modal = ProgressLevel::Deteriorating;
    std::array<double, 4> shares{};  // indexed by ProgressLevel, sums to 1
};

// Most frequent level; ties break toward the more pessimistic level.
ModalSummary modal_progress(std::span<const ProgressLevel> levels);

struct ProgressReport {
    struct Row {
        std::string goal;
        std::string indicator;  // empty on goal-level rows
        std::vector<double> scores;  // per realization
        double score_mean = 0.0;
        double score_std = 0.0;
        ModalSummary summary;
    };
    std::string pathway_id;
    double milestone = 0.0;
    Ambition ambition = Ambition::Moderate;
    std::vector<Row> indicators;
    std::vector<Row> goals;
};

// Scores every realization of the ensemble at the milestone year against the
// (ambition, milestone) targets, using each realization's simulated 2015
// value as the Eq. 1 base. Throws MissingVariableError, MissingMilestoneError,
// DegenerateTargetError.
ProgressReport score_ensemble(const IndicatorSamples& ens,
                              const std::vector<IndicatorDef>& catalog, const TargetSet& targets,
                              Ambition ambition, double milestone);

ProgressReport score_ensemble(const EnsembleResult& ens, const std::vector<IndicatorDef>& catalog,
                              const TargetSet& targets, Ambition ambition, double milestone);

void write_report_csv(const ProgressReport& report, std::ostream& out);
void write_report_json(const ProgressReport& report, std::ostream& out);
// Plot-ready level shares: `pathway,goal,milestone,ambition,level,share`.
void write_level_shares_csv(const ProgressReport& report, std::ostream& out);

struct SystemsChangeDelta {
    std::string entry_point;  // well-being | food | energy | economy
    std::string variable;
    double year = 0.0;
    double mean_pct = 0.0;
    double lo_pct = 0.0;
    double hi_pct = 0.0;

    // Figure-style annotation, e.g. "10% (5%-14%)".
    std::string annotation() const;
};

// Percent deviation of the alternative ensemble's mean from the reference
// mean, with a one-standard-deviation band. The band uses sigma of the
// alternative ensemble; pooled_sigma switches to the two-ensemble pooled
// sigma. Throws ZeroReferenceError when the reference mean is 0.
SystemsChangeDelta systems_change(const EnvelopeTable& ref, const EnvelopeTable& alt,
                                  const std::string& variable, double year,
                                  bool pooled_sigma = false);

// The shipped entry-point mapping for delta reports (two variables each for
// well-being, food, energy, economy).
const std::vector<std::pair<std::string, std::string>>& entry_point_variables();

void write_delta_csv(const std::vector<SystemsChangeDelta>& deltas, std::ostream& out);

} // namespace worldsim::sdg
