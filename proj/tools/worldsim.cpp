#include "worldsim/digest.hpp"
#include "worldsim/ensemble.hpp"
#include "worldsim/errors.hpp"
#include "worldsim/sdg.hpp"
#include "worldsim/sectors.hpp"
#include "worldsim/svg.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

namespace fs = std::filesystem;
using namespace worldsim;

namespace {

constexpr const char* kVersion = "0.1.0";

int default_workers() {
    if (const char* env = std::getenv("WORLDSIM_WORKERS")) {
        const int w = std::atoi(env);
        if (w >= 1) return w;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

// All outputs of a subcommand are staged in memory and written together, via
// a temp file plus rename, so a failing run leaves no partial files behind.
class OutputStage {
public:
    explicit OutputStage(const std::string& out_dir) : dir_(out_dir) {}

    void add(const std::string& name, std::string content) {
        files_.emplace_back(name, std::move(content));
    }

    std::vector<std::string> commit() {
        fs::create_directories(dir_);
        std::vector<std::string> written;
        for (const auto& [name, content] : files_) {
            const fs::path final_path = dir_ / name;
            const fs::path tmp_path = dir_ / (name + ".tmp");
            {
                std::ofstream out(tmp_path, std::ios::binary | std::ios::trunc);
                if (!out) throw RuntimeFailure("cannot write " + tmp_path.string());
                out << content;
            }
            fs::rename(tmp_path, final_path);
            written.push_back(final_path.string());
        }
        return written;
    }

private:
    fs::path dir_;
    std::vector<std::pair<std::string, std::string>> files_;
};

struct ManifestInfo {
    std::string subcommand;
    std::map<std::string, std::string> input_digests;
    nlohmann::json extra = nlohmann::json::object();
};

std::string render_manifest(const ManifestInfo& info, const std::vector<std::string>& outputs,
                            double wall_seconds) {
    nlohmann::json j;
    j["tool"] = "worldsim";
    j["version"] = kVersion;
    j["subcommand"] = info.subcommand;
    j["inputs"] = info.input_digests;
    j["outputs"] = outputs;
    j["wall_clock_seconds"] = wall_seconds;
    for (auto it = info.extra.begin(); it != info.extra.end(); ++it) j[it.key()] = it.value();
    return j.dump(2) + "\n";
}

struct LoadedPathway {
    ParameterRegistry registry;
    PathwaySpec spec;
    std::unordered_map<std::string, double> parameters;
    ExecutableModel model;
};

LoadedPathway load_world(const std::string& registry_path, const std::string& pathway_path,
                         ManifestInfo& manifest) {
    LoadedPathway lp{ParameterRegistry::load(registry_path), {}, {}, {}};
    manifest.input_digests[registry_path] = digest_file(registry_path);
    lp.spec = load_pathway(pathway_path, lp.registry);
    manifest.input_digests[pathway_path] = digest_file(pathway_path);
    lp.parameters = apply_pathway(lp.registry.nominals(), lp.spec);
    auto forcing = sectors::default_nonco2_forcing();
    if (!lp.spec.forcing_series.empty()) {
        forcing = sectors::load_forcing_csv(lp.spec.forcing_series);
        manifest.input_digests[lp.spec.forcing_series] = digest_file(lp.spec.forcing_series);
    }
    lp.model = compile_model(sectors::assemble_world_model(
        sectors::ParamMap(lp.parameters.begin(), lp.parameters.end()), forcing));
    return lp;
}

int run_simulate(const std::string& registry_path, const std::string& pathway_path,
                 const std::string& out_dir, bool svg_out) {
    const auto t0 = std::chrono::steady_clock::now();
    ManifestInfo manifest{"simulate", {}, {}};
    LoadedPathway lp = load_world(registry_path, pathway_path, manifest);

    const Trajectory traj = lp.model.run(TimeGrid{});
    std::ostringstream csv;
    traj.write_csv(csv);

    OutputStage stage(out_dir);
    stage.add("trajectory.csv", csv.str());
    if (svg_out) {
        std::vector<double> years;
        for (int k = 0; k < traj.grid.points(); ++k) years.push_back(traj.grid.at(k));
        std::vector<svg::Series> series;
        for (const char* v : {"population", "temperature_anomaly", "atm_co2_ppm"}) {
            series.push_back({v, years, traj.series(v)});
        }
        stage.add("trajectory.svg", svg::line_chart(lp.spec.id, series));
    }
    manifest.extra["pathway"] = lp.spec.id;
    auto outputs = stage.commit();

    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    OutputStage mstage(out_dir);
    mstage.add("manifest.json", render_manifest(manifest, outputs, secs));
    mstage.commit();
    return 0;
}

int run_ensemble_cmd(const std::string& registry_path, const std::string& pathway_path,
                     const std::string& catalog_path, int n, std::uint64_t seed, int workers,
                     int screen_k, bool no_screen, const std::string& objective,
                     const std::string& out_dir, bool svg_out) {
    const auto t0 = std::chrono::steady_clock::now();
    ManifestInfo manifest{"ensemble", {}, {}};
    LoadedPathway lp = load_world(registry_path, pathway_path, manifest);
    const auto catalog = sdg::load_catalog(catalog_path);
    manifest.input_digests[catalog_path] = digest_file(catalog_path);

    std::vector<ParameterRange> ranges;
    if (no_screen) {
        if (lp.spec.uncertainty.empty()) {
            throw InputError("--no-screen requires the pathway to declare uncertainty ranges");
        }
        ranges = lp.spec.uncertainty;
    } else {
        ranges = screen_then_range(lp.model, lp.registry, lp.spec, objective, screen_k, 20, 4, seed);
    }

    const EnsembleResult result =
        run_ensemble(lp.model, lp.spec.id, lp.parameters, ranges, TimeGrid{}, n, seed, workers);

    std::ostringstream env_csv;
    write_envelope_csv(result, env_csv);

    std::vector<std::string> indicator_vars;
    for (const auto& def : catalog) {
        if (std::find(indicator_vars.begin(), indicator_vars.end(), def.variable) ==
            indicator_vars.end()) {
            indicator_vars.push_back(def.variable);
        }
    }
    std::ostringstream ind_csv;
    write_indicator_csv(result, indicator_vars, {2015.0, 2030.0, 2050.0, 2100.0}, ind_csv);

    OutputStage stage(out_dir);
    stage.add("envelope.csv", env_csv.str());
    stage.add("indicators.csv", ind_csv.str());
    if (svg_out) {
        std::vector<double> years;
        for (int k = 0; k < result.grid.points(); ++k) years.push_back(result.grid.at(k));
        for (const char* v : {"population", "temperature_anomaly", "co2_emissions"}) {
            const int vi = result.var_index(v);
            const size_t T = static_cast<size_t>(result.grid.points());
            std::vector<double> mean(result.mean.begin() + vi * T,
                                     result.mean.begin() + (vi + 1) * T);
            std::vector<double> sd(result.std_dev.begin() + vi * T,
                                   result.std_dev.begin() + (vi + 1) * T);
            stage.add(std::string(v) + ".svg",
                      svg::envelope_chart(lp.spec.id + std::string(": ") + v, years, mean, sd));
        }
    }
    manifest.extra["pathway"] = lp.spec.id;
    manifest.extra["seed"] = seed;
    manifest.extra["realizations"] = n;
    manifest.extra["workers"] = workers;
    {
        nlohmann::json screened = nlohmann::json::array();
        for (const auto& r : ranges) {
            screened.push_back({{"name", r.name}, {"low", r.low}, {"high", r.high}});
        }
        manifest.extra["screened_parameters"] = screened;
    }
    auto outputs = stage.commit();

    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    OutputStage mstage(out_dir);
    mstage.add("manifest.json", render_manifest(manifest, outputs, secs));
    mstage.commit();
    return 0;
}

int run_score(const std::vector<std::string>& ensemble_dirs, const std::string& catalog_path,
              const std::string& targets_path, const std::string& ambition_text, double milestone,
              const std::string& out_dir) {
    const auto t0 = std::chrono::steady_clock::now();
    ManifestInfo manifest{"score", {}, {}};
    const auto catalog = sdg::load_catalog(catalog_path);
    manifest.input_digests[catalog_path] = digest_file(catalog_path);
    const auto targets = sdg::load_targets(targets_path);
    manifest.input_digests[targets_path] = digest_file(targets_path);
    const sdg::Ambition ambition = sdg::parse_ambition(ambition_text);

    OutputStage stage(out_dir);
    std::ostringstream shares_csv;
    shares_csv << "pathway,goal,milestone,ambition,level,share\n";
    for (const auto& dir : ensemble_dirs) {
        const std::string ind_path = (fs::path(dir) / "indicators.csv").string();
        const IndicatorSamples samples = load_indicator_csv(ind_path);
        manifest.input_digests[ind_path] = digest_file(ind_path);
        const sdg::ProgressReport report =
            sdg::score_ensemble(samples, catalog, targets, ambition, milestone);
        std::ostringstream csv, json, shares;
        sdg::write_report_csv(report, csv);
        sdg::write_report_json(report, json);
        sdg::write_level_shares_csv(report, shares);
        stage.add("report_" + report.pathway_id + ".csv", csv.str());
        stage.add("report_" + report.pathway_id + ".json", json.str());
        std::istringstream shares_in(shares.str());
        std::string line;
        std::getline(shares_in, line);  // drop the per-pathway header
        while (std::getline(shares_in, line)) shares_csv << line << '\n';
    }
    stage.add("level_shares.csv", shares_csv.str());
    manifest.extra["ambition"] = ambition_text;
    manifest.extra["milestone"] = milestone;
    auto outputs = stage.commit();

    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    OutputStage mstage(out_dir);
    mstage.add("manifest.json", render_manifest(manifest, outputs, secs));
    mstage.commit();
    return 0;
}

int run_delta(const std::string& ref_dir, const std::string& alt_dir,
              std::vector<std::string> variables, const std::vector<double>& years,
              bool pooled_sigma, const std::string& out_dir) {
    const auto t0 = std::chrono::steady_clock::now();
    ManifestInfo manifest{"delta", {}, {}};
    const std::string ref_path = (fs::path(ref_dir) / "envelope.csv").string();
    const std::string alt_path = (fs::path(alt_dir) / "envelope.csv").string();
    const EnvelopeTable ref = load_envelope_csv(ref_path);
    const EnvelopeTable alt = load_envelope_csv(alt_path);
    manifest.input_digests[ref_path] = digest_file(ref_path);
    manifest.input_digests[alt_path] = digest_file(alt_path);

    if (variables.empty()) {
        for (const auto& [entry, var] : sdg::entry_point_variables()) variables.push_back(var);
    }
    std::vector<sdg::SystemsChangeDelta> deltas;
    std::ostringstream summary;
    summary << "systems change, " << alt.pathway_id << " vs " << ref.pathway_id
            << (pooled_sigma ? " (pooled sigma)" : "") << "\n";
    for (const auto& var : variables) {
        for (double year : years) {
            deltas.push_back(sdg::systems_change(ref, alt, var, year, pooled_sigma));
            summary << "  " << var << " @ " << static_cast<int>(year) << ": "
                    << deltas.back().annotation() << "\n";
        }
    }
    std::ostringstream csv;
    sdg::write_delta_csv(deltas, csv);

    OutputStage stage(out_dir);
    stage.add("delta.csv", csv.str());
    stage.add("delta_summary.txt", summary.str());
    manifest.extra["reference"] = ref.pathway_id;
    manifest.extra["alternative"] = alt.pathway_id;
    manifest.extra["pooled_sigma"] = pooled_sigma;
    auto outputs = stage.commit();
    std::cout << summary.str();

    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    OutputStage mstage(out_dir);
    mstage.add("manifest.json", render_manifest(manifest, outputs, secs));
    mstage.commit();
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"worldsim: global system-dynamics pathway simulator"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    std::string registry_path = "data/registry.cfg";
    std::string catalog_path = "data/indicators.cfg";

    auto* sim = app.add_subcommand("simulate", "Run one nominal pathway trajectory");
    std::string sim_pathway, sim_out;
    bool sim_svg = false;
    sim->add_option("--pathway", sim_pathway, "Pathway definition file")->required();
    sim->add_option("--out", sim_out, "Output directory")->required();
    sim->add_option("--registry", registry_path, "Parameter registry file");
    sim->add_flag("--svg", sim_svg, "Also write an SVG chart");

    auto* ens = app.add_subcommand("ensemble", "Run a pathway ensemble under uncertainty");
    std::string ens_pathway, ens_out, ens_objective = "temperature_anomaly";
    int ens_n = 10000, ens_workers = default_workers(), ens_screen_k = 20;
    std::uint64_t ens_seed = 42;
    bool ens_no_screen = false, ens_svg = false;
    ens->add_option("--pathway", ens_pathway, "Pathway definition file")->required();
    ens->add_option("--out", ens_out, "Output directory")->required();
    ens->add_option("--n", ens_n, "Realization count")->capture_default_str();
    ens->add_option("--seed", ens_seed, "Sampling seed")->capture_default_str();
    ens->add_option("--workers", ens_workers, "Worker thread count")->capture_default_str();
    ens->add_option("--screen-k", ens_screen_k, "Parameters kept by Morris screening")
        ->capture_default_str();
    ens->add_flag("--no-screen", ens_no_screen,
                  "Skip screening; use the pathway's uncertainty ranges as-is");
    ens->add_option("--objective", ens_objective, "Screening objective variable (2100 value)")
        ->capture_default_str();
    ens->add_option("--registry", registry_path, "Parameter registry file");
    ens->add_option("--catalog", catalog_path, "Indicator catalog file");
    ens->add_flag("--svg", ens_svg, "Also write SVG envelope charts");

    auto* score = app.add_subcommand("score", "Score ensembles against SDG targets");
    std::vector<std::string> score_dirs;
    std::string score_targets = "data/targets.cfg", score_ambition = "moderate", score_out;
    double score_milestone = 2030.0;
    score->add_option("--ensemble", score_dirs, "Ensemble output directory (repeatable)")
        ->required();
    score->add_option("--targets", score_targets, "Target set file")->capture_default_str();
    score->add_option("--catalog", catalog_path, "Indicator catalog file");
    score->add_option("--ambition", score_ambition, "weak | moderate | ambitious")
        ->capture_default_str();
    score->add_option("--milestone", score_milestone, "Milestone year (2030, 2050 or 2100)")
        ->capture_default_str();
    score->add_option("--out", score_out, "Output directory")->required();

    auto* delta = app.add_subcommand("delta", "Systems-change deltas between two ensembles");
    std::string delta_ref, delta_alt, delta_out;
    std::vector<std::string> delta_vars;
    std::vector<double> delta_years = {2030.0, 2050.0, 2100.0};
    bool delta_pooled = false;
    delta->add_option("--ref", delta_ref, "Reference ensemble directory")->required();
    delta->add_option("--alt", delta_alt, "Alternative ensemble directory")->required();
    delta->add_option("--vars", delta_vars,
                      "Variables to compare (default: the entry-point set)");
    delta->add_option("--years", delta_years, "Milestone years")->capture_default_str();
    delta->add_flag("--pooled-sigma", delta_pooled, "Band from pooled ref+alt sigma");
    delta->add_option("--out", delta_out, "Output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (sim->parsed()) return run_simulate(registry_path, sim_pathway, sim_out, sim_svg);
        if (ens->parsed()) {
            return run_ensemble_cmd(registry_path, ens_pathway, catalog_path, ens_n, ens_seed,
                                    ens_workers, ens_screen_k, ens_no_screen, ens_objective,
                                    ens_out, ens_svg);
        }
        if (score->parsed()) {
            return run_score(score_dirs, catalog_path, score_targets, score_ambition,
                             score_milestone, score_out);
        }
        if (delta->parsed()) {
            return run_delta(delta_ref, delta_alt, delta_vars, delta_years, delta_pooled,
                             delta_out);
        }
    } catch (const RuntimeFailure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
