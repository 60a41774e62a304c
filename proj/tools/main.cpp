// stickysim command-line front end: scenario generation, simulation,
// verification, experiments, and figure export.

#include "stickysim/checks.hpp"
#include "stickysim/engine.hpp"
#include "stickysim/errors.hpp"
#include "stickysim/experiments.hpp"
#include "stickysim/generators.hpp"
#include "stickysim/io.hpp"
#include "stickysim/policy_search.hpp"
#include "stickysim/smoothing.hpp"
#include "stickysim/tail.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace fs = std::filesystem;
using namespace stickysim;
using stickysim::io::json;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitAssertionFail = 1;
constexpr int kExitInputError = 2;
constexpr int kExitResourceCap = 3;

fs::path default_results_dir() {
    if (const char* env = std::getenv("STICKYSIM_RESULTS_DIR")) return fs::path(env);
    return fs::path("results");
}

Scalar parse_scalar(const std::string& text, Backend backend, const char* what) {
    try {
        return Scalar::parse(text, backend);
    } catch (const std::exception& e) {
        throw InputError(std::string("bad ") + what + " \"" + text + "\": " + e.what());
    }
}

struct ScenarioOverrides {
    std::string backend;
    std::string tolerance;
    std::string horizon;
    int event_cap = 0;

    void add_flags(CLI::App* cmd) {
        cmd->add_option("--backend", backend, "Override backend: rational|float");
        cmd->add_option("--tolerance", tolerance, "Override coincidence tolerance");
        cmd->add_option("--horizon", horizon, "Override horizon");
        cmd->add_option("--event-cap", event_cap, "Override event cap");
    }

    Scenario apply(Scenario s) const {
        if (!backend.empty()) {
            Backend target;
            if (backend == "rational")
                target = Backend::Rational;
            else if (backend == "float")
                target = Backend::Float;
            else
                throw InputError("unknown backend: " + backend);
            if (target != s.backend) {
                Scalar tol = target == Backend::Rational ? Scalar::rational(0)
                                                         : Scalar::real(kDefaultPositionTol);
                s = convert_backend(s, target, tol);
            }
        }
        if (!tolerance.empty()) s.tolerance = parse_scalar(tolerance, s.backend, "tolerance");
        if (!horizon.empty()) s.horizon = parse_scalar(horizon, s.backend, "horizon");
        if (event_cap > 0) s.event_cap = event_cap;
        validate_scenario(s);
        return s;
    }
};

void write_json(const fs::path& path, const json& j) {
    io::write_text_file(path, io::canonical_dump(j));
    std::cout << "wrote " << path.string() << "\n";
}

fs::path sidecar_path(const fs::path& scenario_path) {
    fs::path p = scenario_path;
    p.replace_extension("");
    p += ".spec.json";
    return p;
}

TailParams tail_params_from(const std::string& alpha, const std::string& beta,
                            const std::string& gamma) {
    return TailParams{parse_scalar(alpha, Backend::Rational, "alpha"),
                      parse_scalar(beta, Backend::Rational, "beta"),
                      parse_scalar(gamma, Backend::Rational, "gamma")};
}

// ---------------------------------------------------------------------- gen

int cmd_gen_example2(const std::string& perturb, const std::string& horizon,
                     const std::string& out) {
    Example2Options opts;
    opts.perturb = parse_scalar(perturb, Backend::Rational, "perturb");
    opts.horizon = parse_scalar(horizon, Backend::Rational, "horizon");
    Scenario s = example2_scenario(opts);
    json prov;
    prov["generator"] = "example2";
    prov["perturb"] = opts.perturb.str();
    s.provenance_json = prov.dump();
    write_json(out, io::scenario_to_json(s));
    return kExitPass;
}

int cmd_gen_example3(int levels, std::uint64_t seed, const std::string& horizon,
                     const std::string& out) {
    auto result =
        example3_scenario(levels, seed, parse_scalar(horizon, Backend::Rational, "horizon"));
    json prov;
    prov["generator"] = "example3";
    prov["levels"] = levels;
    prov["seed"] = seed;
    result.scenario.provenance_json = prov.dump();
    write_json(out, io::scenario_to_json(result.scenario));
    write_json(sidecar_path(out), io::example3_spec_to_json(result.spec));
    return kExitPass;
}

int cmd_gen_example4(const std::string& alpha, const std::string& beta, const std::string& gamma,
                     int levels, const std::string& targeting, const std::string& variant,
                     const std::string& horizon, const std::string& out) {
    TailParams params = tail_params_from(alpha, beta, gamma);
    Targeting t;
    if (targeting == "truncated")
        t = Targeting::TruncatedTail;
    else if (targeting == "infinite")
        t = Targeting::InfiniteTail;
    else
        throw InputError("targeting must be truncated|infinite");
    WhiteVariant v;
    if (variant == "vertical")
        v = WhiteVariant::Vertical;
    else if (variant == "slanted")
        v = WhiteVariant::Slanted;
    else
        throw InputError("variant must be vertical|slanted");
    Scalar h = horizon.empty() ? Scalar::rational(0)
                               : parse_scalar(horizon, Backend::Rational, "horizon");
    auto result = example4_scenario(params, levels, t, v, h);
    json prov;
    prov["generator"] = "example4";
    prov["levels"] = levels;
    prov["targeting"] = targeting;
    prov["variant"] = variant;
    result.scenario.provenance_json = prov.dump();
    write_json(out, io::scenario_to_json(result.scenario));
    write_json(sidecar_path(out), io::example4_spec_to_json(result.spec));
    return kExitPass;
}

int cmd_gen_smooth(const std::string& base_path, const std::string& scale,
                   const std::string& decay, const std::string& floor, int samples,
                   std::uint64_t seed, const std::string& out) {
    Scenario base = io::scenario_from_json(io::load_json_file(base_path));
    SmoothingSchedule schedule;
    schedule.initial_scale = parse_scalar(scale, base.backend, "scale");
    schedule.decay = parse_scalar(decay, base.backend, "decay");
    schedule.floor = parse_scalar(floor, base.backend, "floor");
    schedule.samples_per_cloud = samples;
    auto result = smooth_scenario(base, schedule, seed);
    json prov;
    prov["generator"] = "smooth";
    prov["base"] = fs::path(base_path).filename().string();
    prov["seed"] = seed;
    prov["samples_per_cloud"] = samples;
    result.scenario.provenance_json = prov.dump();
    write_json(out, io::scenario_to_json(result.scenario));
    json spec;
    spec["format"] = "stickysim-smooth-spec";
    spec["seed"] = seed;
    json clouds = json::array();
    for (const auto& c : result.clouds) {
        json cj;
        cj["source_index"] = c.source_index;
        cj["center"] = io::vec_to_json(c.cloud.center);
        cj["collapse_scale"] = io::scalar_to_json(c.cloud.collapse_scale);
        cj["radius"] = io::scalar_to_json(c.cloud.radius);
        cj["first_particle"] = c.first_particle;
        cj["sample_count"] = c.sample_count;
        clouds.push_back(std::move(cj));
    }
    spec["clouds"] = std::move(clouds);
    write_json(sidecar_path(out), spec);
    return kExitPass;
}

// ---------------------------------------------------------------------- run

int cmd_run(const std::string& scenario_path, const std::string& out_dir,
            const std::string& sample_step, bool svg, const ScenarioOverrides& overrides) {
    Scenario scenario = overrides.apply(io::scenario_from_json(io::load_json_file(scenario_path)));
    auto [traj, log] = evolve(scenario);

    fs::path dir = out_dir.empty() ? default_results_dir() : fs::path(out_dir);
    fs::create_directories(dir);
    write_json(dir / "events.json", io::events_to_json(log, scenario.backend));
    write_json(dir / "trajectory.json", io::trajectory_to_json(traj));

    Scalar step = sample_step.empty() ? scenario.horizon / 100
                                      : parse_scalar(sample_step, scenario.backend, "sample step");
    {
        std::ostringstream csv;
        io::write_trajectory_csv(csv, traj, step);
        io::write_text_file(dir / "trajectory.csv", csv.str());
        std::cout << "wrote " << (dir / "trajectory.csv").string() << "\n";
    }
    if (svg) {
        std::ostringstream svg_text;
        io::write_trajectory_svg(svg_text, traj, &log);
        io::write_text_file(dir / "trajectory.svg", svg_text.str());
        std::cout << "wrote " << (dir / "trajectory.svg").string() << "\n";
    }

    auto profile = energy_profile(traj);
    std::cout << "particles: " << scenario.particles.size() << ", events: " << log.size()
              << ", final energy: " << profile.values.back().to_double() << "\n";
    return kExitPass;
}

// ------------------------------------------------------------------- verify

int report_verdict(const std::string& kind, bool pass, const json& witness) {
    std::cout << kind << ": " << (pass ? "PASS" : "FAIL") << "\n";
    std::cout << io::canonical_dump(witness);
    return pass ? kExitPass : kExitAssertionFail;
}

Scalar default_tol(const Trajectory& traj, const std::string& override_text) {
    if (!override_text.empty()) return parse_scalar(override_text, traj.backend, "tolerance");
    return traj.backend == Backend::Rational ? Scalar::rational(0)
                                             : Scalar::real(kDefaultPositionTol);
}

int cmd_verify_sticky(const std::string& traj_path, const std::string& tolerance) {
    Trajectory traj = io::trajectory_from_json(io::load_json_file(traj_path));
    Scalar tol = default_tol(traj, tolerance);
    auto violations = check_sticky(traj, tol);
    json witness;
    witness["violations"] = json::array();
    for (const auto& v : violations)
        witness["violations"].push_back({{"pair", {v.i, v.j}},
                                         {"first_contact", io::scalar_to_json(v.first_contact)},
                                         {"separation", io::scalar_to_json(v.separation)}});
    return report_verdict("sticky", violations.empty(), witness);
}

int cmd_verify_weak(const std::string& traj_path, const std::string& tolerance) {
    Trajectory traj = io::trajectory_from_json(io::load_json_file(traj_path));
    Scalar tol = default_tol(traj, tolerance);
    auto report = check_weak(traj, tol);
    json witness;
    witness["max_residual"] = report.max_residual();
    witness["worst_index"] = report.worst_index;
    witness["worst_time"] = io::scalar_to_json(report.worst_time);
    return report_verdict("weak", report.pass(tol), witness);
}

int cmd_verify_energy(const std::string& traj_path) {
    Trajectory traj = io::trajectory_from_json(io::load_json_file(traj_path));
    auto profile = energy_profile(traj);
    json witness;
    witness["times"] = json::array();
    witness["values"] = json::array();
    for (const auto& t : profile.times) witness["times"].push_back(io::scalar_to_json(t));
    for (const auto& v : profile.values) witness["values"].push_back(io::scalar_to_json(v));
    return report_verdict("energy", is_energy_admissible(profile), witness);
}

int cmd_verify_nip(const std::string& spec_path, const std::string& horizon) {
    Example3Spec spec = io::example3_spec_from_json(io::load_json_file(spec_path));
    Scalar h = horizon.empty() ? spec.horizon : parse_scalar(horizon, Backend::Rational, "horizon");
    bool pass = nip_check(spec, h);
    json witness;
    witness["levels"] = spec.levels;
    witness["horizon"] = io::scalar_to_json(h);
    return report_verdict("nip", pass, witness);
}

int cmd_verify_lemma1(const std::string& alpha, const std::string& beta, const std::string& gamma,
                      int k) {
    TailParams params = tail_params_from(alpha, beta, gamma);
    bool pass = lemma1_check(params, k);
    json witness;
    Scalar t = collision_time_tk(params, k);
    witness["k"] = k;
    witness["t_km1"] = t.str();
    witness["x_kp1"] = free_position(params, k + 1, t).str();
    witness["x_km1"] = free_position(params, k - 1, t).str();
    witness["valid_params"] = params.valid();
    return report_verdict("lemma1", pass, witness);
}

int cmd_verify_lemma2(const std::string& alpha, const std::string& beta, const std::string& gamma,
                      int k, int tail, const std::string& tau_text) {
    TailParams params = tail_params_from(alpha, beta, gamma);
    params.require_valid();
    Scalar tau = tau_text.empty() ? select_tau(params, k)
                                  : parse_scalar(tau_text, Backend::Rational, "tau");
    const std::uint32_t full = (std::uint32_t{1} << (tail + 1)) - 1;
    int passed = 0, total = 0;
    std::uint32_t first_failure = 0;
    for (std::uint32_t mask = 1; mask < full; mask += 2) { // bit 0 (index k) always set
        ++total;
        if (lemma2_check(params, k, tau, mask, tail))
            ++passed;
        else if (first_failure == 0)
            first_failure = mask;
    }
    json witness;
    witness["k"] = k;
    witness["tau"] = tau.str();
    witness["subsets_checked"] = total;
    witness["subsets_passed"] = passed;
    if (first_failure != 0) witness["first_failing_mask"] = first_failure;
    std::cout << passed << "/" << total << " subsets pass\n";
    return report_verdict("lemma2", passed == total, witness);
}

// --------------------------------------------------------------- experiment

int run_report(Report report, const std::string& out_dir) {
    fs::path dir = out_dir.empty() ? default_results_dir() : fs::path(out_dir);
    fs::create_directories(dir);
    json j = report.to_json();
    fs::path path = dir / (report.experiment + "-" + io::content_hash(report.parameters) + ".json");
    io::write_text_file(path, io::canonical_dump(j));
    for (const auto& c : report.cases)
        std::cout << (c.pass ? "PASS  " : "FAIL  ") << c.name << "\n";
    std::cout << (report.pass ? "PASS" : "FAIL") << "  " << report.experiment << " ("
              << report.wall_ms << " ms) -> " << path.string() << "\n";
    return report.pass ? kExitPass : kExitAssertionFail;
}

std::pair<int, int> parse_levels_range(const std::string& text) {
    auto dots = text.find("..");
    if (dots == std::string::npos) {
        int n = std::stoi(text);
        return {n, n};
    }
    return {std::stoi(text.substr(0, dots)), std::stoi(text.substr(dots + 2))};
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"stickysim: n-dimensional sticky-particle simulator and verification harness"};
    app.require_subcommand(1);

    // ---- gen
    auto* gen = app.add_subcommand("gen", "Generate scenario files");
    gen->require_subcommand(1);

    std::string g_out, g_horizon = "3", g_perturb = "0";
    auto* gen2 = gen->add_subcommand("example2", "Two crossing particles in the plane");
    gen2->add_option("--perturb", g_perturb, "Vertical offset of the first particle");
    gen2->add_option("--horizon", g_horizon, "Time horizon");
    gen2->add_option("--out", g_out, "Output scenario path")->required();

    int g3_levels = 4;
    std::uint64_t g3_seed = 1;
    std::string g3_horizon = "1", g3_out;
    auto* gen3 = gen->add_subcommand("example3", "Backward binary-collision cascade");
    gen3->add_option("--levels", g3_levels, "Cascade depth")->required();
    gen3->add_option("--seed", g3_seed, "Velocity sampling seed");
    gen3->add_option("--horizon", g3_horizon, "Time horizon");
    gen3->add_option("--out", g3_out, "Output scenario path")->required();

    std::string g4_alpha = "1/4", g4_beta = "1/2", g4_gamma = "3/4";
    int g4_levels = 3;
    std::string g4_targeting = "truncated", g4_variant = "vertical", g4_horizon, g4_out;
    auto* gen4 = gen->add_subcommand("example4", "Bullet/target configuration on the axis");
    gen4->add_option("--alpha", g4_alpha, "Mass ratio");
    gen4->add_option("--beta", g4_beta, "Position ratio");
    gen4->add_option("--gamma", g4_gamma, "Velocity ratio");
    gen4->add_option("--levels", g4_levels, "Number of black/white pairs")->required();
    gen4->add_option("--targeting", g4_targeting, "truncated|infinite");
    gen4->add_option("--variant", g4_variant, "vertical|slanted");
    gen4->add_option("--horizon", g4_horizon, "Time horizon (default: outermost formula time)");
    gen4->add_option("--out", g4_out, "Output scenario path")->required();

    std::string gs_base, gs_scale = "1/8", gs_decay = "3/4", gs_floor, gs_out;
    int gs_samples = 8;
    std::uint64_t gs_seed = 1;
    auto* gens = gen->add_subcommand("smooth", "Replace point masses by collapsing ball clouds");
    gens->add_option("--base", gs_base, "Base point-mass scenario")->required();
    gens->add_option("--scale", gs_scale, "Initial collapse scale");
    gens->add_option("--decay", gs_decay, "Per-particle scale decay");
    gens->add_option("--floor", gs_floor, "Smallest admissible scale");
    gens->add_option("--samples", gs_samples, "Samples per cloud");
    gens->add_option("--seed", gs_seed, "Sampling seed");
    gens->add_option("--out", gs_out, "Output scenario path")->required();

    // ---- run
    std::string r_scenario, r_out, r_step;
    bool r_svg = false;
    ScenarioOverrides r_overrides;
    auto* run = app.add_subcommand("run", "Simulate a scenario and export results");
    run->add_option("scenario", r_scenario, "Scenario JSON path")->required();
    run->add_option("--out", r_out, "Output directory (default $STICKYSIM_RESULTS_DIR)");
    run->add_option("--sample-step", r_step, "CSV sample step (default horizon/100)");
    run->add_flag("--svg", r_svg, "Also write an SVG trajectory plot");
    r_overrides.add_flags(run);

    // ---- verify
    auto* verify = app.add_subcommand("verify", "Run a checker and print verdict + witness");
    verify->require_subcommand(1);
    std::string v_traj, v_tol;
    auto* vs = verify->add_subcommand("sticky", "Sticky-property check");
    vs->add_option("--trajectory", v_traj, "Trajectory JSON")->required();
    vs->add_option("--tolerance", v_tol, "Coincidence tolerance");
    auto* vw = verify->add_subcommand("weak", "Weak-solution residual check");
    vw->add_option("--trajectory", v_traj, "Trajectory JSON")->required();
    vw->add_option("--tolerance", v_tol, "Coincidence tolerance");
    auto* ve = verify->add_subcommand("energy", "Energy admissibility check");
    ve->add_option("--trajectory", v_traj, "Trajectory JSON")->required();
    std::string vn_spec, vn_horizon;
    auto* vn = verify->add_subcommand("nip", "Non-intersection property of a cascade spec");
    vn->add_option("--spec", vn_spec, "Cascade spec JSON")->required();
    vn->add_option("--horizon", vn_horizon, "Check window");
    std::string vl_alpha = "1/4", vl_beta = "1/2", vl_gamma = "3/4", vl_tau;
    int vl_k = 2, vl_tail = 10;
    auto* vl1 = verify->add_subcommand("lemma1", "Overtake inequality at the formula time");
    vl1->add_option("--alpha", vl_alpha, "Mass ratio");
    vl1->add_option("--beta", vl_beta, "Position ratio");
    vl1->add_option("--gamma", vl_gamma, "Velocity ratio");
    vl1->add_option("--k", vl_k, "Level")->required();
    auto* vl2 = verify->add_subcommand("lemma2", "Subset barycenter comparison at tau_k");
    vl2->add_option("--alpha", vl_alpha, "Mass ratio");
    vl2->add_option("--beta", vl_beta, "Position ratio");
    vl2->add_option("--gamma", vl_gamma, "Velocity ratio");
    vl2->add_option("--k", vl_k, "Level")->required();
    vl2->add_option("--tail", vl_tail, "Tail cutoff");
    vl2->add_option("--tau", vl_tau, "Explicit tau (default: certified automatically)");

    // ---- experiment
    auto* experiment = app.add_subcommand("experiment", "Orchestrated reproductions");
    experiment->require_subcommand(1);
    std::string e_out;
    int e_levels_nu = 3;
    std::uint64_t e_seed = 1;
    auto* enu = experiment->add_subcommand("nonuniqueness", "Two solutions from one datum");
    enu->add_option("--levels", e_levels_nu, "Cascade depth")->required();
    enu->add_option("--seed", e_seed, "Cascade seed");
    enu->add_option("--out", e_out, "Report directory");
    std::string e_levels_range = "3..8", e_alpha = "1/4", e_beta = "1/2", e_gamma = "3/4";
    auto* ene = experiment->add_subcommand("nonexistence", "Hit index escapes to infinity");
    ene->add_option("--levels", e_levels_range, "Truncation depth or range lo..hi");
    ene->add_option("--alpha", e_alpha, "Mass ratio");
    ene->add_option("--beta", e_beta, "Position ratio");
    ene->add_option("--gamma", e_gamma, "Velocity ratio");
    ene->add_option("--out", e_out, "Report directory");
    int e_levels_jeps = 3;
    std::string e_eps = "10,1,0.1,0.01";
    auto* eje = experiment->add_subcommand("jeps", "Discounted-energy policy structure");
    eje->add_option("--levels", e_levels_jeps, "Truncation depth");
    eje->add_option("--eps", e_eps, "Comma-separated eps grid");
    eje->add_option("--alpha", e_alpha, "Mass ratio");
    eje->add_option("--beta", e_beta, "Position ratio");
    eje->add_option("--gamma", e_gamma, "Velocity ratio");
    eje->add_option("--out", e_out, "Report directory");
    int e_count = 100;
    auto* epr = experiment->add_subcommand("properties", "Randomized invariant suite");
    epr->add_option("--count", e_count, "Number of random scenarios");
    epr->add_option("--seed", e_seed, "Master seed");
    epr->add_option("--out", e_out, "Report directory");

    try {
        app.parse(argc, argv);

        if (gen2->parsed()) return cmd_gen_example2(g_perturb, g_horizon, g_out);
        if (gen3->parsed()) return cmd_gen_example3(g3_levels, g3_seed, g3_horizon, g3_out);
        if (gen4->parsed())
            return cmd_gen_example4(g4_alpha, g4_beta, g4_gamma, g4_levels, g4_targeting,
                                    g4_variant, g4_horizon, g4_out);
        if (gens->parsed()) {
            if (gs_floor.empty()) gs_floor = "1/1073741824";
            return cmd_gen_smooth(gs_base, gs_scale, gs_decay, gs_floor, gs_samples, gs_seed,
                                  gs_out);
        }
        if (run->parsed()) return cmd_run(r_scenario, r_out, r_step, r_svg, r_overrides);
        if (vs->parsed()) return cmd_verify_sticky(v_traj, v_tol);
        if (vw->parsed()) return cmd_verify_weak(v_traj, v_tol);
        if (ve->parsed()) return cmd_verify_energy(v_traj);
        if (vn->parsed()) return cmd_verify_nip(vn_spec, vn_horizon);
        if (vl1->parsed()) return cmd_verify_lemma1(vl_alpha, vl_beta, vl_gamma, vl_k);
        if (vl2->parsed())
            return cmd_verify_lemma2(vl_alpha, vl_beta, vl_gamma, vl_k, vl_tail, vl_tau);
        if (enu->parsed()) return run_report(run_example3_nonuniqueness(e_levels_nu, e_seed), e_out);
        if (ene->parsed()) {
            auto [lo, hi] = parse_levels_range(e_levels_range);
            return run_report(
                nonexistence_sweep(tail_params_from(e_alpha, e_beta, e_gamma), lo, hi), e_out);
        }
        if (eje->parsed()) {
            std::vector<Scalar> grid;
            std::stringstream ss(e_eps);
            std::string item;
            while (std::getline(ss, item, ','))
                grid.push_back(parse_scalar(item, Backend::Rational, "eps"));
            return run_report(
                run_jeps_sweep(tail_params_from(e_alpha, e_beta, e_gamma), e_levels_jeps, grid),
                e_out);
        }
        if (epr->parsed()) return run_report(run_property_suite(e_seed, e_count), e_out);
        std::cerr << "no subcommand selected\n";
        return kExitInputError;
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitPass : kExitInputError;
    } catch (const BudgetExceeded& e) {
        std::cerr << "resource cap: " << e.what() << "\n";
        return kExitResourceCap;
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
}
