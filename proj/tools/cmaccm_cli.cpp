// cmaccm: secrecy rate regions for the compound MAC with confidential
// messages. Subcommands sweep the Gaussian and discrete-memoryless bounds,
// compare regions, probe the less-noisy condition, and run the random-binning
// coding simulator.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "cmaccm/coding_sim.hpp"
#include "cmaccm/dm_bounds.hpp"
#include "cmaccm/gaussian.hpp"
#include "cmaccm/io.hpp"
#include "cmaccm/version.hpp"

namespace fs = std::filesystem;
using namespace cmaccm;

namespace {

// Relative output paths resolve against CMACCM_OUT_DIR when it is set.
std::string resolve_out(const std::string& path) {
    const char* base = std::getenv("CMACCM_OUT_DIR");
    if (base && *base && fs::path(path).is_relative()) return (fs::path(base) / path).string();
    return path;
}

void ensure_parent_dir(const std::string& path) {
    const fs::path parent = fs::path(path).parent_path();
    if (!parent.empty()) fs::create_directories(parent);
}

struct RegionOutputs {
    std::vector<std::string> written;
};

// Writes raw and closure variants of a swept cloud under a common stem.
RegionOutputs write_region_pair(const std::string& out_stem, const RegionCloud& raw,
                                const RegionWriteOptions& opts, bool also_json) {
    RegionOutputs outs;
    const RegionCloud closed = convex_closure(raw);
    const std::string stem = resolve_out(out_stem);
    ensure_parent_dir(stem);
    auto emit = [&](const RegionCloud& cloud, const std::string& suffix) {
        const std::string csv = stem + "." + suffix + ".csv";
        write_region_csv(csv, cloud, opts);
        outs.written.push_back(csv);
        if (also_json) {
            const std::string js = stem + "." + suffix + ".json";
            write_region_json(js, cloud, opts);
            outs.written.push_back(js);
        }
    };
    emit(raw, "raw");
    emit(closed, "closure");
    return outs;
}

Pmf parse_prob_list(const std::string& csv) {
    std::vector<double> vals;
    std::string token;
    std::istringstream in(csv);
    while (std::getline(in, token, ',')) vals.push_back(std::stod(token));
    return Pmf(vals);
}

int run_gaussian_region(const GaussianParams& gp, const std::string& mode_str, std::size_t steps,
                        const std::string& out, bool no_timestamp, bool also_json) {
    GaussianSweepConfig cfg;
    cfg.steps = steps;
    cfg.mode = mode_str == "compound" ? GaussianMode::CompoundCapacity : GaussianMode::CmacCmInner;
    const RegionCloud cloud = sweep_gaussian(gp, cfg);
    const RegionOutputs outs = write_region_pair(out, cloud, {!no_timestamp}, also_json);
    std::cout << "mode " << mode_str << ": " << cloud.points.size() << " raw points\n";
    const auto mx = axis_maxima(cloud);
    std::cout << "max R0 " << format_sig9(mx[0]) << ", max R1 " << format_sig9(mx[1])
              << ", max R2 " << format_sig9(mx[2]) << "\n";
    for (const auto& f : outs.written) std::cout << "wrote " << f << "\n";
    return 0;
}

int run_dm_region(const std::string& channel_path, const std::string& bound,
                  const SweepConfig& cfg, const std::string& out, bool no_timestamp,
                  bool also_json) {
    const DmChannel ch = load_channel_spec(channel_path);
    RegionCloud cloud = [&] {
        if (bound == "inner") return sweep_inner(ch, cfg);
        if (bound == "outer") return sweep_outer(ch, cfg);
        if (bound == "less-noisy-inner") return sweep_less_noisy(ch, cfg, LessNoisyMode::Inner);
        if (bound == "less-noisy-outer") return sweep_less_noisy(ch, cfg, LessNoisyMode::Outer);
        throw UsageError("unknown bound '" + bound + "'");
    }();
    const RegionOutputs outs = write_region_pair(out, cloud, {!no_timestamp}, also_json);
    std::cout << "bound " << bound << " (" << cloud.meta.provenance << "): "
              << cloud.points.size() << " raw points\n";
    if (!cloud.meta.note.empty()) std::cout << "note: " << cloud.meta.note << "\n";
    for (const auto& f : outs.written) std::cout << "wrote " << f << "\n";
    return 0;
}

int run_less_noisy(const std::string& channel_path, const std::optional<std::string>& p_x1_csv,
                   std::size_t v2_size, const SweepConfig& cfg, const std::string& out) {
    const DmChannel ch = load_channel_spec(channel_path);
    const Pmf p_x1 = p_x1_csv ? parse_prob_list(*p_x1_csv) : Pmf::uniform(ch.x1_size());
    const LessNoisyVerdict verdict = less_noisy_test(ch, p_x1, v2_size, cfg);
    const json j = less_noisy_verdict_to_json(verdict);
    const std::string path = resolve_out(out);
    ensure_parent_dir(path);
    write_text_file(path, j.dump(2) + "\n");
    std::cout << j.at("status").get<std::string>() << " after "
              << verdict.laws_checked << " couplings\n";
    std::cout << "wrote " << path << "\n";
    return 0;  // verdict is data, not failure
}

int run_compare(const std::string& a_path, const std::string& b_path, double tol,
                const std::string& out) {
    RegionCloud a = read_region_file(a_path);
    RegionCloud b = read_region_file(b_path);
    // Region files may carry raw clouds; comparison is defined on closures
    // (idempotent when the file already holds one).
    a = convex_closure(a);
    b = convex_closure(b);
    const ComparisonReport rep = compare(a, b, tol);
    const json j = comparison_report_to_json(rep, a_path, b_path);
    const std::string path = resolve_out(out);
    ensure_parent_dir(path);
    write_text_file(path, j.dump(2) + "\n");
    std::cout << "verdict: " << rep.verdict() << "\n";
    std::cout << "a max (R0,R1,R2) = (" << format_sig9(rep.a_max[0]) << ", "
              << format_sig9(rep.a_max[1]) << ", " << format_sig9(rep.a_max[2]) << ")\n";
    std::cout << "b max (R0,R1,R2) = (" << format_sig9(rep.b_max[0]) << ", "
              << format_sig9(rep.b_max[1]) << ", " << format_sig9(rep.b_max[2]) << ")\n";
    std::cout << "wrote " << path << "\n";
    return 0;
}

int run_simulate(const std::string& channel_path, const std::string& law_path,
                 const std::string& cfg_path, const std::string& out,
                 const std::optional<std::string>& log_path, bool monte_carlo,
                 std::size_t mc_samples, std::optional<std::uint64_t> seed_override,
                 std::optional<std::uint64_t> budget_override) {
    const DmChannel ch = load_channel_spec(channel_path);
    const InnerAuxLaw law = load_inner_law(law_path);
    SimConfigFile scf = load_sim_config(cfg_path);
    if (seed_override) scf.cfg.seed = *seed_override;
    if (budget_override) scf.cfg.enum_budget = *budget_override;
    if (scf.auto_bin) {
        scf.cfg.bin_size = auto_bin_size(law, ch, scf.cfg.n);
        std::cout << "auto bin size L = " << scf.cfg.bin_size << "\n";
    }

    SimulationOptions opt;
    opt.monte_carlo = monte_carlo;
    opt.mc_samples = mc_samples;
    SimReport rep;
    try {
        rep = run_simulation(law, ch, scf.cfg, opt);
    } catch (const BudgetError& e) {
        throw BudgetError(std::string(e.what()) + " (pass --monte-carlo to sample instead)");
    }

    const std::string cfg_hash = hex64(fnv1a64(scf.cfg.echo()));
    const json j = sim_report_to_json(rep, scf.cfg, cfg_hash);
    const std::string path = resolve_out(out);
    ensure_parent_dir(path);
    write_text_file(path, j.dump(2) + "\n");
    if (log_path) append_sim_log_csv(resolve_out(*log_path), cfg_hash, rep);
    std::cout << "pe " << format_sig9(rep.pe_estimate) << " +- " << format_sig9(rep.pe_ci)
              << ", equivocation/n " << format_sig9(rep.equivocation_per_symbol) << ", leakage "
              << format_sig9(rep.leakage) << " (" << rep.method << ")\n";
    std::cout << "wrote " << path << "\n";
    return 0;
}

int run_reproduce_figures(const std::string& out_dir, std::size_t steps, bool no_timestamp) {
    const std::string dir = resolve_out(out_dir);
    fs::create_directories(dir);
    const RegionWriteOptions opts{!no_timestamp};

    struct FigureSpec {
        const char* tag;
        GaussianParams gp;
    };
    const std::vector<FigureSpec> figures = {
        {"fig3", {0.6, 0.6, 0.4, 0.5, 1.0, 1.0}},
        {"fig4", {0.6, 0.6, 0.1, 0.5, 1.0, 1.0}},
    };

    std::vector<std::string> artifacts;
    json manifest;
    for (const auto& fig : figures) {
        RegionCloud clouds[2];
        std::string files[2];
        const GaussianMode modes[2] = {GaussianMode::CmacCmInner, GaussianMode::CompoundCapacity};
        for (int m = 0; m < 2; ++m) {
            GaussianSweepConfig cfg{steps, modes[m]};
            const RegionCloud raw = sweep_gaussian(fig.gp, cfg);
            clouds[m] = convex_closure(raw);
            const std::string name =
                std::string(fig.tag) + "_" + to_string(modes[m]) + ".csv";
            write_region_csv((fs::path(dir) / name).string(), clouds[m], opts);
            files[m] = name;
            artifacts.push_back(name);
        }
        const ComparisonReport rep = compare(clouds[0], clouds[1], 1e-6);
        const std::string cmp_name = std::string(fig.tag) + "_compare.json";
        write_text_file((fs::path(dir) / cmp_name).string(),
                        comparison_report_to_json(rep, files[0], files[1]).dump(2) + "\n");
        artifacts.push_back(cmp_name);
        std::cout << fig.tag << ": " << rep.verdict() << ", cmaccm max R1 "
                  << format_sig9(rep.a_max[1]) << " vs compound max R1 "
                  << format_sig9(rep.b_max[1]) << "\n";
    }

    artifacts.push_back("manifest.json");
    manifest["artifacts"] = artifacts;
    manifest["steps"] = steps;
    manifest["tool"] = std::string(kToolName) + " v" + kVersion;
    if (!no_timestamp) manifest["generated"] = iso8601_now();
    write_text_file((fs::path(dir) / "manifest.json").string(), manifest.dump(2) + "\n");
    std::cout << "wrote " << artifacts.size() << " artifacts under " << dir << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"secrecy rate regions for the compound MAC with confidential messages"};
    app.set_version_flag("--version", std::string(kToolName) + " " + kVersion);
    app.require_subcommand(1);

    // gaussian-region ---------------------------------------------------
    auto* g = app.add_subcommand("gaussian-region",
                                 "sweep the Gaussian inner bound or compound capacity region");
    GaussianParams gp;
    std::string g_mode = "cmaccm", g_out;
    std::size_t g_steps = 21;
    bool g_nots = false, g_json = false;
    g->add_option("--h1", gp.h1, "gain X1 -> Y1")->required();
    g->add_option("--h2", gp.h2, "gain X2 -> Y1")->required();
    g->add_option("--g1", gp.g1, "gain X1 -> Y2")->required();
    g->add_option("--g2", gp.g2, "gain X2 -> Y2")->required();
    g->add_option("--p1", gp.p1, "power budget of transmitter 1")->required();
    g->add_option("--p2", gp.p2, "power budget of transmitter 2")->required();
    g->add_option("--mode", g_mode, "cmaccm | compound")
        ->check(CLI::IsMember({"cmaccm", "compound"}));
    g->add_option("--steps", g_steps, "grid points per split axis");
    g->add_option("--out", g_out, "output stem (.raw.csv / .closure.csv appended)")->required();
    g->add_flag("--json", g_json, "also write JSON variants");
    g->add_flag("--no-timestamp", g_nots, "suppress the generated-at header line");
    g->callback([&] { run_gaussian_region(gp, g_mode, g_steps, g_out, g_nots, g_json); });

    // dm-region ---------------------------------------------------------
    auto* d = app.add_subcommand("dm-region",
                                 "sweep a discrete-memoryless bound over auxiliary laws");
    std::string d_channel, d_bound = "inner", d_out;
    SweepConfig d_cfg;
    std::uint64_t d_seed = 0;
    bool d_has_seed = false, d_nots = false, d_json = false;
    d->add_option("--channel", d_channel, "channel spec JSON")->required();
    d->add_option("--bound", d_bound, "inner | outer | less-noisy-inner | less-noisy-outer")
        ->check(CLI::IsMember({"inner", "outer", "less-noisy-inner", "less-noisy-outer"}));
    d->add_option("--u-size", d_cfg.u_size, "|U|");
    d->add_option("--v1-size", d_cfg.v1_size, "|V1|");
    d->add_option("--v2-size", d_cfg.v2_size, "|V2|");
    d->add_option("--grid-k", d_cfg.grid_k, "simplex grid denominator");
    d->add_option("--samples", d_cfg.random_samples, "extra Dirichlet-uniform samples");
    d->add_option("--seed", d_seed, "seed for random samples")->each([&](const std::string&) {
        d_has_seed = true;
    });
    d->add_option("--budget", d_cfg.budget, "cap on law evaluations");
    d->add_option("--out", d_out, "output stem")->required();
    d->add_flag("--json", d_json, "also write JSON variants");
    d->add_flag("--no-timestamp", d_nots, "suppress the generated-at header line");
    d->callback([&] {
        if (d_has_seed) d_cfg.seed = d_seed;
        run_dm_region(d_channel, d_bound, d_cfg, d_out, d_nots, d_json);
    });

    // less-noisy ----------------------------------------------------------
    auto* ln = app.add_subcommand("less-noisy",
                                  "scan couplings p(v2,x2) for a less-noisy counterexample");
    std::string ln_channel, ln_out;
    std::optional<std::string> ln_px1;
    std::size_t ln_v2 = 2;
    SweepConfig ln_cfg;
    std::uint64_t ln_seed = 0;
    bool ln_has_seed = false;
    ln->add_option("--channel", ln_channel, "channel spec JSON")->required();
    ln->add_option("--p-x1", ln_px1, "comma-separated p(x1), default uniform");
    ln->add_option("--v2-size", ln_v2, "|V2|");
    ln->add_option("--grid-k", ln_cfg.grid_k, "simplex grid denominator");
    ln->add_option("--samples", ln_cfg.random_samples, "extra Dirichlet-uniform samples");
    ln->add_option("--seed", ln_seed, "seed for random samples")->each([&](const std::string&) {
        ln_has_seed = true;
    });
    ln->add_option("--budget", ln_cfg.budget, "cap on coupling evaluations");
    ln->add_option("--out", ln_out, "verdict JSON path")->required();
    ln->callback([&] {
        if (ln_has_seed) ln_cfg.seed = ln_seed;
        run_less_noisy(ln_channel, ln_px1, ln_v2, ln_cfg, ln_out);
    });

    // compare -------------------------------------------------------------
    auto* c = app.add_subcommand("compare", "containment comparison of two region files");
    std::string c_a, c_b, c_out;
    double c_tol = 1e-6;
    c->add_option("--a", c_a, "first region file")->required();
    c->add_option("--b", c_b, "second region file")->required();
    c->add_option("--tol", c_tol, "containment tolerance in bits");
    c->add_option("--out", c_out, "report JSON path")->required();
    c->callback([&] { run_compare(c_a, c_b, c_tol, c_out); });

    // simulate --------------------------------------------------------------
    auto* s = app.add_subcommand("simulate",
                                 "run the random-binning coding scheme at desk scale");
    std::string s_channel, s_law, s_cfg, s_out;
    std::optional<std::string> s_log;
    bool s_mc = false;
    std::size_t s_mc_samples = 0;
    std::optional<std::uint64_t> s_seed, s_budget;
    s->add_option("--channel", s_channel, "channel spec JSON")->required();
    s->add_option("--law", s_law, "inner auxiliary law JSON")->required();
    s->add_option("--sim-config", s_cfg, "simulation config JSON")->required();
    s->add_option("--out", s_out, "report JSON path")->required();
    s->add_option("--log", s_log, "CSV experiment log to append");
    s->add_flag("--monte-carlo", s_mc, "sample the equivocation instead of exact enumeration");
    s->add_option("--mc-samples", s_mc_samples, "Monte-Carlo sample count (default: trials)");
    s->add_option("--seed", s_seed, "override the config seed");
    s->add_option("--budget", s_budget, "override the exact-enumeration budget");
    s->callback([&] {
        run_simulate(s_channel, s_law, s_cfg, s_out, s_log, s_mc, s_mc_samples, s_seed, s_budget);
    });

    // reproduce-figures -------------------------------------------------------
    auto* r = app.add_subcommand("reproduce-figures",
                                 "emit the two gain-set region datasets and comparisons");
    std::string r_dir;
    std::size_t r_steps = 21;
    bool r_nots = false;
    r->add_option("--out-dir", r_dir, "output directory")->required();
    r->add_option("--steps", r_steps, "grid points per split axis");
    r->add_flag("--no-timestamp", r_nots, "suppress generated-at fields");
    r->callback([&] { run_reproduce_figures(r_dir, r_steps, r_nots); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
