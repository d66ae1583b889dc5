#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "ltl/harness.hpp"
#include "ltl/lifeform.hpp"
#include "ltl/metrics.hpp"
#include "ltl/pattern_io.hpp"

namespace fs = std::filesystem;
using namespace ltl;

namespace {

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::ofstream open_out(const fs::path& p) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + p.string());
    return f;
}

fs::path prepare_dir(const std::string& out_dir) {
    fs::path p(out_dir);
    fs::create_directories(p);
    return p;
}

void cmd_run(const Experiment& ex, const fs::path& out) {
    AutomatonSpec spec = ex.make_spec();
    BinaryConfig seed = ex.make_seed();
    auto traj = run(seed, spec, ex.steps);

    auto csv = open_out(out / "trajectory.csv");
    csv << "step,live_count,mass\n";
    for (std::size_t t = 0; t < traj.size(); ++t)
        csv << t << "," << traj[t].live_count() << "," << fmt17(traj[t].mass()) << "\n";

    write_pattern_file((out / "final.pat").string(), traj.back());

    if (ex.frames) {
        for (std::size_t t = 0; t < traj.size(); ++t) {
            char name[32];
            std::snprintf(name, sizeof name, "frame_%04zu.pgm", t);
            write_pgm_file((out / name).string(), traj[t], ex.render_scale);
        }
    }
}

void cmd_construct(const Experiment& ex, const fs::path& out) {
    if (!ex.shape) throw ConfigurationError("construct mode needs a shape");
    Construction c;
    if (ex.shape->kind == AnalyticShape::Kind::Ball) {
        c = construct_ball(ex.shape->norm, ex.shape->radius, ex.quad, ex.epsilon, ex.dim);
    } else if (ex.shape->kind == AnalyticShape::Kind::Ribbon) {
        c = construct_ribbon(ex.shape->width, ex.shape->axis, ex.quad, ex.epsilon,
                             ex.ribbon_length, ex.dim);
    } else {
        throw ConfigurationError("construct mode needs a ball or ribbon shape");
    }

    AutomatonSpec spec = ex.make_spec();
    StillLifeCheck chk = is_still_life(c.config, spec);

    write_pattern_file((out / "pattern.pat").string(), c.config);
    auto rep = open_out(out / "verdict.txt");
    rep << "predicted_valid " << (c.predicted_valid ? 1 : 0) << "\n"
        << "fixed " << (chk.fixed ? 1 : 0) << "\n"
        << "gap " << fmt17(chk.gap) << "\n"
        << "inclusion_ok " << (chk.inclusion_ok ? 1 : 0) << "\n";
}

void cmd_detect(const Experiment& ex, const fs::path& out) {
    AutomatonSpec spec = ex.make_spec();
    BinaryConfig seed = ex.make_seed();
    LifeFormReport r = detect_lifeform(seed, spec, ex.max_steps, ex.max_period);

    auto rep = open_out(out / "report.txt");
    rep << "kind " << kind_name(r.kind) << "\n"
        << "period " << r.period << "\n"
        << "displacement";
    for (long d : r.displacement) rep << " " << d;
    rep << "\n"
        << "steps_used " << r.steps_used << "\n";
}

void cmd_ladder(const Experiment& ex, const fs::path& out) {
    if (!ex.shape) throw ConfigurationError("ladder mode needs a shape");
    if (ex.kernel_is_uniform)
        throw ConfigurationError("ladder mode needs a continuous kernel spec");
    HarnessOptions opts{ex.backend, ex.threads};
    LadderResult r = refinement_ladder(*ex.shape, ex.quad, ex.kernel, ex.eps_list,
                                       ex.steps, opts);
    auto csv = open_out(out / "ladder.csv");
    csv << "epsilon,steps,gap_to_finest,self_gap\n";
    for (const auto& lv : r.levels)
        csv << fmt17(lv.epsilon) << "," << lv.steps << "," << fmt17(lv.gap_to_finest)
            << "," << fmt17(lv.self_gap) << "\n";
}

void cmd_perturb(const Experiment& ex, const fs::path& out) {
    if (ex.perturb_sizes.empty())
        throw ConfigurationError("perturb mode needs perturb.sizes");
    AutomatonSpec spec = ex.make_spec();
    BinaryConfig seed = ex.make_seed();
    PerturbationResult r =
        perturbation_study(ex.perturb_kind, seed, spec, ex.kernel, ex.perturb_sizes);

    auto csv = open_out(out / "perturb.csv");
    csv << "size,gap\n";
    for (const auto& row : r.rows)
        csv << fmt17(row.size) << "," << fmt17(row.gap) << "\n";

    auto rep = open_out(out / "margin.txt");
    rep << "delta " << fmt17(r.final_margin.delta) << "\n"
        << "eta " << fmt17(r.final_margin.eta) << "\n"
        << "ms " << fmt17(r.final_margin.ms) << "\n"
        << "mb " << fmt17(r.final_margin.mb) << "\n"
        << "m_exact " << fmt17(r.final_margin.m_exact) << "\n";
}

void cmd_verify(const Experiment& ex, const fs::path& out) {
    AutomatonSpec spec = ex.make_spec();
    BinaryConfig seed = ex.make_seed();
    StillLifeCheck chk = is_still_life(seed, spec);
    MarginReport m = margin_report(seed, spec, 1e-3, 1e-9);

    auto rep = open_out(out / "report.txt");
    rep << "fixed " << (chk.fixed ? 1 : 0) << "\n"
        << "gap " << fmt17(chk.gap) << "\n"
        << "inclusion_ok " << (chk.inclusion_ok ? 1 : 0) << "\n";
    if (chk.fixed) {
        StabilityReport st = stability_report(seed, spec);
        rep << "m_inf " << fmt17(st.m_inf) << "\n"
            << "gamma " << fmt17(st.gamma) << "\n";
    }
    rep << "ms " << fmt17(m.ms) << "\n"
        << "mb " << fmt17(m.mb) << "\n"
        << "m_exact " << fmt17(m.m_exact) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"larger-than-life cellular automata toolkit"};
    app.require_subcommand(1);
    app.fallthrough(true);

    std::string backend_flag;
    std::string out_dir = ".";
    long long seed_flag = -1;
    int threads_flag = 0;
    app.add_option("--backend", backend_flag, "convolution backend: naive | sat | fft | auto");
    app.add_option("--out", out_dir, "output directory (created if missing)");
    app.add_option("--seed", seed_flag, "random seed override");
    app.add_option("--threads", threads_flag, "worker thread count override");

    std::string config_path;
    std::string pattern_path;
    int render_scale = 1;

    auto* run_cmd = app.add_subcommand("run", "evolve a configuration and dump the trajectory");
    run_cmd->add_option("config", config_path, "experiment config (json)")->required();
    auto* construct_cmd =
        app.add_subcommand("construct", "build an analytic still-life candidate");
    construct_cmd->add_option("config", config_path, "experiment config (json)")->required();
    auto* detect_cmd = app.add_subcommand("detect", "classify a configuration's life form");
    detect_cmd->add_option("config", config_path, "experiment config (json)")->required();
    auto* ladder_cmd = app.add_subcommand("ladder", "refinement ladder across resolutions");
    ladder_cmd->add_option("config", config_path, "experiment config (json)")->required();
    auto* perturb_cmd = app.add_subcommand("perturb", "rule perturbation study");
    perturb_cmd->add_option("config", config_path, "experiment config (json)")->required();
    auto* verify_cmd = app.add_subcommand("verify", "still-life and margin verification");
    verify_cmd->add_option("config", config_path, "experiment config (json)")->required();
    auto* render_cmd = app.add_subcommand("render", "render a pattern file to pgm");
    render_cmd->add_option("pattern", pattern_path, "pattern file")->required();
    render_cmd->add_option("--scale", render_scale, "pixels per cell")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        fs::path out = prepare_dir(out_dir);
        if (render_cmd->parsed()) {
            BinaryConfig c = read_pattern_file(pattern_path);
            write_pgm_file((out / "render.pgm").string(), c, render_scale);
            return 0;
        }

        Experiment ex = load_experiment(config_path);
        if (!backend_flag.empty()) ex.backend = parse_backend(backend_flag);
        if (seed_flag >= 0) ex.seed = static_cast<std::uint64_t>(seed_flag);
        if (threads_flag > 0) ex.threads = threads_flag;

        if (run_cmd->parsed()) cmd_run(ex, out);
        else if (construct_cmd->parsed()) cmd_construct(ex, out);
        else if (detect_cmd->parsed()) cmd_detect(ex, out);
        else if (ladder_cmd->parsed()) cmd_ladder(ex, out);
        else if (perturb_cmd->parsed()) cmd_perturb(ex, out);
        else if (verify_cmd->parsed()) cmd_verify(ex, out);
    } catch (const ResourceLimitError& e) {
        std::cerr << "resource limit: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
