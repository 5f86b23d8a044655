// pirlab command line: deterministic, scriptable access to the hierarchy
// builder, the exact pattern geometry, and the multi-agent TSP experiments.
// Identical invocations produce byte-identical outputs; seeds are explicit
// (PIRLAB_SEED serves as fallback) and nothing reads the clock.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pir/experiment.hpp"
#include "pir/geometry.hpp"
#include "pir/hierarchy_json.hpp"
#include "pir/instance.hpp"
#include "pir/prime_relations.hpp"
#include "pir/ptm.hpp"
#include "pir/svg.hpp"
#include "pir/swarm.hpp"

namespace fs = std::filesystem;

namespace {

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw pir::FormatError("cannot write output file: " + out_path);
    out << text;
}

std::uint64_t default_seed() {
    if (const char* env = std::getenv("PIRLAB_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw pir::InvalidArgument("PIRLAB_SEED is not an unsigned integer");
        }
    }
    return 0;
}

pir::IntegerAssignment read_integers_file(const std::string& path, std::size_t expected) {
    std::ifstream in(path);
    if (!in) throw pir::FormatError("cannot open integers file: " + path);
    std::vector<pir::BigInt> ints;
    std::string token;
    while (in >> token) {
        try {
            ints.emplace_back(token);
        } catch (const std::exception&) {
            throw pir::FormatError("bad integer token: '" + token + "'");
        }
    }
    if (ints.size() != expected)
        throw pir::FormatError("integers file holds " + std::to_string(ints.size()) +
                               " values, expected " + std::to_string(expected));
    return pir::IntegerAssignment(std::move(ints));
}

pir::SignSequence signs_for(std::size_t length, const std::string& signs_text) {
    if (signs_text.empty()) return pir::ptm_sequence(length);
    pir::SignSequence s = pir::parse_signs(signs_text);
    if (length != 0 && s.size() != length)
        throw pir::InvalidArgument("--signs length disagrees with --length");
    return s;
}

struct SweepFlags {
    std::string instances_dir;
    std::string out_dir = "sweep_out";
    std::size_t grid_points = 21;
    std::uint32_t replicates = 20;
    std::uint32_t agents = 50;
    std::uint64_t seed = 0;
    bool seed_set = false;
    unsigned jobs = 1;
    bool closed = false;
    bool shared_ptm = false;
    bool tsplib_round = false;
};

std::vector<fs::path> instance_files(const fs::path& dir) {
    if (!fs::is_directory(dir))
        throw pir::FormatError("not a directory: " + dir.string());
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        const auto ext = entry.path().extension().string();
        if (ext == ".json" || ext == ".csv" || ext == ".tsp") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty())
        throw pir::FormatError("no .json/.csv/.tsp instances in " + dir.string());
    return files;
}

int run_sweep(const SweepFlags& flags) {
    pir::SweepConfig cfg;
    cfg.grid = pir::default_grid(flags.grid_points);
    cfg.replicates = flags.replicates;
    cfg.base.agents = flags.agents;
    cfg.base.seed = flags.seed_set ? flags.seed : default_seed();
    cfg.base.tour_mode = flags.closed ? pir::TourMode::closed : pir::TourMode::open;
    cfg.base.ptm_offsets =
        flags.shared_ptm ? pir::PtmOffsetMode::shared : pir::PtmOffsetMode::staggered;

    fs::create_directories(flags.out_dir);
    std::vector<pir::ProblemPoint> points;
    for (const auto& file : instance_files(flags.instances_dir)) {
        const pir::ProblemInstance p = pir::load_instance(file, flags.tsplib_round);
        const pir::SweepResult sweep = pir::sweep_v(p, cfg, flags.jobs);

        const fs::path curve = fs::path(flags.out_dir) / (file.stem().string() + "_curve.csv");
        std::ofstream curve_out(curve, std::ios::binary);
        if (!curve_out) throw pir::FormatError("cannot write " + curve.string());
        curve_out << pir::sweep_curve_csv(sweep);

        pir::ProblemPoint point;
        point.id = file.stem().string();
        point.n = p.n;
        point.c_p = pir::problem_complexity(p.dist).value;
        point.v_star = sweep.v_star;
        point.c_a = pir::system_complexity_at_optimum(p, cfg, sweep);
        points.push_back(std::move(point));
    }
    const fs::path points_path = fs::path(flags.out_dir) / "points.csv";
    std::ofstream points_out(points_path, std::ios::binary);
    if (!points_out) throw pir::FormatError("cannot write " + points_path.string());
    points_out << pir::problem_points_csv(points);
    std::cout << "wrote " << points.size() << " sweep curves and " << points_path.string()
              << "\n";
    return 0;
}

int run_fit(const std::string& points_path, const std::string& out_path) {
    std::ifstream in(points_path);
    if (!in) throw pir::FormatError("cannot open points file: " + points_path);
    std::string line;
    std::vector<double> xs, ys;
    bool header = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (header) { // id,n,c_p,v_star,c_a
            header = false;
            continue;
        }
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (cells.size() != 5) throw pir::FormatError("points row needs 5 columns: " + line);
        try {
            xs.push_back(std::stod(cells[2]));
            ys.push_back(std::stod(cells[4]));
        } catch (const std::exception&) {
            throw pir::FormatError("bad numeric cell in: " + line);
        }
    }
    const pir::OlsFit fit = pir::ols_fit(xs, ys);
    emit(pir::fit_summary_csv(fit, xs.size()), out_path);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"self-organizing prime integer relations: hierarchies, exact pattern "
                 "geometry, and PTM-guided multi-agent TSP experiments"};
    app.require_subcommand(1);

    // ptm
    auto* ptm_cmd = app.add_subcommand("ptm", "print the +/- PTM prefix of a given length");
    std::size_t ptm_length = 0;
    ptm_cmd->add_option("--length", ptm_length, "sequence length")->required();
    std::string ptm_out;
    ptm_cmd->add_option("--out", ptm_out, "output file (default stdout)");

    // hierarchy
    auto* hier_cmd = app.add_subcommand("hierarchy", "build the relation hierarchy as JSON");
    std::size_t hier_length = 0;
    std::string hier_integers, hier_signs, hier_out;
    hier_cmd->add_option("--length", hier_length, "sequence length (PTM signs)")->required();
    hier_cmd->add_option("--integers", hier_integers,
                         "whitespace-separated integers file (default L, L-1, ..., 1)");
    hier_cmd->add_option("--signs", hier_signs, "explicit +/- sign string");
    hier_cmd->add_option("--out", hier_out, "output file (default stdout)");

    // geometry
    auto* geo_cmd = app.add_subcommand("geometry", "pattern metrics CSV for the PTM stack");
    std::size_t geo_length = 0;
    std::string geo_eps = "1", geo_delta = "1", geo_signs, geo_out;
    double geo_tol = 1e-9;
    geo_cmd->add_option("--length", geo_length, "sequence length (PTM signs)")->required();
    geo_cmd->add_option("--eps", geo_eps, "abscissa unit, rational p/q");
    geo_cmd->add_option("--delta", geo_delta, "ordinate unit, rational p/q");
    geo_cmd->add_option("--signs", geo_signs, "explicit +/- sign string");
    geo_cmd->add_option("--tol", geo_tol, "arc length quadrature tolerance");
    geo_cmd->add_option("--out", geo_out, "output file (default stdout)");

    // render
    auto* render_cmd = app.add_subcommand("render", "render the pattern stack as SVG");
    std::size_t render_length = 0;
    std::string render_eps = "1", render_delta = "1", render_signs, render_out;
    pir::SvgOptions svg_options;
    render_cmd->add_option("--length", render_length, "sequence length (PTM signs)")->required();
    render_cmd->add_option("--eps", render_eps, "abscissa unit, rational p/q");
    render_cmd->add_option("--delta", render_delta, "ordinate unit, rational p/q");
    render_cmd->add_option("--signs", render_signs, "explicit +/- sign string");
    render_cmd->add_option("--width", svg_options.width, "canvas width, px");
    render_cmd->add_option("--height", svg_options.height, "canvas height, px");
    render_cmd->add_option("--out", render_out, "output file (default stdout)");

    // tsp-run
    auto* run_cmd = app.add_subcommand("tsp-run", "one multi-agent run, JSON result");
    std::string run_instance, run_out;
    pir::RunConfig run_cfg;
    bool run_seed_set = false, run_closed = false, run_shared = false, run_round = false;
    run_cmd->add_option("--instance", run_instance, "instance file (.json/.csv/.tsp)")
        ->required();
    run_cmd->add_option("--agents", run_cfg.agents, "agent count");
    run_cmd->add_option("--v", run_cfg.v, "success threshold position in [0,1]")->required();
    run_cmd->add_option("--seed", run_cfg.seed, "master seed")
        ->each([&](const std::string&) { run_seed_set = true; });
    run_cmd->add_flag("--closed", run_closed, "add the return leg to city 0");
    run_cmd->add_flag("--shared-ptm-offsets", run_shared, "all agents start the PTM at 0");
    run_cmd->add_flag("--tsplib-round", run_round, "TSPLIB EUC_2D integer rounding");
    run_cmd->add_option("--out", run_out, "output file (default stdout)");

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "sweep v over instances, CSV outputs");
    SweepFlags sweep_flags;
    sweep_cmd->add_option("--instances", sweep_flags.instances_dir, "instance directory")
        ->required();
    sweep_cmd->add_option("--grid", sweep_flags.grid_points, "grid point count over [0,1]");
    sweep_cmd->add_option("--replicates", sweep_flags.replicates, "replicates per grid point");
    sweep_cmd->add_option("--agents", sweep_flags.agents, "agent count");
    sweep_cmd->add_option("--seed", sweep_flags.seed, "master seed")
        ->each([&](const std::string&) { sweep_flags.seed_set = true; });
    sweep_cmd->add_option("--jobs", sweep_flags.jobs, "worker threads");
    sweep_cmd->add_option("--out-dir", sweep_flags.out_dir, "output directory");
    sweep_cmd->add_flag("--closed", sweep_flags.closed, "closed tours");
    sweep_cmd->add_flag("--shared-ptm-offsets", sweep_flags.shared_ptm,
                        "all agents start the PTM at 0");
    sweep_cmd->add_flag("--tsplib-round", sweep_flags.tsplib_round,
                        "TSPLIB EUC_2D integer rounding");

    // fit
    auto* fit_cmd = app.add_subcommand("fit", "OLS of C(A) on C(p) from sweep points.csv");
    std::string fit_points, fit_out;
    fit_cmd->add_option("--points", fit_points, "points.csv from `sweep`")->required();
    fit_cmd->add_option("--out", fit_out, "output file (default stdout)");

    // predict
    auto* predict_cmd = app.add_subcommand("predict", "system complexity from the optimality line");
    double predict_cp = 0.0, predict_slope = 0.67, predict_intercept = 0.33;
    predict_cmd->add_option("--cp", predict_cp, "problem complexity C(p)")->required();
    predict_cmd->add_option("--slope", predict_slope, "line slope");
    predict_cmd->add_option("--intercept", predict_intercept, "line intercept");

    try {
        app.parse(argc, argv);

        if (*ptm_cmd) {
            emit(pir::format_signs(pir::ptm_sequence(ptm_length)) + "\n", ptm_out);
        } else if (*hier_cmd) {
            const pir::SignSequence signs = signs_for(hier_length, hier_signs);
            const pir::IntegerAssignment ints =
                hier_integers.empty() ? pir::default_assignment(signs.size())
                                      : read_integers_file(hier_integers, signs.size());
            const pir::Hierarchy h = pir::build_hierarchy(signs, ints);
            emit(pir::hierarchy_to_json(h).dump(2) + "\n", hier_out);
        } else if (*geo_cmd) {
            const pir::SignSequence signs = signs_for(geo_length, geo_signs);
            const pir::GridSpec grid(pir::parse_rational(geo_eps),
                                     pir::parse_rational(geo_delta), signs.size());
            pir::StackOptions options;
            options.arc_tol = geo_tol;
            emit(pir::metrics_csv(pir::build_pattern_stack(signs, grid, options)), geo_out);
        } else if (*render_cmd) {
            const pir::SignSequence signs = signs_for(render_length, render_signs);
            const pir::GridSpec grid(pir::parse_rational(render_eps),
                                     pir::parse_rational(render_delta), signs.size());
            emit(pir::render_svg(pir::build_pattern_stack(signs, grid), svg_options),
                 render_out);
        } else if (*run_cmd) {
            if (!run_seed_set) run_cfg.seed = default_seed();
            run_cfg.tour_mode = run_closed ? pir::TourMode::closed : pir::TourMode::open;
            run_cfg.ptm_offsets =
                run_shared ? pir::PtmOffsetMode::shared : pir::PtmOffsetMode::staggered;
            const pir::ProblemInstance p = pir::load_instance(run_instance, run_round);
            const pir::RunResult r = pir::run(p, run_cfg);
            pir::route_distribution(r, p); // decomposition identity check
            emit(pir::run_result_to_json(r).dump(2) + "\n", run_out);
        } else if (*sweep_cmd) {
            return run_sweep(sweep_flags);
        } else if (*fit_cmd) {
            return run_fit(fit_points, fit_out);
        } else if (*predict_cmd) {
            std::cout << pir::format_double(
                             pir::predict_complexity(predict_cp, predict_slope,
                                                     predict_intercept))
                      << "\n";
        }
        return 0;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help / --version
        nlohmann::json err{{"error", {{"type", "usage"}, {"message", e.what()}}}};
        std::cerr << err.dump() << "\n";
        return 2;
    } catch (const pir::Error& e) {
        nlohmann::json err{{"error", {{"type", e.kind()}, {"message", e.what()}}}};
        std::cerr << err.dump() << "\n";
        return 1;
    } catch (const std::exception& e) {
        nlohmann::json err{{"error", {{"type", "internal"}, {"message", e.what()}}}};
        std::cerr << err.dump() << "\n";
        return 1;
    }
}
