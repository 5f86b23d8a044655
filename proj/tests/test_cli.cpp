#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct CliOutcome {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

CliOutcome run_cli(const std::string& args) {
    static int counter = 0;
    const fs::path out = fs::temp_directory_path() / ("pir_cli_out_" + std::to_string(counter));
    const fs::path err = fs::temp_directory_path() / ("pir_cli_err_" + std::to_string(counter));
    ++counter;
    const std::string cmd = std::string(PIR_CLI_PATH) + " " + args + " >" + out.string() +
                            " 2>" + err.string();
    const int status = std::system(cmd.c_str());
    CliOutcome outcome;
    outcome.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    outcome.out = slurp(out);
    outcome.err = slurp(err);
    fs::remove(out);
    fs::remove(err);
    return outcome;
}

std::string golden(const std::string& name) { return slurp(fs::path(PIR_GOLDEN_DIR) / name); }

} // namespace

TEST_CASE("ptm output matches the golden byte for byte") {
    const CliOutcome r = run_cli("ptm --length 8");
    CHECK(r.exit_code == 0);
    CHECK(r.out == golden("ptm_8.txt"));
    CHECK(r.out == "+--+-++-\n");
}

TEST_CASE("hierarchy output matches the golden byte for byte") {
    const CliOutcome r = run_cli("hierarchy --length 16");
    CHECK(r.exit_code == 0);
    CHECK(r.out == golden("hierarchy_16.json"));
    const nlohmann::json j = nlohmann::json::parse(r.out);
    CHECK(j["structural_level"] == 4);
}

TEST_CASE("geometry output matches the golden byte for byte") {
    const CliOutcome r = run_cli("geometry --length 16 --eps 1 --delta 1");
    CHECK(r.exit_code == 0);
    CHECK(r.out == golden("geometry_16.csv"));
}

TEST_CASE("predict output matches the golden byte for byte") {
    const CliOutcome r = run_cli("predict --cp 0");
    CHECK(r.exit_code == 0);
    CHECK(r.out == golden("predict_0.txt"));
    CHECK(r.out == "0.33\n");
    CHECK(run_cli("predict --cp 1").out == "1\n");
    CHECK(run_cli("predict --cp 0.5").out == "0.665\n");
}

TEST_CASE("identical invocations are byte-identical") {
    const CliOutcome a = run_cli("render --length 8 --eps 1/2 --delta 3/4");
    const CliOutcome b = run_cli("render --length 8 --eps 1/2 --delta 3/4");
    CHECK(a.exit_code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out.find("<svg") != std::string::npos);
}

TEST_CASE("usage errors exit 2 with error JSON on stderr") {
    const CliOutcome r = run_cli("ptm --no-such-flag 1");
    CHECK(r.exit_code == 2);
    const nlohmann::json err = nlohmann::json::parse(r.err);
    CHECK(err["error"]["type"] == "usage");
    CHECK(run_cli("").exit_code == 2); // a subcommand is required
}

TEST_CASE("data errors exit 1 with error JSON on stderr") {
    const CliOutcome r = run_cli("tsp-run --instance /nonexistent.csv --v 0.5");
    CHECK(r.exit_code == 1);
    const nlohmann::json err = nlohmann::json::parse(r.err);
    CHECK(err["error"]["type"] == "format-error");

    const CliOutcome zero = run_cli("ptm --length 0");
    CHECK(zero.exit_code == 1);
    CHECK(nlohmann::json::parse(zero.err)["error"]["type"] == "invalid-argument");
}

TEST_CASE("help exits 0 and lists subcommands") {
    const CliOutcome r = run_cli("--help");
    CHECK(r.exit_code == 0);
    for (const char* name : {"ptm", "hierarchy", "geometry", "render", "tsp-run", "sweep",
                             "fit", "predict"})
        CHECK(r.out.find(name) != std::string::npos);
}

TEST_CASE("tsp-run honors explicit seeds and the PIRLAB_SEED fallback") {
    const fs::path inst = fs::temp_directory_path() / "pir_cli_sq.json";
    {
        std::ofstream out(inst);
        out << R"({"coords": [[0,0],[1,0],[1,1],[0,1],[0.5,0.2]]})";
    }
    const std::string base = "tsp-run --instance " + inst.string() + " --agents 9 --v 0.5";
    const CliOutcome with_seed = run_cli(base + " --seed 321");
    CHECK(with_seed.exit_code == 0);

    setenv("PIRLAB_SEED", "321", 1);
    const CliOutcome from_env = run_cli(base);
    unsetenv("PIRLAB_SEED");
    CHECK(from_env.exit_code == 0);
    CHECK(from_env.out == with_seed.out);

    const CliOutcome other = run_cli(base + " --seed 99");
    CHECK(other.out != with_seed.out);

    const nlohmann::json j = nlohmann::json::parse(with_seed.out);
    CHECK(j["config"]["seed"] == 321);
    CHECK(j["strategy_matrix"].size() == 9);
}

TEST_CASE("sweep then fit round trip") {
    const fs::path dir = fs::temp_directory_path() / "pir_cli_instances";
    const fs::path out_dir = fs::temp_directory_path() / "pir_cli_sweep";
    fs::remove_all(dir);
    fs::remove_all(out_dir);
    fs::create_directories(dir);
    {
        std::ofstream a(dir / "a.json");
        a << R"({"coords": [[0,0],[1,0],[0.2,0.9],[0.8,0.4],[0.4,0.1]]})";
        std::ofstream b(dir / "b.json");
        b << R"({"coords": [[0,0],[2,0],[0.1,1.9],[1.5,0.5],[0.7,0.3]]})";
        std::ofstream c(dir / "c.csv");
        c << "0,1,1\n1,0,1\n1,1,0\n";
    }
    const CliOutcome sweep = run_cli("sweep --instances " + dir.string() + " --grid 5 " +
                                     "--replicates 2 --agents 6 --seed 4 --jobs 2 --out-dir " +
                                     out_dir.string());
    CHECK(sweep.exit_code == 0);
    CHECK(fs::exists(out_dir / "points.csv"));
    CHECK(fs::exists(out_dir / "a_curve.csv"));
    CHECK(fs::exists(out_dir / "b_curve.csv"));
    CHECK(fs::exists(out_dir / "c_curve.csv"));

    const std::string points = slurp(out_dir / "points.csv");
    CHECK(points.rfind("id,n,c_p,v_star,c_a\n", 0) == 0);
    CHECK(std::count(points.begin(), points.end(), '\n') == 4);

    const CliOutcome fit = run_cli("fit --points " + (out_dir / "points.csv").string());
    CHECK(fit.exit_code == 0);
    CHECK(fit.out.rfind("slope,intercept,r_squared,k\n", 0) == 0);
    CHECK(fit.out.find(",3\n") != std::string::npos);

    // --jobs must not change any byte of the outputs
    const fs::path out_dir2 = fs::temp_directory_path() / "pir_cli_sweep_seq";
    fs::remove_all(out_dir2);
    const CliOutcome sweep_seq = run_cli("sweep --instances " + dir.string() + " --grid 5 " +
                                         "--replicates 2 --agents 6 --seed 4 --out-dir " +
                                         out_dir2.string());
    CHECK(sweep_seq.exit_code == 0);
    CHECK(slurp(out_dir / "points.csv") == slurp(out_dir2 / "points.csv"));
    CHECK(slurp(out_dir / "a_curve.csv") == slurp(out_dir2 / "a_curve.csv"));
}

TEST_CASE("hierarchy accepts explicit signs and integers") {
    const fs::path ints = fs::temp_directory_path() / "pir_cli_ints.txt";
    {
        std::ofstream out(ints);
        out << "4 3 2 1\n";
    }
    const CliOutcome r =
        run_cli("hierarchy --length 4 --signs +--+ --integers " + ints.string());
    CHECK(r.exit_code == 0);
    CHECK(nlohmann::json::parse(r.out)["structural_level"] == 2);

    const CliOutcome mismatch = run_cli("hierarchy --length 8 --signs +-");
    CHECK(mismatch.exit_code == 1);
}
