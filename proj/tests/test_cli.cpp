#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "ndextrap/commands.hpp"
#include "ndextrap/io.hpp"

namespace fs = std::filesystem;
using namespace ndextrap;

namespace {

const fs::path kRoot = fs::temp_directory_path() / "ndextrap_cli_tests";

std::string config_text(const fs::path& out, const std::string& extra = "",
                        const std::string& synthesis = R"("synthesis": {"seed": 5},)") {
    return R"({
  "grid": [32, 32],
  "support": {"half_bandwidth": [3, 3]},
  "regions": [{"corner": [1, 1], "extent": [12, 12]}, {"corner": [1, 17], "extent": [12, 12]},
              {"corner": [17, 1], "extent": [12, 12]}, {"corner": [17, 17], "extent": [12, 12]}],
  )" + synthesis + R"(
  "run": {"max_iters": 200, "record_every": 10},
  "eigen": {"count": 6, "order": 2},)" +
           extra + R"(
  "output": {"directory": ")" +
           out.string() + R"(", "pgm": true}
})";
}

fs::path write_config(const std::string& name, const std::string& text) {
    fs::create_directories(kRoot);
    const fs::path p = kRoot / name;
    write_text_file(p, text);
    return p;
}

int cli(const std::string& args) {
    const std::string cmd = std::string(NDEXTRAP_CLI) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("synth, run, eigen, oracle and report produce their files") {
    const fs::path out = kRoot / "basic";
    fs::remove_all(out);
    const fs::path cfg = write_config("basic.json", config_text(out));
    CHECK(cli("synth --config " + cfg.string()) == 0);
    CHECK(fs::exists(out / "h.ndsig"));
    CHECK(fs::exists(out / "measurements.ndsig"));
    CHECK(fs::exists(out / "h.pgm"));

    CHECK(cli("run --config " + cfg.string() + " --quiet") == 0);
    CHECK(fs::exists(out / "f_e.ndsig"));
    CHECK(fs::exists(out / "f_e.pgm"));
    const auto records = read_metrics_csv(out / "metrics.csv");
    REQUIRE(records.size() == 20);
    CHECK(records.back().iteration == 200);
    CHECK(*records.back().nmse_db < *records.front().nmse_db);

    CHECK(cli("eigen -c " + cfg.string()) == 0);
    const std::string eig = read_text_file(out / "eigen.csv");
    CHECK(std::count(eig.begin(), eig.end(), '\n') == 1 + 4 * 6);
    const std::string lip = read_text_file(out / "lipschitz.csv");
    CHECK(lip.find("combined,") != std::string::npos);

    CHECK(cli("oracle -c " + cfg.string()) == 0);
    CHECK(read_text_file(out / "oracle.json").find("\"condition_number\"") != std::string::npos);
    CHECK(fs::exists(out / "oracle_ls.ndsig"));

    CHECK(cli("report " + (out / "metrics.csv").string()) == 0);
    std::ostringstream so, se;
    CHECK(app::report(out / "metrics.csv", false, so, se) == app::kExitOk);
    CHECK(so.str().find("final nmse_db:") != std::string::npos);
    CHECK(so.str().find("iterations to -10 dB:") != std::string::npos);
}

TEST_CASE("seed override changes the synthesized signal") {
    const fs::path out = kRoot / "seed";
    const fs::path cfg = write_config("seed.json", config_text(out));
    CHECK(cli("synth -c " + cfg.string() + " --seed 5") == 0);
    const std::string a = read_text_file(out / "h.ndsig");
    CHECK(cli("synth -c " + cfg.string() + " --seed 6") == 0);
    CHECK(read_text_file(out / "h.ndsig") != a);
    CHECK(cli("synth -c " + cfg.string()) == 0);
    CHECK(read_text_file(out / "h.ndsig") == a);
}

TEST_CASE("identical config and seed give byte-identical outputs") {
    std::string first[3];
    for (int rep = 0; rep < 2; ++rep) {
        const fs::path out = kRoot / ("repro" + std::to_string(rep));
        fs::remove_all(out);
        const fs::path cfg = write_config(
            "repro" + std::to_string(rep) + ".json",
            config_text(out, R"("mode": "regularized", "regularization": {"mu": 0.005, "tau": 1.97},)",
                        R"("synthesis": {"seed": 9, "noise": {"snr_db": 6.9}},)"));
        REQUIRE(cli("run -c " + cfg.string()) == 0);
        const std::string files[3] = {"f_e.ndsig", "metrics.csv", "f_e.pgm"};
        for (int i = 0; i < 3; ++i) {
            const std::string bytes = read_text_file(out / files[i]);
            if (rep == 0) {
                first[i] = bytes;
            } else {
                CHECK(bytes == first[i]);
            }
        }
    }
}

TEST_CASE("exit codes") {
    CHECK(cli("") == 2);
    CHECK(cli("frobnicate") == 2);
    CHECK(cli("run") == 2);
    CHECK(cli("run -c " + (kRoot / "missing.json").string()) == 2);

    const fs::path bad = write_config("bad.json", R"({"grid": [8], "unknown": 1})");
    CHECK(cli("run -c " + bad.string()) == 2);
    std::ostringstream so, se;
    CHECK(app::run({bad, std::nullopt, true}, so, se) == app::kExitConfig);
    CHECK(se.str().find("$.unknown") != std::string::npos);

    // Output directory beneath a regular file cannot be created.
    const fs::path blocker = write_config("blocker", "x");
    const fs::path cfg = write_config("io.json", config_text(blocker / "sub"));
    CHECK(cli("run -c " + cfg.string()) == 4);
    CHECK(cli("report " + (kRoot / "nope.csv").string()) == 4);
    const fs::path garbage = write_config("garbage.csv", "not,a,metrics,file\n");
    CHECK(cli("report " + garbage.string()) == 4);
}

TEST_CASE("divergence exits with code 3 and keeps the partial metrics") {
    // Out-of-band noise 120 dB above the signal, measured on one small corner:
    // the iterate drifts far from the clean truth.
    const fs::path out = kRoot / "diverge";
    fs::remove_all(out);
    const fs::path cfg = write_config("diverge.json", R"({
  "grid": [32, 32],
  "support": {"half_bandwidth": [3, 3]},
  "regions": [{"corner": [0, 0], "extent": [10, 10]}],
  "synthesis": {"seed": 1, "noise": {"snr_db": -120, "bumps": 200}},
  "run": {"max_iters": 5000},
  "output": {"directory": ")" + out.string() + R"("}
})");
    CHECK(cli("run -c " + cfg.string()) == 3);
    CHECK(fs::exists(out / "metrics.csv"));
}

}  // TEST_SUITE
