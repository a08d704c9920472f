#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "acns/artifacts.hpp"
#include "acns/config_file.hpp"
#include "acns/errors.hpp"
#include "acns/snapshot_io.hpp"
#include "support/test_support.hpp"

using namespace acns;
using namespace acns::test;
namespace fs = std::filesystem;

#ifndef ACNS_BIN
#define ACNS_BIN "acns"
#endif

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(in)),
                       std::istreambuf_iterator<char>());
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(ACNS_BIN) + " " + args + " >/dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

const char* kTinyConfig = R"(# tiny run
[geometry]
dim = 2
box = 1 1
cells = 32 32
obstacle = none

[solver]
epsilon = 1e-2
t_end = 0.01
snapshot_cadence = 16
basis_rank = 16

[initial_data]
kind = taylor_green_like
amplitude = 1

[output]
dir = %OUT%
)";

fs::path write_config(const fs::path& dir, const std::string& out_dir) {
    fs::create_directories(dir);
    std::string text = kTinyConfig;
    const auto pos = text.find("%OUT%");
    text.replace(pos, 5, out_dir);
    const auto path = dir / "tiny.cfg";
    std::ofstream(path) << text;
    return path;
}

}  // namespace

TEST_CASE("config parser: values, echo round trip, unknown keys with line numbers") {
    ResolvedConfig cfg = parse_config_text(kTinyConfig, "mem");
    CHECK(cfg.sim.geometry.cells[0] == 32);
    CHECK(cfg.sim.epsilon == 1e-2);
    CHECK(cfg.sim.initial.kind == InitialDataSpec::Kind::TaylorGreenLike);
    CHECK(cfg.output_dir == "%OUT%");

    // echo is itself parseable and reproduces the resolved values
    const std::string echo = config_echo(cfg, 1.25e-4);
    ResolvedConfig cfg2 = parse_config_text(echo, "echo");
    CHECK(cfg2.sim.geometry.cells[0] == 32);
    CHECK(cfg2.sim.dt == 1.25e-4);
    CHECK(cfg2.sim.basis_rank == 16);

    try {
        parse_config_text("[solver]\nepsilon = 1e-2\nbogus_key = 3\n", "mem");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("mem:3") != std::string::npos);
        CHECK(std::string(e.what()).find("bogus_key") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_config_text("[nope]\nx = 1\n", "mem"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("x = 1\n", "mem"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("[solver]\nepsilon == oops\n", "mem"), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/path.cfg"), ConfigError);
}

TEST_CASE("snapshot files: bitwise round trip and corruption detection") {
    auto g = disk_box(32, 2.0, 0.8, 1.1, 0.25);
    const StaggeredField u = random_bc1_velocity(g, 77);
    ScalarField p = random_rough_scalar(g, 78);

    const auto dir = fs::temp_directory_path() / "acns_snap_test";
    fs::create_directories(dir);
    const auto path = dir / "snap.acns";
    write_state_snapshot(path, u, p, 1e-2, 0.125);

    StateSnapshot snap = read_state_snapshot(path, g);
    CHECK(snap.header.epsilon == 1e-2);
    CHECK(snap.header.time == 0.125);
    for (int a = 0; a < 2; ++a) CHECK(snap.u.comp[a] == u.comp[a]);
    CHECK(snap.p.v == p.v);

    // truncate the payload
    const auto bytes = slurp(path);
    std::ofstream(dir / "short.acns", std::ios::binary)
        << bytes.substr(0, bytes.size() - 16);
    CHECK_THROWS_AS(read_state_snapshot(dir / "short.acns", g), CorruptSnapshot);

    // extend the payload
    std::ofstream(dir / "long.acns", std::ios::binary) << bytes << "XXXX";
    CHECK_THROWS_AS(read_state_snapshot(dir / "long.acns", g), CorruptSnapshot);

    std::ofstream(dir / "bad.acns", std::ios::binary) << "NOPE" << bytes.substr(4);
    CHECK_THROWS_AS(read_state_snapshot(dir / "bad.acns", g), CorruptSnapshot);
    fs::remove_all(dir);
}

TEST_CASE("cli: run determinism, analyze audit, dry-run, error exits") {
    const auto base = fs::temp_directory_path() / "acns_cli_test";
    fs::remove_all(base);
    const auto cache = base / "cache";
    fs::create_directories(cache);
    setenv("ACNS_CACHE_DIR", cache.c_str(), 1);

    const auto cfg1 = write_config(base / "c1", (base / "out1").string());
    const auto cfg2 = write_config(base / "c2", (base / "out2").string());

    CHECK(run_cli("run " + cfg1.string()) == 0);
    CHECK(run_cli("run " + cfg2.string()) == 0);

    // rerun produces byte-identical artifacts
    CHECK(slurp(base / "out1/ledger.csv") == slurp(base / "out2/ledger.csv"));
    CHECK(slurp(base / "out1/diagnostics.csv") == slurp(base / "out2/diagnostics.csv"));
    CHECK(slurp(base / "out1/snaps/snap_000000.acns") ==
          slurp(base / "out2/snaps/snap_000000.acns"));
    CHECK(!slurp(base / "out1/config.echo.cfg").empty());

    // analyze reproduces the diagnostics byte-for-byte
    CHECK(run_cli("analyze " + (base / "out1").string()) == 0);
    CHECK(slurp(base / "out1/diagnostics.csv") ==
          slurp(base / "out1/diagnostics.recomputed.csv"));

    // dry-run validates without writing
    const auto cfg3 = write_config(base / "c3", (base / "out3").string());
    CHECK(run_cli("--dry-run run " + cfg3.string()) == 0);
    CHECK(!fs::exists(base / "out3"));

    // config errors exit 1 and name the file
    CHECK(run_cli("run " + (base / "missing.cfg").string()) == 1);
    std::ofstream(base / "broken.cfg") << "[solver]\nwhat = 1\n";
    CHECK(run_cli("run " + (base / "broken.cfg").string()) == 1);

    // analyze with a higher basis rank: only the fractional-norm columns move
    {
        CHECK(run_cli("analyze --rank 24 " + (base / "out2").string()) == 0);
        std::istringstream a(slurp(base / "out2/diagnostics.csv"));
        std::istringstream b(slurp(base / "out2/diagnostics.recomputed.csv"));
        std::string la, lb;
        std::getline(a, la);
        std::getline(b, lb);
        CHECK(la.find("basis_rank=16") != std::string::npos);
        CHECK(lb.find("basis_rank=24") != std::string::npos);
        std::getline(a, la);  // column header
        std::getline(b, lb);
        CHECK(la == lb);
        bool fractional_changed = false;
        while (std::getline(a, la) && std::getline(b, lb)) {
            // columns before p_wm22 (the first 9) must agree byte-for-byte
            auto cut = [](const std::string& s) {
                std::size_t pos = 0;
                for (int c = 0; c < 9; ++c) pos = s.find(',', pos) + 1;
                return s.substr(0, pos);
            };
            CHECK(cut(la) == cut(lb));
            if (la != lb) fractional_changed = true;
        }
        CHECK(fractional_changed);
    }

    // corrupt snapshot detection through analyze
    {
        auto snap = base / "out1/snaps/snap_000000.acns";
        const auto bytes = slurp(snap);
        std::ofstream(snap, std::ios::binary) << bytes.substr(0, bytes.size() / 2);
    }
    CHECK(run_cli("analyze " + (base / "out1").string()) == 1);

    unsetenv("ACNS_CACHE_DIR");
    fs::remove_all(base);
}

TEST_CASE("cli: blowup exits 2 with the ledger and last-good snapshot flushed") {
    const auto base = fs::temp_directory_path() / "acns_cli_blowup_test";
    fs::remove_all(base);
    fs::create_directories(base);
    // The stability bound has no mu*eps term, so tiny viscosity with large
    // eps passes validation yet lets the acoustic modes grow.
    const auto cfg = base / "blow.cfg";
    std::ofstream(cfg) << "[geometry]\ndim = 2\nbox = 1 1\ncells = 16 16\n"
                       << "obstacle = none\n\n"
                       << "[solver]\nepsilon = 10\nmu = 1e-3\nt_end = 1.0\n"
                       << "snapshot_cadence = 4\nbasis_rank = 16\n\n"
                       << "[initial_data]\nkind = random_solenoidal\nseed = 1\n\n"
                       << "[output]\ndir = " << (base / "out").string() << "\n";
    CHECK(run_cli("run " + cfg.string()) == 2);
    CHECK(fs::exists(base / "out/ledger.csv"));
    CHECK(fs::exists(base / "out/snaps"));
    std::size_t snaps = 0;
    for ([[maybe_unused]] const auto& e : fs::directory_iterator(base / "out/snaps"))
        ++snaps;
    CHECK(snaps >= 1);
    // ledger reaches the failure point: more rows than snapshots
    const std::string ledger = slurp(base / "out/ledger.csv");
    CHECK(std::count(ledger.begin(), ledger.end(), '\n') >= 3);
    fs::remove_all(base);
}

TEST_CASE("cli: sweep command, precondition exit, dry run") {
    const auto base = fs::temp_directory_path() / "acns_cli_sweep_test";
    fs::remove_all(base);
    const auto cache = base / "cache";
    fs::create_directories(cache);
    setenv("ACNS_CACHE_DIR", cache.c_str(), 1);

    auto write_sweep_cfg = [&](const std::string& name, const std::string& epsilons,
                               const std::string& out) {
        const auto path = base / name;
        std::ofstream f(path);
        f << "[geometry]\ndim = 2\nbox = 1 1\ncells = 16 16\nobstacle = none\n\n"
          << "[solver]\nt_end = 0.004\nsnapshot_cadence = 8\nbasis_rank = 16\n\n"
          << "[initial_data]\nkind = taylor_green_like\n\n"
          << "[sweep]\nepsilons = " << epsilons << "\nworkers = 1\n"
          << "modulus_multiples = 1 2\n\n"
          << "[output]\ndir = " << out << "\n";
        return path;
    };

    const auto cfg = write_sweep_cfg("s.cfg", "1e-1 3e-2 1e-2 3e-3", (base / "o").string());
    CHECK(run_cli("--dry-run sweep " + cfg.string()) == 0);
    CHECK(!fs::exists(base / "o"));
    CHECK(run_cli("sweep " + cfg.string()) == 0);
    CHECK(fs::exists(base / "o/report.csv"));
    CHECK(fs::exists(base / "o/summary.txt"));
    CHECK(fs::exists(base / "o/reference/diagnostics.csv"));
    CHECK(fs::exists(base / "o/eps_0/snaps/snap_000000.acns"));
    const std::string report = slurp(base / "o/report.csv");
    CHECK(report.find("# acns-report-v1") != std::string::npos);
    CHECK(report.find("# fit") != std::string::npos);

    // too few epsilon values is a config-level failure
    const auto bad = write_sweep_cfg("bad.cfg", "1e-1 1e-2", (base / "o2").string());
    CHECK(run_cli("sweep " + bad.string()) == 1);

    unsetenv("ACNS_CACHE_DIR");
    fs::remove_all(base);
}
