#include "fbc/io.hpp"

#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <string>
#include <unistd.h>

namespace {

namespace fs = std::filesystem;

struct CliRunner {
    fs::path dir;

    CliRunner() {
        dir = fs::temp_directory_path() /
              ("fbc_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(dir);
    }
    ~CliRunner() { fs::remove_all(dir); }

    std::string path(const std::string& name) const { return (dir / name).string(); }

    int run(const std::string& args) const {
        const std::string cmd = std::string(FBC_CLI_PATH) + " " + args +
                                " >" + path("stdout.txt") + " 2>" +
                                path("stderr.txt");
        return std::system(cmd.c_str());
    }

    std::vector<uint8_t> bytes(const std::string& name) const {
        return fbc::read_file(path(name));
    }
};

} // namespace

TEST_CASE("synth / compress / decompress / metrics pipeline") {
    CliRunner cli;
    REQUIRE(cli.run("synth --preset const-velocity --duration-ms 1000 --seed 7"
                    " --out " + cli.path("scene.aer8") +
                    " --gt-out " + cli.path("scene.gt.csv")) == 0);
    REQUIRE(fs::exists(cli.path("scene.aer8")));

    REQUIRE(cli.run("compress --in " + cli.path("scene.aer8") +
                    " --flow oracle --gt " + cli.path("scene.gt.csv") +
                    " --pt-ms 30 --out " + cli.path("scene.fbc")) == 0);

    REQUIRE(cli.run("decompress --in " + cli.path("scene.fbc") + " --out " +
                    cli.path("recon.aer8")) == 0);

    REQUIRE(cli.run("metrics --orig " + cli.path("scene.aer8") + " --recon " +
                    cli.path("recon.aer8") + " --csv " + cli.path("cubes.csv")) ==
            0);
    CHECK(fs::exists(cli.path("cubes.csv")));

    const fbc::EventStream recon =
        fbc::read_events(cli.path("recon.aer8"), fbc::FileFormat::Aer8);
    CHECK(!recon.events.empty());
    CHECK(fbc::validate_stream(recon).empty());
}

TEST_CASE("identical invocations are byte-identical at any parallelism") {
    CliRunner cli;
    REQUIRE(cli.run("synth --preset bar-square --duration-ms 800 --seed 3 --out " +
                    cli.path("a.aer8") + " --gt-out " + cli.path("a.gt.csv")) == 0);
    REQUIRE(cli.run("synth --preset bar-square --duration-ms 800 --seed 3 --out " +
                    cli.path("b.aer8") + " --gt-out " + cli.path("b.gt.csv")) == 0);
    CHECK(cli.bytes("a.aer8") == cli.bytes("b.aer8"));
    CHECK(cli.bytes("a.gt.csv") == cli.bytes("b.gt.csv"));

    for (const char* par : {"1", "4"}) {
        REQUIRE(cli.run("compress --in " + cli.path("a.aer8") +
                        " --flow oracle --gt " + cli.path("a.gt.csv") +
                        " --pt-ms 20 --out " + cli.path(std::string("cap") + par +
                        ".fbc")) == 0);
        REQUIRE(cli.run("decompress --parallelism " + std::string(par) + " --in " +
                        cli.path(std::string("cap") + par + ".fbc") + " --out " +
                        cli.path(std::string("out") + par + ".aer8")) == 0);
    }
    CHECK(cli.bytes("cap1.fbc") == cli.bytes("cap4.fbc"));
    CHECK(cli.bytes("out1.aer8") == cli.bytes("out4.aer8"));
}

TEST_CASE("cascade round trips through the cli") {
    CliRunner cli;
    REQUIRE(cli.run("synth --preset const-velocity --duration-ms 600 --seed 5"
                    " --out " + cli.path("s.aer8") +
                    " --gt-out " + cli.path("s.gt.csv")) == 0);
    REQUIRE(cli.run("compress --in " + cli.path("s.aer8") +
                    " --flow oracle --gt " + cli.path("s.gt.csv") +
                    " --out " + cli.path("s.fbc")) == 0);
    REQUIRE(cli.run("compress --in " + cli.path("s.aer8") +
                    " --flow oracle --gt " + cli.path("s.gt.csv") +
                    " --cascade lzma --out " + cli.path("s.fbcz")) == 0);
    CHECK(fs::file_size(cli.path("s.fbcz")) < fs::file_size(cli.path("s.fbc")));

    REQUIRE(cli.run("decompress --in " + cli.path("s.fbc") + " --out " +
                    cli.path("r1.aer8")) == 0);
    REQUIRE(cli.run("decompress --in " + cli.path("s.fbcz") + " --out " +
                    cli.path("r2.aer8")) == 0);
    CHECK(cli.bytes("r1.aer8") == cli.bytes("r2.aer8"));
}

TEST_CASE("simulate emits a report and sweep csv") {
    CliRunner cli;
    REQUIRE(cli.run("simulate --preset const-velocity --duration-ms 600 --seed 2"
                    " --flow oracle --pt-ms 30 --baseline random") == 0);

    REQUIRE(cli.run("simulate --preset const-velocity --duration-ms 600 --seed 2"
                    " --flow oracle --sweep-pt 10:30:10 --csv " +
                    cli.path("sweep.csv")) == 0);
    const auto csv = cli.bytes("sweep.csv");
    const std::string text(csv.begin(), csv.end());
    CHECK(text.find("pt_ms,er,cr,wire_cr") != std::string::npos);
    CHECK(std::count(text.begin(), text.end(), '\n') == 4); // header + 3 rows
}

TEST_CASE("plane-fit flow runs end to end") {
    CliRunner cli;
    REQUIRE(cli.run("synth --preset bounce --duration-ms 800 --seed 11"
                    " --noise-rate 300 --out " + cli.path("pf.aer8")) == 0);
    REQUIRE(cli.run("compress --in " + cli.path("pf.aer8") +
                    " --flow planefit --pt-ms 20 --out " + cli.path("pf.fbc")) == 0);
    REQUIRE(cli.run("decompress --in " + cli.path("pf.fbc") + " --out " +
                    cli.path("pf_recon.aer8")) == 0);
    const fbc::EventStream recon =
        fbc::read_events(cli.path("pf_recon.aer8"), fbc::FileFormat::Aer8);
    CHECK(!recon.events.empty());
    CHECK(fbc::validate_stream(recon).empty());
}

TEST_CASE("oracle flow without a scene or sidecar is a config error") {
    CliRunner cli;
    REQUIRE(cli.run("synth --preset const-velocity --duration-ms 400 --seed 1"
                    " --out " + cli.path("x.aer8")) == 0);
    CHECK(cli.run("compress --in " + cli.path("x.aer8") +
                  " --flow oracle --out " + cli.path("x.fbc")) != 0);
}

TEST_CASE("missing inputs fail with a nonzero exit naming the path") {
    CliRunner cli;
    CHECK(cli.run("compress --in /no/such/file.aer8 --out " +
                  cli.path("y.fbc")) != 0);
    const auto err = cli.bytes("stderr.txt");
    const std::string text(err.begin(), err.end());
    CHECK(text.find("/no/such/file.aer8") != std::string::npos);
}
