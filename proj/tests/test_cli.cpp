#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace {

const fs::path kBin = LORENZKNOT_BIN;

int run(const std::string& args) {
    const std::string cmd = kBin.string() + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::stringstream buf;
    buf << is.rdbuf();
    return buf.str();
}

fs::path fresh_dir(const char* tag) {
    const fs::path dir = fs::temp_directory_path() / (std::string("lorenzknot_cli_") + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

fs::path only_subdir(const fs::path& root) {
    for (const auto& e : fs::directory_iterator(root))
        if (e.is_directory()) return e.path();
    return {};
}

}  // namespace

TEST_CASE("knot subcommand produces the full artifact set and verdict") {
    const fs::path out = fresh_dir("knot");
    REQUIRE(run("knot --guess_rho 30 --guess_sigma 10 --deterministic --out " +
                out.string()) == 0);
    const fs::path dir = only_subdir(out);
    REQUIRE(!dir.empty());
    for (const char* f :
         {"tpoint.json", "curve.json", "diagram.pd", "diagram.svg", "knot.json", "verdict.txt"})
        CHECK(fs::exists(dir / f));
    CHECK(slurp(dir / "verdict.txt") == "3_1\n");
    const std::string knot = slurp(dir / "knot.json");
    CHECK(knot.find("\"config\"") != std::string::npos);
    CHECK(knot.find("\"tool\"") != std::string::npos);
    const std::string pd = slurp(dir / "diagram.pd");
    CHECK(pd.find("# arcs=6 orientation=ccw") == 0);
    // Deterministic rerun: byte-identical artifacts, SVG included.
    const fs::path out2 = fresh_dir("knot2");
    REQUIRE(run("knot --guess_rho 30 --guess_sigma 10 --deterministic --out " +
                out2.string()) == 0);
    const fs::path dir2 = only_subdir(out2);
    for (const char* f : {"tpoint.json", "curve.json", "diagram.pd", "diagram.svg", "knot.json"})
        CHECK(slurp(dir / f) == slurp(dir2 / f));
}

TEST_CASE("config file values are overridden by flags") {
    const fs::path out = fresh_dir("cfg");
    const fs::path cfg = out / "run.cfg";
    {
        std::ofstream os(cfg);
        os << "# comment line\n";
        os << "word=LRLR\n";
    }
    // The file asks for a non-primitive word; the flag replaces it.
    REQUIRE(run("template --config " + cfg.string() + " --word LR --out " + out.string()) == 0);
    bool found = false;
    for (const auto& e : fs::directory_iterator(out))
        if (e.is_directory() && fs::exists(e.path() / "template.json")) {
            found = true;
            const std::string j = slurp(e.path() / "template.json");
            CHECK(j.find("\"knot\": \"unknot\"") != std::string::npos);
            CHECK(j.find("\"trace\": 3") != std::string::npos);
        }
    CHECK(found);
}

TEST_CASE("exit codes distinguish the failure families") {
    const fs::path out = fresh_dir("codes");
    CHECK(run("tpoint --guess_rho 0.5 --guess_sigma 10 --out " + out.string()) == 2);
    CHECK(run("sweep --nrho 1 --nsigma 4 --out " + out.string()) == 2);
    // In-domain guess far from any T-point: the iteration budget runs out.
    CHECK(run("tpoint --guess_rho 40 --guess_sigma 10 --max_iter 3 --out " + out.string()) == 3);
    // Attracting wings leave no 1-D stable direction: a domain-family error.
    CHECK(run("tpoint --guess_rho 6 --guess_sigma 10 --out " + out.string()) == 2);
    // An unwritable artifact root is an I/O failure.
    CHECK(run("template --word LR --out /proc/nowhere") == 5);
}

TEST_CASE("sweep artifact embeds its configuration") {
    const fs::path out = fresh_dir("sweep");
    REQUIRE(run("sweep --rho_min 30.6 --rho_max 30.8 --sigma_min 10 --sigma_max 10.2 "
                "--nrho 2 --nsigma 2 --out " +
                out.string()) == 0);
    const fs::path dir = only_subdir(out);
    const std::string csv = slurp(dir / "sweep.csv");
    CHECK(csv.find("# nrho=2") != std::string::npos);
    CHECK(csv.find("rho,sigma,beta,d_plus,d_minus,status") != std::string::npos);
    CHECK(csv.find(",ok") != std::string::npos);
}
