// End-to-end checks of the command-line front end: runs the real binary,
// compares produced bytes, and replays manifests as configs.
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace {

namespace fs = std::filesystem;

int g_failures = 0;

void check(bool ok, const std::string& label) {
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << label << "\n";
    if (!ok) ++g_failures;
}

int run_cmd(const std::string& cmd) {
    const int status = std::system(cmd.c_str());
    if (status == -1) return -1;
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& path) {
    std::ifstream is(path, std::ios::binary);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

} // namespace

int main(int argc, char** argv) {
    if (argc < 3) {
        std::cerr << "usage: cli_integration <pstchain-binary> <scratch-dir>\n";
        return 2;
    }
    const std::string bin = argv[1];
    const fs::path scratch = argv[2];
    fs::remove_all(scratch);
    fs::create_directories(scratch);

    // Couplings: known values, rerun is byte-identical.
    const fs::path c1 = scratch / "c1";
    const fs::path c2 = scratch / "c2";
    check(run_cmd(bin + " couplings --N 4 --out " + c1.string()) == 0, "couplings exit 0");
    check(run_cmd(bin + " couplings --N 4 --out " + c2.string()) == 0, "couplings rerun exit 0");
    const std::string couplings_csv = slurp(c1 / "couplings_N4.csv");
    check(couplings_csv == slurp(c2 / "couplings_N4.csv"), "couplings rerun byte-identical");
    {
        std::istringstream is(couplings_csv);
        std::string line;
        std::getline(is, line);
        check(line == "i,J", "couplings header");
        std::getline(is, line); // units
        std::getline(is, line); // manifest ref
        double i = 0, j = 0;
        std::getline(is, line);
        std::sscanf(line.c_str(), "%lf,%lf", &i, &j);
        check(i == 1 && std::abs(j - 0.86602540378443865) < 1e-15, "couplings row 1");
        std::getline(is, line);
        std::sscanf(line.c_str(), "%lf,%lf", &i, &j);
        check(i == 2 && j == 1.0, "couplings row 2");
        std::getline(is, line);
        std::sscanf(line.c_str(), "%lf,%lf", &i, &j);
        check(i == 3 && std::abs(j - 0.86602540378443865) < 1e-15, "couplings row 3");
    }

    // Clean-chain fidelity surface: unit fidelity at and around t_M.
    const fs::path f1 = scratch / "f1";
    check(run_cmd(bin + " fidelity-surface --N 50 --E 0.0 --seed 1 --realizations 2"
                        " --grid-per-tM 300 --out " + f1.string()) == 0,
          "fidelity-surface exit 0");
    {
        std::istringstream is(slurp(f1 / "fidelity_surface.csv"));
        std::string line;
        for (int skip = 0; skip < 3; ++skip) std::getline(is, line);
        std::getline(is, line);
        double n, e, ftm, ftm_se, fmax, fmax_se, tmax;
        std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf,%lf,%lf", &n, &e, &ftm, &ftm_se, &fmax,
                    &fmax_se, &tmax);
        check(std::abs(ftm - 1.0) < 1e-9 && std::abs(fmax - 1.0) < 1e-9,
              "clean chain transfers with unit fidelity");
    }

    // Manifest closure: replaying the manifest reproduces the bytes.
    const fs::path s1 = scratch / "s1";
    const fs::path s2 = scratch / "s2";
    check(run_cmd(bin + " steady-state --N 16 --E 0.5 --seed 9 --realizations 3 --out " +
                  s1.string()) == 0,
          "steady-state exit 0");
    {
        // Point the replay at a fresh directory, everything else from the manifest.
        check(run_cmd(bin + " steady-state --config " + (s1 / "manifest.json").string() +
                      " --out " + s2.string()) == 0,
              "manifest replay exit 0");
        check(slurp(s1 / "steady_state_N16_E0.5.csv") == slurp(s2 / "steady_state_N16_E0.5.csv"),
              "manifest replay reproduces the dataset");
    }

    // Worker count must not change output bytes.
    const fs::path w1 = scratch / "w1";
    const fs::path w8 = scratch / "w8";
    check(run_cmd(bin + " steady-state --N 24 --E 1.0 --seed 5 --realizations 8 --workers 1"
                        " --out " + w1.string()) == 0,
          "steady-state workers=1 exit 0");
    check(run_cmd(bin + " steady-state --N 24 --E 1.0 --seed 5 --realizations 8 --workers 8"
                        " --out " + w8.string()) == 0,
          "steady-state workers=8 exit 0");
    check(slurp(w1 / "steady_state_N24_E1.csv") == slurp(w8 / "steady_state_N24_E1.csv"),
          "worker count does not change bytes");

    // Flags override config-file values.
    const fs::path cfg_file = scratch / "override.json";
    {
        std::ofstream os(cfg_file);
        os << R"({"experiment":"steady-state","N":16,"E":0.5,"master_seed":9,"n_realizations":100})";
    }
    const fs::path o1 = scratch / "o1";
    check(run_cmd(bin + " steady-state --config " + cfg_file.string() +
                  " --realizations 3 --out " + o1.string()) == 0,
          "flag override exit 0");
    check(slurp(o1 / "steady_state_N16_E0.5.csv") == slurp(s1 / "steady_state_N16_E0.5.csv"),
          "flag --realizations overrides the file value");

    // Validation failures: nonzero exit, single-line diagnostic naming the field.
    const fs::path err_file = scratch / "stderr.txt";
    check(run_cmd(bin + " steady-state --N 10 --E -0.5 --seed 1 2> " + err_file.string()) == 2,
          "negative E exits 2");
    {
        const std::string err = slurp(err_file);
        check(err.find("E") != std::string::npos && err.find('\n') == err.size() - 1,
              "diagnostic names the field on one line");
    }
    check(run_cmd(bin + " steady-state --N 10 --E 1.0 2> /dev/null") == 2,
          "missing seed exits 2");

    // Pipe mode: single table to stdout, nothing written.
    const fs::path piped = scratch / "piped.csv";
    check(run_cmd(bin + " couplings --N 4 --out - > " + piped.string()) == 0, "pipe mode exit 0");
    check(slurp(piped).find("i,J\n") == 0, "pipe mode emits the table");

    std::cout << (g_failures == 0 ? "cli integration: all checks passed\n"
                                  : "cli integration: FAILURES\n");
    return g_failures == 0 ? 0 : 1;
}
