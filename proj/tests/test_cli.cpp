// End-to-end checks against the command line binary: exit codes, stdout
// contracts, output files, manifests, and rerun determinism. The binary path
// comes in as argv[1].
#include <sys/stat.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "qcs/io.hpp"
#include "qcs/resonator.hpp"

namespace {

int failures = 0;

void check(bool ok, const std::string& label) {
    std::printf("  [%s] %s\n", ok ? "OK" : "FAIL", label.c_str());
    if (!ok) ++failures;
}

struct CmdResult {
    int code = -1;
    std::string text;
};

CmdResult run_cmd(const std::string& cmd) {
    CmdResult r;
    FILE* pipe = popen((cmd + " 2>&1").c_str(), "r");
    if (!pipe) return r;
    char buf[4096];
    size_t n = 0;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.text.append(buf, n);
    int status = pclose(pipe);
    if (WIFEXITED(status)) r.code = WEXITSTATUS(status);
    return r;
}

std::string slurp(const std::string& path) {
    try {
        return qcs::read_file(path);
    } catch (const std::exception&) {
        return "";
    }
}

bool contains(const std::string& hay, const std::string& needle) {
    return hay.find(needle) != std::string::npos;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: %s <cli-binary>\n", argv[0]);
        return 2;
    }
    const std::string cli = argv[1];
    const std::string dir = "cli_scratch_" + std::to_string(static_cast<long>(getpid()));
    mkdir(dir.c_str(), 0755);
    std::vector<std::string> scratch;
    auto path_in_dir = [&](const std::string& name) {
        std::string p = dir + "/" + name;
        scratch.push_back(p);
        return p;
    };

    std::printf("charsum\n");
    CmdResult r = run_cmd(cli + " charsum --d -4 --len 2");
    check(r.code == 0, "d=-4 len=2 exits 0");
    check(contains(r.text, "sum=1"), "d=-4 len=2 prints sum=1");
    r = run_cmd(cli + " charsum --d 5 --len 5");
    check(r.code == 0 && contains(r.text, "sum=0"),
          "d=5 over a full period prints sum=0");
    r = run_cmd(cli + " charsum --d 9 --len 5");
    check(r.code == 2, "non-fundamental d exits 2");
    r = run_cmd(cli + " charsum --len 5");
    check(r.code == 2, "missing required --d exits 2");

    std::printf("argument handling\n");
    r = run_cmd(cli);
    check(r.code == 2, "bare invocation exits 2");
    r = run_cmd(cli + " frobnicate");
    check(r.code == 2, "unknown subcommand exits 2");
    r = run_cmd(cli + " charsum --d -4 --len 2 --bogus 1");
    check(r.code == 2, "unknown flag exits 2");
    r = run_cmd(cli + " charsum --d -4 --len 2 --format yaml");
    check(r.code == 2, "unknown format exits 2");

    std::printf("scan\n");
    const std::string scan1 = path_in_dir("scan1.csv");
    const std::string scan2 = path_in_dir("scan2.csv");
    scratch.push_back(scan1 + ".manifest.json");
    scratch.push_back(scan2 + ".manifest.json");
    r = run_cmd(cli + " scan --X 1000 --x 10 --out " + scan1);
    check(r.code == 0, "full scan exits 0");
    CmdResult r2 = run_cmd(cli + " scan --X 1000 --x 10 --out " + scan2);
    std::string csv1 = slurp(scan1);
    check(!csv1.empty() && r2.code == 0 && csv1 == slurp(scan2),
          "rerun with the same config is byte-identical");
    check(csv1.rfind("d,x,sum,normalized,r_weight\n", 0) == 0,
          "csv starts with the header row");
    nlohmann::json man = nlohmann::json::parse(slurp(scan1 + ".manifest.json"),
                                               nullptr, false);
    check(!man.is_discarded() && man["population"] == 611,
          "manifest parses and records population=611");
    check(man["best"]["d"] == -1679, "manifest best d is -1679");

    const std::string scan3 = path_in_dir("scan3.csv");
    scratch.push_back(scan3 + ".manifest.json");
    r = run_cmd(cli + " scan --X 1000 --x 10 --format json --out " + scan3);
    nlohmann::json js = nlohmann::json::parse(r.text, nullptr, false);
    check(r.code == 0 && !js.is_discarded() && js["population"] == 611,
          "--format json emits the manifest on stdout");

    r = run_cmd(cli + " scan --X 1000 --x 10 --strategy resonance_guided");
    check(r.code == 2, "guided scan without --resonator exits 2");

    std::printf("resonator\n");
    const std::string rs1 = path_in_dir("r16a.txt");
    const std::string rs2 = path_in_dir("r16b.txt");
    scratch.push_back(rs1 + ".manifest.json");
    scratch.push_back(rs2 + ".manifest.json");
    r = run_cmd(cli + " resonator --N 16 --out " + rs1);
    check(r.code == 0 && contains(r.text, "gcd_sum="),
          "structured build exits 0 and reports gcd_sum");
    std::string file1 = slurp(rs1);
    check(file1.rfind("# resonator N=16", 0) == 0,
          "set file header names the size");
    bool loaded = false;
    try {
        qcs::ResonatorSet set = qcs::load_resonator(rs1);
        loaded = set.size() == 16 && set.in_dyadic_band();
    } catch (const std::exception&) {
    }
    check(loaded, "set file loads back with 16 elements in one dyadic band");
    r2 = run_cmd(cli + " resonator --N 16 --out " + rs2);
    check(r2.code == 0 && file1 == slurp(rs2), "structured rerun is byte-identical");

    const std::string g1 = path_in_dir("g16a.txt");
    const std::string g2 = path_in_dir("g16b.txt");
    scratch.push_back(g1 + ".manifest.json");
    scratch.push_back(g2 + ".manifest.json");
    r = run_cmd(cli + " resonator --method greedy --N 16 --y 19 --seed 7 --out " + g1);
    r2 = run_cmd(cli + " resonator --method greedy --N 16 --y 19 --seed 7 --out " + g2);
    std::string gfile = slurp(g1);
    check(r.code == 0 && r2.code == 0 && !gfile.empty() && gfile == slurp(g2),
          "greedy rerun with the same seed is byte-identical");
    r = run_cmd(cli + " resonator --N 1000000 --y 3");
    check(r.code == 2, "infeasible size/friability pair exits 2");
    r = run_cmd(cli + " resonator --method sideways --N 8");
    check(r.code == 2, "unknown method exits 2");

    std::printf("guided scan\n");
    const std::string gcsv = path_in_dir("guided.csv");
    scratch.push_back(gcsv + ".manifest.json");
    r = run_cmd(cli + " scan --X 20000 --x 50 --strategy resonance_guided --top-k 40" +
                " --resonator " + g1 + " --out " + gcsv);
    check(r.code == 0, "guided scan with a set file exits 0");
    man = nlohmann::json::parse(slurp(gcsv + ".manifest.json"), nullptr, false);
    check(!man.is_discarded() && man["scored"] >= 40 &&
              man["scored"] < man["population"],
          "guided scan scores the ranked prefix plus the control sample");
    check(slurp(gcsv).rfind("d,x,sum,normalized,r_weight\n", 0) == 0,
          "guided csv has the shared header");

    std::printf("verify\n");
    r = run_cmd(cli + " verify --suite innersum");
    check(r.code == 0 && contains(r.text, "PASS"), "innersum suite passes");
    r = run_cmd(cli + " verify --suite nope");
    check(r.code == 2, "unknown suite exits 2");

    for (const std::string& p : scratch) std::remove(p.c_str());
    rmdir(dir.c_str());

    std::printf("%d failure(s)\n", failures);
    return failures == 0 ? 0 : 1;
}
