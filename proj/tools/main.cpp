// qcs: quadratic character sums, resonator sets and extremal scans.
//
// Subcommands: charsum, scan, resonator, verify. Every run prints (or
// writes) a JSON manifest echoing the effective configuration so results
// can be reproduced from the manifest alone.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qcs/charsum.hpp"
#include "qcs/discriminant.hpp"
#include "qcs/io.hpp"
#include "qcs/resonance.hpp"
#include "qcs/resonator.hpp"
#include "qcs/verify.hpp"

using nlohmann::ordered_json;

namespace {

struct RunConfig {
    std::string command;
    int64_t X = 100000;
    double x = 100.0;
    int64_t N = 0;  // 0 = derive from X, x, delta
    int64_t y = 0;  // 0 = escalate from (log N)^1.5 to feasibility
    double delta = 0.05;
    double epsilon = 0.1;
    double kappa = 10.0;
    double z_budget = 10000.0;
    uint64_t seed = 1;
    int threads = 1;
    std::string out;
    std::string format = "csv";

    // command-specific
    int64_t d = 0;
    int64_t len = 0;
    std::string strategy = "full";
    int64_t top_k = 500;
    std::string resonator_file;
    std::string method = "structured";
    std::string suite;
};

ordered_json config_echo(const RunConfig& cfg) {
    ordered_json j;
    j["command"] = cfg.command;
    j["X"] = cfg.X;
    j["x"] = cfg.x;
    j["N"] = cfg.N;
    j["y"] = cfg.y;
    j["delta"] = cfg.delta;
    j["epsilon"] = cfg.epsilon;
    j["kappa"] = cfg.kappa;
    j["z_budget"] = cfg.z_budget;
    j["seed"] = cfg.seed;
    j["threads"] = cfg.threads;
    j["out"] = cfg.out;
    j["format"] = cfg.format;
    return j;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

ordered_json bound_json(const qcs::BoundParams& b) {
    ordered_json j;
    j["r"] = b.r;
    j["L"] = b.L;
    j["log2"] = b.log2_term;
    j["log3"] = b.log3_term;
    j["bound"] = b.bound;
    j["regime"] = b.clamped ? "clamped" : "asymptotic";
    return j;
}

// json mode keeps stdout machine-readable: the manifest is the whole report
void emit_manifest(const RunConfig& cfg, const ordered_json& manifest) {
    if (!cfg.out.empty())
        qcs::write_file(cfg.out + ".manifest.json", manifest.dump(2) + "\n");
    if (cfg.format == "json") std::printf("%s\n", manifest.dump(2).c_str());
}

int cmd_charsum(const RunConfig& cfg) {
    qcs::FundamentalDiscriminant fd = qcs::make_fundamental(cfg.d);
    if (cfg.len < 1) throw std::domain_error("charsum needs --len >= 1");
    auto t0 = std::chrono::steady_clock::now();
    int64_t sum = qcs::partial_sum(fd, static_cast<double>(cfg.len));

    double ad = static_cast<double>(cfg.d < 0 ? -cfg.d : cfg.d);
    ordered_json manifest;
    manifest["config"] = config_echo(cfg);
    manifest["config"]["d"] = cfg.d;
    manifest["config"]["len"] = cfg.len;
    manifest["sum"] = sum;

    const bool text = cfg.format != "json";
    if (text) {
        std::printf("d=%lld len=%lld\n", static_cast<long long>(cfg.d),
                    static_cast<long long>(cfg.len));
        std::printf("sum=%lld\n", static_cast<long long>(sum));
    }

    // the truncated expansion only applies to proper cutoffs len < |d|
    if (static_cast<double>(cfg.len) < ad) {
        double x = ad / static_cast<double>(cfg.len);
        double z = qcs::default_z(fd, x);
        qcs::PolyaApprox pa = qcs::polya_approx(fd, 1.0 / x, z, cfg.kappa);
        if (text) {
            std::printf("alpha=%s z=%s\n", qcs::format_sig(pa.alpha).c_str(),
                        qcs::format_sig(pa.z).c_str());
            std::printf("approx=%s\n", qcs::format_sig(pa.approx).c_str());
            std::printf("err_bound=%s\n", qcs::format_sig(pa.err_bound).c_str());
            std::printf("residual=%s\n",
                        qcs::format_sig(static_cast<double>(sum) - pa.approx).c_str());
        }
        manifest["polya"] = {{"alpha", pa.alpha},     {"z", pa.z},
                             {"c_part", pa.c_part},   {"s_part", pa.s_part},
                             {"approx", pa.approx},   {"err_bound", pa.err_bound}};
    } else if (text) {
        std::printf("approx=n/a (len >= |d|)\n");
    }
    manifest["timings"] = {{"total_s", seconds_since(t0)}};
    emit_manifest(cfg, manifest);
    return 0;
}

int cmd_scan(const RunConfig& cfg) {
    qcs::ScanOptions opts;
    opts.threads = cfg.threads;
    qcs::ResonatorSet set;
    if (cfg.strategy == "full") {
        opts.strategy = qcs::ScanStrategy::full;
    } else if (cfg.strategy == "resonance_guided") {
        opts.strategy = qcs::ScanStrategy::resonance_guided;
        if (cfg.resonator_file.empty())
            throw std::domain_error("resonance_guided scan requires --resonator <file>");
        set = qcs::load_resonator(cfg.resonator_file);
        opts.set = &set;
        opts.top_k = cfg.top_k;
    } else {
        throw std::domain_error("unknown strategy '" + cfg.strategy +
                                "' (use full or resonance_guided)");
    }

    auto t0 = std::chrono::steady_clock::now();
    qcs::ScanRun run = qcs::scan_extremal(cfg.X, cfg.x, opts);
    double elapsed = seconds_since(t0);

    std::string csv = qcs::scan_records_csv(run.records);
    std::string csv_path = cfg.out.empty() ? "scan.csv" : cfg.out;
    qcs::write_file(csv_path, csv);

    ordered_json manifest;
    manifest["config"] = config_echo(cfg);
    manifest["config"]["strategy"] = cfg.strategy;
    manifest["config"]["top_k"] = cfg.top_k;
    manifest["config"]["resonator_file"] = cfg.resonator_file;
    manifest["population"] = run.population;
    manifest["scored"] = run.scored;
    manifest["top_k_clamped"] = run.top_k_clamped;
    if (run.has_bound) manifest["bound"] = bound_json(run.bound);
    if (opts.strategy == qcs::ScanStrategy::resonance_guided) {
        manifest["resonator"] = {{"N", set.size()},
                                 {"y", set.friability},
                                 {"min", set.min_element()},
                                 {"max", set.max_element()}};
    }
    if (!run.records.empty()) {
        const qcs::ScanRecord& top = run.records.front();
        manifest["best"] = {{"d", top.d},
                            {"sum", top.sum},
                            {"normalized", top.normalized}};
    }
    manifest["outputs"] = {{"csv", csv_path}};
    manifest["timings"] = {{"total_s", elapsed}};

    if (cfg.format != "json") {
        std::printf("scanned %lld of %lld discriminants in (X, 2X], X=%lld\n",
                    static_cast<long long>(run.scored),
                    static_cast<long long>(run.population),
                    static_cast<long long>(cfg.X));
        if (!run.records.empty())
            std::printf("best: d=%lld sum=%lld normalized=%s\n",
                        static_cast<long long>(run.records.front().d),
                        static_cast<long long>(run.records.front().sum),
                        qcs::format_sig(run.records.front().normalized).c_str());
        if (run.has_bound)
            std::printf("predicted bound %s (%s regime)\n",
                        qcs::format_sig(run.bound.bound).c_str(),
                        run.bound.clamped ? "clamped" : "asymptotic");
        std::printf("csv written to %s\n", csv_path.c_str());
    }

    qcs::write_file(csv_path + ".manifest.json", manifest.dump(2) + "\n");
    if (cfg.format == "json") std::printf("%s\n", manifest.dump(2).c_str());
    return 0;
}

int cmd_resonator(const RunConfig& cfg) {
    int64_t N = cfg.N;
    if (N == 0) {
        // size budget floor(X^(1/2-delta) / x) when not given explicitly
        double raw = std::pow(static_cast<double>(cfg.X), 0.5 - cfg.delta) / cfg.x;
        N = static_cast<int64_t>(std::floor(raw));
        if (N < 1)
            throw std::domain_error(
                "derived resonator size floor(X^(1/2-delta)/x) = " + std::to_string(N) +
                " is not positive; pass --N explicitly");
    }
    int64_t y = cfg.y > 0 ? cfg.y : qcs::default_friability(N);

    auto t0 = std::chrono::steady_clock::now();
    qcs::ResonatorSet set;
    if (cfg.method == "structured") {
        set = qcs::build_structured_set(N, y);
    } else if (cfg.method == "greedy") {
        set = qcs::build_greedy_windowed(N, y, cfg.seed);
    } else {
        throw std::domain_error("unknown method '" + cfg.method +
                                "' (use structured or greedy)");
    }
    qcs::GcdSumReport rep = qcs::gcd_sum(set);
    double elapsed = seconds_since(t0);

    std::string path = cfg.out.empty() ? "resonator.txt" : cfg.out;
    qcs::save_resonator(set, path);

    if (cfg.format != "json") {
        std::printf("method=%s N=%lld y=%lld\n", cfg.method.c_str(),
                    static_cast<long long>(set.size()),
                    static_cast<long long>(set.friability));
        std::printf("window [%lld, %lld]\n",
                    static_cast<long long>(set.min_element()),
                    static_cast<long long>(set.max_element()));
        std::printf("gcd_sum=%s per_element=%s\n", qcs::format_sig(rep.total).c_str(),
                    qcs::format_sig(rep.total / static_cast<double>(set.size())).c_str());
        std::printf("written to %s\n", path.c_str());
    }

    ordered_json manifest;
    manifest["config"] = config_echo(cfg);
    manifest["config"]["method"] = cfg.method;
    manifest["effective"] = {{"N", set.size()}, {"y", y}};
    manifest["set"] = {{"min", set.min_element()},
                       {"max", set.max_element()},
                       {"friability", set.friability}};
    manifest["gcd_sum"] = {{"total", rep.total},
                           {"per_element", rep.total / static_cast<double>(set.size())}};
    manifest["outputs"] = {{"file", path}};
    manifest["timings"] = {{"total_s", elapsed}};
    emit_manifest(cfg, manifest);
    return 0;
}

int cmd_verify(const RunConfig& cfg) {
    qcs::VerifyOptions opts;
    opts.X = cfg.X;
    opts.epsilon = cfg.epsilon;
    opts.kappa = cfg.kappa;
    opts.threads = cfg.threads;

    std::vector<qcs::CheckResult> results;
    if (cfg.suite == "innersum")
        results = qcs::verify_innersum();
    else if (cfg.suite == "parity")
        results = qcs::verify_parity();
    else if (cfg.suite == "polya")
        results = qcs::verify_polya(opts);
    else if (cfg.suite == "average")
        results = qcs::verify_average(opts);
    else
        throw std::domain_error("unknown suite '" + cfg.suite +
                                "' (use innersum, parity, polya or average)");

    bool all = true;
    for (const qcs::CheckResult& r : results) {
        if (cfg.format != "json")
            std::printf("[%s] %-42s %s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(),
                        r.detail.c_str());
        all = all && r.pass;
    }

    ordered_json manifest;
    manifest["config"] = config_echo(cfg);
    manifest["config"]["suite"] = cfg.suite;
    ordered_json checks = ordered_json::array();
    for (const qcs::CheckResult& r : results)
        checks.push_back({{"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
    manifest["checks"] = checks;
    emit_manifest(cfg, manifest);
    return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    RunConfig cfg;
    CLI::App app{"quadratic character sums: evaluation, resonators, extremal scans"};
    app.require_subcommand(1);

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--X", cfg.X, "dyadic window start / cumulative scale");
        sub->add_option("--x", cfg.x, "cutoff divisor (sums run to |d|/x)");
        sub->add_option("--N", cfg.N, "resonator size (0 = derive from X, x, delta)");
        sub->add_option("--y", cfg.y, "friability bound (0 = auto-escalate)");
        sub->add_option("--delta", cfg.delta, "exponent offset in the derived size");
        sub->add_option("--epsilon", cfg.epsilon, "epsilon in the error envelopes");
        sub->add_option("--kappa", cfg.kappa, "constant in the truncation envelope");
        sub->add_option("--z-budget", cfg.z_budget, "ceiling on oscillating-sum length");
        sub->add_option("--seed", cfg.seed, "seed for randomized constructions");
        sub->add_option("--threads", cfg.threads, "worker count (0 = hardware)");
        sub->add_option("--out", cfg.out, "output path");
        sub->add_option("--format", cfg.format, "csv or json stdout reporting");
    };

    CLI::App* charsum = app.add_subcommand(
        "charsum", "exact character sum with truncated-expansion comparison");
    charsum->add_option("--d", cfg.d, "fundamental discriminant")->required();
    charsum->add_option("--len", cfg.len, "sum cutoff (n <= len)")->required();
    add_common(charsum);

    CLI::App* scan =
        app.add_subcommand("scan", "score normalized character sums over (X, 2X]");
    scan->add_option("--strategy", cfg.strategy, "full or resonance_guided");
    scan->add_option("--top-k", cfg.top_k, "guided: resonator-ranked prefix size");
    scan->add_option("--resonator", cfg.resonator_file, "resonator set file");
    add_common(scan);

    CLI::App* resonator =
        app.add_subcommand("resonator", "construct a resonator set and report gcd_sum");
    resonator->add_option("--method", cfg.method, "structured or greedy");
    add_common(resonator);

    CLI::App* verify = app.add_subcommand("verify", "run a named property suite");
    verify->add_option("--suite", cfg.suite, "innersum, parity, polya or average")
        ->required();
    add_common(verify);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (cfg.format != "csv" && cfg.format != "json")
            throw std::domain_error("unknown format '" + cfg.format +
                                    "' (use csv or json)");
        if (app.got_subcommand(charsum)) {
            cfg.command = "charsum";
            return cmd_charsum(cfg);
        }
        if (app.got_subcommand(scan)) {
            cfg.command = "scan";
            return cmd_scan(cfg);
        }
        if (app.got_subcommand(resonator)) {
            cfg.command = "resonator";
            return cmd_resonator(cfg);
        }
        if (app.got_subcommand(verify)) {
            cfg.command = "verify";
            return cmd_verify(cfg);
        }
        std::fprintf(stderr, "error: no subcommand\n");
        return 2;
    } catch (const std::domain_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::range_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return 1;
    }
}
