// czk-lab: experiment orchestration for the concurrent-session attack lab.
//
// Subcommands: params, attack, estimate, lemmas, experiment, blowup, fixtures.
// Reports are line-delimited JSON records (or CSV with --format csv), written
// to --out or stdout. A fixed --seed makes every report byte-identical.
// Exit codes: 0 ok, 1 violation found, 2 usage error.

#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "czk/harness.hpp"
#include "czk/report.hpp"

using nlohmann::json;
using namespace czk;

namespace {

struct RunResult {
    int code = 0;
    std::string report;
};

struct CommonOpts {
    harness::LabConfig cfg;
    std::string simulator = "rewinding";
    std::string hash = "prg";
    std::string format = "jsonl";
    std::string out;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--seed", o.cfg.seed, "master seed")->envname("CZK_SEED");
    cmd->add_option("--k", o.cfg.k, "number of interleaved sessions");
    cmd->add_option("--m", o.cfg.m, "parallel copies per block");
    cmd->add_option("--graph-size", o.cfg.v, "vertex count of the toy instances");
    cmd->add_option("--cap", o.cfg.N, "simulator step cap N (also the address bound)");
    cmd->add_option("--trials", o.cfg.trials, "Monte Carlo trials");
    cmd->add_option("--max-attempts", o.cfg.max_attempts, "splicing attempt ceiling");
    cmd->add_option("--simulator", o.simulator, "witness-oracle | rewinding");
    cmd->add_option("--hash", o.hash, "hash family mode: prg | exact");
    cmd->add_option("--hash-t", o.cfg.hash_t, "independence degree for exact members");
    cmd->add_option("--workers", o.cfg.workers, "worker threads (0 = auto)");
    cmd->add_option("--format", o.format, "report format: jsonl | csv");
    cmd->add_option("--out", o.out, "report file (default stdout)");
}

void finish_common(CommonOpts& o) {
    o.cfg.simulator = sim::sim_kind_from_name(o.simulator);
    if (o.hash == "prg")
        o.cfg.hash_mode = hashfam::HashMode::PrgSeeded;
    else if (o.hash == "exact")
        o.cfg.hash_mode = hashfam::HashMode::Exact64;
    else
        throw CLI::ValidationError("--hash must be prg or exact");
    if (o.format != "jsonl" && o.format != "csv")
        throw CLI::ValidationError("--format must be jsonl or csv");
}

json estimate_json(const harness::Estimate& e) {
    return json{{"point", e.point},
                {"ci_low", e.ci_low},
                {"ci_high", e.ci_high},
                {"trials", e.trials},
                {"hits", e.successes}};
}

std::string render_jsonl(const std::vector<json>& records) {
    std::ostringstream out;
    for (const auto& r : records) out << r.dump() << '\n';
    return out.str();
}

// --- params ------------------------------------------------------------------

RunResult cmd_params(const CommonOpts& o) {
    WeightParams wp = weight_params(o.cfg.k, o.cfg.N);
    bool bound_ok = true;
    for (int h = 1; h <= wp.k; h++) bound_ok = bound_ok && wp.f_lower_bound_holds(h);
    if (o.format == "csv") {
        std::ostringstream csv;
        csv << "k,N,beta,c,F_k,f_bound_ok\n"
            << wp.k << ',' << wp.N << ',' << wp.beta << ',' << rat_string(wp.c) << ','
            << wp.F(wp.k).str() << ',' << (bound_ok ? 1 : 0) << '\n';
        return {0, csv.str()};
    }
    std::vector<json> recs;
    recs.push_back(json{{"record", "weight_params"},
                        {"k", wp.k},
                        {"N", wp.N},
                        {"beta", wp.beta},
                        {"c", rat_string(wp.c)},
                        {"F_k", wp.F(wp.k).str()},
                        {"f_bound_ok", bound_ok}});
    for (int lev = 1; lev <= wp.k; lev++)
        recs.push_back(json{{"record", "address_weight"},
                            {"level", lev},
                            {"height", wp.height(lev)},
                            {"weight", rat_string(wp.address_weight(lev))}});
    return {bound_ok ? 0 : 1, render_jsonl(recs)};
}

// --- attack ------------------------------------------------------------------

RunResult cmd_attack(const CommonOpts& o, bool iso) {
    const gi::GiProtocol proto;
    auto acfg = o.cfg.attempt_config(proto);
    long in_l = 0;
    std::vector<json> recs;
    for (long i = 0; i < o.cfg.trials; i++) {
        auto inst = gi::gen_instance(o.cfg.v, iso, derive_seed(o.cfg.seed, "attack-inst", uint64_t(i)));
        auto d = splice::decide(inst, acfg, o.cfg.simulator, o.cfg.max_attempts,
                                derive_seed(o.cfg.seed, "attack", uint64_t(i)));
        bool verdict_in_l = d == splice::Decision::InL;
        if (verdict_in_l) in_l++;
        recs.push_back(json{{"record", "decide"},
                            {"trial", i},
                            {"iso", iso},
                            {"verdict", verdict_in_l ? "in_l" : "not_in_l"}});
    }
    auto est = harness::wilson(in_l, o.cfg.trials);
    recs.push_back(json{{"record", "summary"},
                        {"iso", iso},
                        {"in_l", estimate_json(est)},
                        {"k", o.cfg.k},
                        {"m", o.cfg.m},
                        {"cap", o.cfg.N},
                        {"simulator", sim::sim_kind_name(o.cfg.simulator)}});
    if (o.format == "csv") {
        std::ostringstream csv;
        csv << "iso,in_l_freq,ci_low,ci_high,trials\n"
            << (iso ? 1 : 0) << ',' << est.point << ',' << est.ci_low << ',' << est.ci_high << ','
            << est.trials << '\n';
        return {0, csv.str()};
    }
    return {0, render_jsonl(recs)};
}

// --- estimate ----------------------------------------------------------------

RunResult cmd_estimate(const CommonOpts& o) {
    auto rates = harness::attempt_rates(o.cfg);
    if (o.format == "csv") {
        std::ostringstream csv;
        csv << "event,point,ci_low,ci_high,trials\n";
        auto row = [&](const char* name, const harness::Estimate& e) {
            csv << name << ',' << e.point << ',' << e.ci_low << ',' << e.ci_high << ','
                << e.trials << '\n';
        };
        row("succeeded", rates.succeeded);
        row("failed", rates.failed);
        row("aborted", rates.aborted);
        row("good", rates.good);
        row("bad", rates.bad);
        return {0, csv.str()};
    }
    std::vector<json> recs;
    recs.push_back(json{{"record", "attempt_rates"},
                        {"succeeded", estimate_json(rates.succeeded)},
                        {"failed", estimate_json(rates.failed)},
                        {"aborted", estimate_json(rates.aborted)},
                        {"analysis_good", estimate_json(rates.good)},
                        {"analysis_bad", estimate_json(rates.bad)},
                        {"k", o.cfg.k},
                        {"m", o.cfg.m},
                        {"cap", o.cfg.N},
                        {"simulator", sim::sim_kind_name(o.cfg.simulator)}});
    return {0, render_jsonl(recs)};
}

// --- lemmas ------------------------------------------------------------------

struct LemmaOpts {
    long binom_m = 1000;
    int binom_k = 10;
    double binom_rho = 0.1;
    double tail_threshold = 0.01;
    int fgrid_k = 64;
    int fgrid_beta = 12;
};

RunResult cmd_lemmas(const CommonOpts& o, const LemmaOpts& lo) {
    std::vector<json> recs;
    int code = 0;

    auto stats = harness::run_lemma_suite(o.cfg);
    recs.push_back(json{{"record", "tree_checks"},
                        {"trees", stats.trees},
                        {"decomposition_violations", stats.decomposition_violations},
                        {"bound_violations", stats.bound_violations},
                        {"slack_violations", stats.slack_violations},
                        {"full_height_violations", stats.full_height_violations},
                        {"first_failures", stats.first_failures},
                        {"k", o.cfg.k},
                        {"m", o.cfg.m},
                        {"cap", o.cfg.N}});
    if (!stats.ok()) code = 1;

    auto grid = harness::f_bound_grid(lo.fgrid_k, lo.fgrid_beta);
    recs.push_back(json{{"record", "f_bound_grid"},
                        {"max_k", lo.fgrid_k},
                        {"max_beta", lo.fgrid_beta},
                        {"checked", grid.checked},
                        {"ok", grid.ok},
                        {"failures", grid.failures}});
    if (!grid.ok) code = 1;

    // exact tail of the splice window
    long num = std::lround(lo.binom_rho * 1000000.0);
    Rat rho(num, 1000000);
    auto tail = harness::splice_window_tail(lo.binom_m, lo.binom_k, rho);
    bool below = tail.below(lo.tail_threshold);
    recs.push_back(json{{"record", "splice_window_tail"},
                        {"m", lo.binom_m},
                        {"k", lo.binom_k},
                        {"rho", rat_string(rho)},
                        {"value", tail.value},
                        {"exact", tail.exact_mode ? rat_string(tail.exact) : "approx"},
                        {"shifted_value", tail.shifted_value},
                        {"chernoff", tail.chernoff},
                        {"threshold", lo.tail_threshold},
                        {"below_threshold", below}});
    if (!below) code = 1;

    auto addr = harness::address_sampling_chi2(o.cfg, std::max<long>(o.cfg.trials, 10000));
    recs.push_back(json{{"record", "address_sampling"},
                        {"draws", std::max<long>(o.cfg.trials, 10000)},
                        {"chi2", addr.stat},
                        {"dof", addr.dof},
                        {"p_value", addr.p_value}});
    if (addr.p_value < 0.0001) code = 1;

    if (o.format == "csv") {
        std::ostringstream csv;
        csv << "check,ok\n"
            << "tree_checks," << (stats.ok() ? 1 : 0) << '\n'
            << "f_bound_grid," << (grid.ok ? 1 : 0) << '\n'
            << "splice_window_tail," << (below ? 1 : 0) << '\n';
        return {code, csv.str()};
    }
    return {code, render_jsonl(recs)};
}

// --- experiment --------------------------------------------------------------

RunResult cmd_experiment(const CommonOpts& o) {
    auto cmp = harness::compare_experiments(o.cfg);
    std::vector<json> recs;
    recs.push_back(json{{"record", "experiment_compare"},
                        {"trials", cmp.trials},
                        {"spliced_installed", cmp.spliced_installed},
                        {"chi2", cmp.chi2.stat},
                        {"dof", cmp.chi2.dof},
                        {"p_value", cmp.chi2.p_value},
                        {"cells", cmp.chi2.cells},
                        {"pooled", cmp.chi2.pooled}});
    for (const auto& [cell, count] : cmp.hist_spliced)
        recs.push_back(json{{"record", "cell"},
                            {"side", "spliced"},
                            {"fingerprint", report::sha256_hex_str(cell).substr(0, 16)},
                            {"count", count}});
    for (const auto& [cell, count] : cmp.hist_unspliced)
        recs.push_back(json{{"record", "cell"},
                            {"side", "unspliced"},
                            {"fingerprint", report::sha256_hex_str(cell).substr(0, 16)},
                            {"count", count}});
    if (o.format == "csv") {
        std::ostringstream csv;
        csv << "trials,chi2,dof,p_value\n"
            << cmp.trials << ',' << cmp.chi2.stat << ',' << cmp.chi2.dof << ','
            << cmp.chi2.p_value << '\n';
        return {cmp.chi2.p_value >= 0.01 ? 0 : 1, csv.str()};
    }
    return {cmp.chi2.p_value >= 0.01 ? 0 : 1, render_jsonl(recs)};
}

// --- blowup ------------------------------------------------------------------

RunResult cmd_blowup(const CommonOpts& o, int k_min, int k_max) {
    auto rows = harness::blowup_bench(o.cfg, k_min, k_max);
    if (o.format == "csv") {
        std::ostringstream csv;
        csv << "k,mean_steps,p50_steps,p99_steps,mean_first_block_attempts,mean_total_attempts,"
               "trials\n";
        for (const auto& r : rows)
            csv << r.k << ',' << r.mean_steps << ',' << r.p50_steps << ',' << r.p99_steps << ','
                << r.mean_first_block_attempts << ',' << r.mean_total_attempts << ',' << r.trials
                << '\n';
        return {0, csv.str()};
    }
    std::vector<json> recs;
    for (const auto& r : rows)
        recs.push_back(json{{"record", "blowup"},
                            {"k", r.k},
                            {"mean_steps", r.mean_steps},
                            {"p50_steps", r.p50_steps},
                            {"p99_steps", r.p99_steps},
                            {"mean_first_block_attempts", r.mean_first_block_attempts},
                            {"mean_total_attempts", r.mean_total_attempts},
                            {"trials", r.trials}});
    return {0, render_jsonl(recs)};
}

RunResult dispatch(const std::vector<std::string>& args);

// --- fixtures ----------------------------------------------------------------

RunResult cmd_fixtures(const std::string& dir, bool generate) {
    std::string path = dir + "/fixtures.json";
    if (!report::file_exists(path))
        return {generate ? 0 : 1, "fixture index missing: " + path + "\n"};
    json idx = json::parse(report::read_file(path));
    std::ostringstream out;
    int code = 0;
    bool changed = false;
    for (auto& fx : idx.at("fixtures")) {
        std::string name = fx.at("name");
        std::vector<std::string> args = fx.at("command").get<std::vector<std::string>>();
        RunResult r = dispatch(args);
        std::string digest = report::sha256_hex_str(r.report);
        if (generate) {
            fx["sha256"] = digest;
            changed = true;
            out << "pinned " << name << " " << digest << "\n";
        } else {
            std::string want = fx.value("sha256", "");
            bool ok = want == digest;
            out << (ok ? "ok   " : "FAIL ") << name << " " << digest;
            if (!ok) {
                out << " (expected " << want << ")";
                code = 1;
            }
            out << "\n";
        }
    }
    if (generate && changed) report::write_file(path, idx.dump(2) + "\n");
    return {code, out.str()};
}

RunResult dispatch(const std::vector<std::string>& args) {
    CLI::App app{"concurrent zero-knowledge attack lab"};
    app.require_subcommand(1);
    app.set_config("--config");

    CommonOpts o;
    o.cfg = harness::LabConfig{};

    auto* params = app.add_subcommand("params", "print the address-sampling weight parameters");
    CommonOpts po;
    add_common(params, po);

    auto* attack = app.add_subcommand("attack", "run the splicing prover against live verifiers");
    CommonOpts ao;
    bool attack_iso = true;
    add_common(attack, ao);
    attack->add_option("--iso", attack_iso, "use isomorphic instances (true) or not (false)");

    auto* estimate = app.add_subcommand("estimate", "attempt outcome rates with Wilson intervals");
    CommonOpts eo;
    add_common(estimate, eo);

    auto* lemmas = app.add_subcommand("lemmas", "run every tree/lemma checker");
    CommonOpts lo_common;
    LemmaOpts lo;
    add_common(lemmas, lo_common);
    lemmas->add_option("--binomial-m", lo.binom_m, "block width for the window tail");
    lemmas->add_option("--binomial-k", lo.binom_k, "session count for the window tail");
    lemmas->add_option("--binomial-rho", lo.binom_rho, "subset measure rho");
    lemmas->add_option("--tail-threshold", lo.tail_threshold, "tail acceptance threshold");
    lemmas->add_option("--fgrid-k", lo.fgrid_k, "F-bound grid: max k");
    lemmas->add_option("--fgrid-beta", lo.fgrid_beta, "F-bound grid: max beta");

    auto* experiment =
        app.add_subcommand("experiment", "spliced vs unspliced probe distribution comparison");
    CommonOpts xo;
    xo.cfg.k = 2;
    xo.cfg.m = 1;
    xo.cfg.N = 8;
    xo.hash = "exact";
    xo.cfg.hash_t = 48;
    add_common(experiment, xo);

    auto* blowup = app.add_subcommand("blowup", "rewinding cost vs session count (m = 1)");
    CommonOpts bo;
    int k_min = 1, k_max = 5;
    add_common(blowup, bo);
    blowup->add_option("--k-min", k_min, "smallest k");
    blowup->add_option("--k-max", k_max, "largest k");

    auto* fixtures = app.add_subcommand("fixtures", "verify or (re)pin the fixture corpus");
    std::string fx_dir = "fixtures";
    bool fx_verify = false, fx_generate = false;
    fixtures->add_option("--dir", fx_dir, "fixture directory");
    fixtures->add_flag("--verify", fx_verify, "re-run fixtures and compare digests");
    fixtures->add_flag("--generate", fx_generate, "re-run fixtures and pin digests");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        return {0, app.help()};
    }

    if (params->parsed()) {
        finish_common(po);
        return cmd_params(po);
    }
    if (attack->parsed()) {
        finish_common(ao);
        return cmd_attack(ao, attack_iso);
    }
    if (estimate->parsed()) {
        finish_common(eo);
        return cmd_estimate(eo);
    }
    if (lemmas->parsed()) {
        finish_common(lo_common);
        return cmd_lemmas(lo_common, lo);
    }
    if (experiment->parsed()) {
        finish_common(xo);
        return cmd_experiment(xo);
    }
    if (blowup->parsed()) {
        finish_common(bo);
        return cmd_blowup(bo, k_min, k_max);
    }
    if (fixtures->parsed()) {
        if (fx_verify == fx_generate)
            throw CLI::ValidationError("fixtures: pass exactly one of --verify / --generate");
        return cmd_fixtures(fx_dir, fx_generate);
    }
    throw CLI::ValidationError("no subcommand");
}

std::string out_path_of(const std::vector<std::string>& args) {
    for (size_t i = 0; i + 1 < args.size(); i++)
        if (args[i] == "--out") return args[i + 1];
    return "";
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        RunResult r = dispatch(args);
        std::string out = out_path_of(args);
        if (!out.empty())
            report::write_file(out, r.report);
        else
            std::cout << r.report;
        return r.code;
    } catch (const CLI::ParseError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
