#include "qkg/cli/commands.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

using namespace qkg;
using namespace qkg::cli;

SiftMode parse_mode_flag(const std::string& s) {
    if (s == "encrypted") return SiftMode::encrypted;
    if (s == "plain_bb84") return SiftMode::plain_bb84;
    throw CLI::ValidationError("--sift-mode", "must be 'encrypted' or 'plain_bb84'");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"qkg: quantum key growing with encrypted basis sifting - simulator and analysis"};
    app.require_subcommand(1);
    app.set_config("--config");
    app.get_formatter()->column_width(34);

    // run ------------------------------------------------------------------
    RunCommandConfig run_cfg;
    std::string run_mode = "encrypted";
    std::string run_adversary = "none";
    auto* run = app.add_subcommand("run", "execute seeded protocol sessions");
    run->add_option("--n", run_cfg.run.n, "raw key length per session")->capture_default_str();
    run->add_option("--sessions", run_cfg.run.sessions, "number of independent sessions")
        ->capture_default_str();
    run->add_option("--seed", run_cfg.run.seed, "rng seed")->capture_default_str();
    run->add_option("--epsilon", run_cfg.run.epsilon, "intrinsic channel flip probability")
        ->check(CLI::Range(0.0, 0.5))
        ->capture_default_str();
    run->add_option("--sift-mode", run_mode, "encrypted | plain_bb84")->capture_default_str();
    run->add_option("--adversary", run_adversary, "none | intercept_resend")
        ->check(CLI::IsMember({"none", "intercept_resend"}))
        ->capture_default_str();
    run->add_option("--sacrifice-fraction", run_cfg.run.sacrifice_fraction,
                    "sifted fraction publicly compared for QBER estimation")
        ->check(CLI::Range(0.0, 0.999))
        ->capture_default_str();
    run->add_option("--refresh-fraction", run_cfg.run.refresh_fraction,
                    "fraction of n reinvested to refresh the shared secret")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    run->add_option("--abort-threshold", run_cfg.run.abort_threshold,
                    "estimated QBER above which the session aborts")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    run->add_option("--threads", run_cfg.run.threads, "session fan-out workers")
        ->capture_default_str();
    run->add_option("--transcript", run_cfg.transcript_path, "write session transcripts here");

    // attack ---------------------------------------------------------------
    AttackCommandConfig attack_cfg;
    auto* attack = app.add_subcommand("attack", "run adversary experiments against the protocol");
    attack->add_option("--adversary", attack_cfg.adversary,
                       "intercept_resend | oracle_plaintext | tamper")
        ->required()
        ->check(CLI::IsMember({"intercept_resend", "oracle_plaintext", "tamper"}));
    attack->add_option("--n", attack_cfg.n, "raw key length (default depends on adversary)");
    attack->add_option("--sessions", attack_cfg.sessions, "experiment repetitions");
    attack->add_option("--seed", attack_cfg.seed, "rng seed")->capture_default_str();
    attack->add_option("--flips", attack_cfg.flips, "tamper: bits flipped per session");
    attack->add_option("--epsilon", attack_cfg.epsilon, "tamper: channel flip probability")
        ->check(CLI::Range(0.0, 0.5));

    // analyze ----------------------------------------------------------------
    AnalyzeCommandConfig an_cfg;
    double mutual_info_p = -1.0;
    auto* analyze = app.add_subcommand("analyze", "closed forms and Monte-Carlo cross-checks");
    analyze->add_flag("--info-gain", an_cfg.info_gain, "entropy table and the n/2 identity");
    analyze->add_flag("--provenance", an_cfg.provenance, "raw-position distribution for slot l");
    analyze->add_flag("--gaussian", an_cfg.gaussian, "gaussian approximation quality at l");
    analyze->add_flag("--growth", an_cfg.growth, "surviving-function growth-rate fit");
    analyze->add_option("--mutual-info", mutual_info_p,
                        "bits per key bit at the given agreement probability")
        ->check(CLI::Range(0.0, 1.0));
    analyze->add_option("--n", an_cfg.n, "info-gain: largest even n");
    analyze->add_option("--l", an_cfg.l, "sifted position for provenance/gaussian");
    analyze->add_flag("--empirical", an_cfg.empirical, "provenance: add a Monte-Carlo column");
    analyze->add_option("--trials", an_cfg.trials, "empirical trial count")
        ->capture_default_str();
    analyze->add_option("--seed", an_cfg.seed, "rng seed")->capture_default_str();
    analyze->add_option("--cutoff", an_cfg.cutoff, "tail mass cutoff for tabulation")
        ->capture_default_str();
    analyze->add_option("--growth-lo", an_cfg.growth_lo, "growth fit lower n")
        ->capture_default_str();
    analyze->add_option("--growth-hi", an_cfg.growth_hi, "growth fit upper n")
        ->capture_default_str();
    analyze->add_option("--out", an_cfg.out_path, "CSV output path (default: stdout)");

    // verify-transcript ------------------------------------------------------
    std::string verify_path;
    auto* verify = app.add_subcommand("verify-transcript", "re-validate stored transcripts");
    verify->add_option("file", verify_path, "transcript file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*run) {
            run_cfg.run.mode = parse_mode_flag(run_mode);
            run_cfg.run.adversary = run_adversary == "intercept_resend"
                                        ? AdversaryKind::intercept_resend
                                        : AdversaryKind::none;
            return cmd_run(run_cfg, std::cout);
        }
        if (*attack) return cmd_attack(attack_cfg, std::cout);
        if (*analyze) {
            if (mutual_info_p >= 0.0) an_cfg.mutual_info_agreement = mutual_info_p;
            return cmd_analyze(an_cfg, std::cout);
        }
        if (*verify) return cmd_verify_transcript(verify_path, std::cout);
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCheckFailed;
    }
    return kExitUsage;
}
