#pragma once

#include "qkg/cli/runner.hpp"

#include <iosfwd>
#include <optional>
#include <string>

namespace qkg::cli {

// exit codes shared by every subcommand
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

struct RunCommandConfig {
    RunConfig run;
    std::string transcript_path; // empty = don't persist
};
int cmd_run(const RunCommandConfig& cfg, std::ostream& out);

struct AttackCommandConfig {
    std::string adversary = "intercept_resend"; // intercept_resend | oracle_plaintext | tamper
    std::uint64_t n = 0;                        // 0 = per-adversary default
    std::uint64_t sessions = 0;                 // 0 = per-adversary default
    std::uint64_t seed = 1;
    std::uint64_t flips = 0; // tamper only; 0 = n/10
    double epsilon = 0.0;
};
int cmd_attack(const AttackCommandConfig& cfg, std::ostream& out);

struct AnalyzeCommandConfig {
    bool info_gain = false;
    bool provenance = false;
    bool gaussian = false;
    bool growth = false;
    std::optional<double> mutual_info_agreement;
    std::uint64_t n = 0;  // info-gain sweep upper bound
    std::uint64_t l = 0;  // provenance / gaussian position
    bool empirical = false;
    std::uint64_t trials = 1000000;
    std::uint64_t seed = 1;
    double cutoff = 1e-9;
    std::uint64_t growth_lo = 4, growth_hi = 64;
    std::string out_path; // CSV destination; empty = stdout
};
int cmd_analyze(const AnalyzeCommandConfig& cfg, std::ostream& out);

int cmd_verify_transcript(const std::string& path, std::ostream& out);

} // namespace qkg::cli
