#pragma once

#include "qkg/protocol.hpp"

#include <string>
#include <vector>

namespace qkg::cli {

enum class AdversaryKind { none, intercept_resend };

struct RunConfig {
    std::uint64_t n = 1000;
    std::uint64_t sessions = 10;
    std::uint64_t seed = 1;
    double epsilon = 0.0;
    SiftMode mode = SiftMode::encrypted;
    AdversaryKind adversary = AdversaryKind::none;
    double sacrifice_fraction = 0.0;
    double refresh_fraction = 0.5;
    double abort_threshold = 0.12;
    unsigned threads = 1;

    SessionConfig session_config() const;
};

/// Run `sessions` independent seeded sessions, fanned out over worker
/// threads with per-session rng streams. The result order is fixed by
/// session index, so the output is identical for any thread count.
std::vector<SessionTranscript> run_sessions(const RunConfig& cfg);

struct RunSummary {
    std::uint64_t sessions = 0;
    double mean_sifted_length = 0.0;
    double mean_qber_estimate = 0.0; // over sessions that estimated
    double mean_sifted_qber = 0.0;   // full alice/bob comparison
    double mean_net_key_bits = 0.0;
    std::uint64_t total_net_key_bits = 0;
    std::uint64_t aborted_sessions = 0;
    std::uint64_t insufficient_yield_sessions = 0;
};
RunSummary summarize(const std::vector<SessionTranscript>& transcripts);

} // namespace qkg::cli
