#include "qkg/cli/runner.hpp"

#include "qkg/adversary.hpp"

#include <stdexcept>
#include <thread>

namespace qkg::cli {

SessionConfig RunConfig::session_config() const {
    SessionConfig s;
    s.n = n;
    s.channel.intrinsic_flip_prob = epsilon;
    s.sift_mode = mode;
    s.sacrifice_fraction = sacrifice_fraction;
    s.refresh_fraction = refresh_fraction;
    s.qber_abort_threshold = abort_threshold;
    s.validate();
    return s;
}

namespace {

SessionTranscript run_one(const RunConfig& cfg, const SessionConfig& session_cfg,
                          std::uint64_t index) {
    SessionRngs rngs = SessionRngs::for_session(cfg.seed, index);
    Rng secret_rng(cfg.seed, Rng::session_stream(index, Rng::kRoleSecret));
    const SharedSecret secret = SharedSecret::generate(secret_rng, cfg.n);

    SessionTranscript t;
    if (cfg.adversary == AdversaryKind::intercept_resend) {
        Rng eve_rng(cfg.seed, Rng::session_stream(index, Rng::kRoleEve));
        InterceptResendEve eve(eve_rng);
        t = run_session(session_cfg, secret, &eve, rngs);
    } else {
        t = run_session(session_cfg, secret, nullptr, rngs);
    }
    t.seed = cfg.seed;
    t.session_index = index;
    return t;
}

} // namespace

std::vector<SessionTranscript> run_sessions(const RunConfig& cfg) {
    const SessionConfig session_cfg = cfg.session_config();
    std::vector<SessionTranscript> out(cfg.sessions);

    const unsigned workers =
        std::max(1u, std::min<unsigned>(cfg.threads, std::thread::hardware_concurrency()));
    if (workers == 1 || cfg.sessions < 2) {
        for (std::uint64_t s = 0; s < cfg.sessions; ++s) out[s] = run_one(cfg, session_cfg, s);
        return out;
    }

    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::uint64_t s = w; s < cfg.sessions; s += workers)
                out[s] = run_one(cfg, session_cfg, s);
        });
    }
    for (auto& th : pool) th.join();
    return out;
}

RunSummary summarize(const std::vector<SessionTranscript>& transcripts) {
    RunSummary sum;
    sum.sessions = transcripts.size();
    if (transcripts.empty()) return sum;

    double sifted = 0.0, qber_est = 0.0, sifted_qber = 0.0, net = 0.0;
    std::uint64_t estimated = 0, compared = 0;
    for (const auto& t : transcripts) {
        sifted += static_cast<double>(t.sifted_alice.bits.size());
        net += static_cast<double>(t.net_key_bits);
        sum.total_net_key_bits += t.net_key_bits;
        if (t.aborted) ++sum.aborted_sessions;
        if (t.insufficient_yield) ++sum.insufficient_yield_sessions;
        if (!t.sacrificed_indices.empty()) {
            qber_est += t.qber_estimate;
            ++estimated;
        }
        if (!t.sifted_alice.bits.empty()) {
            sifted_qber += hamming_fraction(t.sifted_alice.bits, t.sifted_bob.bits);
            ++compared;
        }
    }
    const double count = static_cast<double>(transcripts.size());
    sum.mean_sifted_length = sifted / count;
    sum.mean_net_key_bits = net / count;
    if (estimated) sum.mean_qber_estimate = qber_est / static_cast<double>(estimated);
    if (compared) sum.mean_sifted_qber = sifted_qber / static_cast<double>(compared);
    return sum;
}

} // namespace qkg::cli
