#pragma once

#include "qkg/analysis.hpp"
#include "qkg/channel.hpp"
#include "qkg/protocol.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace qkg {

/// Eve's per-pulse interception data plus plaintext-attack bookkeeping.
struct AdversaryRecord {
    BitString bases;  // Eve's measurement basis per pulse
    BitString values; // her measured (or copied) value per pulse
    std::string strategy;
    BitString known_sifted;          // filled by the plaintext attack
    BigInt consistent_function_count = 0;

    std::size_t size() const { return values.size(); }
};

/// Intercept-resend attacker: measures every pulse in a uniformly random
/// basis with an ideal apparatus and re-emits her result in that basis.
class InterceptResendEve : public Interceptor {
public:
    explicit InterceptResendEve(Rng& rng) : rng_(&rng) {}

    Pulse intercept(const Pulse& pulse) override;

    /// Finalize the per-pulse log into a record.
    AdversaryRecord record() const;

private:
    Rng* rng_;
    std::vector<std::uint8_t> bases_log_;
    std::vector<std::uint8_t> values_log_;
};

/// The maximal-Eve idealization: copy Alice's full raw key into Eve's
/// record. Strictly more information than any physical attack yields.
AdversaryRecord oracle_raw_key(const RawKeyList& alice);

/// Vernam relation: key = ciphertext XOR plaintext.
BitString plaintext_recover_key(const BitString& ciphertext, const BitString& plaintext);

/// Largest n accepted by the exact consistent-function counters.
inline constexpr std::uint64_t kBruteForceGuard = 26;

/// Exact number of order-preserving selections of known_sifted.size()
/// positions from eve_raw_values whose selected values reproduce
/// known_sifted. Subsequence-counting dynamic programming in exact
/// integer arithmetic; guarded at n <= 26 (use the closed-form estimate
/// beyond that).
BigInt count_consistent_sifting_functions(const BitString& eve_raw_values,
                                          const BitString& known_sifted);

/// Flip set for a classical-channel tamperer.
struct TamperSpec {
    std::vector<std::uint64_t> flip_positions;
    enum class Target { alice_msg, bob_msg } target = Target::bob_msg;
};

/// Return the message with the listed bits flipped.
BitString tamper_masked_message(const BitString& message, const TamperSpec& spec);

enum class GuessStrategy { with_basis_info, uniform_sift_guess, maximum_likelihood_position };

/// Side data a guessing strategy may require; absent fields raise.
struct GuessContext {
    const std::vector<std::uint64_t>* true_kept_indices = nullptr; // with_basis_info
    std::size_t target_length = 0; // uniform_sift_guess / maximum_likelihood_position
    Rng* rng = nullptr;            // uniform_sift_guess
};

/// Eve's attempt at the sifted key from her interception record.
///   with_basis_info: sift her record with the true kept indices (the
///     BB84 baseline, where basis talk is public).
///   uniform_sift_guess: apply a uniformly random size-matching
///     selection.
///   maximum_likelihood_position: read sifted bit l from her raw bit at
///     the provenance-distribution mode (2l-2, clamped to the record).
BitString eve_guess_sifted_key(const AdversaryRecord& record, GuessStrategy strategy,
                               const GuessContext& ctx);

// ---------------------------------------------------------------------------
// Experiment drivers (session-level Monte Carlo around the primitives)

/// Paired-seed comparison of Eve's guessing strategies against the true
/// sifted key under full intercept-resend.
struct AgreementStats {
    std::uint64_t n = 0;
    std::uint64_t sifted_bits = 0;
    double with_basis_info = 0.0;
    double uniform_sift_guess = 0.0;
    double maximum_likelihood_position = 0.0;
    double qber = 0.0; // legitimate parties' sifted QBER under the attack
};
AgreementStats eve_agreement_experiment(std::uint64_t n, std::uint64_t seed);

/// Brute-force surviving-function statistics for the plaintext attack.
///
/// Two generative models are measured side by side:
///  - session-coupled: real sessions (epsilon = 0), conditioned on sifted
///    length exactly n/2; Eve holds the oracle copy of the raw key and
///    counts selections reproducing the true sifted key. Overlapping
///    selections are correlated, which inflates the mean above the
///    closed-form bound.
///  - reference instances: uniform raw values against an independent
///    uniform n/2-bit target, for which the closed form
///    C(n,n/2)/2^(n/2) is the exact expectation.
struct PlaintextAttackStats {
    std::uint64_t n = 0;
    std::uint64_t sessions = 0;
    double closed_form_bound = 0.0;      // C(n,n/2)/2^(n/2)
    double session_mean = 0.0;           // session-coupled arithmetic mean
    double session_geometric_mean = 0.0; // 2^mean(log2 count)
    double session_mean_log2 = 0.0;      // for the Jensen-gap report
    double reference_mean = 0.0;         // independent-target mean
    std::uint64_t min_count = 0;         // session-coupled minimum (>= 1 expected)
    std::uint64_t condition_redraws = 0; // sessions redrawn to hit length n/2
};
PlaintextAttackStats oracle_plaintext_experiment(std::uint64_t n, std::uint64_t sessions,
                                                 std::uint64_t seed);

/// Eve's per-bit information (via the maximum-likelihood position guess)
/// as the raw key grows. The protocol predicts a shrinking trend; the
/// verdict only asserts that no significant increase shows up.
struct InformationTrendRow {
    std::uint64_t n = 0;
    std::uint64_t sifted_bits = 0; // pooled over the sessions
    double agreement = 0.0;        // pooled ML-position agreement
    double mutual_information = 0.0;
};
struct InformationTrend {
    std::vector<InformationTrendRow> rows;
    bool increase_shown = false; // any adjacent step up at 3 sigma
};
InformationTrend eve_information_trend(const std::vector<std::uint64_t>& raw_lengths,
                                       std::uint64_t sessions_each, std::uint64_t seed);

/// Masked-message tampering vs untampered baseline, paired seeds.
/// decrease_shown is the one-sided 3-sigma verdict "tampering lowered
/// the measured QBER" (the protocol predicts it never holds on average).
struct TamperStats {
    std::uint64_t n = 0;
    std::uint64_t sessions = 0;
    std::uint64_t flips_per_session = 0;
    double mean_qber_baseline = 0.0;
    double mean_qber_tampered = 0.0;
    double diff_stderr = 0.0;
    bool decrease_shown = false;
};
TamperStats tamper_experiment(std::uint64_t n, std::uint64_t sessions,
                              std::uint64_t flips_per_session, double epsilon,
                              std::uint64_t seed);

} // namespace qkg
