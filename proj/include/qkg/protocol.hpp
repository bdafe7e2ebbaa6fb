#pragma once

#include "qkg/bitstring.hpp"
#include "qkg/channel.hpp"
#include "qkg/rng.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace qkg {

/// Per-party record of one (basis, value) pair per transmitted qubit.
class RawKeyList {
public:
    RawKeyList() = default;
    RawKeyList(BitString bases, BitString values);

    std::size_t size() const { return bases_.size(); }
    const BitString& bases() const { return bases_; }
    const BitString& values() const { return values_; }
    std::pair<int, int> entry(std::size_t i) const { return {bases_.bit(i), values_.bit(i)}; }

    bool operator==(const RawKeyList& other) const = default;

private:
    BitString bases_;
    BitString values_;
};

/// Survivors of sifting: the kept bits plus the raw-key positions they
/// came from (strictly increasing).
struct SiftedKey {
    BitString bits;
    std::vector<std::uint64_t> kept_indices;

    bool operator==(const SiftedKey& other) const = default;
};

enum class SiftMode { encrypted, plain_bb84 };

struct SessionConfig {
    std::uint64_t n = 0;
    ChannelConfig channel;
    SiftMode sift_mode = SiftMode::encrypted;
    double sacrifice_fraction = 0.0; // in [0,1); 0 skips error estimation
    double refresh_fraction = 0.5;   // in [0,1]; fraction of n reinvested into the secret
    double qber_abort_threshold = 0.12;

    void validate() const;
};

/// Full record of one protocol run.
struct SessionTranscript {
    std::uint64_t n = 0;
    std::uint64_t seed = 0;
    std::uint64_t session_index = 0;
    SiftMode sift_mode = SiftMode::encrypted;
    double epsilon = 0.0;

    RawKeyList alice_raw;
    RawKeyList bob_raw;
    SharedSecret secret_initial;
    BitString masked_alice; // in plain_bb84 mode: the clear basis list as sent
    BitString masked_bob;
    std::vector<std::uint64_t> kept_indices;
    SiftedKey sifted_alice;
    SiftedKey sifted_bob;
    double qber_estimate = 0.0;
    std::vector<std::uint64_t> sacrificed_indices; // positions into the sifted key
    std::uint64_t refresh_budget_bits = 0;
    std::uint64_t net_key_bits = 0;
    BitString net_key; // Alice-side usable bits after sacrifice and refresh
    SharedSecret secret_refreshed;
    bool aborted = false;
    bool insufficient_yield = false;
};

/// The independent randomness streams one session consumes.
struct SessionRngs {
    Rng alice;
    Rng bob;
    Rng estimation;

    static SessionRngs for_session(std::uint64_t seed, std::uint64_t session_index);
};

/// BB84 raw key production: n pulses prepared by Alice with uniform
/// (basis, value), passed through the channel (optionally intercepted),
/// measured by Bob in uniform bases.
std::pair<RawKeyList, RawKeyList> produce_raw_keys(const SessionConfig& cfg,
                                                   Interceptor* interceptor,
                                                   Rng& alice_rng, Rng& bob_rng);

/// M = bases XOR secret_half. Warns if the half is all-zero (degenerate
/// masking: the message equals the clear bases).
BitString masked_basis_message(const RawKeyList& raw, const BitString& secret_half);

/// B = M XOR secret_half (the inverse of masked_basis_message).
BitString unmask_basis_message(const BitString& message, const BitString& secret_half);

/// Keep exactly the positions where both basis strings agree, in order.
SiftedKey sift(const RawKeyList& own, const BitString& own_bases, const BitString& peer_bases);

struct QberEstimate {
    double qber = 0.0;
    std::vector<std::uint64_t> sacrificed; // sifted-key positions, ascending
};

/// Publicly compare a uniformly random subset of ceil(fraction * len)
/// sifted positions (or all of them with full_compare). Compared
/// positions are burned: callers must drop them from the usable key.
QberEstimate estimate_qber(const SiftedKey& alice, const SiftedKey& bob, double sacrifice_fraction,
                           Rng& rng, bool full_compare = false);

struct RefreshResult {
    SharedSecret secret;
    BitString net_key;
    std::uint64_t budget_bits = 0;
    bool insufficient_yield = false;
};

/// Fold the first ceil(refresh_fraction * next_n) bits of the sifted
/// remainder into the 2n-bit secret by XOR, each fresh bit used exactly
/// once, on a window that rotates across sessions (secret.cursor()).
/// next_n defaults to the current half-length. If the remainder cannot
/// cover the budget the secret is left unchanged and the session yields
/// no key.
RefreshResult refresh_secret(const SharedSecret& old_secret, const BitString& sifted_remainder,
                             double refresh_fraction, std::uint64_t next_n = 0);

/// Same with the bit budget given directly (replay/verification path).
RefreshResult refresh_secret_with_budget(const SharedSecret& old_secret,
                                         const BitString& sifted_remainder,
                                         std::uint64_t budget);

/// One full protocol run: raw keys -> (masked) basis exchange -> sift ->
/// QBER estimation -> secret refresh. In plain_bb84 mode the bases go
/// out in clear and the refresh budget is zero.
SessionTranscript run_session(const SessionConfig& cfg, const SharedSecret& secret,
                              Interceptor* interceptor, SessionRngs& rngs);

} // namespace qkg
