#include "qkg/protocol.hpp"

#include "qkg/framing.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>
#include <stdexcept>

namespace qkg {

RawKeyList::RawKeyList(BitString bases, BitString values)
    : bases_(std::move(bases)), values_(std::move(values)) {
    if (bases_.size() != values_.size())
        throw std::invalid_argument("RawKeyList: bases and values must have equal length");
}

void SessionConfig::validate() const {
    if (n == 0) throw std::invalid_argument("SessionConfig: n must be positive");
    channel.validate();
    if (!(sacrifice_fraction >= 0.0 && sacrifice_fraction < 1.0))
        throw std::invalid_argument("SessionConfig: sacrifice_fraction must be in [0,1)");
    if (!(refresh_fraction >= 0.0 && refresh_fraction <= 1.0))
        throw std::invalid_argument("SessionConfig: refresh_fraction must be in [0,1]");
    if (!(qber_abort_threshold >= 0.0 && qber_abort_threshold <= 1.0))
        throw std::invalid_argument("SessionConfig: qber_abort_threshold must be in [0,1]");
}

SessionRngs SessionRngs::for_session(std::uint64_t seed, std::uint64_t session_index) {
    return SessionRngs{
        Rng(seed, Rng::session_stream(session_index, Rng::kRoleAlice)),
        Rng(seed, Rng::session_stream(session_index, Rng::kRoleBob)),
        Rng(seed, Rng::session_stream(session_index, Rng::kRoleEstimation))};
}

std::pair<RawKeyList, RawKeyList> produce_raw_keys(const SessionConfig& cfg,
                                                   Interceptor* interceptor,
                                                   Rng& alice_rng, Rng& bob_rng) {
    cfg.validate();
    const std::uint64_t n = cfg.n;
    BitString alice_bases(n), alice_values(n), bob_bases(n), bob_values(n);

    for (std::uint64_t i = 0; i < n; ++i) {
        const Pulse prepared{alice_rng.bit(), alice_rng.bit(), i};
        if (prepared.basis) alice_bases.set_bit(i, 1);
        if (prepared.value) alice_values.set_bit(i, 1);

        const Pulse arriving = transmit(prepared, interceptor);

        const int bob_basis = bob_rng.bit();
        if (bob_basis) bob_bases.set_bit(i, 1);
        if (measure(arriving, bob_basis, cfg.channel, bob_rng)) bob_values.set_bit(i, 1);
    }
    return {RawKeyList(std::move(alice_bases), std::move(alice_values)),
            RawKeyList(std::move(bob_bases), std::move(bob_values))};
}

BitString masked_basis_message(const RawKeyList& raw, const BitString& secret_half) {
    if (secret_half.size() != raw.size())
        throw std::invalid_argument("masked_basis_message: secret half length != n");
    if (raw.size() > 0 && secret_half.all_zero())
        std::cerr << "warning: all-zero secret half, basis message goes out in clear\n";
    return xor_mask(raw.bases(), secret_half);
}

BitString unmask_basis_message(const BitString& message, const BitString& secret_half) {
    return xor_mask(message, secret_half);
}

SiftedKey sift(const RawKeyList& own, const BitString& own_bases, const BitString& peer_bases) {
    if (own_bases.size() != own.size() || peer_bases.size() != own.size())
        throw std::invalid_argument("sift: basis list length != raw key length");
    SiftedKey out;
    const BitString agreement = xor_mask(own_bases, peer_bases); // 0 where bases agree
    const std::size_t kept = own.size() - agreement.count_ones();
    out.kept_indices.reserve(kept);
    BitString bits(kept);
    std::size_t k = 0;
    for (std::size_t i = 0; i < own.size(); ++i) {
        if (agreement.bit(i) == 0) {
            out.kept_indices.push_back(i);
            if (own.values().bit(i)) bits.set_bit(k, 1);
            ++k;
        }
    }
    out.bits = std::move(bits);
    return out;
}

QberEstimate estimate_qber(const SiftedKey& alice, const SiftedKey& bob, double sacrifice_fraction,
                           Rng& rng, bool full_compare) {
    const std::size_t len = alice.bits.size();
    if (len == 0 || bob.bits.size() != len)
        throw std::invalid_argument("estimate_qber: sifted keys empty or of different length");

    QberEstimate out;
    if (full_compare) {
        out.sacrificed.resize(len);
        std::iota(out.sacrificed.begin(), out.sacrificed.end(), 0);
        out.qber = hamming_fraction(alice.bits, bob.bits);
        return out;
    }
    if (!(sacrifice_fraction > 0.0 && sacrifice_fraction < 1.0))
        throw std::invalid_argument("estimate_qber: fraction must be in (0,1) unless full_compare");
    const std::size_t count =
        static_cast<std::size_t>(std::ceil(sacrifice_fraction * static_cast<double>(len)));
    if (count == 0) throw std::invalid_argument("estimate_qber: sacrifice subset is empty");

    // partial Fisher-Yates for a uniform subset without replacement
    std::vector<std::uint64_t> pool(len);
    std::iota(pool.begin(), pool.end(), 0);
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.uniform_index(len - i));
        std::swap(pool[i], pool[j]);
    }
    out.sacrificed.assign(pool.begin(), pool.begin() + count);
    std::sort(out.sacrificed.begin(), out.sacrificed.end());

    std::size_t mismatches = 0;
    for (const std::uint64_t p : out.sacrificed)
        if (alice.bits.bit(p) != bob.bits.bit(p)) ++mismatches;
    out.qber = static_cast<double>(mismatches) / static_cast<double>(count);
    return out;
}

RefreshResult refresh_secret(const SharedSecret& old_secret, const BitString& sifted_remainder,
                             double refresh_fraction, std::uint64_t next_n) {
    if (!(refresh_fraction >= 0.0 && refresh_fraction <= 1.0))
        throw std::invalid_argument("refresh_secret: refresh_fraction must be in [0,1]");
    const std::uint64_t n = next_n == 0 ? old_secret.half_length() : next_n;
    const auto budget =
        static_cast<std::uint64_t>(std::ceil(refresh_fraction * static_cast<double>(n)));
    return refresh_secret_with_budget(old_secret, sifted_remainder, budget);
}

RefreshResult refresh_secret_with_budget(const SharedSecret& old_secret,
                                         const BitString& sifted_remainder,
                                         std::uint64_t budget) {
    RefreshResult out;
    out.budget_bits = budget;
    if (budget == 0) {
        out.secret = old_secret;
        out.net_key = sifted_remainder;
        return out;
    }
    if (sifted_remainder.size() < budget) {
        out.secret = old_secret;
        out.net_key = BitString(0);
        out.insufficient_yield = true;
        return out;
    }

    BitString parent = old_secret.parent();
    const std::size_t span = parent.size();
    for (std::uint64_t j = 0; j < budget; ++j) {
        if (sifted_remainder.bit(j))
            parent.flip_bit((old_secret.cursor() + j) % span);
    }
    out.secret = SharedSecret(std::move(parent), (old_secret.cursor() + budget) % span);
    out.net_key = sifted_remainder.slice(budget, sifted_remainder.size() - budget);
    return out;
}

SessionTranscript run_session(const SessionConfig& cfg, const SharedSecret& secret,
                              Interceptor* interceptor, SessionRngs& rngs) {
    cfg.validate();
    if (secret.half_length() != cfg.n)
        throw std::invalid_argument("run_session: secret half length != n");

    SessionTranscript t;
    t.n = cfg.n;
    t.sift_mode = cfg.sift_mode;
    t.epsilon = cfg.channel.intrinsic_flip_prob;
    t.secret_initial = secret;

    auto [alice_raw, bob_raw] = produce_raw_keys(cfg, interceptor, rngs.alice, rngs.bob);

    if (cfg.sift_mode == SiftMode::encrypted) {
        t.masked_alice = masked_basis_message(alice_raw, secret.alice_half());
        t.masked_bob = masked_basis_message(bob_raw, secret.bob_half());
    } else {
        t.masked_alice = alice_raw.bases();
        t.masked_bob = bob_raw.bases();
    }

    // the classical exchange goes over the framing codec, the same wire
    // format an out-of-process peer would speak
    const MsgType msg_type =
        cfg.sift_mode == SiftMode::encrypted ? MsgType::masked_bases : MsgType::clear_bases;
    const BitString alice_received =
        decode_message(encode_message(ChannelMessage{0, 1, msg_type, t.masked_bob})).payload;
    const BitString bob_received =
        decode_message(encode_message(ChannelMessage{0, 0, msg_type, t.masked_alice})).payload;

    BitString alice_view_of_bob, bob_view_of_alice;
    if (cfg.sift_mode == SiftMode::encrypted) {
        alice_view_of_bob = unmask_basis_message(alice_received, secret.bob_half());
        bob_view_of_alice = unmask_basis_message(bob_received, secret.alice_half());
    } else {
        alice_view_of_bob = alice_received;
        bob_view_of_alice = bob_received;
    }

    t.sifted_alice = sift(alice_raw, alice_raw.bases(), alice_view_of_bob);
    t.sifted_bob = sift(bob_raw, bob_raw.bases(), bob_view_of_alice);
    t.kept_indices = t.sifted_alice.kept_indices;

    t.alice_raw = std::move(alice_raw);
    t.bob_raw = std::move(bob_raw);

    if (cfg.sacrifice_fraction > 0.0 && t.sifted_alice.bits.size() > 0) {
        const QberEstimate est =
            estimate_qber(t.sifted_alice, t.sifted_bob, cfg.sacrifice_fraction, rngs.estimation);
        t.qber_estimate = est.qber;
        t.sacrificed_indices = est.sacrificed;
    }

    if (t.qber_estimate > cfg.qber_abort_threshold) {
        // key discarded; the masking bits of the secret are burned either way
        t.aborted = true;
        t.secret_refreshed = secret;
        t.net_key = BitString(0);
        t.net_key_bits = 0;
        return t;
    }

    // usable remainder: sifted bits minus the publicly compared ones
    const std::size_t sifted_len = t.sifted_alice.bits.size();
    BitString remainder(sifted_len - t.sacrificed_indices.size());
    {
        std::size_t k = 0, next_sac = 0;
        for (std::size_t p = 0; p < sifted_len; ++p) {
            if (next_sac < t.sacrificed_indices.size() && t.sacrificed_indices[next_sac] == p) {
                ++next_sac;
                continue;
            }
            if (t.sifted_alice.bits.bit(p)) remainder.set_bit(k, 1);
            ++k;
        }
    }

    const double refresh_fraction =
        cfg.sift_mode == SiftMode::encrypted ? cfg.refresh_fraction : 0.0;
    RefreshResult refresh = refresh_secret(secret, remainder, refresh_fraction, cfg.n);
    t.refresh_budget_bits = refresh.budget_bits;
    t.insufficient_yield = refresh.insufficient_yield;
    t.secret_refreshed = refresh.secret;
    t.net_key = std::move(refresh.net_key);
    t.net_key_bits = t.net_key.size();
    return t;
}

} // namespace qkg
