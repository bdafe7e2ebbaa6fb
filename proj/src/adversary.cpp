#include "qkg/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace qkg {

Pulse InterceptResendEve::intercept(const Pulse& pulse) {
    const int basis = rng_->bit();
    // ideal apparatus: compatible basis reads the value exactly,
    // incompatible basis is a fair coin
    const int value = basis == pulse.basis ? pulse.value : rng_->bit();
    bases_log_.push_back(static_cast<std::uint8_t>(basis));
    values_log_.push_back(static_cast<std::uint8_t>(value));
    return Pulse{basis, value, pulse.index};
}

AdversaryRecord InterceptResendEve::record() const {
    AdversaryRecord r;
    r.bases = BitString::from_bools(bases_log_);
    r.values = BitString::from_bools(values_log_);
    r.strategy = "intercept_resend";
    return r;
}

AdversaryRecord oracle_raw_key(const RawKeyList& alice) {
    AdversaryRecord r;
    r.bases = alice.bases();
    r.values = alice.values();
    r.strategy = "oracle_raw_key";
    return r;
}

BitString plaintext_recover_key(const BitString& ciphertext, const BitString& plaintext) {
    return xor_mask(ciphertext, plaintext);
}

BigInt count_consistent_sifting_functions(const BitString& eve_raw_values,
                                          const BitString& known_sifted) {
    const std::size_t n = eve_raw_values.size();
    const std::size_t m = known_sifted.size();
    if (m > n)
        throw std::invalid_argument(
            "count_consistent_sifting_functions: sifted key longer than raw key");
    if (n > kBruteForceGuard)
        throw std::invalid_argument(
            "count_consistent_sifting_functions: n exceeds the brute-force guard; "
            "use the closed-form estimator");

    // dp[j] = number of order-preserving selections of the first j sifted
    // bits from the raw prefix scanned so far
    std::vector<BigInt> dp(m + 1);
    dp[0] = 1;
    for (std::size_t i = 0; i < n; ++i) {
        const int raw_bit = eve_raw_values.bit(i);
        for (std::size_t j = std::min(m, i + 1); j >= 1; --j) {
            if (known_sifted.bit(j - 1) == raw_bit) dp[j] += dp[j - 1];
        }
    }
    return dp[m];
}

BitString tamper_masked_message(const BitString& message, const TamperSpec& spec) {
    BitString out = message;
    for (const std::uint64_t p : spec.flip_positions) {
        if (p >= message.size())
            throw std::out_of_range("tamper_masked_message: flip position out of range");
        out.flip_bit(p);
    }
    return out;
}

BitString eve_guess_sifted_key(const AdversaryRecord& record, GuessStrategy strategy,
                               const GuessContext& ctx) {
    const std::size_t n = record.values.size();
    switch (strategy) {
    case GuessStrategy::with_basis_info: {
        if (ctx.true_kept_indices == nullptr)
            throw std::invalid_argument("eve_guess_sifted_key: with_basis_info needs kept indices");
        const auto& kept = *ctx.true_kept_indices;
        BitString guess(kept.size());
        for (std::size_t k = 0; k < kept.size(); ++k)
            if (record.values.bit(kept[k])) guess.set_bit(k, 1);
        return guess;
    }
    case GuessStrategy::uniform_sift_guess: {
        if (ctx.rng == nullptr || ctx.target_length == 0)
            throw std::invalid_argument("eve_guess_sifted_key: uniform_sift_guess needs rng and length");
        if (ctx.target_length > n)
            throw std::invalid_argument("eve_guess_sifted_key: target longer than record");
        // uniform subset without replacement, then applied in index order
        std::vector<std::uint64_t> pool(n);
        std::iota(pool.begin(), pool.end(), 0);
        for (std::size_t i = 0; i < ctx.target_length; ++i) {
            const std::size_t j = i + static_cast<std::size_t>(ctx.rng->uniform_index(n - i));
            std::swap(pool[i], pool[j]);
        }
        std::sort(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(ctx.target_length));
        BitString guess(ctx.target_length);
        for (std::size_t k = 0; k < ctx.target_length; ++k)
            if (record.values.bit(pool[k])) guess.set_bit(k, 1);
        return guess;
    }
    case GuessStrategy::maximum_likelihood_position: {
        if (ctx.target_length == 0)
            throw std::invalid_argument("eve_guess_sifted_key: maximum_likelihood_position needs length");
        BitString guess(ctx.target_length);
        for (std::size_t k = 0; k < ctx.target_length; ++k) {
            const std::uint64_t l = k + 1;
            // provenance mode: i = 2l-2 for l >= 2 (tied with 2l-1), i = 1 for l = 1
            std::uint64_t i = l == 1 ? 1 : 2 * l - 2;
            if (i > n) i = n;
            if (record.values.bit(i - 1)) guess.set_bit(k, 1);
        }
        return guess;
    }
    }
    throw std::logic_error("eve_guess_sifted_key: unknown strategy");
}

namespace {

double agreement_fraction(const BitString& a, const BitString& b) {
    return 1.0 - hamming_fraction(a, b);
}

} // namespace

AgreementStats eve_agreement_experiment(std::uint64_t n, std::uint64_t seed) {
    SessionConfig cfg;
    cfg.n = n;

    SessionRngs rngs = SessionRngs::for_session(seed, 0);
    Rng eve_rng(seed, Rng::session_stream(0, Rng::kRoleEve));
    Rng guess_rng(seed, Rng::session_stream(0, Rng::kRoleGuess));

    InterceptResendEve eve(eve_rng);
    auto [alice_raw, bob_raw] = produce_raw_keys(cfg, &eve, rngs.alice, rngs.bob);

    const SiftedKey true_sifted = sift(alice_raw, alice_raw.bases(), bob_raw.bases());
    const SiftedKey bob_sifted = sift(bob_raw, bob_raw.bases(), alice_raw.bases());
    const AdversaryRecord record = eve.record();

    AgreementStats stats;
    stats.n = n;
    stats.sifted_bits = true_sifted.bits.size();
    stats.qber = hamming_fraction(true_sifted.bits, bob_sifted.bits);

    GuessContext with_info;
    with_info.true_kept_indices = &true_sifted.kept_indices;
    stats.with_basis_info = agreement_fraction(
        eve_guess_sifted_key(record, GuessStrategy::with_basis_info, with_info), true_sifted.bits);

    GuessContext uniform;
    uniform.target_length = true_sifted.bits.size();
    uniform.rng = &guess_rng;
    stats.uniform_sift_guess = agreement_fraction(
        eve_guess_sifted_key(record, GuessStrategy::uniform_sift_guess, uniform), true_sifted.bits);

    GuessContext ml;
    ml.target_length = true_sifted.bits.size();
    stats.maximum_likelihood_position = agreement_fraction(
        eve_guess_sifted_key(record, GuessStrategy::maximum_likelihood_position, ml),
        true_sifted.bits);
    return stats;
}

PlaintextAttackStats oracle_plaintext_experiment(std::uint64_t n, std::uint64_t sessions,
                                                 std::uint64_t seed) {
    if (n % 2 != 0 || n < 2)
        throw std::invalid_argument("oracle_plaintext_experiment: n must be even and >= 2");
    if (n > kBruteForceGuard)
        throw std::invalid_argument("oracle_plaintext_experiment: n exceeds the brute-force guard");

    PlaintextAttackStats stats;
    stats.n = n;
    stats.sessions = sessions;
    stats.closed_form_bound = surviving_functions_bound(n).value;
    stats.min_count = ~std::uint64_t{0};

    SessionConfig cfg;
    cfg.n = n;

    double sum_counts = 0.0;
    double sum_log2 = 0.0;
    double sum_reference = 0.0;
    Rng reference_rng(seed, ~std::uint64_t{0}); // outside every session stream block

    for (std::uint64_t s = 0; s < sessions; ++s) {
        // session-coupled: raw key production and sifting, conditioned on
        // sifted length n/2 (the even-split case the closed form assumes)
        SiftedKey sifted;
        RawKeyList alice_raw;
        std::uint64_t attempt = 0;
        while (true) {
            SessionRngs rngs = SessionRngs::for_session(seed, s * 1024 + attempt);
            auto [alice, bob] = produce_raw_keys(cfg, nullptr, rngs.alice, rngs.bob);
            sifted = sift(alice, alice.bases(), bob.bases());
            if (sifted.bits.size() == n / 2) {
                alice_raw = std::move(alice);
                break;
            }
            ++stats.condition_redraws;
            ++attempt;
        }
        AdversaryRecord record = oracle_raw_key(alice_raw);
        record.known_sifted = sifted.bits; // what the plaintext attack reveals
        record.consistent_function_count =
            count_consistent_sifting_functions(record.values, record.known_sifted);
        const double c = static_cast<double>(record.consistent_function_count);
        sum_counts += c;
        sum_log2 += std::log2(c);
        stats.min_count =
            std::min(stats.min_count, record.consistent_function_count.convert_to<std::uint64_t>());

        // reference instance: independent uniform target, the model under
        // which the closed form is the exact expectation
        const BitString raw = reference_rng.bits(n);
        const BitString target = reference_rng.bits(n / 2);
        sum_reference +=
            static_cast<double>(count_consistent_sifting_functions(raw, target));
    }
    const double denom = static_cast<double>(sessions);
    stats.session_mean = sum_counts / denom;
    stats.session_mean_log2 = sum_log2 / denom;
    stats.session_geometric_mean = std::exp2(sum_log2 / denom);
    stats.reference_mean = sum_reference / denom;
    return stats;
}

InformationTrend eve_information_trend(const std::vector<std::uint64_t>& raw_lengths,
                                       std::uint64_t sessions_each, std::uint64_t seed) {
    if (raw_lengths.size() < 2 || sessions_each == 0)
        throw std::invalid_argument("eve_information_trend: need >= 2 lengths and sessions > 0");

    InformationTrend trend;
    SessionConfig cfg;
    for (std::size_t k = 0; k < raw_lengths.size(); ++k) {
        cfg.n = raw_lengths[k];
        std::uint64_t agreeing = 0, total = 0;
        for (std::uint64_t s = 0; s < sessions_each; ++s) {
            const std::uint64_t index = k * sessions_each + s;
            SessionRngs rngs = SessionRngs::for_session(seed, index);
            Rng eve_rng(seed, Rng::session_stream(index, Rng::kRoleEve));
            InterceptResendEve eve(eve_rng);
            auto [alice, bob] = produce_raw_keys(cfg, &eve, rngs.alice, rngs.bob);
            const SiftedKey sifted = sift(alice, alice.bases(), bob.bases());
            GuessContext ctx;
            ctx.target_length = sifted.bits.size();
            const BitString guess =
                eve_guess_sifted_key(eve.record(), GuessStrategy::maximum_likelihood_position, ctx);
            total += sifted.bits.size();
            agreeing += sifted.bits.size() - hamming_distance(guess, sifted.bits);
        }
        InformationTrendRow row;
        row.n = cfg.n;
        row.sifted_bits = total;
        row.agreement = static_cast<double>(agreeing) / static_cast<double>(total);
        row.mutual_information = mutual_information_per_bit(row.agreement);
        trend.rows.push_back(row);
    }
    for (std::size_t k = 1; k < trend.rows.size(); ++k) {
        const auto& prev = trend.rows[k - 1];
        const auto& next = trend.rows[k];
        const double sigma = std::sqrt(0.25 / static_cast<double>(prev.sifted_bits) +
                                       0.25 / static_cast<double>(next.sifted_bits));
        if (next.agreement - prev.agreement > 3.0 * sigma) trend.increase_shown = true;
    }
    return trend;
}

TamperStats tamper_experiment(std::uint64_t n, std::uint64_t sessions,
                              std::uint64_t flips_per_session, double epsilon,
                              std::uint64_t seed) {
    if (flips_per_session > n)
        throw std::invalid_argument("tamper_experiment: more flips than message bits");

    SessionConfig cfg;
    cfg.n = n;
    cfg.channel.intrinsic_flip_prob = epsilon;

    TamperStats stats;
    stats.n = n;
    stats.sessions = sessions;
    stats.flips_per_session = flips_per_session;

    // measured QBER: compare Alice's and Bob's raw values over the raw
    // indices Alice decided to keep (full compare; estimation noise would
    // only widen the test)
    const auto measured_qber = [](const RawKeyList& alice, const RawKeyList& bob,
                                  const BitString& alice_view_of_bob) {
        std::size_t kept = 0, mismatched = 0;
        for (std::size_t i = 0; i < alice.size(); ++i) {
            if (alice.bases().bit(i) == alice_view_of_bob.bit(i)) {
                ++kept;
                if (alice.values().bit(i) != bob.values().bit(i)) ++mismatched;
            }
        }
        return kept == 0 ? 0.0 : static_cast<double>(mismatched) / static_cast<double>(kept);
    };

    std::vector<double> diffs(sessions);
    double sum_base = 0.0, sum_tampered = 0.0;
    for (std::uint64_t s = 0; s < sessions; ++s) {
        SessionRngs rngs = SessionRngs::for_session(seed, s);
        Rng secret_rng(seed, Rng::session_stream(s, Rng::kRoleSecret));
        Rng tamper_rng(seed, Rng::session_stream(s, Rng::kRoleTamper));
        const SharedSecret secret = SharedSecret::generate(secret_rng, n);

        auto [alice_raw, bob_raw] = produce_raw_keys(cfg, nullptr, rngs.alice, rngs.bob);
        const BitString masked_bob = masked_basis_message(bob_raw, secret.bob_half());

        const BitString untampered_view = unmask_basis_message(masked_bob, secret.bob_half());
        const double qber_base = measured_qber(alice_raw, bob_raw, untampered_view);

        TamperSpec spec;
        spec.flip_positions.reserve(flips_per_session);
        std::vector<std::uint64_t> pool(n);
        std::iota(pool.begin(), pool.end(), 0);
        for (std::uint64_t i = 0; i < flips_per_session; ++i) {
            const std::size_t j =
                static_cast<std::size_t>(i + tamper_rng.uniform_index(n - i));
            std::swap(pool[i], pool[j]);
            spec.flip_positions.push_back(pool[i]);
        }
        const BitString tampered_view =
            unmask_basis_message(tamper_masked_message(masked_bob, spec), secret.bob_half());
        const double qber_tampered = measured_qber(alice_raw, bob_raw, tampered_view);

        sum_base += qber_base;
        sum_tampered += qber_tampered;
        diffs[s] = qber_base - qber_tampered; // positive would mean a decrease
    }
    const double m = static_cast<double>(sessions);
    stats.mean_qber_baseline = sum_base / m;
    stats.mean_qber_tampered = sum_tampered / m;

    const double mean_diff = (sum_base - sum_tampered) / m;
    double var = 0.0;
    for (const double d : diffs) var += (d - mean_diff) * (d - mean_diff);
    var = sessions > 1 ? var / (m - 1.0) : 0.0;
    stats.diff_stderr = std::sqrt(var / m);
    // one-sided: tampering shown to DECREASE the measured QBER
    stats.decrease_shown = mean_diff > 3.0 * stats.diff_stderr && mean_diff > 0.0;
    return stats;
}

} // namespace qkg
