#include "qkg/adversary.hpp"
#include "support/enumeration_oracle.hpp"

#include <doctest.h>

#include <cmath>

using namespace qkg;

TEST_CASE("compatible interception logs the sent value") {
    Rng eve_rng(10, 0);
    InterceptResendEve eve(eve_rng);
    Rng pulse_rng(11, 0);
    for (int i = 0; i < 2000; ++i) {
        const Pulse p{pulse_rng.bit(), pulse_rng.bit(), static_cast<std::uint64_t>(i)};
        const Pulse out = eve.intercept(p);
        const AdversaryRecord r = eve.record();
        const std::size_t last = r.size() - 1;
        CHECK(out.basis == r.bases.bit(last));
        CHECK(out.value == r.values.bit(last));
        if (r.bases.bit(last) == p.basis) CHECK(r.values.bit(last) == p.value);
    }
}

TEST_CASE("eve's logged value matches the sent value 75% of the time") {
    Rng eve_rng(12, 0);
    InterceptResendEve eve(eve_rng);
    Rng pulse_rng(13, 0);
    const int trials = 200000;
    BitString sent(trials);
    for (int i = 0; i < trials; ++i) {
        const Pulse p{pulse_rng.bit(), pulse_rng.bit(), static_cast<std::uint64_t>(i)};
        if (p.value) sent.set_bit(static_cast<std::size_t>(i), 1);
        eve.intercept(p);
    }
    const double agree = 1.0 - hamming_fraction(eve.record().values, sent);
    CHECK(std::abs(agree - 0.75) < 3.0 * std::sqrt(0.75 * 0.25 / trials));
}

TEST_CASE("the oracle record is a verbatim copy of Alice's raw key") {
    Rng rng(14, 0);
    const RawKeyList alice(rng.bits(500), rng.bits(500));
    const AdversaryRecord r = oracle_raw_key(alice);
    CHECK(r.values == alice.values());
    CHECK(r.bases == alice.bases());
    CHECK(r.size() == 500);
}

TEST_CASE("oracle eve sifting with the true kept indices reproduces the sifted key") {
    SessionConfig cfg;
    cfg.n = 3000;
    SessionRngs rngs = SessionRngs::for_session(15, 0);
    const auto [alice, bob] = produce_raw_keys(cfg, nullptr, rngs.alice, rngs.bob);
    const SiftedKey sifted = sift(alice, alice.bases(), bob.bases());
    const AdversaryRecord record = oracle_raw_key(alice);
    GuessContext ctx;
    ctx.true_kept_indices = &sifted.kept_indices;
    CHECK(eve_guess_sifted_key(record, GuessStrategy::with_basis_info, ctx) == sifted.bits);
}

TEST_CASE("plaintext attack recovers the transmission key via the Vernam relation") {
    CHECK(plaintext_recover_key(BitString::from_string("110"), BitString::from_string("011")) ==
          BitString::from_string("101"));
    const BitString p = BitString::from_string("10101");
    CHECK(plaintext_recover_key(p, p) == BitString(5));
    CHECK_THROWS(plaintext_recover_key(BitString(3), BitString(4)));
}

TEST_CASE("end to end: encrypting with the net key and attacking returns it") {
    SessionConfig cfg;
    cfg.n = 400;
    cfg.sacrifice_fraction = 0.25;
    cfg.refresh_fraction = 0.25;
    SessionRngs rngs = SessionRngs::for_session(16, 0);
    Rng secret_rng(16, Rng::session_stream(0, Rng::kRoleSecret));
    const SharedSecret secret = SharedSecret::generate(secret_rng, cfg.n);
    const SessionTranscript t = run_session(cfg, secret, nullptr, rngs);
    REQUIRE(t.net_key_bits > 0);

    Rng plaintext_rng(17, 0);
    const BitString plaintext = plaintext_rng.bits(t.net_key.size());
    const BitString ciphertext = xor_mask(plaintext, t.net_key);
    CHECK(plaintext_recover_key(ciphertext, plaintext) == t.net_key);
}

TEST_CASE("consistent-count worked examples") {
    CHECK(count_consistent_sifting_functions(BitString::from_string("0101"),
                                             BitString::from_string("11")) == 1);
    CHECK(count_consistent_sifting_functions(BitString::from_string("0000"),
                                             BitString::from_string("00")) == 6);
    CHECK(count_consistent_sifting_functions(BitString::from_string("0000"),
                                             BitString::from_string("11")) == 0);
    CHECK(count_consistent_sifting_functions(BitString::from_string("01"),
                                             BitString(0)) == 1);
}

TEST_CASE("consistent-count honors the brute-force guard") {
    Rng rng(18, 0);
    CHECK_THROWS_AS(count_consistent_sifting_functions(rng.bits(27), rng.bits(13)),
                    std::invalid_argument);
    CHECK_THROWS_AS(count_consistent_sifting_functions(rng.bits(4), rng.bits(5)),
                    std::invalid_argument);
}

TEST_CASE("dynamic programming equals literal enumeration") {
    Rng rng(19, 0);
    for (const std::size_t n : {6u, 8u, 10u, 12u, 14u}) {
        for (int trial = 0; trial < 200; ++trial) {
            const BitString raw = rng.bits(n);
            const std::size_t m = 1 + rng.uniform_index(n);
            const BitString target = rng.bits(m);
            const BigInt dp = count_consistent_sifting_functions(raw, target);
            CHECK(dp == BigInt(testing::enumerate_consistent_selections(raw, target)));
        }
    }
}

TEST_CASE("the true sifting selection always survives the pruning") {
    Rng rng(20, 0);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 4 + 2 * rng.uniform_index(6);
        const BitString raw = rng.bits(n);
        // draw a random true selection and build the sifted key from it
        std::vector<std::uint8_t> kept(n, 0);
        std::size_t m = 0;
        for (std::size_t i = 0; i < n; ++i) {
            kept[i] = static_cast<std::uint8_t>(rng.bit());
            m += kept[i];
        }
        BitString sifted(m);
        for (std::size_t i = 0, j = 0; i < n; ++i)
            if (kept[i]) {
                if (raw.bit(i)) sifted.set_bit(j, 1);
                ++j;
            }
        CHECK(count_consistent_sifting_functions(raw, sifted) >= 1);
    }
}

TEST_CASE("tampering flips exactly the listed bits") {
    const BitString msg = BitString::from_string("110010");
    TamperSpec none;
    CHECK(tamper_masked_message(msg, none) == msg);

    TamperSpec all;
    for (std::uint64_t i = 0; i < 6; ++i) all.flip_positions.push_back(i);
    CHECK(tamper_masked_message(msg, all) == BitString::from_string("001101"));

    TamperSpec oob;
    oob.flip_positions = {6};
    CHECK_THROWS_AS(tamper_masked_message(msg, oob), std::out_of_range);
}

TEST_CASE("guess strategies fail loudly when their inputs are missing") {
    Rng rng(21, 0);
    AdversaryRecord record;
    record.bases = rng.bits(50);
    record.values = rng.bits(50);
    GuessContext empty;
    CHECK_THROWS_AS(eve_guess_sifted_key(record, GuessStrategy::with_basis_info, empty),
                    std::invalid_argument);
    CHECK_THROWS_AS(eve_guess_sifted_key(record, GuessStrategy::uniform_sift_guess, empty),
                    std::invalid_argument);
    CHECK_THROWS_AS(eve_guess_sifted_key(record, GuessStrategy::maximum_likelihood_position, empty),
                    std::invalid_argument);
}

TEST_CASE("interception strategies rank as the protocol predicts") {
    const AgreementStats stats = eve_agreement_experiment(200000, 22);
    const double m = static_cast<double>(stats.sifted_bits);
    const double sigma = std::sqrt(0.75 * 0.25 / m);
    CHECK(std::abs(stats.with_basis_info - 0.75) < 3.0 * sigma);
    CHECK(std::abs(stats.qber - 0.25) < 3.0 * std::sqrt(0.25 * 0.75 / m));

    const double sep = 3.0 * std::sqrt(0.5 / m);
    CHECK(stats.with_basis_info - stats.uniform_sift_guess > sep);
    CHECK(stats.with_basis_info - stats.maximum_likelihood_position > sep);
}

TEST_CASE("without interception every strategy is a coin flip") {
    SessionConfig cfg;
    cfg.n = 100000;
    SessionRngs rngs = SessionRngs::for_session(23, 0);
    const auto [alice, bob] = produce_raw_keys(cfg, nullptr, rngs.alice, rngs.bob);
    const SiftedKey sifted = sift(alice, alice.bases(), bob.bases());

    AdversaryRecord record; // Eve never touched the channel: her data is noise
    Rng noise(24, 0);
    record.bases = noise.bits(cfg.n);
    record.values = noise.bits(cfg.n);

    const double m = static_cast<double>(sifted.bits.size());
    const double band = 3.0 * std::sqrt(0.25 / m);

    GuessContext with_info;
    with_info.true_kept_indices = &sifted.kept_indices;
    const BitString g1 = eve_guess_sifted_key(record, GuessStrategy::with_basis_info, with_info);
    CHECK(std::abs(1.0 - hamming_fraction(g1, sifted.bits) - 0.5) < band);

    Rng guess_rng(25, 0);
    GuessContext uniform;
    uniform.target_length = sifted.bits.size();
    uniform.rng = &guess_rng;
    const BitString g2 = eve_guess_sifted_key(record, GuessStrategy::uniform_sift_guess, uniform);
    CHECK(std::abs(1.0 - hamming_fraction(g2, sifted.bits) - 0.5) < band);

    GuessContext ml;
    ml.target_length = sifted.bits.size();
    const BitString g3 =
        eve_guess_sifted_key(record, GuessStrategy::maximum_likelihood_position, ml);
    CHECK(std::abs(1.0 - hamming_fraction(g3, sifted.bits) - 0.5) < band);
}

TEST_CASE("oracle plaintext experiment: reference tracks the bound, sessions exceed it") {
    const PlaintextAttackStats stats = oracle_plaintext_experiment(8, 400, 26);
    CHECK(stats.closed_form_bound == doctest::Approx(4.375));
    CHECK(stats.min_count >= 1);
    // independent-target model: the bound is the exact expectation
    CHECK(stats.reference_mean > stats.closed_form_bound / 2.0);
    CHECK(stats.reference_mean < stats.closed_form_bound * 2.0);
    // session-coupled counts are inflated by selection overlap
    CHECK(stats.session_mean > stats.closed_form_bound);
}

TEST_CASE("eve's basis-blind information never rises with the key length") {
    const InformationTrend trend = eve_information_trend({1000, 4000, 16000}, 20, 29);
    REQUIRE(trend.rows.size() == 3);
    CHECK_FALSE(trend.increase_shown);
    for (const auto& row : trend.rows) {
        CHECK(row.mutual_information >= 0.0);
        CHECK(row.mutual_information < 0.01); // far below the 0.189 with-basis figure
        CHECK(row.sifted_bits > 0);
    }
    CHECK_THROWS(eve_information_trend({1000}, 20, 1));
}

TEST_CASE("tampering with masked messages never lowers the measured QBER") {
    const TamperStats clean = tamper_experiment(1000, 200, 100, 0.0, 27);
    CHECK(clean.mean_qber_baseline == 0.0);
    CHECK(clean.mean_qber_tampered > 0.0);
    CHECK_FALSE(clean.decrease_shown);

    const TamperStats noisy = tamper_experiment(1000, 200, 100, 0.05, 28);
    CHECK(noisy.mean_qber_baseline > 0.0);
    CHECK(noisy.mean_qber_tampered > noisy.mean_qber_baseline - 3.0 * noisy.diff_stderr);
    CHECK_FALSE(noisy.decrease_shown);
}
