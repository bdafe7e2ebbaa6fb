#include "qkg/cli/transcript_io.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qkg::cli {

namespace {

std::string fmt_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_bits(const BitString& b) { return b.empty() ? "-" : b.to_string(); }

std::string fmt_indices(const std::vector<std::uint64_t>& xs) {
    if (xs.empty()) return "-";
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(xs[i]);
    }
    return s;
}

BitString parse_bits(const std::string& s) {
    return s == "-" ? BitString(0) : BitString::from_string(s);
}

std::vector<std::uint64_t> parse_indices(const std::string& s) {
    std::vector<std::uint64_t> out;
    if (s == "-") return out;
    std::size_t pos = 0;
    while (pos < s.size()) {
        std::size_t next = s.find(',', pos);
        if (next == std::string::npos) next = s.size();
        out.push_back(std::stoull(s.substr(pos, next - pos)));
        pos = next + 1;
    }
    return out;
}

const char* mode_name(SiftMode m) {
    return m == SiftMode::encrypted ? "encrypted" : "plain_bb84";
}

SiftMode parse_mode(const std::string& s) {
    if (s == "encrypted") return SiftMode::encrypted;
    if (s == "plain_bb84") return SiftMode::plain_bb84;
    throw std::invalid_argument("transcript: unknown sift mode '" + s + "'");
}

class FieldReader {
public:
    explicit FieldReader(const std::string& line) : in_(line) {}

    std::string expect(const std::string& key) {
        std::string token;
        if (!(in_ >> token))
            throw std::invalid_argument("transcript: missing field '" + key + "'");
        const std::size_t eq = token.find('=');
        if (eq == std::string::npos || token.substr(0, eq) != key)
            throw std::invalid_argument("transcript: expected field '" + key + "', got '" + token +
                                        "'");
        return token.substr(eq + 1);
    }

private:
    std::istringstream in_;
};

} // namespace

std::string format_transcript(const SessionTranscript& t) {
    std::ostringstream o;
    o << "session=" << t.session_index << " n=" << t.n << " seed=" << t.seed
      << " mode=" << mode_name(t.sift_mode) << " epsilon=" << fmt_double(t.epsilon)
      << " aborted=" << (t.aborted ? 1 : 0)
      << " insufficient_yield=" << (t.insufficient_yield ? 1 : 0)
      << " alice_bases=" << fmt_bits(t.alice_raw.bases())
      << " alice_values=" << fmt_bits(t.alice_raw.values())
      << " bob_bases=" << fmt_bits(t.bob_raw.bases())
      << " bob_values=" << fmt_bits(t.bob_raw.values())
      << " secret=" << fmt_bits(t.secret_initial.parent())
      << " secret_cursor=" << t.secret_initial.cursor()
      << " masked_alice=" << fmt_bits(t.masked_alice) << " masked_bob=" << fmt_bits(t.masked_bob)
      << " kept=" << fmt_indices(t.kept_indices)
      << " sifted_alice=" << fmt_bits(t.sifted_alice.bits)
      << " sifted_bob=" << fmt_bits(t.sifted_bob.bits) << " qber=" << fmt_double(t.qber_estimate)
      << " sacrificed=" << fmt_indices(t.sacrificed_indices)
      << " refresh_budget=" << t.refresh_budget_bits << " net_key_bits=" << t.net_key_bits
      << " net_key=" << fmt_bits(t.net_key)
      << " secret_next=" << fmt_bits(t.secret_refreshed.parent())
      << " secret_next_cursor=" << t.secret_refreshed.cursor();
    return o.str();
}

SessionTranscript parse_transcript(const std::string& line) {
    FieldReader r(line);
    SessionTranscript t;
    t.session_index = std::stoull(r.expect("session"));
    t.n = std::stoull(r.expect("n"));
    t.seed = std::stoull(r.expect("seed"));
    t.sift_mode = parse_mode(r.expect("mode"));
    t.epsilon = std::stod(r.expect("epsilon"));
    t.aborted = r.expect("aborted") == "1";
    t.insufficient_yield = r.expect("insufficient_yield") == "1";
    const BitString alice_bases = parse_bits(r.expect("alice_bases"));
    const BitString alice_values = parse_bits(r.expect("alice_values"));
    t.alice_raw = RawKeyList(alice_bases, alice_values);
    const BitString bob_bases = parse_bits(r.expect("bob_bases"));
    const BitString bob_values = parse_bits(r.expect("bob_values"));
    t.bob_raw = RawKeyList(bob_bases, bob_values);
    const BitString secret_parent = parse_bits(r.expect("secret"));
    t.secret_initial = SharedSecret(secret_parent, std::stoull(r.expect("secret_cursor")));
    t.masked_alice = parse_bits(r.expect("masked_alice"));
    t.masked_bob = parse_bits(r.expect("masked_bob"));
    t.kept_indices = parse_indices(r.expect("kept"));
    t.sifted_alice.bits = parse_bits(r.expect("sifted_alice"));
    t.sifted_alice.kept_indices = t.kept_indices;
    t.sifted_bob.bits = parse_bits(r.expect("sifted_bob"));
    t.sifted_bob.kept_indices = t.kept_indices;
    t.qber_estimate = std::stod(r.expect("qber"));
    t.sacrificed_indices = parse_indices(r.expect("sacrificed"));
    t.refresh_budget_bits = std::stoull(r.expect("refresh_budget"));
    t.net_key_bits = std::stoull(r.expect("net_key_bits"));
    t.net_key = parse_bits(r.expect("net_key"));
    const BitString next_parent = parse_bits(r.expect("secret_next"));
    t.secret_refreshed = SharedSecret(next_parent, std::stoull(r.expect("secret_next_cursor")));
    return t;
}

void write_transcripts(std::ostream& out, const std::vector<SessionTranscript>& transcripts,
                       bool with_header) {
    if (with_header) {
        const auto now = std::chrono::system_clock::now();
        const std::time_t tt = std::chrono::system_clock::to_time_t(now);
        char stamp[32];
        std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&tt));
        out << "# qkg-transcript v1 generated " << stamp << "\n";
    }
    for (const auto& t : transcripts) out << format_transcript(t) << "\n";
}

void write_transcripts_file(const std::string& path,
                            const std::vector<SessionTranscript>& transcripts, bool with_header) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open transcript file for writing: " + path);
    write_transcripts(out, transcripts, with_header);
    if (!out) throw std::runtime_error("write failure on transcript file: " + path);
}

std::vector<SessionTranscript> read_transcripts(std::istream& in) {
    std::vector<SessionTranscript> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        out.push_back(parse_transcript(line));
    }
    return out;
}

std::vector<SessionTranscript> read_transcripts_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open transcript file: " + path);
    return read_transcripts(in);
}

std::vector<std::string> verify_transcript(const SessionTranscript& t) {
    std::vector<std::string> problems;
    const auto fail = [&](const std::string& msg) { problems.push_back(msg); };

    const std::uint64_t n = t.n;
    if (t.alice_raw.size() != n || t.bob_raw.size() != n) fail("raw key length != n");
    if (t.secret_initial.parent().size() != 2 * n) fail("secret length != 2n");
    if (t.masked_alice.size() != n || t.masked_bob.size() != n) fail("masked message length != n");
    if (!problems.empty()) return problems; // structural damage; later checks would throw

    if (t.sift_mode == SiftMode::encrypted) {
        if (t.masked_alice != xor_mask(t.alice_raw.bases(), t.secret_initial.alice_half()))
            fail("masked_alice != alice bases XOR secret half");
        if (t.masked_bob != xor_mask(t.bob_raw.bases(), t.secret_initial.bob_half()))
            fail("masked_bob != bob bases XOR secret half");
    } else {
        if (t.masked_alice != t.alice_raw.bases()) fail("clear-mode message != alice bases");
        if (t.masked_bob != t.bob_raw.bases()) fail("clear-mode message != bob bases");
    }

    const SiftedKey alice_sift = sift(t.alice_raw, t.alice_raw.bases(), t.bob_raw.bases());
    const SiftedKey bob_sift = sift(t.bob_raw, t.bob_raw.bases(), t.alice_raw.bases());
    if (alice_sift.kept_indices != t.kept_indices) fail("kept indices do not re-derive");
    if (alice_sift.bits != t.sifted_alice.bits) fail("alice sifted bits do not re-derive");
    if (bob_sift.bits != t.sifted_bob.bits) fail("bob sifted bits do not re-derive");

    const std::size_t sifted_len = t.sifted_alice.bits.size();
    std::size_t mismatches = 0;
    std::uint64_t prev = 0;
    bool order_ok = true;
    for (std::size_t k = 0; k < t.sacrificed_indices.size(); ++k) {
        const std::uint64_t p = t.sacrificed_indices[k];
        if (p >= sifted_len) {
            fail("sacrificed index out of range");
            return problems;
        }
        if (k > 0 && p <= prev) order_ok = false;
        prev = p;
        if (t.sifted_alice.bits.bit(p) != t.sifted_bob.bits.bit(p)) ++mismatches;
    }
    if (!order_ok) fail("sacrificed indices not strictly increasing");
    if (!t.sacrificed_indices.empty()) {
        const double qber = static_cast<double>(mismatches) /
                            static_cast<double>(t.sacrificed_indices.size());
        if (qber != t.qber_estimate) fail("stored qber does not re-derive");
    } else if (t.qber_estimate != 0.0) {
        fail("qber nonzero but nothing sacrificed");
    }

    if (t.aborted || t.insufficient_yield) {
        if (t.net_key_bits != 0 || !t.net_key.empty()) fail("aborted/underflowed session has key");
        if (t.secret_refreshed != t.secret_initial) fail("secret changed in a yieldless session");
        return problems;
    }

    // rebuild the post-sacrifice remainder and replay the refresh
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
    RefreshResult replay =
        refresh_secret_with_budget(t.secret_initial, remainder, t.refresh_budget_bits);
    if (replay.net_key != t.net_key) fail("net key does not re-derive");
    if (t.net_key_bits != t.net_key.size()) fail("net_key_bits != net key length");
    if (replay.secret != t.secret_refreshed) fail("refreshed secret does not re-derive");
    const std::uint64_t expected_net =
        sifted_len >= t.sacrificed_indices.size() + t.refresh_budget_bits
            ? sifted_len - t.sacrificed_indices.size() - t.refresh_budget_bits
            : 0;
    if (t.net_key_bits != expected_net) fail("conservation: net != sifted - sacrificed - budget");
    return problems;
}

} // namespace qkg::cli
