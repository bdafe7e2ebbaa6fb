#include "qkg/analysis.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qkg {

namespace {

using BigFloat = boost::multiprecision::cpp_bin_float_50;

// log2 of a positive big integer, exact to ~1e-15 absolute: exponent from
// the bit length, mantissa from the top 64 bits evaluated in long double.
long double log2_big_ld(const BigInt& v) {
    const unsigned bits = boost::multiprecision::msb(v);
    if (bits <= 62) return std::log2(static_cast<long double>(v.convert_to<std::uint64_t>()));
    const BigInt top = v >> (bits - 63);
    const auto mant = static_cast<long double>(top.convert_to<std::uint64_t>());
    return std::log2(mant) + static_cast<long double>(bits - 63);
}

EntropyReport entropy_from_binomial(std::uint64_t n, const BigInt& total) {
    const std::uint64_t m = n / 2;
    std::uint64_t v2 = boost::multiprecision::lsb(total);
    if (v2 > m) v2 = m;
    const BigInt numerator = total >> v2;
    const std::uint64_t denom_exp = m - v2;

    // long double end to end: the final cast to double then lands the
    // apriori - aposteriori difference on n/2 without rounding residue
    const long double apriori = log2_big_ld(total);
    const long double aposteriori =
        log2_big_ld(numerator) - log2_big_ld(BigInt(1) << denom_exp);

    EntropyReport r;
    r.n = n;
    r.apriori_bits = static_cast<double>(apriori);
    r.aposteriori_bits = static_cast<double>(aposteriori);
    r.info_gain_bits = static_cast<double>(apriori - aposteriori);
    return r;
}

} // namespace

BigInt binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    BigInt c = 1;
    for (std::uint64_t j = 1; j <= k; ++j) {
        c *= (n - k + j);
        c /= j;
    }
    return c;
}

BigInt total_sifting_functions(std::uint64_t n) {
    if (n % 2 != 0)
        throw std::invalid_argument("total_sifting_functions: n must be even");
    return binomial(n, n / 2);
}

SurvivingBound surviving_functions_bound(std::uint64_t n) {
    if (n % 2 != 0 || n < 2)
        throw std::invalid_argument("surviving_functions_bound: n must be even and >= 2");
    SurvivingBound out;
    out.n = n;
    const BigInt c = total_sifting_functions(n);
    // reduce C(n,n/2) / 2^(n/2) by the 2-adic valuation of the numerator
    const std::uint64_t m = n / 2;
    std::uint64_t v2 = boost::multiprecision::lsb(c);
    if (v2 > m) v2 = m;
    out.numerator = c >> v2;
    out.denominator = BigInt(1) << (m - v2);
    out.log2_value = static_cast<double>(log2_big_ld(out.numerator) -
                                         static_cast<long double>(m - v2));
    out.value = static_cast<double>(BigFloat(out.numerator) / BigFloat(out.denominator));
    return out;
}

double fitted_growth_rate(std::uint64_t n_lo, std::uint64_t n_hi) {
    if (n_lo % 2 != 0) ++n_lo;
    if (n_lo < 2) n_lo = 2;
    if (n_hi < n_lo + 2)
        throw std::invalid_argument("fitted_growth_rate: need at least two even n values");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t count = 0;
    for (std::uint64_t n = n_lo; n <= n_hi; n += 2) {
        const SurvivingBound b = surviving_functions_bound(n);
        const double x = static_cast<double>(n);
        const double y = b.log2_value * std::numbers::ln2;
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++count;
    }
    const double denom = static_cast<double>(count) * sxx - sx * sx;
    return (static_cast<double>(count) * sxy - sx * sy) / denom;
}

double shannon_entropy_uniform(const BigInt& count) {
    if (count < 1)
        throw std::invalid_argument("shannon_entropy_uniform: count must be >= 1");
    return static_cast<double>(log2_big_ld(count));
}

EntropyReport info_gain_oracle_eve(std::uint64_t n) {
    if (n % 2 != 0 || n < 2)
        throw std::invalid_argument("info_gain_oracle_eve: n must be even and >= 2");
    return entropy_from_binomial(n, total_sifting_functions(n));
}

std::vector<EntropyReport> info_gain_sweep(std::uint64_t n_max) {
    std::vector<EntropyReport> out;
    if (n_max < 2) return out;
    out.reserve(n_max / 2);
    BigInt c = 2; // C(2, 1)
    for (std::uint64_t n = 2; n <= n_max; n += 2) {
        out.push_back(entropy_from_binomial(n, c));
        // C(n+2, n/2+1) = C(n, n/2) * 2(n+1) / (n/2 + 1)
        c *= 2 * (n + 1);
        c /= n / 2 + 1;
    }
    return out;
}

double provenance_prob(std::uint64_t l, std::uint64_t i) {
    if (l < 1) throw std::invalid_argument("provenance_prob: l must be >= 1");
    if (i < l) return 0.0; // below the support, by definition rather than error
    const BigInt num = binomial(i - 1, l - 1);
    return static_cast<double>(BigFloat(num) / pow(BigFloat(2), static_cast<unsigned>(i)));
}

double ProvenanceDistribution::mass_at(std::uint64_t i) const {
    if (i < first_index || i >= first_index + masses.size()) return 0.0;
    return masses[i - first_index];
}

std::uint64_t ProvenanceDistribution::mode() const {
    const auto it = std::max_element(masses.begin(), masses.end());
    return first_index + static_cast<std::uint64_t>(it - masses.begin());
}

double ProvenanceDistribution::max_mass() const {
    return *std::max_element(masses.begin(), masses.end());
}

ProvenanceDistribution provenance_distribution(std::uint64_t l, double mass_cutoff) {
    if (l < 1) throw std::invalid_argument("provenance_distribution: l must be >= 1");
    if (!(mass_cutoff > 0.0 && mass_cutoff <= 1e-6))
        throw std::invalid_argument("provenance_distribution: mass_cutoff must be in (0, 1e-6]");

    ProvenanceDistribution out;
    out.l = l;
    out.first_index = l;
    out.gaussian_center = 2.0 * static_cast<double>(l);
    out.gaussian_sigma = std::sqrt(2.0 * static_cast<double>(l));
    out.gaussian_sigma_paper = std::sqrt(2.0 * static_cast<double>(l)) / 2.0;

    // recurrence in log2 space: P(l, l) = 2^-l,
    // P(l, i+1) = P(l, i) * i / (2 (i - l + 1))
    double log2p = -static_cast<double>(l);
    double mass = 0.0;
    std::uint64_t i = l;
    while (true) {
        const double p = std::exp2(log2p);
        out.masses.push_back(p);
        mass += p;
        if (1.0 - mass < mass_cutoff && i >= 2 * l) break;
        const double di = static_cast<double>(i);
        log2p += std::log2(di / (di - static_cast<double>(l) + 1.0)) - 1.0;
        ++i;
        if (i > 64 * (l + 4)) break; // hard stop; unreachable for sane cutoffs
    }
    out.tabulated_mass = mass;
    out.declared_tail = 1.0 - mass;
    return out;
}

EmpiricalProvenance provenance_empirical(std::uint64_t l, std::uint64_t n, std::uint64_t trials,
                                         Rng& rng) {
    if (l < 1) throw std::invalid_argument("provenance_empirical: l must be >= 1");
    if (n < 2 * l) throw std::invalid_argument("provenance_empirical: need n >= 2l");
    if (trials < 1) throw std::invalid_argument("provenance_empirical: trials must be >= 1");

    EmpiricalProvenance out;
    out.l = l;
    out.n = n;
    out.trials = trials;
    out.first_index = l;
    std::vector<std::uint64_t> counts(n - l + 1, 0);

    for (std::uint64_t t = 0; t < trials; ++t) {
        while (true) {
            std::uint64_t kept = 0;
            std::uint64_t source = 0;
            for (std::uint64_t i = 1; i <= n; ++i) {
                // bases agree iff alice_bit XOR bob_bit == 0
                if ((rng.bit() ^ rng.bit()) == 0) {
                    ++kept;
                    if (kept == l) {
                        source = i;
                        break;
                    }
                }
            }
            if (source != 0) {
                ++counts[source - l];
                break;
            }
            ++out.redraws; // sifted key shorter than l; redraw the session
        }
    }
    out.frequencies.resize(counts.size());
    for (std::size_t k = 0; k < counts.size(); ++k)
        out.frequencies[k] = static_cast<double>(counts[k]) / static_cast<double>(trials);
    return out;
}

double total_variation(const ProvenanceDistribution& exact, const EmpiricalProvenance& emp) {
    if (exact.l != emp.l)
        throw std::invalid_argument("total_variation: distributions are for different l");
    const std::uint64_t hi =
        std::max(exact.first_index + exact.masses.size(), emp.first_index + emp.frequencies.size());
    double sum = 0.0;
    for (std::uint64_t i = exact.first_index; i < hi; ++i) {
        const double e = exact.mass_at(i);
        const double f = (i >= emp.first_index && i < emp.first_index + emp.frequencies.size())
                             ? emp.frequencies[i - emp.first_index]
                             : 0.0;
        sum += std::abs(e - f);
    }
    sum += exact.declared_tail; // exact mass beyond the tabulation
    return sum / 2.0;
}

GaussianComparison gaussian_comparison(std::uint64_t l) {
    if (l < 10)
        throw std::invalid_argument("gaussian_comparison: l >= 10 (asymptotic regime) required");
    const ProvenanceDistribution d = provenance_distribution(l, 1e-12);

    GaussianComparison out;
    out.l = l;
    out.exact_mode = d.mode();
    const double half_max = d.max_mass() / 2.0;
    for (const double p : d.masses)
        if (p >= half_max) ++out.exact_fwhm_count;

    const double fwhm_factor = 2.0 * std::sqrt(2.0 * std::log(2.0));
    out.gaussian_fwhm = fwhm_factor * d.gaussian_sigma;
    out.gaussian_fwhm_paper = fwhm_factor * d.gaussian_sigma_paper;

    const auto gauss = [&](double i, double sigma) {
        const double z = (i - d.gaussian_center) / sigma;
        return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * M_PI));
    };
    for (std::size_t k = 0; k < d.masses.size(); ++k) {
        const double i = static_cast<double>(d.first_index + k);
        out.max_abs_deviation =
            std::max(out.max_abs_deviation, std::abs(d.masses[k] - gauss(i, d.gaussian_sigma)));
        out.max_abs_deviation_paper = std::max(
            out.max_abs_deviation_paper, std::abs(d.masses[k] - gauss(i, d.gaussian_sigma_paper)));
    }
    return out;
}

double binary_entropy(double p) {
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("binary_entropy: p must be in [0,1]");
    if (p == 0.0 || p == 1.0) return 0.0;
    return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

double mutual_information_per_bit(double agreement_prob) {
    if (agreement_prob < 0.0 || agreement_prob > 1.0)
        throw std::invalid_argument("mutual_information_per_bit: probability out of range");
    return 1.0 - binary_entropy(1.0 - agreement_prob);
}

} // namespace qkg
