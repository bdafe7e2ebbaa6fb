#pragma once

#include "qkg/rng.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <vector>

namespace qkg {

using BigInt = boost::multiprecision::cpp_int;

/// Exact binomial coefficient C(n, k).
BigInt binomial(std::uint64_t n, std::uint64_t k);

/// Number of order-preserving selections of n/2 positions out of n,
/// i.e. C(n, n/2). n must be even (the even-split idealization).
BigInt total_sifting_functions(std::uint64_t n);

/// C(n, n/2) / 2^(n/2), exact rational plus a double rendering: the
/// expected number of sifting functions an attacker with the full raw
/// key cannot rule out. Grows like e^(alpha*n).
struct SurvivingBound {
    std::uint64_t n = 0;
    BigInt numerator;   // reduced
    BigInt denominator; // reduced, a power of two
    double value = 0.0; // overflows to inf around n ~ 2100; log2_value never does
    double log2_value = 0.0;
};
SurvivingBound surviving_functions_bound(std::uint64_t n);

/// Least-squares slope alpha of ln(surviving bound) over even n in
/// [n_lo, n_hi]; the growth-rate rendering of the e^(alpha*n) form.
double fitted_growth_rate(std::uint64_t n_lo, std::uint64_t n_hi);

/// log2(count) in bits for a uniform distribution over `count` outcomes.
/// Exact for powers of two, accurate to double precision otherwise.
double shannon_entropy_uniform(const BigInt& count);

struct EntropyReport {
    std::uint64_t n = 0;
    double apriori_bits = 0.0;
    double aposteriori_bits = 0.0;
    double info_gain_bits = 0.0;
};

/// Entropy bookkeeping for the full-raw-key attacker: apriori over all
/// C(n, n/2) sifting functions, aposteriori over the surviving bound.
/// The gain comes out at exactly n/2 bits.
EntropyReport info_gain_oracle_eve(std::uint64_t n);

/// info_gain_oracle_eve for every even n in [2, n_max], sharing one
/// incremental binomial so the whole sweep stays cheap.
std::vector<EntropyReport> info_gain_sweep(std::uint64_t n_max);

/// Probability that sifted position l (1-based) originated from raw
/// position i: C(i-1, l-1) * 2^-i. Zero for i < l. Evaluated exactly in
/// rational arithmetic, rendered as a double.
double provenance_prob(std::uint64_t l, std::uint64_t i);

/// The distribution over raw positions i >= l feeding sifted slot l,
/// tabulated until the remaining tail mass drops below `mass_cutoff`.
struct ProvenanceDistribution {
    std::uint64_t l = 0;
    std::uint64_t first_index = 0;   // = l
    std::vector<double> masses;      // masses[k] = P(i = first_index + k)
    double tabulated_mass = 0.0;
    double declared_tail = 0.0;
    double gaussian_center = 0.0;    // 2l
    double gaussian_sigma = 0.0;     // sqrt(2l), variance-matched
    double gaussian_sigma_paper = 0.0; // sqrt(2l)/2 rendering of the quoted sigma

    double mass_at(std::uint64_t i) const;
    std::uint64_t mode() const; // smallest argmax
    double max_mass() const;
};
ProvenanceDistribution provenance_distribution(std::uint64_t l, double mass_cutoff);

/// Monte-Carlo counterpart: simulate sifting with uniform independent
/// bases for both parties and record which raw index became sifted
/// position l. Sessions whose sifted key is shorter than l are redrawn
/// and counted.
struct EmpiricalProvenance {
    std::uint64_t l = 0;
    std::uint64_t n = 0;
    std::uint64_t trials = 0;
    std::uint64_t first_index = 0;  // = l
    std::vector<double> frequencies; // over i = first_index .. n
    std::uint64_t redraws = 0;
};
EmpiricalProvenance provenance_empirical(std::uint64_t l, std::uint64_t n, std::uint64_t trials,
                                         Rng& rng);

/// Total variation distance between the exact tabulation and an
/// empirical run for the same l (tail and off-support mass included).
double total_variation(const ProvenanceDistribution& exact, const EmpiricalProvenance& emp);

/// Exact distribution vs its Gaussian approximation N(2l, sigma).
/// FWHM contributor count = #{ i : P(i) >= max/2 }, compared against the
/// Gaussian FWHM 2*sqrt(2 ln 2)*sigma for both sigma renderings.
struct GaussianComparison {
    std::uint64_t l = 0;
    std::uint64_t exact_mode = 0;
    std::uint64_t exact_fwhm_count = 0;
    double gaussian_fwhm = 0.0;        // variance-matched sigma = sqrt(2l)
    double max_abs_deviation = 0.0;    // vs variance-matched Gaussian
    double gaussian_fwhm_paper = 0.0;  // sigma = sqrt(2l)/2
    double max_abs_deviation_paper = 0.0;
};
GaussianComparison gaussian_comparison(std::uint64_t l);

/// Bits of information per key bit available through a binary symmetric
/// channel with the given agreement probability: 1 - h(1 - p).
double mutual_information_per_bit(double agreement_prob);

/// Binary entropy h(p) in bits.
double binary_entropy(double p);

} // namespace qkg
