#pragma once

#include "qkg/rng.hpp"

#include <cstdint>

namespace qkg {

/// One transmitted qubit in the two-mutually-unbiased-bases model.
/// basis: 0 = rectilinear, 1 = diagonal. index: position in the session.
struct Pulse {
    int basis = 0;
    int value = 0;
    std::uint64_t index = 0;
};

/// Channel noise knob. `intrinsic_flip_prob` is the probability that a
/// compatible-basis measurement at the legitimate receiver returns the
/// flipped bit, absent any eavesdropping. Must lie in [0, 0.5].
struct ChannelConfig {
    double intrinsic_flip_prob = 0.0;

    void validate() const;
};

/// Hook for an adversary sitting on the quantum channel. Implementations
/// measure the pulse however they like and must re-emit a replacement
/// prepared in their measurement basis with their measured value.
class Interceptor {
public:
    virtual ~Interceptor() = default;
    virtual Pulse intercept(const Pulse& pulse) = 0;
};

/// Measure a pulse. Compatible basis: the encoded value, flipped with
/// probability cfg.intrinsic_flip_prob. Incompatible basis: a uniform
/// coin (mutually unbiased bases), independent of the encoded value.
int measure(const Pulse& pulse, int measurement_basis, const ChannelConfig& cfg, Rng& rng);

/// Pass a pulse through the channel. Without an interceptor the pulse
/// arrives unchanged (intrinsic noise is applied at measurement, not in
/// flight). With one, the interceptor's re-emitted pulse arrives instead.
Pulse transmit(const Pulse& pulse, Interceptor* interceptor);

} // namespace qkg
