#include "qkg/channel.hpp"

#include <stdexcept>

namespace qkg {

void ChannelConfig::validate() const {
    if (!(intrinsic_flip_prob >= 0.0 && intrinsic_flip_prob <= 0.5))
        throw std::invalid_argument("ChannelConfig: intrinsic_flip_prob must be in [0, 0.5]");
}

int measure(const Pulse& pulse, int measurement_basis, const ChannelConfig& cfg, Rng& rng) {
    if (measurement_basis == pulse.basis) {
        if (cfg.intrinsic_flip_prob > 0.0 && rng.unit() < cfg.intrinsic_flip_prob)
            return pulse.value ^ 1;
        return pulse.value;
    }
    return rng.bit();
}

Pulse transmit(const Pulse& pulse, Interceptor* interceptor) {
    if (interceptor == nullptr) return pulse;
    Pulse reemitted = interceptor->intercept(pulse);
    reemitted.index = pulse.index;
    return reemitted;
}

} // namespace qkg
