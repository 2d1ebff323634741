#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>

namespace farmsched {

/// Raised when a generator is seeded with the degenerate (0, 0) lag pair.
struct InvalidSeedError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/**
 * McwRng — Marsaglia's two-lag multiply-with-carry generator.
 *
 * Two 16x16-bit MWC sequences (multipliers 36969 and 18000) combined as
 * (z << 16) + w, all in 32-bit wraparound arithmetic. Chosen for bit-exact
 * reproducibility across platforms: every simulation run is replayable from
 * its two seed words alone.
 *
 * A lag of zero is absorbing for its half of the state, so zero seeds are
 * remapped to the documented defaults; the all-zero pair is rejected.
 */
class McwRng {
public:
    static constexpr std::uint32_t kDefaultZ = 362436069u;
    static constexpr std::uint32_t kDefaultW = 521288629u;

    McwRng() : z_(kDefaultZ), w_(kDefaultW) {}

    /// Seeds from two lag words. Throws InvalidSeedError on (0, 0); a zero
    /// in exactly one lag falls back to that lag's default.
    McwRng(std::uint32_t z0, std::uint32_t w0) {
        if (z0 == 0 && w0 == 0)
            throw InvalidSeedError("invalid seed: z and w must not both be zero");
        z_ = z0 ? z0 : kDefaultZ;
        w_ = w0 ? w0 : kDefaultW;
    }

    /// Like the (z, w) constructor but never throws: (0, 0) maps to the
    /// defaults. Used for internally derived streams, where an unlucky
    /// derivation must not abort the run.
    static McwRng derived(std::uint32_t z0, std::uint32_t w0) {
        McwRng g;
        g.z_ = z0 ? z0 : kDefaultZ;
        g.w_ = w0 ? w0 : kDefaultW;
        return g;
    }

    /// Substream for worker `index`: spreads z by the golden-ratio multiplier
    /// and xors the index into w, so adding workers never perturbs the
    /// streams of existing ones.
    static McwRng substream(std::uint32_t base_z, std::uint32_t base_w,
                            std::uint32_t index) {
        return derived(base_z + index * 2654435761u, base_w ^ index);
    }

    std::uint32_t next_u32() {
        z_ = 36969u * (z_ & 0xFFFFu) + (z_ >> 16);
        w_ = 18000u * (w_ & 0xFFFFu) + (w_ >> 16);
        return (z_ << 16) + w_;
    }

    /// Uniform draw in [0, 1); exactly next_u32() * 2^-32.
    double next_unit() {
        return next_u32() * 0x1p-32;
    }

    std::uint32_t z() const { return z_; }
    std::uint32_t w() const { return w_; }

    bool operator==(const McwRng&) const = default;

private:
    std::uint32_t z_;
    std::uint32_t w_;
};

} // namespace farmsched
