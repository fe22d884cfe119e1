#pragma once

#include <cstdint>

namespace amc {

inline std::uint64_t mix64(std::uint64_t z)
{
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Seed for the `index`-th independent stream under `master`.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index)
{
    return mix64(master ^ mix64(index + 0x632be59bd9b4e019ULL));
}

// Source of independent uniform bits. Bits are handed out sequentially from
// 64-bit words so that a draw of k bits consumes exactly k bits.
class RandomSource {
public:
    virtual ~RandomSource() = default;

    bool next_bit()
    {
        if (available_ == 0) {
            buffer_ = next_word();
            available_ = 64;
        }
        const bool bit = buffer_ & 1u;
        buffer_ >>= 1;
        --available_;
        return bit;
    }

    // Uniform in [0, bound) by rejection; bound > 0.
    std::uint64_t uniform(std::uint64_t bound)
    {
        const std::uint64_t limit = bound * (UINT64_MAX / bound);
        std::uint64_t r;
        do {
            r = next_word();
        } while (r >= limit);
        return r % bound;
    }

protected:
    virtual std::uint64_t next_word() = 0;

private:
    std::uint64_t buffer_ = 0;
    unsigned available_ = 0;
};

// Counter-mode generator: word k of the stream is mix64(seed + (k+1)*gamma).
// Same seed gives the same stream.
class CounterRng final : public RandomSource {
public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

protected:
    std::uint64_t next_word() override
    {
        ++counter_;
        return mix64(seed_ + counter_ * 0x9e3779b97f4a7c15ULL);
    }

private:
    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
};

} // namespace amc
