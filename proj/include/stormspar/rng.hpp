#pragma once

#include <cstdint>

namespace stormspar {

// splitmix64 step. Whitens seeds and hashes trial coordinates into
// per-trial seeds.
std::uint64_t mix64(std::uint64_t x);

// PCG32 (XSH-RR 64/32, setseq variant). The (seed, stream_id) pair fully
// determines the output sequence, bit-identically across runs and across
// threads; distinct stream_ids select distinct LCG increments and act as
// statistically independent streams. Seeds are whitened with mix64 so that
// small consecutive seeds start from unrelated states.
class SeededRng {
  public:
    SeededRng() : SeededRng(0, 0) {}
    SeededRng(std::uint64_t seed, std::uint64_t stream_id);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_id_; }

    std::uint32_t next_u32();
    std::uint64_t next_u64();

    // Uniform on [0, 1) with 53 random bits.
    double uniform01();

    // Uniform on {0, ..., bound - 1}, unbiased via rejection. bound >= 1.
    std::uint64_t uniform_below(std::uint64_t bound);

    // Standard normal deviate via the Box-Muller transform. Values come in
    // pairs; the second of each pair is cached for the next call.
    double normal();

  private:
    std::uint64_t state_;
    std::uint64_t inc_;
    std::uint64_t seed_;
    std::uint64_t stream_id_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace stormspar
