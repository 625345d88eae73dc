#pragma once
// Counter-based randomness (Philox 4x32-10). A stream is addressed by
// (seed, stream index); output depends only on that address and the draw
// position, never on platform or thread interleaving. Monte-Carlo lanes each
// own one stream, with the lane id as the stream index.

#include <cstdint>

namespace treelab {

class RngStream {
 public:
  RngStream(uint64_t seed, uint64_t stream) {
    key_[0] = static_cast<uint32_t>(seed);
    key_[1] = static_cast<uint32_t>(seed >> 32);
    stream_[0] = static_cast<uint32_t>(stream);
    stream_[1] = static_cast<uint32_t>(stream >> 32);
  }

  uint64_t next_u64() {
    if (have_ == 0) refill();
    return buf_[--have_];
  }

  // 53-bit uniform in [0, 1)
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // uniform in [0, n), unbiased by rejection
  uint64_t below(uint64_t n) {
    uint64_t rem = (0ull - n) % n;  // 2^64 mod n
    for (;;) {
      uint64_t u = next_u64();
      if (u >= rem) return (u - rem) % n;
    }
  }

  unsigned __int128 next_u128() {
    unsigned __int128 hi = next_u64();
    return (hi << 64) | next_u64();
  }

 private:
  void refill() {
    uint32_t c0 = static_cast<uint32_t>(block_);
    uint32_t c1 = static_cast<uint32_t>(block_ >> 32);
    ++block_;
    uint32_t x0 = c0, x1 = c1, x2 = stream_[0], x3 = stream_[1];
    uint32_t k0 = key_[0], k1 = key_[1];
    for (int round = 0; round < 10; ++round) {
      uint64_t p0 = 0xD2511F53ull * x0;
      uint64_t p1 = 0xCD9E8D57ull * x2;
      uint32_t hi0 = static_cast<uint32_t>(p0 >> 32), lo0 = static_cast<uint32_t>(p0);
      uint32_t hi1 = static_cast<uint32_t>(p1 >> 32), lo1 = static_cast<uint32_t>(p1);
      uint32_t y0 = hi1 ^ x1 ^ k0;
      uint32_t y1 = lo1;
      uint32_t y2 = hi0 ^ x3 ^ k1;
      uint32_t y3 = lo0;
      x0 = y0, x1 = y1, x2 = y2, x3 = y3;
      k0 += 0x9E3779B9u;
      k1 += 0xBB67AE85u;
    }
    buf_[0] = (static_cast<uint64_t>(x1) << 32) | x0;
    buf_[1] = (static_cast<uint64_t>(x3) << 32) | x2;
    have_ = 2;
  }

  uint32_t key_[2];
  uint32_t stream_[2];
  uint64_t block_ = 0;
  uint64_t buf_[2] = {0, 0};
  int have_ = 0;
};

}  // namespace treelab
