#pragma once

// Counter-based random streams: the word at position c of stream (seed, id) is
// a pure function mix(seed, id, c), so any draw can be replayed by seeking the
// counter and disjoint stream ids give statistically independent streams
// without coordination. Trajectory i of an ensemble always owns stream id i
// (plus a documented offset when an experiment needs two ensembles), which is
// what makes results independent of the worker count.

#include <cstdint>

namespace fsbe {

// splitmix64 finalizer; bijective on 64-bit words.
inline std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return z;
}

class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream_id)
      : master_(master_seed),
        id_(stream_id),
        key_(mix64(mix64(master_seed ^ 0x853c49e6748fea9bULL) +
                   stream_id * 0x9e3779b97f4a7c15ULL)) {}

  // Raw word at the current counter; advances by one.
  std::uint64_t next_word() { return word_at(counter_++); }

  // Uniform on (0,1]; one counter step. The +1 keeps log() finite.
  double uniform() {
    return static_cast<double>((next_word() >> 11) + 1) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller (cosine branch only); exactly two counter
  // steps per draw, so draw i of a fresh stream sits at counters 2i, 2i+1.
  double normal();

  std::uint64_t counter() const { return counter_; }
  void seek(std::uint64_t counter) { counter_ = counter; }
  std::uint64_t master_seed() const { return master_; }
  std::uint64_t stream_id() const { return id_; }

 private:
  std::uint64_t word_at(std::uint64_t c) const {
    return mix64(key_ + (c + 1) * 0x9e3779b97f4a7c15ULL);
  }
  std::uint64_t master_;
  std::uint64_t id_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace fsbe
