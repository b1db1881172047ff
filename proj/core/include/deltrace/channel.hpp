#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "deltrace/bitstring.hpp"
#include "deltrace/rng.hpp"

namespace deltrace {

// Deletion channel parameters: each bit is deleted with probability q and
// retained with probability p = 1 - q. Both endpoints are rejected.
class ChannelParams {
 public:
  explicit ChannelParams(double q);

  double q() const noexcept { return q_; }
  double p() const noexcept { return 1.0 - q_; }

  friend bool operator==(const ChannelParams&, const ChannelParams&) = default;

 private:
  double q_;
};

struct TraceBatch {
  std::vector<BitString> traces;
  std::string source_label;
  ChannelParams params{0.5};
  std::uint64_t seed = 0;

  std::size_t size() const noexcept { return traces.size(); }
};

// One pass of the channel. Bits are visited in input order and each consumes
// exactly one uniform draw from `rng`.
BitString transmit(const BitString& x, const ChannelParams& params, Rng& rng);

// Same as above with a generator seeded from `seed`; deterministic in (x, params, seed).
BitString transmit(const BitString& x, const ChannelParams& params, std::uint64_t seed);

// Runs the channel only until `max_length` bits have been retained. The
// returned prefix equals the first `max_length` bits of transmit(x, params, rng)
// for the same generator state.
BitString transmit_prefix(const BitString& x, const ChannelParams& params, Rng& rng,
                          std::size_t max_length);

// T independent traces; trace i uses the stream derive_stream_seed(seed, i).
TraceBatch transmit_batch(const BitString& x, const ChannelParams& params, std::size_t count,
                          std::uint64_t seed, unsigned workers = 1, std::string source_label = {});

std::string batch_to_json(const TraceBatch& batch);
TraceBatch batch_from_json(const std::string& text);

}  // namespace deltrace
