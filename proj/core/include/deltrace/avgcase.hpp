#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "deltrace/bitstring.hpp"
#include "deltrace/coupling.hpp"
#include "deltrace/rng.hpp"

namespace deltrace {

// A law rho on r-bit strings, stored exactly. Strings absent from the map have
// probability zero.
struct HardDistribution {
  int r = 0;
  std::map<BitString, Rational> rho;

  void validate() const;
  static HardDistribution uniform(int r);
  static HardDistribution point_mass(const BitString& z);
};

// sigma = (lambda - 2^{-r} rho) / (1 - 2^{-r}) with lambda uniform, listed over
// all 2^r strings in lexicographic order.
std::map<BitString, Rational> complement_law(const HardDistribution& hd);

// True when 2^{-r} rho(z) + (1 - 2^{-r}) sigma(z) = 2^{-r} for every z.
bool mixture_identity_holds(const HardDistribution& hd);

struct EmbeddedSample {
  BitString x;
  std::vector<bool> flags;  // Q_j, one per full block
  std::size_t block_count = 0;
};

// Block j (of floor(n/r)) comes from rho when Q_j ~ Bernoulli(2^{-r}) is set,
// else from sigma; the n mod r trailing bits are uniform. The result is
// uniform on n-bit strings.
class HardEmbedder {
 public:
  HardEmbedder(const HardDistribution& hd, int n);
  EmbeddedSample operator()(Rng& rng) const;

 private:
  int r_, n_;
  std::vector<BitString> keys_;
  std::vector<double> rho_cdf_, sigma_cdf_;
};

EmbeddedSample embed_hard_distribution(const HardDistribution& hd, int n, std::uint64_t seed);

struct SuccessBound {
  double value = 0.0;    // (1 - 2^{-r} e^{-r})^{floor(n/r)}
  double relaxed = 0.0;  // exp(-0.9 * 2^{-r} e^{-r} n / r)
  bool relaxed_applicable = false;  // n / r >= 10
};

SuccessBound success_upper_bound(int n, int r);

enum class LogBase { Natural, Two };

// floor(log(n) / 2), at least 1. Requires n >= 8.
int default_r(int n, LogBase base = LogBase::Natural);

}  // namespace deltrace
