#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "deltrace/bitstring.hpp"
#include "deltrace/channel.hpp"
#include "deltrace/measure.hpp"
#include "deltrace/mc_distance.hpp"
#include "deltrace/rng.hpp"

namespace deltrace {

using Rational = boost::multiprecision::cpp_rational;

// The exact dyadic rational equal to a double.
Rational exact_rational(double value);

struct BlockOutcome {
  BitString bits;
  Rational probability;
};

class BlockLaw {
 public:
  explicit BlockLaw(std::vector<BlockOutcome> outcomes);

  const std::vector<BlockOutcome>& outcomes() const noexcept { return outcomes_; }

  Rational total() const;
  Rational probability(const BitString& bits) const;
  DiscreteMeasure<BitString> to_measure() const;
  // Inverse-CDF draw consuming one uniform.
  const BitString& sample(Rng& rng) const;

 private:
  std::vector<BlockOutcome> outcomes_;
  std::vector<double> cdf_;
};

// Retained 01-block reduction: {01, 1, 0, empty} with {p^2, pq, pq, q^2/2} / s, s = 1 - q^2/2.
BlockLaw block01_law(double q);
// A 01-block through both stages: {01, 1, 0, empty} with {p^2, pq, pq, q^2}.
BlockLaw block01_marginal_law(double q);
// Two retained 01-blocks reduced independently; support is the 12 strings
// 0101 101 011 001 010 01 10 11 00 0 1 and empty.
BlockLaw block0101_law(double q);
// Defect conditioned on surviving: {10, 1, 0} with {p^2, pq, pq} / (1 - q^2).
BlockLaw defect_law_conditional(double q);
// Defect as the channel treats it: {10, 1, 0, empty} with {p^2, pq, pq, q^2}.
BlockLaw defect_law_unconditional(double q);

enum class Variant { X, Y };

// Counts of retained 01-blocks on each side of the defect.
struct PartialTrace2 {
  int y_left = 0;
  int y_right = 0;
  bool defect_present = true;
  int n = 0;
  double s = 0.0;
};

// Variant X: Y_l ~ Bin(n-1, s), Y_r ~ Bin(n, s); variant Y swaps the two.
PartialTrace2 sample_partial2(Variant variant, int n, const ChannelParams& params, Rng& rng);
PartialTrace2 sample_partial2(Variant variant, int n, const ChannelParams& params, std::uint64_t seed);

enum class PartialBlock { Block01, Block0101, Defect };

// Deterministic grouping: [01 if Y_l odd] (0101)^{Y_l/2} defect (0101)^{Y_r/2} [01 if Y_r odd].
std::vector<PartialBlock> four_partial(const PartialTrace2& pt);

// Caches the block laws for repeated staged sampling of one input.
class StagedSampler {
 public:
  StagedSampler(Variant variant, int n, const ChannelParams& params);
  BitString operator()(Rng& rng) const;

 private:
  Variant variant_;
  int n_;
  ChannelParams params_;
  BlockLaw block01_;
  BlockLaw defect_;
};

// A full trace built in stages; its law equals the channel law of the
// corresponding input string. The defect is reduced with the unconditional
// defect law.
BitString staged_sample(Variant variant, int n, const ChannelParams& params, Rng& rng);
BitString staged_sample(Variant variant, int n, const ChannelParams& params, std::uint64_t seed);

struct CouplingConfig {
  double c0 = 3.0;
};

// |Y_l - a_n| <= C0 sqrt(n log n) and likewise for Y_r, with a_n = n s.
bool event_a_indicator(const PartialTrace2& pt, const CouplingConfig& cfg);

// P[not A] computed from exact binomial tails.
double event_a_complement_exact(Variant variant, int n, const ChannelParams& params, const CouplingConfig& cfg);

enum class Trit : std::uint8_t { Zero = 0, One = 1, Two = 2 };
using TrinaryString = std::vector<Trit>;

// Drops the Zero symbols, keeping order.
TrinaryString contract_trinary(const TrinaryString& w);
std::string to_string(const TrinaryString& w);

struct PVec {
  double p0 = 0.0;
  double p1 = 0.0;
  double p2 = 0.0;
};

// Letter law for the defect coupling: p0 = P[0101-block -> empty],
// p1 = P[0101-block -> u_d], p2 = the rest.
PVec defect_pvec(double q, const BitString& defect_outcome);

enum class DefectTvMethod { Exact, MonteCarlo };

inline constexpr int kDefectExactMaxLength = 22;

// TV between R(w) for w ~ pvec^{j_l + 1 + j_r} conditioned on the middle
// letter being One, and R(w'') for w'' unconditioned.
EstimateWithCI defect_block_tv(int j_left, int j_right, const PVec& pvec, DefectTvMethod method,
                               std::uint64_t samples = 0, std::uint64_t seed = 0, unsigned workers = 1);

// Closed-form densities over {One, Two}-strings.
class DefectDensities {
 public:
  DefectDensities(int j_left, int j_right, const PVec& pvec);

  double conditioned(const TrinaryString& v) const;
  double unconditioned(const TrinaryString& v) const;
  // unconditioned(v) / conditioned(v) without the common letter factors.
  double ratio(const TrinaryString& v) const;

 private:
  int jl_, jr_;
  PVec pv_;
  std::vector<double> bin_l_, bin_r_, bin_all_;
  double split_sum(const TrinaryString& v) const;
};

}  // namespace deltrace
