#include "deltrace/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "deltrace/binomial_kit.hpp"
#include "deltrace/error.hpp"
#include "deltrace/numeric.hpp"
#include "deltrace/parallel.hpp"

namespace deltrace {

Rational exact_rational(double value) {
  require(std::isfinite(value), ErrorKind::InvalidParameter, "cannot convert a non-finite value");
  int exponent = 0;
  const double mantissa = std::frexp(value, &exponent);
  // mantissa * 2^53 is an integer for every double.
  const auto scaled = static_cast<long long>(std::ldexp(mantissa, 53));
  Rational r(scaled);
  exponent -= 53;
  const boost::multiprecision::cpp_int power = boost::multiprecision::cpp_int(1) << std::abs(exponent);
  return exponent >= 0 ? r * Rational(power) : r / Rational(power);
}

BlockLaw::BlockLaw(std::vector<BlockOutcome> outcomes) : outcomes_(std::move(outcomes)) {
  double running = 0.0;
  for (const auto& o : outcomes_) {
    require(o.probability >= 0, ErrorKind::InvalidParameter, "block probabilities must be nonnegative");
    running += o.probability.convert_to<double>();
    cdf_.push_back(running);
  }
}

Rational BlockLaw::total() const {
  Rational t = 0;
  for (const auto& o : outcomes_) t += o.probability;
  return t;
}

Rational BlockLaw::probability(const BitString& bits) const {
  Rational t = 0;
  for (const auto& o : outcomes_)
    if (o.bits == bits) t += o.probability;
  return t;
}

DiscreteMeasure<BitString> BlockLaw::to_measure() const {
  DiscreteMeasure<BitString> m;
  for (const auto& o : outcomes_) m.add(o.bits, o.probability.convert_to<double>());
  return m;
}

const BitString& BlockLaw::sample(Rng& rng) const {
  const double u = rng.uniform() * cdf_.back();
  for (std::size_t i = 0; i + 1 < cdf_.size(); ++i)
    if (u < cdf_[i]) return outcomes_[i].bits;
  return outcomes_.back().bits;
}

namespace {

struct Exact {
  Rational q, p;
};

Exact exact_params(double q) {
  const ChannelParams checked(q);
  const Rational rq = exact_rational(checked.q());
  return {rq, Rational(1) - rq};
}

const BitString k01{0, 1};
const BitString k10{1, 0};
const BitString k1{1};
const BitString k0{0};
const BitString kEmpty{};

}  // namespace

BlockLaw block01_law(double q) {
  const auto [rq, p] = exact_params(q);
  const Rational s = Rational(1) - rq * rq / 2;
  return BlockLaw({{k01, p * p / s}, {k1, p * rq / s}, {k0, p * rq / s}, {kEmpty, rq * rq / (2 * s)}});
}

BlockLaw block01_marginal_law(double q) {
  const auto [rq, p] = exact_params(q);
  const Rational s = Rational(1) - rq * rq / 2;
  // Deleted in the first stage with probability 1 - s, else reduced by block01_law.
  const BlockLaw retained = block01_law(q);
  std::vector<BlockOutcome> out;
  for (const auto& o : retained.outcomes()) {
    Rational pr = s * o.probability;
    if (o.bits.empty()) pr += Rational(1) - s;
    out.push_back({o.bits, pr});
  }
  return BlockLaw(std::move(out));
}

BlockLaw block0101_law(double q) {
  const BlockLaw half = block01_law(q);
  std::map<BitString, Rational> merged;
  for (const auto& a : half.outcomes())
    for (const auto& b : half.outcomes()) merged[a.bits + b.bits] += a.probability * b.probability;
  std::vector<BlockOutcome> out;
  for (auto& [bits, pr] : merged) out.push_back({bits, pr});
  return BlockLaw(std::move(out));
}

BlockLaw defect_law_conditional(double q) {
  const auto [rq, p] = exact_params(q);
  const Rational z = Rational(1) - rq * rq;
  return BlockLaw({{k10, p * p / z}, {k1, p * rq / z}, {k0, p * rq / z}});
}

BlockLaw defect_law_unconditional(double q) {
  const auto [rq, p] = exact_params(q);
  return BlockLaw({{k10, p * p}, {k1, p * rq}, {k0, p * rq}, {kEmpty, rq * rq}});
}

namespace {

int bernoulli_sum(int trials, double s, Rng& rng) {
  int k = 0;
  for (int i = 0; i < trials; ++i) k += rng.uniform() < s;
  return k;
}

}  // namespace

PartialTrace2 sample_partial2(Variant variant, int n, const ChannelParams& params, Rng& rng) {
  require(n >= 1, ErrorKind::InvalidParameter, "block parameter n must be at least 1");
  const double q = params.q();
  PartialTrace2 pt;
  pt.n = n;
  pt.s = 1.0 - q * q / 2.0;
  const int left_blocks = variant == Variant::X ? n - 1 : n;
  const int right_blocks = variant == Variant::X ? n : n - 1;
  pt.y_left = bernoulli_sum(left_blocks, pt.s, rng);
  pt.y_right = bernoulli_sum(right_blocks, pt.s, rng);
  return pt;
}

PartialTrace2 sample_partial2(Variant variant, int n, const ChannelParams& params, std::uint64_t seed) {
  Rng rng(seed);
  return sample_partial2(variant, n, params, rng);
}

std::vector<PartialBlock> four_partial(const PartialTrace2& pt) {
  std::vector<PartialBlock> blocks;
  if (pt.y_left % 2) blocks.push_back(PartialBlock::Block01);
  blocks.insert(blocks.end(), pt.y_left / 2, PartialBlock::Block0101);
  if (pt.defect_present) blocks.push_back(PartialBlock::Defect);
  blocks.insert(blocks.end(), pt.y_right / 2, PartialBlock::Block0101);
  if (pt.y_right % 2) blocks.push_back(PartialBlock::Block01);
  return blocks;
}

StagedSampler::StagedSampler(Variant variant, int n, const ChannelParams& params)
    : variant_(variant),
      n_(n),
      params_(params),
      block01_(block01_law(params.q())),
      defect_(defect_law_unconditional(params.q())) {
  require(n >= 1, ErrorKind::InvalidParameter, "block parameter n must be at least 1");
}

BitString StagedSampler::operator()(Rng& rng) const {
  const PartialTrace2 pt = sample_partial2(variant_, n_, params_, rng);
  BitString out;
  for (PartialBlock block : four_partial(pt)) {
    switch (block) {
      case PartialBlock::Block01:
        out.append(block01_.sample(rng));
        break;
      case PartialBlock::Block0101:
        out.append(block01_.sample(rng));
        out.append(block01_.sample(rng));
        break;
      case PartialBlock::Defect:
        out.append(defect_.sample(rng));
        break;
    }
  }
  return out;
}

BitString staged_sample(Variant variant, int n, const ChannelParams& params, Rng& rng) {
  return StagedSampler(variant, n, params)(rng);
}

BitString staged_sample(Variant variant, int n, const ChannelParams& params, std::uint64_t seed) {
  Rng rng(seed);
  return staged_sample(variant, n, params, rng);
}

bool event_a_indicator(const PartialTrace2& pt, const CouplingConfig& cfg) {
  require(pt.n >= 2, ErrorKind::DegenerateWindow, "event A needs n >= 2 (log n vanishes at n = 1)");
  require(cfg.c0 > 0.0, ErrorKind::InvalidParameter, "C0 must be positive");
  const double n = pt.n;
  const double a_n = n * pt.s;
  const double width = cfg.c0 * std::sqrt(n * std::log(n));
  return std::fabs(pt.y_left - a_n) <= width && std::fabs(pt.y_right - a_n) <= width;
}

double event_a_complement_exact(Variant variant, int n, const ChannelParams& params, const CouplingConfig& cfg) {
  require(n >= 2, ErrorKind::DegenerateWindow, "event A needs n >= 2 (log n vanishes at n = 1)");
  const double s = 1.0 - params.q() * params.q() / 2.0;
  const double a_n = n * s;
  const double width = cfg.c0 * std::sqrt(n * std::log(static_cast<double>(n)));
  auto outside = [&](int trials) {
    const BinomialSpec spec(trials, s);
    CompensatedSum t;
    for (int k = 0; k <= trials; ++k)
      if (std::fabs(k - a_n) > width) t += binom_pmf(spec, k);
    return t.value();
  };
  const double tl = outside(variant == Variant::X ? n - 1 : n);
  const double tr = outside(variant == Variant::X ? n : n - 1);
  return tl + tr - tl * tr;
}

TrinaryString contract_trinary(const TrinaryString& w) {
  TrinaryString out;
  for (Trit t : w)
    if (t != Trit::Zero) out.push_back(t);
  return out;
}

std::string to_string(const TrinaryString& w) {
  std::string s;
  for (Trit t : w) s += static_cast<char>('0' + static_cast<int>(t));
  return s;
}

PVec defect_pvec(double q, const BitString& defect_outcome) {
  const BlockLaw law = block0101_law(q);
  PVec v;
  v.p0 = law.probability(kEmpty).convert_to<double>();
  v.p1 = law.probability(defect_outcome).convert_to<double>();
  require(!defect_outcome.empty() && v.p1 > 0.0, ErrorKind::InvalidParameter,
          "defect outcome must be a nonempty reduction of a 0101-block");
  v.p2 = 1.0 - v.p0 - v.p1;
  return v;
}

namespace {

std::vector<double> binomial_table(int trials, double s) {
  const BinomialSpec spec(trials, s);
  std::vector<double> t(trials + 1);
  for (int k = 0; k <= trials; ++k) t[k] = binom_pmf(spec, k);
  return t;
}

void check_pvec(const PVec& v) {
  for (double x : {v.p0, v.p1, v.p2})
    require(x > 0.0 && x < 1.0, ErrorKind::InvalidParameter, "pvec entries must lie in (0, 1)");
  require(std::fabs(v.p0 + v.p1 + v.p2 - 1.0) <= 1e-12, ErrorKind::InvalidParameter, "pvec must sum to 1");
}

}  // namespace

DefectDensities::DefectDensities(int j_left, int j_right, const PVec& pvec) : jl_(j_left), jr_(j_right), pv_(pvec) {
  require(j_left >= 0 && j_right >= 0, ErrorKind::InvalidParameter, "side lengths must be nonnegative");
  check_pvec(pvec);
  const double keep = 1.0 - pvec.p0;
  bin_l_ = binomial_table(j_left, keep);
  bin_r_ = binomial_table(j_right, keep);
  bin_all_ = binomial_table(j_left + 1 + j_right, keep);
}

double DefectDensities::split_sum(const TrinaryString& v) const {
  // The forced letter lands at position k (1-based) when k-1 left letters survive.
  const int m = static_cast<int>(v.size());
  CompensatedSum sum;
  for (int k = std::max(1, m - jr_); k <= std::min(m, jl_ + 1); ++k) {
    if (v[k - 1] != Trit::One) continue;
    sum += bin_l_[k - 1] * bin_r_[m - k];
  }
  return sum.value();
}

double DefectDensities::conditioned(const TrinaryString& v) const {
  const double p1 = pv_.p1 / (pv_.p1 + pv_.p2);
  std::size_t ones = 0;
  for (Trit t : v) {
    if (t == Trit::Zero) return 0.0;
    ones += t == Trit::One;
  }
  if (ones == 0) return 0.0;
  return std::pow(p1, static_cast<double>(ones - 1)) * std::pow(1.0 - p1, static_cast<double>(v.size() - ones)) *
         split_sum(v);
}

double DefectDensities::unconditioned(const TrinaryString& v) const {
  const double p1 = pv_.p1 / (pv_.p1 + pv_.p2);
  if (v.size() >= bin_all_.size()) return 0.0;
  std::size_t ones = 0;
  for (Trit t : v) {
    if (t == Trit::Zero) return 0.0;
    ones += t == Trit::One;
  }
  return bin_all_[v.size()] * std::pow(p1, static_cast<double>(ones)) *
         std::pow(1.0 - p1, static_cast<double>(v.size() - ones));
}

double DefectDensities::ratio(const TrinaryString& v) const {
  const double p1 = pv_.p1 / (pv_.p1 + pv_.p2);
  const double split = split_sum(v);
  if (split == 0.0) return std::numeric_limits<double>::infinity();
  return p1 * bin_all_[v.size()] / split;
}

EstimateWithCI defect_block_tv(int j_left, int j_right, const PVec& pvec, DefectTvMethod method,
                               std::uint64_t samples, std::uint64_t seed, unsigned workers) {
  const DefectDensities dens(j_left, j_right, pvec);
  const int length = j_left + 1 + j_right;
  if (method == DefectTvMethod::Exact) {
    require(length <= kDefectExactMaxLength, ErrorKind::SupportTooLarge,
            "exact defect TV enumerates 2^(L+1) strings; L must be at most " +
                std::to_string(kDefectExactMaxLength));
    CompensatedSum sum;
    TrinaryString v;
    for (int m = 0; m <= length; ++m) {
      v.assign(m, Trit::One);
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
        for (int i = 0; i < m; ++i) v[i] = (mask >> i) & 1 ? Trit::Two : Trit::One;
        sum += std::fabs(dens.conditioned(v) - dens.unconditioned(v));
      }
    }
    EstimateWithCI out;
    out.value = out.raw = 0.5 * sum.value();
    return out;
  }

  require(samples >= 1, ErrorKind::InvalidParameter, "Monte Carlo defect TV needs at least one sample");
  const double c0 = pvec.p0;
  const double c1 = pvec.p0 + pvec.p1;
  auto parts = map_chunks(samples, 1024, workers, [&](std::size_t begin, std::size_t end) {
    MomentAccumulator acc;
    TrinaryString v;
    for (std::size_t i = begin; i < end; ++i) {
      Rng rng(derive_stream_seed(seed, i));
      v.clear();
      for (int pos = 0; pos < length; ++pos) {
        if (pos == j_left) {
          v.push_back(Trit::One);
          continue;
        }
        const double u = rng.uniform();
        if (u < c0) continue;
        v.push_back(u < c1 ? Trit::One : Trit::Two);
      }
      acc.add(std::max(0.0, 1.0 - dens.ratio(v)));
    }
    return acc;
  });
  MomentAccumulator total;
  for (const auto& p : parts) total += p;
  EstimateWithCI out;
  out.raw = total.mean();
  out.value = std::clamp(out.raw, 0.0, 1.0);
  out.stderr_ = total.standard_error();
  out.n_samples = total.count;
  out.seed = seed;
  return out;
}

}  // namespace deltrace
