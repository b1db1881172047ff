#include <cmath>
#include <map>

#include <gtest/gtest.h>

#include "deltrace/binomial_kit.hpp"
#include "deltrace/coupling.hpp"
#include "deltrace/error.hpp"
#include "deltrace/exact_oracle.hpp"
#include "deltrace/stats.hpp"

using namespace deltrace;

namespace {

const BitString kEmpty{};
BitString bs(const char* s) { return BitString::parse(s); }

// Exhaustive law of R(w) over {0,1,2}^L, optionally conditioned on w[j] = 1.
std::map<std::string, double> brute_defect_law(int jl, int jr, const PVec& pv, bool conditioned) {
  const int length = jl + 1 + jr;
  std::map<std::string, double> law;
  std::uint64_t total = 1;
  for (int i = 0; i < length; ++i) total *= 3;
  for (std::uint64_t code = 0; code < total; ++code) {
    TrinaryString w;
    double prob = 1.0;
    std::uint64_t c = code;
    for (int i = 0; i < length; ++i, c /= 3) {
      const auto t = static_cast<Trit>(c % 3);
      w.push_back(t);
      if (i == jl && conditioned) {
        if (t != Trit::One) prob = 0.0;
        continue;
      }
      prob *= t == Trit::Zero ? pv.p0 : t == Trit::One ? pv.p1 : pv.p2;
    }
    if (prob > 0.0) law[to_string(contract_trinary(w))] += prob;
  }
  return law;
}

double law_tv(const std::map<std::string, double>& a, const std::map<std::string, double>& b) {
  double sum = 0.0;
  for (const auto& [k, v] : a) sum += std::fabs(v - (b.count(k) ? b.at(k) : 0.0));
  for (const auto& [k, v] : b)
    if (!a.count(k)) sum += v;
  return 0.5 * sum;
}

TrinaryString parse_trits(const std::string& s) {
  TrinaryString out;
  for (char ch : s) out.push_back(static_cast<Trit>(ch - '0'));
  return out;
}

}  // namespace

TEST(BlockLaw, ProbabilitiesSumToOneExactly) {
  for (double q : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    EXPECT_EQ(block01_law(q).total(), 1) << q;
    EXPECT_EQ(block01_marginal_law(q).total(), 1) << q;
    EXPECT_EQ(block0101_law(q).total(), 1) << q;
    EXPECT_EQ(defect_law_conditional(q).total(), 1) << q;
    EXPECT_EQ(defect_law_unconditional(q).total(), 1) << q;
  }
}

TEST(BlockLaw, MarginalComposesBothStages) {
  for (double q : {0.3, 0.5}) {
    const Rational qq = exact_rational(q), p = 1 - qq, s = 1 - qq * qq / 2;
    const auto retained = block01_law(q), marginal = block01_marginal_law(q);
    EXPECT_EQ(marginal.probability(bs("01")), p * p);
    EXPECT_EQ(marginal.probability(bs("1")), p * qq);
    EXPECT_EQ(marginal.probability(bs("0")), p * qq);
    EXPECT_EQ(marginal.probability(kEmpty), qq * qq);
    for (const auto& o : marginal.outcomes()) {
      const Rational dropped = o.bits.empty() ? qq * qq / 2 : Rational(0);
      EXPECT_EQ(o.probability, s * retained.probability(o.bits) + dropped);
    }
    EXPECT_EQ(retained.probability(bs("01")), p * p / s);
    EXPECT_EQ(retained.probability(kEmpty), qq * qq / (2 * s));
  }
}

TEST(BlockLaw, DoubleBlockIsConvolution) {
  const double q = 0.3;
  const auto one = block01_law(q), two = block0101_law(q);
  EXPECT_EQ(two.outcomes().size(), 12u);
  std::map<BitString, Rational> conv;
  for (const auto& a : one.outcomes())
    for (const auto& b : one.outcomes()) conv[a.bits + b.bits] += a.probability * b.probability;
  EXPECT_EQ(conv.size(), 12u);
  for (const auto& [bits, prob] : conv) EXPECT_EQ(two.probability(bits), prob) << bits;
  for (const char* u : {"0101", "101", "011", "001", "010", "01", "10", "11", "00", "0", "1", ""})
    EXPECT_GT(two.probability(bs(u)), 0) << u;
}

TEST(BlockLaw, DefectLaws) {
  const Rational qq = exact_rational(0.5), p = 1 - qq;
  const auto cond = defect_law_conditional(0.5), uncond = defect_law_unconditional(0.5);
  EXPECT_EQ(cond.probability(bs("10")), p * p / (1 - qq * qq));
  EXPECT_EQ(cond.probability(kEmpty), 0);
  EXPECT_EQ(uncond.probability(bs("10")), p * p);
  EXPECT_EQ(uncond.probability(kEmpty), qq * qq);
}

TEST(BlockLaw, SamplingFrequencies) {
  const auto law = block01_marginal_law(0.5);
  std::map<BitString, std::uint64_t> counts;
  Rng rng(3);
  const int draws = 1000000;
  for (int i = 0; i < draws; ++i) ++counts[law.sample(rng)];
  for (const auto& o : law.outcomes()) {
    const double p = o.probability.convert_to<double>();
    EXPECT_NEAR(counts[o.bits] / double(draws), p, 4 * std::sqrt(p * (1 - p) / draws)) << o.bits;
  }
}

TEST(SamplePartial2, Edges) {
  const ChannelParams tiny(1e-12), half(0.5);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto x = sample_partial2(Variant::X, 5, tiny, seed);
    EXPECT_EQ(x.y_left, 4);
    EXPECT_EQ(x.y_right, 5);
    const auto y = sample_partial2(Variant::Y, 5, tiny, seed);
    EXPECT_EQ(y.y_left, 5);
    EXPECT_EQ(y.y_right, 4);
    EXPECT_EQ(sample_partial2(Variant::X, 1, half, seed).y_left, 0);
  }
}

TEST(SamplePartial2, MeanOfRightCount) {
  const ChannelParams params(0.5);
  const int n = 30, draws = 100000;
  const double s = 1 - 0.125;
  Rng rng(17);
  double sum = 0.0;
  for (int i = 0; i < draws; ++i) sum += sample_partial2(Variant::X, n, params, rng).y_right;
  EXPECT_NEAR(sum / draws, n * s, 4 * std::sqrt(n * s * (1 - s) / draws));
}

TEST(FourPartial, GroupsBlocks) {
  PartialTrace2 pt;
  pt.y_left = 3;
  pt.y_right = 4;
  pt.n = 5;
  const auto blocks = four_partial(pt);
  const std::vector<PartialBlock> expected{PartialBlock::Block01, PartialBlock::Block0101, PartialBlock::Defect,
                                           PartialBlock::Block0101, PartialBlock::Block0101};
  EXPECT_EQ(blocks, expected);
}

TEST(StagedSample, NearZeroDeletionReturnsInput) {
  const ChannelParams tiny(1e-12);
  EXPECT_EQ(staged_sample(Variant::X, 3, tiny, 1), build_xy(3).left);
  EXPECT_EQ(staged_sample(Variant::Y, 3, tiny, 1), build_xy(3).right);
}

TEST(StagedSample, LawMatchesChannel) {
  for (double q : {0.3, 0.5, 0.7}) {
    for (auto variant : {Variant::X, Variant::Y}) {
      const ChannelParams params(q);
      const auto pair = build_xy(2);
      const auto exact = exact_distribution(variant == Variant::X ? pair.left : pair.right, params);
      std::map<BitString, std::size_t> index;
      std::vector<double> probs;
      for (const auto& [w, p] : exact) {
        index[w] = probs.size();
        probs.push_back(p);
      }
      std::vector<std::uint64_t> counts(probs.size(), 0);
      const StagedSampler sampler(variant, 2, params);
      Rng rng(derive_domain_seed(99, static_cast<std::uint64_t>(q * 10)));
      for (int i = 0; i < 200000; ++i) {
        const auto it = index.find(sampler(rng));
        ASSERT_NE(it, index.end());
        ++counts[it->second];
      }
      const auto gof = chi_square_gof(counts, probs);
      EXPECT_GT(gof.p_value, 1e-3) << q;
    }
  }
}

TEST(EventA, Indicator) {
  CouplingConfig cfg;
  PartialTrace2 pt;
  pt.n = 100;
  pt.s = 0.875;
  pt.y_left = pt.y_right = 88;
  EXPECT_TRUE(event_a_indicator(pt, cfg));
  pt.y_left = 0;
  EXPECT_FALSE(event_a_indicator(pt, cfg));
  pt.n = 1;
  try {
    event_a_indicator(pt, cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DegenerateWindow);
  }
}

TEST(EventA, ComplementIsTiny) {
  const ChannelParams params(0.5);
  const CouplingConfig cfg;
  const double exact = event_a_complement_exact(Variant::X, 100, params, cfg);
  EXPECT_LE(exact, 1e-4);
  const double half_width = cfg.c0 * std::sqrt(100 * std::log(100.0));
  // Per-side tail from the binomial kit, at the c matching the event width.
  const auto tail = binom_tail_check(BinomialSpec(100, 0.875), half_width / std::sqrt(100 * std::log(100.0)));
  EXPECT_LE(exact, 2 * tail.bound);
  Rng rng(5);
  int misses = 0;
  for (int i = 0; i < 100000; ++i) misses += !event_a_indicator(sample_partial2(Variant::X, 100, params, rng), cfg);
  EXPECT_EQ(misses, 0);
}

TEST(ContractTrinary, Examples) {
  EXPECT_EQ(to_string(contract_trinary(parse_trits("0210"))), "21");
  EXPECT_TRUE(contract_trinary(parse_trits("0000")).empty());
  EXPECT_EQ(contract_trinary(parse_trits("1221")), parse_trits("1221"));
}

TEST(ContractTrinary, IdempotentAndShrinking) {
  Rng rng(8);
  for (int i = 0; i < 500; ++i) {
    TrinaryString w;
    const auto len = rng.below(20);
    for (std::uint64_t j = 0; j < len; ++j) w.push_back(static_cast<Trit>(rng.below(3)));
    const auto once = contract_trinary(w);
    EXPECT_EQ(contract_trinary(once), once);
    EXPECT_LE(once.size(), w.size());
    TrinaryString longer = w;
    longer.push_back(static_cast<Trit>(rng.below(3)));
    EXPECT_GE(contract_trinary(longer).size(), once.size());
  }
}

TEST(DefectPvec, FromDoubleBlock) {
  const auto law = block0101_law(0.5);
  const auto pv = defect_pvec(0.5, bs("10"));
  EXPECT_DOUBLE_EQ(pv.p0, law.probability(kEmpty).convert_to<double>());
  EXPECT_DOUBLE_EQ(pv.p1, law.probability(bs("10")).convert_to<double>());
  EXPECT_NEAR(pv.p0 + pv.p1 + pv.p2, 1.0, 1e-15);
  EXPECT_THROW(defect_pvec(0.5, kEmpty), Error);
}

TEST(DefectBlockTv, SingleLetter) {
  const PVec pv{0.2, 0.5, 0.3};
  EXPECT_NEAR(defect_block_tv(0, 0, pv, DefectTvMethod::Exact).value, 0.5, 1e-15);
}

TEST(DefectBlockTv, NoDeletionLimit) {
  const PVec pv{1e-13, 0.6, 0.4 - 1e-13};
  for (int j : {0, 1, 3})
    EXPECT_NEAR(defect_block_tv(j, j, pv, DefectTvMethod::Exact).value, 0.4, 1e-9) << j;
}

TEST(DefectBlockTv, ExactMatchesBruteForce) {
  const PVec pvs[] = {{0.2, 0.5, 0.3}, defect_pvec(0.5, bs("10")), defect_pvec(0.3, bs("1"))};
  for (const auto& pv : pvs)
    for (int jl = 0; jl <= 5; ++jl)
      for (int jr = 0; jl + jr + 1 <= 8; ++jr) {
        const double brute = law_tv(brute_defect_law(jl, jr, pv, true), brute_defect_law(jl, jr, pv, false));
        EXPECT_NEAR(defect_block_tv(jl, jr, pv, DefectTvMethod::Exact).value, brute, 1e-10) << jl << ' ' << jr;
      }
}

TEST(DefectDensities, MatchBruteForceAndIntegrateToOne) {
  const PVec pv = defect_pvec(0.5, bs("10"));
  for (auto [jl, jr] : {std::pair{0, 0}, std::pair{2, 3}, std::pair{4, 1}}) {
    const DefectDensities dens(jl, jr, pv);
    const auto cond = brute_defect_law(jl, jr, pv, true), uncond = brute_defect_law(jl, jr, pv, false);
    double sum_c = 0.0, sum_u = 0.0;
    const int length = jl + 1 + jr;
    for (int m = 0; m <= length; ++m)
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
        TrinaryString v;
        for (int i = 0; i < m; ++i) v.push_back((mask >> i) & 1 ? Trit::Two : Trit::One);
        const auto key = to_string(v);
        const double c = dens.conditioned(v), u = dens.unconditioned(v);
        sum_c += c;
        sum_u += u;
        EXPECT_NEAR(c, cond.count(key) ? cond.at(key) : 0.0, 1e-13) << key;
        EXPECT_NEAR(u, uncond.count(key) ? uncond.at(key) : 0.0, 1e-13) << key;
        if (c > 0) EXPECT_NEAR(dens.ratio(v), u / c, 1e-10 * (u / c)) << key;
      }
    EXPECT_NEAR(sum_c, 1.0, 1e-12);
    EXPECT_NEAR(sum_u, 1.0, 1e-12);
  }
}

TEST(DefectBlockTv, MonteCarloMatchesExact) {
  const PVec pv = defect_pvec(0.5, bs("10"));
  const double exact = defect_block_tv(8, 8, pv, DefectTvMethod::Exact).value;
  const auto mc = defect_block_tv(8, 8, pv, DefectTvMethod::MonteCarlo, 100000, 3);
  EXPECT_NEAR(mc.value, exact, 4 * mc.stderr_);
  const auto mc4 = defect_block_tv(8, 8, pv, DefectTvMethod::MonteCarlo, 100000, 3, 4);
  EXPECT_EQ(mc.value, mc4.value);
}

TEST(DefectBlockTv, ExactCap) {
  const PVec pv{0.2, 0.5, 0.3};
  try {
    defect_block_tv(11, 11, pv, DefectTvMethod::Exact);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SupportTooLarge);
  }
  EXPECT_THROW(defect_block_tv(1, 1, PVec{0.5, 0.5, 0.0}, DefectTvMethod::Exact), Error);
}
