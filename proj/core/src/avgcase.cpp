#include "deltrace/avgcase.hpp"

#include <algorithm>
#include <cmath>

#include "deltrace/error.hpp"

namespace deltrace {

namespace {

BitString bits_of(std::uint64_t value, int r) {
  BitString s;
  for (int i = r - 1; i >= 0; --i) s.push_back(static_cast<int>((value >> i) & 1));
  return s;
}

Rational two_pow_minus(int r) { return Rational(1) / Rational(boost::multiprecision::cpp_int(1) << r); }

}  // namespace

void HardDistribution::validate() const {
  require(r >= 1 && r <= 24, ErrorKind::InvalidParameter, "block length r must lie in [1, 24]");
  Rational total = 0;
  for (const auto& [z, m] : rho) {
    require(static_cast<int>(z.size()) == r, ErrorKind::InvalidParameter, "every key of rho must have length r");
    require(m >= 0, ErrorKind::InvalidParameter, "rho masses must be nonnegative");
    total += m;
  }
  require(total == 1, ErrorKind::InvalidParameter, "rho must have total mass exactly 1");
}

HardDistribution HardDistribution::uniform(int r) {
  HardDistribution hd;
  hd.r = r;
  const Rational each = two_pow_minus(r);
  for (std::uint64_t v = 0; v < (std::uint64_t{1} << r); ++v) hd.rho[bits_of(v, r)] = each;
  return hd;
}

HardDistribution HardDistribution::point_mass(const BitString& z) {
  HardDistribution hd;
  hd.r = static_cast<int>(z.size());
  hd.rho[z] = 1;
  return hd;
}

std::map<BitString, Rational> complement_law(const HardDistribution& hd) {
  hd.validate();
  const Rational w = two_pow_minus(hd.r);
  std::map<BitString, Rational> sigma;
  for (std::uint64_t v = 0; v < (std::uint64_t{1} << hd.r); ++v) {
    const BitString z = bits_of(v, hd.r);
    const auto it = hd.rho.find(z);
    const Rational rho_z = it == hd.rho.end() ? Rational(0) : it->second;
    sigma[z] = (w - w * rho_z) / (Rational(1) - w);
  }
  return sigma;
}

bool mixture_identity_holds(const HardDistribution& hd) {
  const Rational w = two_pow_minus(hd.r);
  const auto sigma = complement_law(hd);
  for (const auto& [z, s] : sigma) {
    const auto it = hd.rho.find(z);
    const Rational rho_z = it == hd.rho.end() ? Rational(0) : it->second;
    if (w * rho_z + (Rational(1) - w) * s != w || s < 0) return false;
  }
  return true;
}

HardEmbedder::HardEmbedder(const HardDistribution& hd, int n) : r_(hd.r), n_(n) {
  hd.validate();
  require(hd.r <= n, ErrorKind::InvalidParameter, "block length r must not exceed n");
  const auto sigma = complement_law(hd);
  double rho_run = 0.0, sigma_run = 0.0;
  for (const auto& [z, s] : sigma) {
    keys_.push_back(z);
    const auto it = hd.rho.find(z);
    rho_run += it == hd.rho.end() ? 0.0 : it->second.convert_to<double>();
    sigma_run += s.convert_to<double>();
    rho_cdf_.push_back(rho_run);
    sigma_cdf_.push_back(sigma_run);
  }
}

EmbeddedSample HardEmbedder::operator()(Rng& rng) const {
  auto draw = [&](const std::vector<double>& cdf) -> const BitString& {
    const double u = rng.uniform() * cdf.back();
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    return keys_[std::min<std::size_t>(it - cdf.begin(), keys_.size() - 1)];
  };
  EmbeddedSample out;
  out.block_count = static_cast<std::size_t>(n_ / r_);
  const double flag_p = std::ldexp(1.0, -r_);
  for (std::size_t j = 0; j < out.block_count; ++j) {
    const bool flag = rng.uniform() < flag_p;
    out.flags.push_back(flag);
    out.x.append(draw(flag ? rho_cdf_ : sigma_cdf_));
  }
  for (int i = 0; i < n_ % r_; ++i) out.x.push_back(static_cast<int>(rng.next() >> 63));
  return out;
}

EmbeddedSample embed_hard_distribution(const HardDistribution& hd, int n, std::uint64_t seed) {
  Rng rng(seed);
  return HardEmbedder(hd, n)(rng);
}

SuccessBound success_upper_bound(int n, int r) {
  require(r >= 1, ErrorKind::InvalidParameter, "block length r must be at least 1");
  require(n >= r, ErrorKind::InvalidParameter, "n must be at least r");
  const double a = std::ldexp(std::exp(-static_cast<double>(r)), -r);
  SuccessBound b;
  b.value = std::exp(static_cast<double>(n / r) * std::log1p(-a));
  b.relaxed = std::exp(-0.9 * a * static_cast<double>(n) / r);
  b.relaxed_applicable = static_cast<double>(n) / r >= 10.0;
  return b;
}

int default_r(int n, LogBase base) {
  require(n >= 8, ErrorKind::InvalidParameter, "default block length needs n >= 8");
  const double l = base == LogBase::Natural ? std::log(static_cast<double>(n)) : std::log2(static_cast<double>(n));
  return std::max(1, static_cast<int>(std::floor(0.5 * l)));
}

}  // namespace deltrace
