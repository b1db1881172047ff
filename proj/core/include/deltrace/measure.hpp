#pragma once

#include <cmath>
#include <initializer_list>
#include <map>
#include <string>
#include <utility>

#include "deltrace/error.hpp"
#include "deltrace/numeric.hpp"

namespace deltrace {

// Finitely supported nonnegative measure. Only keys of positive mass are
// stored; absent keys have mass zero. Keys are kept ordered so that every
// iteration (and hence every floating-point fold) is deterministic.
template <class Key>
class DiscreteMeasure {
 public:
  using key_type = Key;
  using map_type = std::map<Key, double>;
  using const_iterator = typename map_type::const_iterator;

  DiscreteMeasure() = default;
  DiscreteMeasure(std::initializer_list<std::pair<const Key, double>> atoms) {
    for (const auto& [key, mass] : atoms) add(key, mass);
  }

  static DiscreteMeasure point_mass(const Key& key, double mass = 1.0) {
    DiscreteMeasure m;
    m.add(key, mass);
    return m;
  }

  // Adds `mass` to the atom at `key`.
  void add(const Key& key, double mass) {
    require(std::isfinite(mass) && mass >= 0.0, ErrorKind::InvalidParameter,
            "measure masses must be finite and nonnegative");
    if (mass == 0.0) return;
    masses_[key] += mass;
    total_ += mass;
  }

  double mass(const Key& key) const {
    auto it = masses_.find(key);
    return it == masses_.end() ? 0.0 : it->second;
  }

  bool contains(const Key& key) const { return masses_.count(key) != 0; }

  double total() const noexcept { return total_.value(); }
  std::size_t support_size() const noexcept { return masses_.size(); }
  bool empty() const noexcept { return masses_.empty(); }
  bool is_probability(double tolerance = 1e-12) const noexcept {
    return std::fabs(total() - 1.0) <= tolerance;
  }

  const_iterator begin() const noexcept { return masses_.begin(); }
  const_iterator end() const noexcept { return masses_.end(); }
  const map_type& masses() const noexcept { return masses_; }

  DiscreteMeasure scaled(double factor) const {
    DiscreteMeasure out;
    for (const auto& [key, mass] : masses_) out.add(key, mass * factor);
    return out;
  }

  DiscreteMeasure normalized() const {
    require(total() > 0.0, ErrorKind::InvalidParameter, "cannot normalize the zero measure");
    return scaled(1.0 / total());
  }

  friend DiscreteMeasure operator+(const DiscreteMeasure& a, const DiscreteMeasure& b) {
    DiscreteMeasure out = a;
    for (const auto& [key, mass] : b.masses_) out.add(key, mass);
    return out;
  }

 private:
  map_type masses_;
  CompensatedSum total_;
};

// Law of a Bernoulli(delta) variable on {0, 1}.
inline DiscreteMeasure<int> bernoulli_measure(double delta) {
  require(delta >= 0.0 && delta <= 1.0, ErrorKind::InvalidParameter, "Bernoulli parameter must lie in [0,1]");
  DiscreteMeasure<int> m;
  m.add(0, 1.0 - delta);
  m.add(1, delta);
  return m;
}

// Walks the union of the supports of `a` and `b` in key order, calling
// visit(key, mass_a, mass_b) with zero for absent atoms.
template <class Key, class Visit>
void for_each_union(const DiscreteMeasure<Key>& a, const DiscreteMeasure<Key>& b, Visit&& visit) {
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() || ib != b.end()) {
    if (ib == b.end() || (ia != a.end() && ia->first < ib->first)) {
      visit(ia->first, ia->second, 0.0);
      ++ia;
    } else if (ia == a.end() || ib->first < ia->first) {
      visit(ib->first, 0.0, ib->second);
      ++ib;
    } else {
      visit(ia->first, ia->second, ib->second);
      ++ia;
      ++ib;
    }
  }
}

}  // namespace deltrace
