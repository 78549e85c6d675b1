#pragma once

#include <ftor/abelian_group.hpp>
#include <ftor/rational.hpp>

#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace ftor {

enum class CoeffRing { integers, rationals };

// Exact finite-support element of R[G], R = Z or Q.
class GroupRingElement {
 public:
  GroupRingElement() = default;
  explicit GroupRingElement(FgAbelianGroup g,
                            CoeffRing ring = CoeffRing::rationals)
      : group_(std::move(g)), ring_(ring) {}

  static GroupRingElement one(const FgAbelianGroup& g,
                              CoeffRing ring = CoeffRing::rationals) {
    GroupRingElement e(g, ring);
    e.add_term(group_identity(g), Rational(1));
    return e;
  }

  static GroupRingElement monomial(const FgAbelianGroup& g, GroupElement elem,
                                   const Rational& c,
                                   CoeffRing ring = CoeffRing::rationals) {
    GroupRingElement e(g, ring);
    e.add_term(std::move(elem), c);
    return e;
  }

  const FgAbelianGroup& group() const { return group_; }
  CoeffRing coeff_ring() const { return ring_; }
  const std::map<GroupElement, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  size_t term_count() const { return terms_.size(); }

  void add_term(GroupElement g, const Rational& c) {
    if (c == 0) return;
    if (ring_ == CoeffRing::integers && denominator(c) != 1)
      throw DomainError("non-integer coefficient in an integral group ring");
    GroupElement key = reduce_element(group_, std::move(g));
    auto it = terms_.find(key);
    if (it == terms_.end()) {
      terms_.emplace(std::move(key), c);
    } else {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  Rational coeff(const GroupElement& g) const {
    auto it = terms_.find(reduce_element(group_, g));
    return it == terms_.end() ? Rational(0) : it->second;
  }

  GroupRingElement operator-() const {
    GroupRingElement r = *this;
    for (auto& [g, c] : r.terms_) c = -c;
    return r;
  }

  friend GroupRingElement operator+(const GroupRingElement& a,
                                    const GroupRingElement& b) {
    GroupRingElement r = a;
    r.ring_ = merge_ring(a, b);
    for (const auto& [g, c] : b.terms_) r.add_term(g, c);
    return r;
  }

  friend GroupRingElement operator-(const GroupRingElement& a,
                                    const GroupRingElement& b) {
    GroupRingElement r = a;
    r.ring_ = merge_ring(a, b);
    for (const auto& [g, c] : b.terms_) r.add_term(g, -c);
    return r;
  }

  friend GroupRingElement operator*(const GroupRingElement& a,
                                    const GroupRingElement& b) {
    check_same_group(a, b);
    GroupRingElement r(a.group_, merge_ring(a, b));
    for (const auto& [g, c] : a.terms_)
      for (const auto& [h, d] : b.terms_)
        r.add_term(group_add(a.group_, g, h), c * d);
    return r;
  }

  friend GroupRingElement operator*(const Rational& c, const GroupRingElement& a) {
    GroupRingElement r(a.group_, a.ring_);
    for (const auto& [g, d] : a.terms_) r.add_term(g, c * d);
    return r;
  }

  friend bool operator==(const GroupRingElement& a, const GroupRingElement& b) {
    return a.group_ == b.group_ && a.terms_ == b.terms_;
  }

  GroupRingElement pow(int64_t n) const {
    if (n < 0) throw DomainError("negative power of a group ring element");
    GroupRingElement acc = one(group_, ring_);
    GroupRingElement base = *this;
    while (n > 0) {
      if (n & 1) acc = acc * base;
      base = base * base;
      n >>= 1;
    }
    return acc;
  }

 private:
  static void check_same_group(const GroupRingElement& a,
                               const GroupRingElement& b) {
    if (!(a.group_ == b.group_))
      throw DomainError("group ring elements over different groups");
  }
  static CoeffRing merge_ring(const GroupRingElement& a,
                              const GroupRingElement& b) {
    return (a.ring_ == CoeffRing::integers && b.ring_ == CoeffRing::integers)
               ? CoeffRing::integers
               : CoeffRing::rationals;
  }

  FgAbelianGroup group_;
  CoeffRing ring_ = CoeffRing::rationals;
  std::map<GroupElement, Rational> terms_;
};

// Generator names: t for a single free generator, else t1..tr; s / s1.. for
// torsion. Used by the human-readable output format.
inline std::string element_str(const FgAbelianGroup& g, const GroupElement& e) {
  std::ostringstream os;
  bool first = true;
  auto emit = [&](const std::string& name, int64_t exp) {
    if (exp == 0) return;
    if (!first) os << "*";
    os << name;
    if (exp != 1) os << "^" << exp;
    first = false;
  };
  for (int i = 0; i < g.rank; ++i)
    emit(g.rank == 1 ? "t" : "t" + std::to_string(i + 1), e.free[i]);
  for (size_t i = 0; i < g.torsion_orders.size(); ++i)
    emit(g.torsion_orders.size() == 1 ? "s" : "s" + std::to_string(i + 1),
         e.tor[i]);
  if (first) os << "1";
  return os.str();
}

inline std::string group_ring_str(const GroupRingElement& a) {
  if (a.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [g, c] : a.terms()) {
    Rational ac = rational_abs(c);
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    std::string mono = element_str(a.group(), g);
    if (ac != 1) {
      os << rational_str(ac);
      if (mono != "1") os << "*" << mono;
    } else {
      os << mono;
    }
    first = false;
  }
  return os.str();
}

}  // namespace ftor
