#pragma once

#include <functional>
#include <map>
#include <optional>

#include "rspec/types.hpp"

namespace rspec {

enum class SpaceTag { brain, detector };

inline const char* to_string(SpaceTag tag) {
  return tag == SpaceTag::brain ? "brain" : "detector";
}

/// Sparse basis-coefficient map, tagged by the space its expansion lives in.
/// Entries are ordered by (m, l), so iteration is deterministic.
class CoefficientField {
 public:
  using Map = std::map<BasisIndex, Complex>;

  explicit CoefficientField(SpaceTag tag) : tag_(tag) {}

  SpaceTag tag() const { return tag_; }

  void set(const BasisIndex& idx, Complex value) {
    require_index(idx);
    if (idx.m > kDefaultDegreeCap)
      throw CapabilityError("coefficient degree exceeds the cap");
    entries_[idx] = value;
  }
  void add(const BasisIndex& idx, Complex value) {
    require_index(idx);
    entries_[idx] += value;
  }

  /// Coefficient at idx; zero when absent.
  Complex get(const BasisIndex& idx) const {
    auto it = entries_.find(idx);
    return it == entries_.end() ? Complex{0.0, 0.0} : it->second;
  }

  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  int max_degree() const { return entries_.empty() ? -1 : entries_.rbegin()->first.m; }

  Map::const_iterator begin() const { return entries_.begin(); }
  Map::const_iterator end() const { return entries_.end(); }

  /// entry(-l, m) == conj(entry(l, m)) within tol; such fields evaluate real.
  bool is_conjugate_symmetric(double tol = 1e-12) const;

  friend bool operator==(const CoefficientField& a, const CoefficientField& b) {
    return a.tag_ == b.tag_ && a.entries_ == b.entries_;
  }

 private:
  SpaceTag tag_;
  Map entries_;
};

inline void require_tag(const CoefficientField& c, SpaceTag expected, const char* op) {
  if (c.tag() != expected)
    throw UsageError(std::string(op) + ": expected a " + to_string(expected) +
                     "-space field, got " + to_string(c.tag()));
}

/// A real-valued function on the unit disc; carries its coefficient expansion
/// when one is known.
struct FieldFunction {
  std::function<double(const BrainPoint&)> eval;
  std::optional<CoefficientField> coefficients;

  double operator()(const BrainPoint& p) const { return eval(p); }
};

/// Finite expansion sum at a disc point (brain-tagged fields only).
Complex evaluate_expansion(const CoefficientField& c, const BrainPoint& p);

/// Finite expansion sum at a detector point (detector-tagged fields only).
Complex evaluate_expansion(const CoefficientField& c, const DetectorPoint& d);

/// Real-valued evaluation: requires the imaginary residue of the sum to be
/// roundoff-sized (<= 1e-12 * field scale) and clamps it to zero.
double evaluate_expansion_real(const CoefficientField& c, const BrainPoint& p);
double evaluate_expansion_real(const CoefficientField& c, const DetectorPoint& d);

/// Term-wise mixed derivative d^alpha/dr^alpha d^beta/dtheta^beta of a
/// brain-space expansion.
Complex expansion_derivative(const CoefficientField& c, int alpha, int beta,
                             const BrainPoint& p);

/// Wrap a conjugate-symmetric brain field as a real FieldFunction.
FieldFunction field_from_coefficients(CoefficientField c);

}  // namespace rspec
