#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

namespace qvolterra {

// Coordinates of the infinite simplex are numbered from 1.
using Index = std::size_t;

inline constexpr double kNormalizationTol = 1e-12;

// A finitely supported point of the simplex S: nonnegative weights summing
// to 1. Only strictly positive weights are stored, in increasing index order.
class SimplexPoint {
 public:
  struct Entry {
    Index index;
    double weight;
    friend bool operator==(const Entry&, const Entry&) = default;
  };

  // Validates and takes ownership. Entries need not be sorted; zero weights
  // are dropped. Throws NegativeWeight, DuplicateIndex, InvalidIndex or
  // NotNormalized (|sum - 1| > 1e-12).
  static SimplexPoint from_entries(std::vector<Entry> entries);

  const std::vector<Entry>& entries() const noexcept { return entries_; }
  std::size_t support_size() const noexcept { return entries_.size(); }
  // Largest index carrying mass.
  Index max_index() const noexcept { return entries_.back().index; }
  Index min_index() const noexcept { return entries_.front().index; }

  // Weight at `index`, 0 outside the support.
  double operator[](Index index) const noexcept;
  bool in_support(Index index) const noexcept { return (*this)[index] > 0.0; }

  double sum() const noexcept;

  friend bool operator==(const SimplexPoint&, const SimplexPoint&) = default;

 private:
  SimplexPoint() = default;
  std::vector<Entry> entries_;
};

// Finite index set K defining the face S^K.
class FaceIndexSet {
 public:
  // Throws InvalidArgument when empty, InvalidIndex on 0, DuplicateIndex on repeats.
  explicit FaceIndexSet(std::vector<Index> indices);
  FaceIndexSet(std::initializer_list<Index> indices)
      : FaceIndexSet(std::vector<Index>(indices)) {}

  // K_n = {1, ..., n}.
  static FaceIndexSet first_n(std::size_t n);
  static FaceIndexSet support_of(const SimplexPoint& x);

  const std::vector<Index>& indices() const noexcept { return indices_; }
  std::size_t size() const noexcept { return indices_.size(); }
  Index max_index() const noexcept { return indices_.back(); }
  bool contains(Index i) const noexcept;

  friend bool operator==(const FaceIndexSet&, const FaceIndexSet&) = default;

 private:
  std::vector<Index> indices_;
};

SimplexPoint make_point(std::span<const std::pair<Index, double>> pairs);
SimplexPoint make_point(std::initializer_list<std::pair<Index, double>> pairs);

// e^(n). Throws InvalidIndex for n == 0.
SimplexPoint extreme_point(Index n);

// Sum of |x_k - y_k| over the union of supports.
double l1_distance(const SimplexPoint& x, const SimplexPoint& y);

// Mass carried by indices strictly greater than n.
double tail_mass(const SimplexPoint& x, Index n);

// Mass carried by indices in [from, to].
double range_mass(const SimplexPoint& x, Index from, Index to);

// Uniformly distributed point of ri S^K (normalized i.i.d. exponentials).
// Deterministic per seed.
SimplexPoint sample_interior(const FaceIndexSet& face, std::uint64_t seed);

// Barycenter of the face.
SimplexPoint uniform_point(const FaceIndexSet& face);

// Weights proportional to ratio^k on 1..n. Requires n >= 1, 0 < ratio < 1.
SimplexPoint geometric_profile(std::size_t n, double ratio);

}  // namespace qvolterra
