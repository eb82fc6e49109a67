#include "qvolterra/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "qvolterra/error.hpp"

namespace qvolterra {

SimplexPoint SimplexPoint::from_entries(std::vector<Entry> entries) {
  for (const auto& e : entries) {
    if (e.index == 0) throw Error(ErrorCode::kInvalidIndex, "simplex indices start at 1");
    if (!(e.weight >= 0.0)) {
      std::ostringstream os;
      os << "weight " << e.weight << " at index " << e.index;
      throw Error(ErrorCode::kNegativeWeight, os.str());
    }
  }
  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.index < b.index; });
  for (std::size_t j = 1; j < entries.size(); ++j) {
    if (entries[j].index == entries[j - 1].index) {
      throw Error(ErrorCode::kDuplicateIndex, "index " + std::to_string(entries[j].index));
    }
  }
  std::erase_if(entries, [](const Entry& e) { return e.weight == 0.0; });

  SimplexPoint p;
  p.entries_ = std::move(entries);
  const double s = p.sum();
  if (p.entries_.empty() || std::abs(s - 1.0) > kNormalizationTol) {
    std::ostringstream os;
    os.precision(17);
    os << "weights sum to " << s;
    throw Error(ErrorCode::kNotNormalized, os.str());
  }
  return p;
}

double SimplexPoint::operator[](Index index) const noexcept {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), index,
                             [](const Entry& e, Index i) { return e.index < i; });
  return (it != entries_.end() && it->index == index) ? it->weight : 0.0;
}

double SimplexPoint::sum() const noexcept {
  double s = 0.0;
  for (const auto& e : entries_) s += e.weight;
  return s;
}

FaceIndexSet::FaceIndexSet(std::vector<Index> indices) : indices_(std::move(indices)) {
  if (indices_.empty()) throw Error(ErrorCode::kInvalidArgument, "face index set is empty");
  std::sort(indices_.begin(), indices_.end());
  if (indices_.front() == 0) throw Error(ErrorCode::kInvalidIndex, "face indices start at 1");
  if (std::adjacent_find(indices_.begin(), indices_.end()) != indices_.end()) {
    throw Error(ErrorCode::kDuplicateIndex, "face index set has repeated entries");
  }
}

FaceIndexSet FaceIndexSet::first_n(std::size_t n) {
  std::vector<Index> idx(n);
  for (std::size_t j = 0; j < n; ++j) idx[j] = j + 1;
  return FaceIndexSet(std::move(idx));
}

FaceIndexSet FaceIndexSet::support_of(const SimplexPoint& x) {
  std::vector<Index> idx;
  idx.reserve(x.support_size());
  for (const auto& e : x.entries()) idx.push_back(e.index);
  return FaceIndexSet(std::move(idx));
}

bool FaceIndexSet::contains(Index i) const noexcept {
  return std::binary_search(indices_.begin(), indices_.end(), i);
}

SimplexPoint make_point(std::span<const std::pair<Index, double>> pairs) {
  std::vector<SimplexPoint::Entry> entries;
  entries.reserve(pairs.size());
  for (const auto& [i, w] : pairs) entries.push_back({i, w});
  return SimplexPoint::from_entries(std::move(entries));
}

SimplexPoint make_point(std::initializer_list<std::pair<Index, double>> pairs) {
  return make_point(std::span<const std::pair<Index, double>>(pairs.begin(), pairs.size()));
}

SimplexPoint extreme_point(Index n) {
  return SimplexPoint::from_entries({{n, 1.0}});
}

double l1_distance(const SimplexPoint& x, const SimplexPoint& y) {
  const auto& a = x.entries();
  const auto& b = y.entries();
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].index < b[j].index)) {
      d += a[i++].weight;
    } else if (i == a.size() || b[j].index < a[i].index) {
      d += b[j++].weight;
    } else {
      d += std::abs(a[i++].weight - b[j++].weight);
    }
  }
  return d;
}

double tail_mass(const SimplexPoint& x, Index n) {
  double s = 0.0;
  for (const auto& e : x.entries()) {
    if (e.index > n) s += e.weight;
  }
  return s;
}

double range_mass(const SimplexPoint& x, Index from, Index to) {
  double s = 0.0;
  for (const auto& e : x.entries()) {
    if (e.index >= from && e.index <= to) s += e.weight;
  }
  return s;
}

SimplexPoint sample_interior(const FaceIndexSet& face, std::uint64_t seed) {
  const auto& idx = face.indices();
  if (idx.size() == 1) return extreme_point(idx.front());

  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> draws(idx.size());
  double total = 0.0;
  for (auto& d : draws) {
    do {
      d = expo(rng);
    } while (!(d > 0.0));
    total += d;
  }
  std::vector<SimplexPoint::Entry> entries(idx.size());
  for (std::size_t j = 0; j < idx.size(); ++j) entries[j] = {idx[j], draws[j] / total};
  return SimplexPoint::from_entries(std::move(entries));
}

SimplexPoint uniform_point(const FaceIndexSet& face) {
  const double w = 1.0 / static_cast<double>(face.size());
  std::vector<SimplexPoint::Entry> entries;
  entries.reserve(face.size());
  for (Index i : face.indices()) entries.push_back({i, w});
  return SimplexPoint::from_entries(std::move(entries));
}

SimplexPoint geometric_profile(std::size_t n, double ratio) {
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "geometric profile needs n >= 1");
  if (!(ratio > 0.0 && ratio < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "geometric ratio must lie in (0, 1)");
  }
  std::vector<double> w(n);
  double total = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    w[k] = std::pow(ratio, static_cast<double>(k + 1));
    total += w[k];
  }
  std::vector<SimplexPoint::Entry> entries(n);
  for (std::size_t k = 0; k < n; ++k) entries[k] = {k + 1, w[k] / total};
  return SimplexPoint::from_entries(std::move(entries));
}

}  // namespace qvolterra
