#pragma once

#include <algorithm>
#include <cstddef>

#include "corrtree/agglomerate.hpp"
#include "corrtree/correlation.hpp"
#include "corrtree/dendrogram.hpp"

namespace corrtree {

/// Average linkage (UPGMA): the distance between two clusters is the
/// unweighted mean over all cross pairs of members.
inline Dendrogram average_linkage(const DistanceMatrix& dist) {
  return detail::agglomerate(
      dist, Linkage::average, [](double da, double db, std::size_t na, std::size_t nb) {
        const double mean = (static_cast<double>(na) * da + static_cast<double>(nb) * db) /
                            static_cast<double>(na + nb);
        // A convex combination; clamping removes rounding outside [min, max]
        // that could otherwise produce a height inversion.
        return std::clamp(mean, std::min(da, db), std::max(da, db));
      });
}

}  // namespace corrtree
