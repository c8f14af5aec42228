#pragma once

#include "srg/geometry.hpp"
#include "srg/graph.hpp"

namespace srg {

//============================================================================
// GOSPA-style metric between two spatial graphs.
//
// For graphs of equal size n >= 2 the distance is
//
//   (1/n) min over bijections pi of
//       [ sum_i dV(x_i, y_pi(i))
//         + 1/(n-1) * sum_{i<i'} dE(edge a(i,i'), edge b(pi(i),pi(i'))) ]
//
// with dV the truncated Euclidean metric (cap cv) and dE the capped edge
// comparison (cap ce).  For n = 1 the edge term is absent; both graphs empty
// gives 0.  For unequal sizes n < m the smaller graph is matched injectively
// into the larger and every unmatched vertex of the larger graph is charged:
//
//  variant 1: cv plus ce/(m-1) per potential edge slot at the vertex
//             (slots to matched vertices, plus slots between two unmatched
//             vertices charged once per pair), so a lone extra vertex costs
//             exactly cv + ce and the metric never exceeds cv + ce/2;
//  variant 2: cv + ce plus ce/(m-1) per actual edge from the vertex to a
//             matched vertex, so a lone extra vertex costs
//             cv + ce + deg * ce/(m-1) and the metric never exceeds cv + ce.
//
// The joint vertex+edge optimisation is solved exactly by enumeration for
// max(n, m) <= 7 and by assignment-seeded local search (flagged as an upper
// bound) above that size.
//============================================================================

struct GospaResult {
    double value = 0.0;
    /// True when the reported value is the exact optimum; false when it is
    /// the local-search upper bound used for graphs larger than 7 vertices.
    bool exact = true;
};

GospaResult gospa(const SpatialGraph& a, const SpatialGraph& b, const MetricParams& mp);

/// Reference implementation by plain exhaustive enumeration of injections.
/// Requires max(n, m) <= 7.
double gospa_bruteforce(const SpatialGraph& a, const SpatialGraph& b, const MetricParams& mp);

} // namespace srg
