#pragma once

// Metric quotients of Hilbert spaces by isometry groups: quotient distances
// and max filtering, bilipschitz invariant embeddings, polynomial invariants,
// Euclidean distortion certificates, sequence quotients, and pullback tools.

#include "orbitmetric/applications.hpp"
#include "orbitmetric/assignment.hpp"
#include "orbitmetric/dual_certificates.hpp"
#include "orbitmetric/embeddings.hpp"
#include "orbitmetric/empirical.hpp"
#include "orbitmetric/errors.hpp"
#include "orbitmetric/finite_metric.hpp"
#include "orbitmetric/group_action.hpp"
#include "orbitmetric/invariant_map.hpp"
#include "orbitmetric/io.hpp"
#include "orbitmetric/io_format.hpp"
#include "orbitmetric/poly_invariants.hpp"
#include "orbitmetric/polynomial.hpp"
#include "orbitmetric/quotient.hpp"
#include "orbitmetric/rng.hpp"
#include "orbitmetric/sdp.hpp"
#include "orbitmetric/sequences.hpp"
