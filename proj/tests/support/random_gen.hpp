#pragma once

#include <random>

#include "lockgraph/absint.hpp"
#include "lockgraph/detect.hpp"

namespace testsupport {

// Random abstract state over a small fixed lock universe; every field is
// populated so the lattice laws get exercised on deps and order too.
lockgraph::AbstractState random_state(std::mt19937 &rng);

// Random dependency relation over up to `max_locks` locks.
lockgraph::DependencyRelation random_relation(std::mt19937 &rng,
                                              int max_locks);

} // namespace testsupport
