#pragma once

#include "hopd/aggregation.hpp"
#include "hopd/assign.hpp"
#include "hopd/chain.hpp"
#include "hopd/dominance.hpp"
#include "hopd/envelope.hpp"
#include "hopd/filtration.hpp"
#include "hopd/flow.hpp"
#include "hopd/graph.hpp"
#include "hopd/graphgen.hpp"
#include "hopd/harmonic.hpp"
#include "hopd/phase.hpp"
#include "hopd/preorder.hpp"
#include "hopd/profile.hpp"
#include "hopd/rng.hpp"
#include "hopd/serialize.hpp"
#include "hopd/universe.hpp"
#include "hopd/wasserstein.hpp"
