#pragma once

#include "ustlab/rng.hpp"
#include "ustlab/vertex_set.hpp"
#include "ustlab/graph.hpp"
#include "ustlab/network.hpp"
#include "ustlab/io.hpp"
#include "ustlab/walk.hpp"
#include "ustlab/tree.hpp"
#include "ustlab/ust.hpp"
#include "ustlab/partition.hpp"
#include "ustlab/spectral.hpp"
#include "ustlab/decomposition.hpp"
#include "ustlab/estimators.hpp"
#include "ustlab/generators.hpp"
#include "ustlab/experiments.hpp"
