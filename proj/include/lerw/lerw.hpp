#ifndef LERW_LERW_HPP
#define LERW_LERW_HPP

#include "lerw/erasure.hpp"
#include "lerw/geometry.hpp"
#include "lerw/graph.hpp"
#include "lerw/graph_io.hpp"
#include "lerw/harmonic.hpp"
#include "lerw/io.hpp"
#include "lerw/loewner.hpp"
#include "lerw/parallel.hpp"
#include "lerw/rng.hpp"
#include "lerw/segment.hpp"
#include "lerw/stats.hpp"
#include "lerw/walk.hpp"

#endif  // LERW_LERW_HPP
