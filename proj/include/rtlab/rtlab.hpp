#pragma once

// Everything in one include.
#include "rtlab/analysis.hpp"
#include "rtlab/cbe.hpp"
#include "rtlab/certify.hpp"
#include "rtlab/clique.hpp"
#include "rtlab/common.hpp"
#include "rtlab/graph.hpp"
#include "rtlab/herculean.hpp"
#include "rtlab/io.hpp"
#include "rtlab/mbe.hpp"
#include "rtlab/parallel.hpp"
#include "rtlab/partition.hpp"
#include "rtlab/random.hpp"
#include "rtlab/simplex.hpp"
#include "rtlab/sphere.hpp"
#include "rtlab/weighted.hpp"
