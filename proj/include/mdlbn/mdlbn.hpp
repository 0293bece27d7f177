#pragma once

#include <mdlbn/dataset.hpp>
#include <mdlbn/discretization.hpp>
#include <mdlbn/errors.hpp>
#include <mdlbn/graph.hpp>
#include <mdlbn/information.hpp>
#include <mdlbn/instances.hpp>
#include <mdlbn/io.hpp>
#include <mdlbn/joint.hpp>
#include <mdlbn/network.hpp>
#include <mdlbn/report.hpp>
#include <mdlbn/rng.hpp>
#include <mdlbn/scoring.hpp>
