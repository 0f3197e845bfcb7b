#pragma once

#include "geophase/errors.hpp"
#include "geophase/measurement.hpp"
#include "geophase/parallel.hpp"
#include "geophase/protocol.hpp"
#include "geophase/qutrit.hpp"
#include "geophase/rng.hpp"
#include "geophase/spherical.hpp"
#include "geophase/topology.hpp"
#include "geophase/trajectory.hpp"
