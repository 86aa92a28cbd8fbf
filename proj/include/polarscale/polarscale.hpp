#pragma once

#include "bigfloat.hpp"
#include "candidate.hpp"
#include "certify.hpp"
#include "csv.hpp"
#include "eigen_iter.hpp"
#include "error_floor.hpp"
#include "moderate_dev.hpp"
#include "pipeline.hpp"
#include "polar_core.hpp"
#include "power_bound.hpp"
#include "rational.hpp"
#include "scaling_constants.hpp"
#include "sc_sim.hpp"
#include "svg.hpp"
#include "transcript.hpp"
#include "transcript_verify.hpp"
