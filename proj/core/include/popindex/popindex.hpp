#pragma once

#include "popindex/csv.hpp"
#include "popindex/diagnostics.hpp"
#include "popindex/errors.hpp"
#include "popindex/likelihood.hpp"
#include "popindex/management.hpp"
#include "popindex/model.hpp"
#include "popindex/sampler.hpp"
#include "popindex/simulator.hpp"
#include "popindex/transforms.hpp"
#include "popindex/types.hpp"
