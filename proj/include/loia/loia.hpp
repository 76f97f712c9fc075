#pragma once

#include "loia/channel.hpp"
#include "loia/errors.hpp"
#include "loia/experiment.hpp"
#include "loia/filters.hpp"
#include "loia/iia.hpp"
#include "loia/json_io.hpp"
#include "loia/linalg.hpp"
#include "loia/metrics.hpp"
#include "loia/mimo.hpp"
#include "loia/protocol.hpp"
#include "loia/rng.hpp"
#include "loia/siso.hpp"
